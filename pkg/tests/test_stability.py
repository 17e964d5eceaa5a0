import itertools

import numpy as np
import pytest

from amipa.information import InfoPolicy, InformationSet
from amipa.market import universe
from amipa.matching import Matching, assortative_match
from amipa.mechanism import evaluate_misreport
from amipa.rules import Announcer, MechanismSpec
from amipa.stability import (MatchingState, blocks, is_individually_rational, is_stable,
                             minimal_state, prop1_characterization)
from oracles import minimal_is_stable


def test_individual_rationality():
    assert is_individually_rational(minimal_state((1, 2, 3), assortative_match((1, 0, 3)), 4))
    U = universe(2, 3)
    state = MatchingState((0, 1), Matching((0, None), 2), {}, U)
    assert not is_individually_rational(state)


def test_no_block_under_minimal_beliefs():
    state = minimal_state((1, 2, 3), assortative_match((1, 0, 3)), 4)
    assert not blocks(0, 0, state)
    assert is_stable(state) == (True, None)


def test_public_reports_block():
    v = evaluate_misreport(MechanismSpec.make(Announcer.INFORMATIVE_PUBLIC, 3),
                           InfoPolicy.rationalizable(), (1, 2, 3), 1, 0, 4)
    assert blocks(0, 0, v.state)
    assert is_stable(v.state) == (False, (0, 0))


def test_scripted_beliefs_state_stable():
    v = evaluate_misreport(MechanismSpec.make(Announcer.INFORMATIVE_PUBLIC, 2),
                           InfoPolicy.pathological({0: "partner_top", 1: "consistency"}),
                           (1, 2), 1, 0, 4)
    assert is_stable(v.state) == (True, None)


def test_lowest_firm_never_blocks():
    for w in universe(3, 5).assignments:
        for perm in itertools.permutations(range(3)):
            state = minimal_state(w, Matching(perm, 3), 5)
            assert not any(blocks(2, j, state) for j in range(3))


def test_bottom_type_characterization_cases():
    # t4 held by j1, matched to i3
    assert prop1_characterization((3, 0, 1), Matching((1, 2, 0), 3), 4)
    mu = Matching((0, 2, 1), 3)  # t4 worker j1 at i1
    w = (3, 0, 1)
    assert not prop1_characterization(w, mu, 4)
    assert is_stable(minimal_state(w, mu, 4)) == (False, (0, mu.of_firm(2)))


def test_no_bottom_type_always_stable():
    for w in universe(3, 4).assignments:
        if 3 in w:
            continue
        for perm in itertools.permutations(range(3)):
            assert is_stable(minimal_state(w, Matching(perm, 3), 4))[0]


@pytest.mark.parametrize("n,L", [(2, 3), (2, 4), (3, 4), (3, 5)])
def test_bottom_type_characterization_matches_brute_force(n, L):
    for w in universe(n, L).assignments:
        for perm in itertools.permutations(range(n)):
            mu = Matching(perm, n)
            stable = is_stable(minimal_state(w, mu, L))[0]
            assert stable == minimal_is_stable(w, perm, L) == prop1_characterization(w, mu, L)


@pytest.mark.parametrize("n,L", [(2, 4), (3, 5), (4, 6)])
def test_truthful_minimal_state_stable(n, L):
    for w in universe(n, L).assignments:
        assert is_stable(minimal_state(w, assortative_match(w), L))[0]


def test_shrinking_info_keeps_blocks():
    rng = np.random.default_rng(7)
    U = universe(3, 5)
    for w in U.assignments[::3]:
        for perm in itertools.permutations(range(3)):
            mu = Matching(perm, 3)
            state = minimal_state(w, mu, 5)
            for i in range(3):
                j = mu.of_firm(i)
                keep = state.info[i].mask & (rng.random(len(U)) < 0.5)
                keep[U.index[w]] = True
                smaller = dict(state.info)
                smaller[i] = InformationSet(U, keep)
                shrunk = MatchingState(w, mu, smaller, U)
                for jj in range(3):
                    if jj != j and blocks(i, jj, state):
                        assert blocks(i, jj, shrunk)
