import numpy as np
import pytest

from amipa.information import (ConfigurationError, InfoPolicy, build_information_set,
                               check_assumption_nt, consistency_set, payoff_relevant_set)
from amipa.market import DomainError, universe
from amipa.matching import assortative_match
from amipa.mechanism import verify_ic
from amipa.rules import Announcer, Market, MechanismSpec
from oracles import belief, all_verdicts, payoff_relevant

AMIPA = Announcer.INFORMATIVE_PUBLIC


def test_consistency_set_sizes():
    U = universe(3, 3)
    for w in U.assignments:
        mu = assortative_match(w)
        for i in range(3):
            assert len(consistency_set(U, w, mu, i)) == 2
    U4 = universe(3, 4)
    assert len(consistency_set(U4, (0, 1, 2), assortative_match((0, 1, 2)), 1)) == 6


def test_minimal_set_admits_deviator_on_top():
    U = universe(3, 5)
    w, r = (1, 2, 3), (1, 0, 3)
    info = consistency_set(U, w, assortative_match(r), 0)
    assert any(all(x[1] < x[k] for k in (0, 2)) for x in info)


def test_payoff_relevant_counts():
    U = universe(3, 5)
    got = payoff_relevant_set(2, 0, 1, U)
    assert len(got) == 10
    assert int(U.fixing(1, 2).sum()) == 12
    assert set(got) == payoff_relevant(2, 0, 1, 5, 3)
    # with four types every completion keeps someone above t3
    small = universe(3, 4)
    assert len(payoff_relevant_set(2, 0, 1, small)) == int(small.fixing(1, 2).sum()) == 6


def test_payoff_relevant_empty_and_errors():
    U = universe(2, 3)
    with pytest.raises(DomainError, match="not an upward misreport"):
        payoff_relevant_set(0, 0, 0, U)
    with pytest.raises(DomainError):
        payoff_relevant_set(0, 2, 0, U)


def test_payoff_relevant_members_have_someone_between():
    U = universe(3, 4)
    for w in payoff_relevant_set(1, 0, 1, U):
        assert any(0 <= w[k] < 1 for k in (0, 2))


def test_public_reports_make_top_firm_certain():
    m, market = MechanismSpec.make(AMIPA, 3), Market(3, 4)
    table = verify_ic(m, InfoPolicy.rationalizable(), market).table
    info = build_information_set(InfoPolicy.rationalizable(), m, market, (1, 2, 3), (1, 0, 3), 0, table)
    assert all(x[0] < 2 for x in info)


def test_scripted_partner_top_set():
    m, market = MechanismSpec.make(AMIPA, 2), Market(2, 4)
    pol = InfoPolicy.pathological({0: "partner_top", 1: "consistency"})
    info = build_information_set(pol, m, market, (1, 2), (1, 0), 0)
    assert set(info) == {(3, 2)}


def test_pathological_missing_entry():
    m, market = MechanismSpec.make(AMIPA, 2), Market(2, 4)
    with pytest.raises(ConfigurationError):
        build_information_set(InfoPolicy.pathological({1: "consistency"}), m, market,
                              (1, 2), (1, 0), 0)
    with pytest.raises(ConfigurationError):
        InfoPolicy.pathological({0: "anything"})


def test_matched_report_confound_survives():
    m, market = MechanismSpec.make(Announcer.MATCHED_REPORT, 3), Market(3, 7)
    table = verify_ic(m, InfoPolicy.rationalizable(), market).table
    info = build_information_set(InfoPolicy.rationalizable(), m, market, (1, 3, 4), (1, 0, 4), 0, table)
    assert (1, 3, 4) in info and (4, 3, 2) in info


def test_check_assumption_nt():
    m = MechanismSpec.make(AMIPA, 3)
    assert check_assumption_nt(InfoPolicy.rationalizable(), m, Market(3, 4)) == (True, None)
    m2 = MechanismSpec.make(AMIPA, 2)
    pol = InfoPolicy.pathological({0: "partner_top", 1: "consistency"})
    assert check_assumption_nt(pol, m2, Market(2, 4)) == (False, ((1, 2), (0, 2), 0))
    empty = MechanismSpec.make(Announcer.EMPTY, 3)
    assert check_assumption_nt(InfoPolicy.minimal(), empty, Market(3, 5)) == (True, None)


@pytest.mark.parametrize("announcer", list(Announcer))
@pytest.mark.parametrize("policy", ["minimal", "nt_only", "rationalizable"])
def test_built_sets_match_oracle(announcer, policy):
    n, L = 3, 4
    m, market = MechanismSpec.make(announcer, n), Market(n, L)
    table = verify_ic(m, InfoPolicy(policy), market).table
    ref = all_verdicts(announcer.value, policy, n, L)
    for w in universe(n, L).assignments:
        for j in range(n):
            for t in range(w[j]):
                if t in w:
                    continue
                r = tuple(t if k == j else x for k, x in enumerate(w))
                for i in range(n):
                    got = set(build_information_set(InfoPolicy(policy), m, market, w, r, i, table))
                    assert got == belief(announcer.value, policy, w, r, i, L, ref)


@pytest.mark.parametrize("L", [4, 5])
def test_monotone_informativeness(L):
    n, market = 3, Market(3, L)
    pol = InfoPolicy.rationalizable()
    specs = [MechanismSpec.make(a, n) for a in (AMIPA, Announcer.LOWER_CONTOUR, Announcer.MATCHED_REPORT)]
    tables = [verify_ic(s, pol, market).table for s in specs]
    U = universe(n, L)
    for w in U.assignments:
        for j in range(n):
            for t in range(L):
                if t == w[j] or t in w:
                    continue
                r = tuple(t if k == j else x for k, x in enumerate(w))
                mu = assortative_match(r)
                for i in range(n):
                    sets = [build_information_set(pol, s, market, w, r, i, tb).mask
                            for s, tb in zip(specs, tables)]
                    minimal = consistency_set(U, w, mu, i).mask
                    assert not np.any(sets[0] & ~sets[1])
                    assert not np.any(sets[1] & ~sets[2])
                    assert not np.any(sets[2] & ~minimal)
