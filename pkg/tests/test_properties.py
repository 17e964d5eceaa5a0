"""Randomized invariants. ``COUNTS`` tallies executed examples per property."""
from collections import Counter

import numpy as np
from hypothesis import given, settings, strategies as st

from amipa.information import InfoPolicy, InformationSet, build_information_set, consistency_set
from amipa.market import Regime, ReportProfile, TieBreak, position, universe
from amipa.matching import Matching, assortative_match, augment_reports
from amipa.mechanism import Outcome, Verifier, evaluate_misreport, swap_k, verifier_for
from amipa.rules import Announcer, Market, MechanismSpec
from amipa.stability import MatchingState, blocks, minimal_state

COUNTS = Counter()
MARKETS = [(2, 3), (2, 4), (2, 5), (3, 4), (3, 5), (3, 6), (4, 5), (4, 6)]
POLICIES = [InfoPolicy.minimal(), InfoPolicy.nt_only(), InfoPolicy.rationalizable()]
RICHNESS = [Announcer.INFORMATIVE_PUBLIC, Announcer.LOWER_CONTOUR, Announcer.MATCHED_REPORT]
N = 1200


def table(mech, policy, n, L):
    v = verifier_for(mech, policy, Market(n, L))
    v.ensure_stages(n)
    return v


@st.composite
def setups(draw, markets=MARKETS, full=True):
    n, L = draw(st.sampled_from(markets))
    regime = draw(st.sampled_from([Regime.INJECTIVE, Regime.FULL] if full and n <= 3 else [Regime.INJECTIVE]))
    tau = draw(st.sampled_from([TieBreak.identity(n), TieBreak.reversal(n)]))
    mech = MechanismSpec.make(draw(st.sampled_from(list(Announcer))), n, regime, tau)
    policy = draw(st.sampled_from(POLICIES))
    return n, L, mech, policy


@st.composite
def deviations(draw, markets=MARKETS, full=True):
    n, L, mech, policy = draw(setups(markets, full))
    w = tuple(draw(st.permutations(range(L)))[:n])
    j = draw(st.integers(0, n - 1))
    t = draw(st.integers(0, L - 1).filter(lambda x: x != w[j]))
    return n, L, mech, policy, w, j, t


def admissible(mech, w, t):
    return mech.regime is Regime.FULL or t not in w


@settings(max_examples=N)
@given(deviations())
def test_downward_reports_never_improve(case):
    COUNTS["downward"] += 1
    n, L, mech, policy, w, j, t = case
    v = table(mech, policy, n, L)
    out = v.table.outcome[v.universe.index[w], j, t]
    if not admissible(mech, w, t):
        assert out == Outcome.INVALID
    elif t > w[j] or swap_k(w, j, t, mech.tau if mech.regime is Regime.FULL else None) == 0:
        assert out == Outcome.NOT_IMPROVING
        assert v.evaluate(w, j, t).outcome is Outcome.NOT_IMPROVING


@settings(max_examples=N)
@given(deviations())
def test_lowest_firm_and_top_match_never_in_witness(case):
    COUNTS["witness_members"] += 1
    n, L, mech, policy, w, j, t = case
    v = table(mech, policy, n, L)
    k = v.universe.index[w]
    if v.table.outcome[k, j, t] != Outcome.BLOCKED:
        return
    i, jj = int(v.table.pair_firm[k, j, t]), int(v.table.pair_worker[k, j, t])
    r = tuple(t if x == j else y for x, y in enumerate(w))
    mu = mech.match(ReportProfile(r, Regime.FULL if len(set(r)) < n else Regime.INJECTIVE))
    assert i != n - 1
    assert jj != mu.of_firm(0)


@settings(max_examples=N)
@given(deviations(), st.data())
def test_built_sets_refine_consistency(case, data):
    COUNTS["refinement"] += 1
    n, L, mech, policy, w, j, t = case
    if data.draw(st.booleans()):
        policy = InfoPolicy.pathological(
            {i: data.draw(st.sampled_from(["consistency", "partner_top"])) for i in range(n)})
    if not admissible(mech, w, t):
        return
    r = tuple(t if x == j else y for x, y in enumerate(w))
    mu = mech.match(r)
    U = universe(n, L)
    verdicts = table(mech, policy, n, L).table if policy.kind.value == "rationalizable" else None
    for i in range(n):
        built = build_information_set(policy, mech, Market(n, L), w, r, i, verdicts)
        assert built.issubset(consistency_set(U, w, mu, i))


@settings(max_examples=N)
@given(deviations())
def test_truth_survives_improving_deviations(case):
    COUNTS["truth"] += 1
    n, L, mech, policy, w, j, t = case
    v = table(mech, policy, n, L)
    if v.table.outcome[v.universe.index[w], j, t] < Outcome.BLOCKED:
        return
    r = tuple(t if x == j else y for x, y in enumerate(w))
    for i in range(n):
        assert w in build_information_set(policy, mech, Market(n, L), w, r, i, v.table)


@settings(max_examples=300)
@given(setups(markets=[(2, 3), (2, 4), (3, 4), (3, 5), (3, 6)]))
def test_witness_replay(setup):
    COUNTS["replay"] += 1
    n, L, mech, policy = setup
    res = table(mech, policy, n, L).run()
    fresh = Verifier(mech, policy, Market(n, L)).run()
    assert res.certified == fresh.certified
    if res.witness is not None:
        w = res.witness
        replay = evaluate_misreport(mech, policy, w.w, w.deviator, w.misreport, L)
        assert replay.describe() == w.describe() == fresh.witness.describe()
        assert replay.outcome is Outcome.SUCCESSFUL


@settings(max_examples=N)
@given(deviations(markets=[(3, 4), (3, 5), (4, 5), (4, 6)], full=False))
def test_richer_announcements_shrink_beliefs(case):
    COUNTS["monotone_info"] += 1
    n, L, _, _, w, j, t = case
    if t in w:
        return
    pol, market = InfoPolicy.rationalizable(), Market(n, L)
    r = tuple(t if x == j else y for x, y in enumerate(w))
    specs = [MechanismSpec.make(a, n) for a in RICHNESS]
    U = universe(n, L)
    for i in range(n):
        masks = [build_information_set(pol, s, market, w, r, i, table(s, pol, n, L).table).mask
                 for s in specs]
        masks.append(consistency_set(U, w, assortative_match(r), i).mask)
        for small, big in zip(masks, masks[1:]):
            assert not np.any(small & ~big)


@settings(max_examples=N)
@given(deviations(markets=[(3, 4), (3, 5), (4, 5), (4, 6)], full=False))
def test_blocked_under_poorer_is_blocked_under_richer(case):
    COUNTS["verdict_monotone"] += 1
    n, L, _, policy, w, j, t = case
    k = universe(n, L).index[w]
    outs = [table(MechanismSpec.make(a, n), policy, n, L).table.outcome[k, j, t] for a in RICHNESS]
    for rich, poor in zip(outs, outs[1:]):
        if poor == Outcome.BLOCKED:
            assert rich == Outcome.BLOCKED


@settings(max_examples=N)
@given(st.integers(2, 4).flatmap(lambda n: st.tuples(
    st.just(n), st.integers(n + 1, n + 3), st.permutations(range(1, n + 1)), st.data())))
def test_augmented_pairing_equals_tie_broken_sort(args):
    COUNTS["augment"] += 1
    n, L, tau, data = args
    w = data.draw(st.permutations(range(L)))[:n]
    j = data.draw(st.integers(0, n - 1))
    t = data.draw(st.integers(0, L - 1))
    r = tuple(t if x == j else y for x, y in enumerate(w))
    tb = TieBreak(tuple(tau))
    profile = ReportProfile(r, Regime.FULL if len(set(r)) < n else Regime.INJECTIVE)
    assert assortative_match(augment_reports(profile, tb, L)).pairs() == assortative_match(profile, tb).pairs()


@settings(max_examples=N)
@given(st.integers(1, 5).flatmap(lambda n: st.tuples(
    st.lists(st.integers(0, 6), min_size=n, max_size=n), st.permutations(range(n)),
    st.permutations(range(1, n + 1)))))
def test_relabeling_workers_relabels_matches(args):
    COUNTS["relabel"] += 1
    r, pi, tau = args
    n = len(r)
    tb = TieBreak(tuple(tau))
    mu = assortative_match(ReportProfile(tuple(r), Regime.FULL), tb)
    # worker k becomes pi[k]; the tie-break follows the workers
    r2 = [None] * n
    tau2 = [None] * n
    for k in range(n):
        r2[pi[k]], tau2[pi[k]] = r[k], tau[k]
    mu2 = assortative_match(ReportProfile(tuple(r2), Regime.FULL), TieBreak(tuple(tau2)))
    assert mu2.firm_partner == tuple(pi[mu.of_firm(i)] for i in range(n))
    assert mu == assortative_match(ReportProfile(tuple(r), Regime.FULL), tb)


@settings(max_examples=N)
@given(st.sampled_from(MARKETS).flatmap(lambda m: st.tuples(
    st.just(m), st.permutations(range(m[1])), st.permutations(range(m[0])), st.integers(0, 2**32 - 1))))
def test_shrinking_beliefs_preserves_blocks(args):
    COUNTS["shrink"] += 1
    (n, L), types, perm, seed = args
    rng = np.random.default_rng(seed)
    w = tuple(types[:n])
    mu = Matching(tuple(perm), n)
    U = universe(n, L)
    state = minimal_state(w, mu, L)
    info = dict(state.info)
    for i in range(n):
        keep = state.info[i].mask & (rng.random(len(U)) < 0.5)
        keep[U.index[w]] = True
        info[i] = InformationSet(U, keep)
    shrunk = MatchingState(w, mu, info, U)
    for i in range(n):
        for jj in range(n):
            if jj != mu.of_firm(i) and blocks(i, jj, state):
                assert blocks(i, jj, shrunk)


@settings(max_examples=N)
@given(st.sampled_from(MARKETS).flatmap(lambda m: st.permutations(range(m[1])).map(lambda p: p[:m[0]])))
def test_positions_are_a_bijection(w):
    COUNTS["positions"] += 1
    w = tuple(w)
    assert sorted(position(w, j) for j in range(len(w))) == list(range(1, len(w) + 1))

