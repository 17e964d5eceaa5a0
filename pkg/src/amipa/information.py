"""Information sets, payoff-relevant sets and the firm-side belief constructors.

An information set is a boolean mask over :class:`~amipa.market.Universe`.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

import numpy as np

from .market import DomainError, Regime, ReportProfile, TieBreak, Universe, universe, position
from .matching import Matching
from .rules import Announcer, Market, MechanismSpec, inferable_workers


class ConfigurationError(ValueError):
    pass


class InformationSet:
    __slots__ = ("universe", "mask")

    def __init__(self, universe: Universe, mask: np.ndarray):
        self.universe = universe
        self.mask = mask

    def __contains__(self, w) -> bool:
        k = self.universe.index.get(tuple(w))
        return k is not None and bool(self.mask[k])

    def __len__(self) -> int:
        return int(self.mask.sum())

    def __iter__(self) -> Iterator[tuple]:
        for k in np.flatnonzero(self.mask):
            yield self.universe.assignments[k]

    def issubset(self, other: "InformationSet | np.ndarray") -> bool:
        m = other.mask if isinstance(other, InformationSet) else other
        return not np.any(self.mask & ~m)

    def rows(self) -> np.ndarray:
        return self.universe.array[self.mask]

    def __repr__(self) -> str:
        return f"InformationSet({len(self)} of {len(self.universe)})"


class PolicyKind(str, enum.Enum):
    MINIMAL = "minimal"
    NT_ONLY = "nt_only"
    RATIONALIZABLE = "rationalizable"
    PATHOLOGICAL = "pathological"


PATHOLOGICAL_RULES = ("consistency", "partner_top")


@dataclass(frozen=True)
class InfoPolicy:
    kind: PolicyKind
    script: Mapping[int, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "kind", PolicyKind(self.kind))
        for firm, rule in self.script.items():
            if rule not in PATHOLOGICAL_RULES:
                raise ConfigurationError(f"unknown belief rule {rule!r} for i{firm + 1}")

    @classmethod
    def minimal(cls):
        return cls(PolicyKind.MINIMAL)

    @classmethod
    def nt_only(cls):
        return cls(PolicyKind.NT_ONLY)

    @classmethod
    def rationalizable(cls):
        return cls(PolicyKind.RATIONALIZABLE)

    @classmethod
    def pathological(cls, script: Mapping[int, str]):
        return cls(PolicyKind.PATHOLOGICAL, dict(script))

    def __hash__(self):
        return hash((self.kind, tuple(sorted(self.script.items()))))


def _reports(r) -> tuple:
    return tuple(r.reports if isinstance(r, ReportProfile) else r)


def consistency_set(U: Universe, w: Sequence[int], mu: Matching, i: int) -> InformationSet:
    j = mu.of_firm(i)
    if j is None:
        return InformationSet(U, U.all())
    return InformationSet(U, U.fixing(j, w[j]).copy())


def payoff_relevant_mask(U: Universe, j: int, wj: int, rj: int,
                         tau: TieBreak | None = None) -> np.ndarray:
    """Assignments fixing ``w'(j) = wj`` where report ``rj`` overtakes someone.

    With ``tau`` given, a worker sitting exactly at ``rj`` only counts when ``j``
    wins the tie against them; this is the same set read in expanded types.
    """
    a = U.array
    others = np.ones(U.n, dtype=bool)
    others[j] = False
    lo = a[:, others] < wj
    if tau is None:
        hit = lo & (a[:, others] >= rj)
    else:
        strictly = lo & (a[:, others] > rj)
        beats = np.array([tau.rank(j) < tau.rank(k) for k in range(U.n) if k != j])
        hit = strictly | ((a[:, others] == rj) & beats[None, :])
    return U.fixing(j, wj) & hit.any(axis=1)


def nt_bound(U: Universe, mech: MechanismSpec, j: int, wj: int, rj: int) -> np.ndarray:
    """Candidates at which misreport ``rj`` is admissible and could pay off.

    Under injective reporting a candidate with another worker already at ``rj``
    is dropped: the deviator, taking others as truthful, could not have sent
    it.  With ties allowed, the tie-break decides whether that worker is passed.
    """
    if mech.regime is Regime.FULL:
        return payoff_relevant_mask(U, j, wj, rj, mech.tau)
    others = [k for k in range(U.n) if k != j]
    return payoff_relevant_mask(U, j, wj, rj) & ~(U.array[:, others] == rj).any(axis=1)


def payoff_relevant_set(wj: int, rj: int, j: int, U: Universe) -> InformationSet:
    if not rj < wj:
        raise DomainError("not an upward misreport")
    return InformationSet(U, payoff_relevant_mask(U, j, wj, rj))


def chain_feasible(U: Universe, mu: Matching, known: Mapping[int, int],
                   regime: Regime, tau: TieBreak) -> np.ndarray:
    """Assignments admitting a report profile that reproduces ``mu``, agrees with
    ``known`` and never reports below a true type.

    Greedy from the lowest firm upward, each report taken as low as allowed.
    """
    a = U.array
    order = mu.firm_partner
    n = len(order)
    ok = np.ones(len(U), dtype=bool)
    cap_prev = None
    for m in range(n - 1, -1, -1):
        k = order[m]
        cap = a[:, k].astype(np.int32)
        if cap_prev is not None:
            below = order[m + 1]
            tie_ok = regime is Regime.FULL and tau.rank(k) < tau.rank(below)
            cap = np.minimum(cap, cap_prev - (0 if tie_ok else 1))
        if k in known:
            ok &= known[k] <= cap
            cap = np.full(len(U), known[k], dtype=np.int32)
        ok &= cap >= 0
        cap_prev = cap
    return ok


def _pathological(U: Universe, policy: InfoPolicy, w, mu: Matching, i: int) -> np.ndarray:
    if i not in policy.script:
        raise ConfigurationError(f"pathological script has no entry for i{i + 1}")
    rule = policy.script[i]
    j = mu.of_firm(i)
    base = U.fixing(j, w[j]).copy()
    if rule == "consistency" or w[j] == U.L - 1:
        return base
    # partner believed to hold the top type among all workers
    others = [k for k in range(U.n) if k != j]
    return base & (U.array[:, others] > w[j]).all(axis=1)


def detects_misreport(mech: MechanismSpec, r, w, mu: Matching, i: int) -> bool:
    """Firm ``i`` (not the lowest) sees its partner's report strictly above its type."""
    n = len(mu.firm_partner)
    j = mu.of_firm(i)
    if i == n - 1 or j is None:
        return False
    return j in inferable_workers(mech, mu, i) and _reports(r)[j] < w[j]


def build_information_set(policy: InfoPolicy, mech: MechanismSpec, market: Market,
                          w: Sequence[int], r, i: int, verdicts=None) -> InformationSet:
    """Firm ``i``'s information set after the mechanism runs on reports ``r`` at ``w``.

    ``verdicts`` supplies the staged exclusions for the rationalizable policy: any
    candidate at which the detected misreport would already have been blocked from
    a strictly lower deviator position is dropped.  For a misreport that does not
    improve the deviator the nontrivial-updating bound excludes ``w`` itself.
    """
    U = universe(market.n, market.L)
    reports = _reports(r)
    mu = mech.match(reports)
    j = mu.of_firm(i)
    if j is None:
        return InformationSet(U, U.all())
    if policy.kind is PolicyKind.PATHOLOGICAL:
        return InformationSet(U, _pathological(U, policy, w, mu, i))
    mask = U.fixing(j, w[j]).copy()
    if policy.kind is PolicyKind.MINIMAL:
        return InformationSet(U, mask)

    known = {k: reports[k] for k in inferable_workers(mech, mu, i)}
    if known:
        mask &= chain_feasible(U, mu, known, mech.regime, mech.tau)
    if detects_misreport(mech, reports, w, mu, i):
        if w[j] != market.L - 1:
            mask &= nt_bound(U, mech, j, w[j], reports[j])
        if policy.kind is PolicyKind.RATIONALIZABLE and verdicts is not None:
            mask &= ~verdicts.blocked_below(j, reports[j], position(w, j))
    return InformationSet(U, mask)


def check_assumption_nt(policy: InfoPolicy, mech: MechanismSpec, market: Market,
                        verdicts=None):
    """Scan every single upward deviation for a firm whose belief violates the
    nontrivial-updating bound.  Returns ``(True, None)`` or ``(False, (w, r, i))``.
    """
    from .mechanism import Verifier  # verdict table lives with the verifier

    if policy.kind is PolicyKind.RATIONALIZABLE and verdicts is None:
        verdicts = Verifier(mech, policy, market).run().table
    U = universe(market.n, market.L)
    for w in U.assignments:
        for j in range(market.n):
            for t in range(w[j]):
                if mech.regime is Regime.INJECTIVE and t in w:
                    continue
                r = tuple(t if k == j else x for k, x in enumerate(w))
                mu = mech.match(r)
                i = mu.of_worker(j)
                if not detects_misreport(mech, r, w, mu, i) or w[j] == market.L - 1:
                    continue
                built = build_information_set(policy, mech, market, w, r, i, verdicts)
                if not built.issubset(payoff_relevant_mask(U, j, w[j], t)):
                    return False, (w, r, i)
    return True, None
