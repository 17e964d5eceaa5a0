"""Private types on both sides: the extended assortative mechanism with a public
announcement of every report, and the refutation of its incentive compatibility.

Blocking is taken symmetrically: the worker must be certain, over her
information set, that the firm outranks her current partner, and the firm must
be certain the worker outranks its own.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
import numpy as np

from .market import DomainError, TieBreak, fmt_type
from .matching import Matching
from .mechanism import Outcome


@dataclass(frozen=True)
class GeneralAssignment:
    f: tuple  # firm -> rank in S (0 is s1)
    w: tuple  # worker -> rank in T (0 is t1)

    def __post_init__(self):
        if len(self.f) != len(self.w):
            raise DomainError("firm and worker sides must have equal size")
        if len(set(self.f)) != len(self.f) or len(set(self.w)) != len(self.w):
            raise DomainError("types must be distinct on each side")


@dataclass(frozen=True)
class TwoSidedReport:
    firms: tuple
    workers: tuple

    @classmethod
    def truthful(cls, g: GeneralAssignment) -> "TwoSidedReport":
        return cls(tuple(g.f), tuple(g.w))

    def deviate(self, side: str, agent: int, report: int) -> "TwoSidedReport":
        if side == "firm":
            firms = tuple(report if k == agent else x for k, x in enumerate(self.firms))
            return TwoSidedReport(firms, self.workers)
        workers = tuple(report if k == agent else x for k, x in enumerate(self.workers))
        return TwoSidedReport(self.firms, workers)


def two_sided_match(r: TwoSidedReport, tau_firms: TieBreak | None = None,
                    tau_workers: TieBreak | None = None) -> Matching:
    n = len(r.firms)
    if len(r.workers) != n:
        raise DomainError("firm and worker sides must have equal size")
    tf = tau_firms or TieBreak.identity(n)
    tw = tau_workers or TieBreak.identity(n)
    firms = sorted(range(n), key=lambda i: (r.firms[i], tf.rank(i)))
    workers = sorted(range(n), key=lambda j: (r.workers[j], tw.rank(j)))
    partner = [None] * n
    for i, j in zip(firms, workers):
        partner[i] = j
    return Matching(tuple(partner), n)


class TwoSidedUniverse:
    """All pairs ``(f', w')`` as aligned ``(M, n)`` arrays."""

    def __init__(self, n: int, S: int, L: int):
        if S <= n or L <= n:
            raise DomainError("need more types than agents on each side")
        self.n, self.S, self.L = n, S, L
        fs = list(itertools.permutations(range(S), n))
        ws = list(itertools.permutations(range(L), n))
        self.F = np.array([f for f in fs for _ in ws], dtype=np.int16).reshape(-1, n)
        self.W = np.array([w for _ in fs for w in ws], dtype=np.int16).reshape(-1, n)
        self.index = {(f, w): k for k, (f, w) in enumerate(itertools.product(fs, ws))}

    def __len__(self) -> int:
        return len(self.F)


@lru_cache(maxsize=None)
def two_sided_universe(n: int, S: int, L: int) -> TwoSidedUniverse:
    return TwoSidedUniverse(n, S, L)


def _nt(own: np.ndarray, others: np.ndarray, true_rank: int, report: int) -> np.ndarray:
    # some other agent strictly between report and true type, none exactly at report
    between = ((others >= report) & (others < true_rank)).any(axis=1)
    taken = (others == report).any(axis=1)
    return (own == true_rank) & between & ~taken


@dataclass
class TwoSidedState:
    g: GeneralAssignment
    r: TwoSidedReport
    mu: Matching
    universe: TwoSidedUniverse
    firm_info: dict = field(default_factory=dict)
    worker_info: dict = field(default_factory=dict)


def build_state(g: GeneralAssignment, r: TwoSidedReport, U: TwoSidedUniverse,
                nontrivial: bool = True, collapse_worker_view: bool = False,
                tau_firms=None, tau_workers=None) -> TwoSidedState:
    mu = two_sided_match(r, tau_firms, tau_workers)
    n = U.n
    # reports never understate: rank(report) <= rank(type)
    upward = (U.F >= np.array(r.firms)).all(axis=1) & (U.W >= np.array(r.workers)).all(axis=1)
    tf, tw = tau_firms or TieBreak.identity(n), tau_workers or TieBreak.identity(n)
    firm_order = sorted(range(n), key=lambda i: (r.firms[i], tf.rank(i)))
    worker_order = sorted(range(n), key=lambda j: (r.workers[j], tw.rank(j)))
    state = TwoSidedState(g, r, mu, U)
    for i in range(n):
        j = mu.of_firm(i)
        mask = upward & (U.F[:, i] == g.f[i]) & (U.W[:, j] == g.w[j])
        if nontrivial and i != firm_order[-1] and r.workers[j] < g.w[j] < U.L - 1:
            others = [k for k in range(n) if k != j]
            mask &= _nt(U.W[:, j], U.W[:, others], g.w[j], r.workers[j])
        state.firm_info[i] = mask
    for j in range(n):
        i = mu.of_worker(j)
        if collapse_worker_view:
            mask = (U.F == np.array(g.f)).all(axis=1) & (U.W[:, j] == g.w[j])
        else:
            mask = upward & (U.W[:, j] == g.w[j]) & (U.F[:, i] == g.f[i])
            if nontrivial and j != worker_order[-1] and r.firms[i] < g.f[i] < U.S - 1:
                others = [k for k in range(n) if k != i]
                mask &= _nt(U.F[:, i], U.F[:, others], g.f[i], r.firms[i])
        state.worker_info[j] = mask
    return state


def two_sided_blocks(i: int, j: int, state: TwoSidedState) -> bool:
    mu, U = state.mu, state.universe
    partner_w, partner_f = mu.of_firm(i), mu.of_worker(j)
    if partner_w == j:
        return False
    wf = state.worker_info[j]
    if not np.all(U.F[wf, i] < U.F[wf, partner_f]):
        return False
    fi = state.firm_info[i]
    return bool(np.all(U.W[fi, j] < U.W[fi, partner_w]))


def two_sided_is_stable(state: TwoSidedState):
    n = state.universe.n
    for i in range(n):
        for j in range(n):
            if two_sided_blocks(i, j, state):
                return False, (i, j)
    return True, None


@dataclass
class TwoSidedVerdict:
    outcome: Outcome
    g: GeneralAssignment
    side: str
    agent: int
    report: int
    matching: Matching | None = None
    pair: tuple | None = None
    state: TwoSidedState | None = field(default=None, repr=False)

    def describe(self) -> str:
        who = f"{'i' if self.side == 'firm' else 'j'}{self.agent + 1}"
        rep = f"s{self.report + 1}" if self.side == "firm" else fmt_type(self.report)
        f = ",".join(f"s{x + 1}" for x in self.g.f)
        w = ",".join(fmt_type(x) for x in self.g.w)
        text = f"f={f} w={w} deviator={who} misreport={rep} outcome={self.outcome.name.lower()}"
        if self.matching is not None:
            text += f" matching={self.matching}"
        if self.pair is not None:
            text += f" blocking=i{self.pair[0] + 1}:j{self.pair[1] + 1}"
        return text


def evaluate_two_sided(g: GeneralAssignment, side: str, agent: int, report: int, S: int, L: int,
                       nontrivial: bool = True, collapse_worker_view: bool = False) -> TwoSidedVerdict:
    if side not in ("firm", "worker"):
        raise DomainError(f"unknown side {side!r}")
    U = two_sided_universe(len(g.f), S, L)
    truthful = TwoSidedReport.truthful(g)
    r = truthful.deviate(side, agent, report)
    mu0, mu = two_sided_match(truthful), two_sided_match(r)
    if side == "worker":
        gain = g.f[mu.of_worker(agent)] < g.f[mu0.of_worker(agent)]
    else:
        gain = g.w[mu.of_firm(agent)] < g.w[mu0.of_firm(agent)]
    if r == truthful or not gain:
        return TwoSidedVerdict(Outcome.NOT_IMPROVING, g, side, agent, report, mu)
    state = build_state(g, r, U, nontrivial, collapse_worker_view)
    stable, pair = two_sided_is_stable(state)
    outcome = Outcome.SUCCESSFUL if stable else Outcome.BLOCKED
    return TwoSidedVerdict(outcome, g, side, agent, report, mu, pair, state)


SMALL_GENERAL_MARKET = GeneralAssignment(f=(1, 2), w=(1, 2))


def verify_example6(collapse_worker_view: bool = False) -> TwoSidedVerdict:
    """Worker j2 of type t3 reports t1 against firms of types s2 > s3."""
    return evaluate_two_sided(SMALL_GENERAL_MARKET, "worker", 1, 0, S=4, L=4,
                              collapse_worker_view=collapse_worker_view)


def verify_two_sided(n: int, S: int, L: int, sides=("worker", "firm")):
    """First successful single deviation over every general assignment, or ``None``."""
    for f in itertools.permutations(range(S), n):
        for w in itertools.permutations(range(L), n):
            g = GeneralAssignment(f, w)
            for side in sides:
                size = S if side == "firm" else L
                own = f if side == "firm" else w
                for agent in range(n):
                    for report in range(size):
                        if report == own[agent] or report in own:
                            continue
                        v = evaluate_two_sided(g, side, agent, report, S, L)
                        if v.outcome is Outcome.SUCCESSFUL:
                            return v
    return None
