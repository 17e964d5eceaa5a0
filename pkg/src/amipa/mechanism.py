"""Manipulation verdicts and the exhaustive incentive-compatibility verifier."""
from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .information import InfoPolicy, PolicyKind, build_information_set
from .market import DomainError, Regime, substitute, universe, position, fmt_types, fmt_type
from .matching import Matching, assortative_match, augment_reports
from .rules import Announcer, Market, MechanismSpec, announce, infer_reports  # noqa: F401
from .stability import MatchingState, blocks, is_stable


class Outcome(enum.IntEnum):
    INVALID = -1
    UNSET = 0
    NOT_IMPROVING = 1
    BLOCKED = 2
    SUCCESSFUL = 3


@dataclass
class ManipulationVerdict:
    outcome: Outcome
    w: tuple
    deviator: int
    misreport: int
    matching: Matching | None = None
    pair: tuple | None = None
    state: MatchingState | None = field(default=None, repr=False, compare=False)

    def describe(self) -> str:
        text = (f"w={fmt_types(self.w)} deviator=j{self.deviator + 1} "
                f"misreport={fmt_type(self.misreport)} outcome={self.outcome.name.lower()}")
        if self.matching is not None:
            text += f" matching={self.matching}"
        if self.pair is not None:
            text += f" blocking=i{self.pair[0] + 1}:j{self.pair[1] + 1}"
        return text


def swap_k(w: Sequence[int], j: int, t: int, tau=None) -> int:
    """Number of workers ``j`` overtakes by reporting ``t`` (an upward report)."""
    if not t < w[j]:
        raise DomainError("swap count is defined for upward reports only")
    before = sum(1 for x in w if x < w[j])
    after = sum(1 for k, x in enumerate(w) if k != j and x < t)
    if tau is not None:
        after += sum(1 for k, x in enumerate(w) if k != j and x == t and tau.rank(k) < tau.rank(j))
    return before - after


class VerdictTable:
    """Outcomes of every single deviation ``(w, j, t)``, indexed by universe row."""

    def __init__(self, market: Market):
        self.market = market
        self.universe = universe(market.n, market.L)
        shape = (len(self.universe), market.n, market.L)
        self.outcome = np.zeros(shape, dtype=np.int8)
        self.pair_firm = np.full(shape, -1, dtype=np.int8)
        self.pair_worker = np.full(shape, -1, dtype=np.int8)

    def blocked_below(self, j: int, t: int, p: int) -> np.ndarray:
        """Rows where ``j`` reporting ``t`` is blocked and ``j`` sits above position ``p``."""
        return (self.outcome[:, j, t] == Outcome.BLOCKED) & (self.universe.positions[:, j] < p)

    def record(self, k: int, verdict: ManipulationVerdict) -> None:
        j, t = verdict.deviator, verdict.misreport
        self.outcome[k, j, t] = verdict.outcome
        if verdict.pair is not None:
            self.pair_firm[k, j, t], self.pair_worker[k, j, t] = verdict.pair


@dataclass
class VerificationResult:
    certified: bool
    witness: ManipulationVerdict | None
    mechanism: MechanismSpec
    policy: InfoPolicy
    market: Market
    table: VerdictTable
    states: int = 0
    deviations: int = 0
    induced_states: int = 0
    tie_cases: int = 0
    tie_mismatches: int = 0
    seconds: float = 0.0

    @property
    def verdict(self) -> str:
        return "certified" if self.certified else "refuted"


class Verifier:
    """Builds the verdict table deviator position by deviator position.

    Deviations from position ``p`` are classified with information sets that may
    only exclude candidates using verdicts from positions below ``p``.
    """

    def __init__(self, mech: MechanismSpec, policy: InfoPolicy, market: Market,
                 quantify_over_positions: bool = False):
        if len(mech.tau.tau) != market.n:
            raise DomainError("tie-break size differs from the market size")
        self.mech = mech
        self.policy = policy
        self.market = market
        self.quantify_over_positions = quantify_over_positions
        self.universe = universe(market.n, market.L)
        self.table = VerdictTable(market)
        self.stages_done = 0
        self.deviations = 0
        self.induced_states = 0
        self.tie_cases = 0
        self.tie_mismatches = 0
        self.seconds = 0.0

    # -- single cells -------------------------------------------------------

    def _classify(self, w: tuple, j: int, t: int, full_state: bool = False,
                  count: bool = True) -> ManipulationVerdict:
        mech, market = self.mech, self.market
        if mech.regime is Regime.INJECTIVE and t in w:
            return ManipulationVerdict(Outcome.INVALID, w, j, t)
        r = substitute(w, j, t).reports
        mu = mech.match(r)
        if count and r != w and len(set(r)) < len(r):
            self.tie_cases += 1
            aug = augment_reports(r, mech.tau, market.L)
            if assortative_match(aug).pairs() != mu.pairs():
                self.tie_mismatches += 1
        before = mech.match(w).of_worker(j)
        if not mu.of_worker(j) < before:
            return ManipulationVerdict(Outcome.NOT_IMPROVING, w, j, t, mu)
        self.induced_states += count
        info = {}
        state = MatchingState(w, mu, info, self.universe)
        n = market.n
        for i in range(n):
            info[i] = build_information_set(self.policy, mech, market, w, r, i, self.table)
            if full_state:
                continue
            for jj in range(n):
                if blocks(i, jj, state):
                    return ManipulationVerdict(Outcome.BLOCKED, w, j, t, mu, (i, jj), state)
        stable, pair = is_stable(state)
        if not stable:
            return ManipulationVerdict(Outcome.BLOCKED, w, j, t, mu, pair, state)
        return ManipulationVerdict(Outcome.SUCCESSFUL, w, j, t, mu, None, state)

    def ensure_stages(self, upto: int) -> "Verifier":
        """Complete every deviator position ``<= upto``."""
        start = time.perf_counter()
        U = self.universe
        while self.stages_done < min(upto, self.market.n):
            p = self.stages_done + 1
            rows, workers = np.nonzero(U.positions == p)
            for k, j in zip(rows.tolist(), workers.tolist()):
                w = U.assignments[k]
                for t in range(self.market.L):
                    if t == w[j]:
                        continue
                    verdict = self._classify(w, j, t)
                    if verdict.outcome is not Outcome.INVALID:
                        self.deviations += 1
                    self.table.record(k, verdict)
            self.stages_done = p
        self.seconds += time.perf_counter() - start
        return self

    def evaluate(self, w: Sequence[int], j: int, t: int) -> ManipulationVerdict:
        w = tuple(w)
        if w not in self.universe.index:
            raise DomainError(f"{w} is not a type assignment over t1..t{self.market.L}")
        if not 0 <= t < self.market.L:
            raise DomainError(f"report {t} is not a type")
        if t == w[j]:
            raise DomainError("a misreport must differ from the true type")
        self.ensure_stages(position(w, j) - 1)
        return self._classify(w, j, t, full_state=True, count=False)

    # -- whole market -------------------------------------------------------

    def run(self) -> VerificationResult:
        self.ensure_stages(self.market.n)
        successful = self.table.outcome == Outcome.SUCCESSFUL
        if self.quantify_over_positions:
            successful = successful & ~self._blocked_somewhere()
        witness = None
        hits = np.argwhere(successful)
        if len(hits):
            # argwhere is row-major: assignment, then worker, then report rank
            k, j, t = (int(x) for x in hits[0])
            witness = self.evaluate(self.universe.assignments[k], j, t)
        return VerificationResult(
            certified=witness is None, witness=witness, mechanism=self.mech, policy=self.policy,
            market=self.market, table=self.table, states=len(self.universe),
            deviations=self.deviations, induced_states=self.induced_states,
            tie_cases=self.tie_cases, tie_mismatches=self.tie_mismatches, seconds=self.seconds,
        )

    def _blocked_somewhere(self) -> np.ndarray:
        """Cells whose (worker, own type, report) is blocked at some assignment."""
        U, out = self.universe, self.table.outcome
        mark = np.zeros_like(out, dtype=bool)
        for j in range(self.market.n):
            for x in range(self.market.L):
                rows = U.fixing(j, x)
                bad = (out[rows, j, :] == Outcome.BLOCKED).any(axis=0)
                mark[rows, j, :] = bad[None, :]
        return mark


@lru_cache(maxsize=1024)
def _cached_verifier(mech: MechanismSpec, policy: InfoPolicy, market: Market) -> Verifier:
    return Verifier(mech, policy, market)


def verifier_for(mech: MechanismSpec, policy: InfoPolicy, market: Market) -> Verifier:
    return _cached_verifier(mech, policy, market)


def evaluate_misreport(mech: MechanismSpec, policy: InfoPolicy, w: Sequence[int], j: int,
                       t: int, L: int) -> ManipulationVerdict:
    market = Market(len(w), L)
    return verifier_for(mech, policy, market).evaluate(w, j, t)


def verify_ic(mech: MechanismSpec, policy: InfoPolicy, market: Market,
              quantify_over_positions: bool = False) -> VerificationResult:
    if quantify_over_positions:
        return Verifier(mech, policy, market, True).run()
    return verifier_for(mech, policy, market).run()


def verify_lower_contour(market: Market, policy: InfoPolicy | None = None,
                         regime: Regime = Regime.INJECTIVE, tau=None) -> VerificationResult:
    mech = MechanismSpec.make(Announcer.LOWER_CONTOUR, market.n, regime, tau)
    return verify_ic(mech, policy or InfoPolicy.rationalizable(), market)


def pk_report(mech: MechanismSpec, policy: InfoPolicy, market: Market) -> dict:
    """``{(p, k): first successful swap-k witness from position p, or None}``."""
    result = verify_ic(mech, policy, market)
    U, out = result.table.universe, result.table.outcome
    tau = mech.tau if mech.regime is Regime.FULL else None
    cells = {(p, k): None for p in range(2, market.n + 1) for k in range(1, p)}
    for k_row, j, t in np.argwhere(out == Outcome.SUCCESSFUL).tolist():
        w = U.assignments[k_row]
        key = (position(w, j), swap_k(w, j, t, tau))
        if key in cells and cells[key] is None:
            cells[key] = (w, j, t)
    return cells
