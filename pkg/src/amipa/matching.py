"""Matchings, the assortative rule with tie-breaking, and expanded types."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .market import DomainError, FirmRoster, Regime, ReportProfile, TieBreak


@dataclass(frozen=True)
class Matching:
    """Partner of each firm; ``None`` marks an unmatched firm.

    The worker side is derived, so the involution property holds by construction.
    """

    firm_partner: tuple
    n_workers: int

    def __post_init__(self):
        partners = [p for p in self.firm_partner if p is not None]
        if len(set(partners)) != len(partners):
            raise DomainError("a worker is matched to two firms")
        if any(not 0 <= p < self.n_workers for p in partners):
            raise DomainError("partner index out of range")

    @classmethod
    def from_pairs(cls, pairs, n_firms: int, n_workers: int) -> "Matching":
        partner = [None] * n_firms
        for i, j in pairs:
            partner[i] = j
        return cls(tuple(partner), n_workers)

    def of_firm(self, i: int) -> int | None:
        return self.firm_partner[i]

    def of_worker(self, j: int) -> int | None:
        for i, p in enumerate(self.firm_partner):
            if p == j:
                return i
        return None

    @property
    def worker_partner(self) -> tuple:
        out = [None] * self.n_workers
        for i, p in enumerate(self.firm_partner):
            if p is not None:
                out[p] = i
        return tuple(out)

    def pairs(self) -> frozenset:
        return frozenset((i, j) for i, j in enumerate(self.firm_partner) if j is not None)

    def is_perfect(self) -> bool:
        return self.n_workers == len(self.firm_partner) and None not in self.firm_partner

    def __str__(self) -> str:
        return ",".join(
            f"i{i + 1}:{'-' if j is None else f'j{j + 1}'}" for i, j in enumerate(self.firm_partner)
        )


def assortative_order(reports: Sequence[int], tau: TieBreak | None = None) -> list[int]:
    """Workers from highest to lowest report, coincident reports ordered by ``tau``."""
    if tau is None:
        if len(set(reports)) != len(reports):
            raise DomainError("coincident reports need a tie-breaking rule")
        return sorted(range(len(reports)), key=lambda k: reports[k])
    return sorted(range(len(reports)), key=lambda k: (reports[k], tau.rank(k)))


def assortative_match(r: ReportProfile | Sequence[int], tau: TieBreak | None = None,
                      roster: FirmRoster | None = None) -> Matching:
    reports = tuple(r.reports if isinstance(r, ReportProfile) else r)
    if roster is not None and roster.n != len(reports):
        raise DomainError("firm and worker sides must have equal size")
    injective = len(set(reports)) == len(reports)
    order = assortative_order(reports, None if injective else tau)
    return Matching(tuple(order), len(reports))


def is_assortative_at(mu: Matching, w: Sequence[int]) -> bool:
    if not mu.is_perfect():
        raise DomainError("assortativeness is defined for perfect matchings")
    partner = mu.firm_partner
    n = len(partner)
    # firm i ranks above i' exactly when i < i'
    return all(
        (a < b) == (w[partner[a]] < w[partner[b]])
        for a in range(n) for b in range(n) if a != b
    )


@dataclass(frozen=True)
class ExpandedTypeSpace:
    """Types ``t_{l,k}`` ordered by ``l`` first, then ``k``; rank ``l*n + k``."""

    L: int
    n: int

    def rank(self, base_rank: int, k: int) -> int:
        # k is the 1-based tie-break rank
        return base_rank * self.n + (k - 1)

    def unrank(self, rank: int) -> tuple[int, int]:
        return rank // self.n, rank % self.n + 1

    @property
    def size(self) -> int:
        return self.L * self.n


def expand_assignment(w: Sequence[int], tau: TieBreak, L: int) -> tuple:
    if len(set(w)) != len(w):
        raise DomainError("not a type assignment: coincident types")
    space = ExpandedTypeSpace(L, len(w))
    return tuple(space.rank(x, tau.rank(k)) for k, x in enumerate(w))


def augment_reports(r: ReportProfile | Sequence[int], tau: TieBreak, L: int) -> ReportProfile:
    reports = tuple(r.reports if isinstance(r, ReportProfile) else r)
    counts = Counter(reports)
    if max(counts.values()) > 2 or sum(1 for c in counts.values() if c == 2) > 1:
        raise DomainError("unreachable under single deviations: more than one coincident pair")
    space = ExpandedTypeSpace(L, len(reports))
    return ReportProfile(
        tuple(space.rank(x, tau.rank(k)) for k, x in enumerate(reports)), Regime.INJECTIVE
    )
