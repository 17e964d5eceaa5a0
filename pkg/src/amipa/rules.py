"""Announcement rules and mechanism specifications."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .market import DomainError, Regime, ReportProfile, TieBreak
from .matching import Matching, assortative_match


class Announcer(str, enum.Enum):
    EMPTY = "empty"
    INFORMATIVE_PUBLIC = "informative_public"
    LOWER_CONTOUR = "lower_contour"
    MATCHED_REPORT = "matched_report"


@dataclass(frozen=True)
class Market:
    n: int
    L: int

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("need at least one agent per side")
        if self.L <= self.n:
            raise DomainError(f"need L > n (got n={self.n}, L={self.L})")


@dataclass(frozen=True)
class MechanismSpec:
    """The assortative rule paired with an announcement rule."""

    announcer: Announcer
    tau: TieBreak
    regime: Regime = Regime.INJECTIVE

    @classmethod
    def make(cls, announcer, n: int, regime=Regime.INJECTIVE, tau: TieBreak | None = None):
        return cls(Announcer(announcer), tau or TieBreak.identity(n), Regime(regime))

    def match(self, r: ReportProfile | Sequence[int]) -> Matching:
        return assortative_match(r, self.tau)

    @property
    def name(self) -> str:
        return self.announcer.value


class Announcements(NamedTuple):
    firms: tuple
    workers: tuple


class IntegrityError(RuntimeError):
    """An announcement disagrees with the matching it was published with."""


def _reports(r) -> tuple:
    return tuple(r.reports if isinstance(r, ReportProfile) else r)


def announce(mech: MechanismSpec, r) -> Announcements:
    reports = _reports(r)
    n = len(reports)
    mu = mech.match(reports)
    firms = []
    for i in range(n):
        own = reports[mu.of_firm(i)]
        if mech.announcer is Announcer.INFORMATIVE_PUBLIC:
            payload = frozenset(reports)
        elif i == n - 1 or mech.announcer is Announcer.EMPTY:
            payload = frozenset()
        elif mech.announcer is Announcer.LOWER_CONTOUR:
            # ranks: larger rank is a lower type
            payload = frozenset(x for x in reports if x >= own)
        else:
            payload = frozenset({own})
        firms.append(payload)
    return Announcements(tuple(firms), tuple(frozenset() for _ in range(n)))


def inferable_workers(mech: MechanismSpec, mu: Matching, i: int) -> tuple:
    """Workers whose exact report firm ``i`` can reconstruct."""
    n = len(mu.firm_partner)
    a = mech.announcer
    if a is Announcer.INFORMATIVE_PUBLIC:
        return tuple(range(n))
    if a is Announcer.EMPTY or i == n - 1:
        return ()
    if a is Announcer.LOWER_CONTOUR:
        return tuple(mu.of_firm(m) for m in range(i, n))
    return (mu.of_firm(i),)


def infer_reports(mech: MechanismSpec, r, i: int, payload: frozenset | None = None) -> dict:
    """Reports firm ``i`` learns from its announcement and the public matching.

    Identities are recovered through the commonly known assortative rule: the
    workers at firms ``i, ..., n`` hold the lower contour reports in firm order.
    """
    reports = _reports(r)
    mu = mech.match(reports)
    if payload is not None and payload != announce(mech, reports).firms[i]:
        raise IntegrityError(f"announcement to i{i + 1} is inconsistent with the matching")
    return {k: reports[k] for k in inferable_workers(mech, mu, i)}
