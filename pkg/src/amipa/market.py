"""Type scales, type assignments, report profiles and the assignment universe.

Worker types are handled by *rank*: rank 0 is the highest type ``t1`` and rank
``L - 1`` the lowest ``tL``.  Every predicate in the model depends only on the
order of types, so magnitudes exist for display only.  Workers and firms are
dense 0-based indices (``j1`` is worker 0, ``i1`` is firm 0).
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

TypeAssignment = tuple  # tuple[int, ...] of ranks, injective


class Regime(str, enum.Enum):
    INJECTIVE = "injective"
    FULL = "full"


class DomainError(ValueError):
    """Raised when an operation is called outside its domain."""


@dataclass(frozen=True)
class TypeSpace:
    values: tuple

    def __post_init__(self):
        vals = tuple(Fraction(v) for v in self.values)
        if not vals:
            raise DomainError("empty type space")
        if any(v <= 0 for v in vals):
            raise DomainError("types must be positive")
        if any(a <= b for a, b in zip(vals, vals[1:])):
            raise DomainError("types must be strictly decreasing")
        object.__setattr__(self, "values", vals)

    @classmethod
    def default(cls, size: int) -> "TypeSpace":
        # t_l = L + 1 - l
        return cls(tuple(range(size, 0, -1)))

    @property
    def size(self) -> int:
        return len(self.values)

    def rank(self, value) -> int:
        try:
            return self.values.index(Fraction(value))
        except ValueError:
            raise DomainError(f"{value} is not a type in this space") from None

    def check_market(self, n: int) -> None:
        if self.size <= n:
            raise DomainError(f"need more types than workers (L={self.size}, n={n})")


@dataclass(frozen=True)
class FirmRoster:
    types: tuple

    def __post_init__(self):
        vals = tuple(Fraction(v) for v in self.types)
        if any(v <= 0 for v in vals) or any(a <= b for a, b in zip(vals, vals[1:])):
            raise DomainError("firm types must be positive and strictly decreasing")
        object.__setattr__(self, "types", vals)

    @classmethod
    def default(cls, n: int) -> "FirmRoster":
        return cls(tuple(range(n, 0, -1)))

    @property
    def n(self) -> int:
        return len(self.types)

    def f(self, firm: int | None) -> Fraction:
        """Type of ``firm``; ``None`` (unmatched) has type 0."""
        return Fraction(0) if firm is None else self.types[firm]


@dataclass(frozen=True)
class TieBreak:
    """Precedence order over workers; ``rank(k)`` smaller means higher precedence."""

    tau: tuple

    def __post_init__(self):
        tau = tuple(int(x) for x in self.tau)
        if sorted(tau) != list(range(1, len(tau) + 1)):
            raise DomainError(f"tie-break {tau} is not a permutation of 1..{len(tau)}")
        object.__setattr__(self, "tau", tau)

    @classmethod
    def identity(cls, n: int) -> "TieBreak":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def reversal(cls, n: int) -> "TieBreak":
        return cls(tuple(range(n, 0, -1)))

    def rank(self, worker: int) -> int:
        return self.tau[worker]


@dataclass(frozen=True)
class ReportProfile:
    reports: tuple
    regime: Regime

    def __post_init__(self):
        object.__setattr__(self, "reports", tuple(self.reports))
        object.__setattr__(self, "regime", Regime(self.regime))
        if self.regime is Regime.INJECTIVE and not is_injective(self.reports):
            raise DomainError("coincident reports need the full regime")

    def __getitem__(self, worker: int) -> int:
        return self.reports[worker]

    def __len__(self) -> int:
        return len(self.reports)


def is_injective(values: Sequence[int]) -> bool:
    return len(set(values)) == len(values)


def check_assignment(w: Sequence[int], L: int) -> TypeAssignment:
    w = tuple(int(x) for x in w)
    if not is_injective(w):
        raise DomainError(f"{fmt_types(w)} assigns the same type to two workers")
    if any(not 0 <= x < L for x in w):
        raise DomainError(f"{fmt_types(w)} uses a type outside t1..t{L}")
    return w


def enumerate_assignments(L: int, n: int) -> list[TypeAssignment]:
    """All injective maps from ``n`` workers into ``L`` ranks, lexicographic."""
    if L < n:
        raise DomainError("type space too small")
    return list(itertools.permutations(range(L), n))


def position(w: Sequence[int], j: int) -> int:
    if not 0 <= j < len(w):
        raise DomainError(f"unknown worker j{j + 1}")
    return 1 + sum(1 for x in w if x < w[j])


def substitute(w: Sequence[int], j: int, t: int) -> ReportProfile:
    reports = tuple(t if k == j else x for k, x in enumerate(w))
    regime = Regime.INJECTIVE if is_injective(reports) else Regime.FULL
    return ReportProfile(reports, regime)


class Universe:
    """The enumerated assignment set as an ``(N, n)`` rank array.

    Information sets are boolean masks over the rows.
    """

    def __init__(self, n: int, L: int):
        if n < 1:
            raise DomainError("need at least one worker")
        self.n = n
        self.L = L
        self.assignments = enumerate_assignments(L, n)
        self.array = np.array(self.assignments, dtype=np.int16).reshape(-1, n)
        self.index = {w: k for k, w in enumerate(self.assignments)}
        # positions[k, j] = 1 + #workers strictly above j in assignment k
        a = self.array
        self.positions = 1 + (a[:, None, :] < a[:, :, None]).sum(axis=2)
        self._eq = a.T[:, None, :] == np.arange(L)[None, :, None]  # (n, L, N)

    def __len__(self) -> int:
        return len(self.assignments)

    def fixing(self, j: int, t: int) -> np.ndarray:
        """Mask of assignments with ``w'(j) == t``."""
        return self._eq[j, t]

    def all(self) -> np.ndarray:
        return np.ones(len(self), dtype=bool)


@lru_cache(maxsize=None)
def universe(n: int, L: int) -> Universe:
    return Universe(n, L)


def fmt_type(t: int) -> str:
    return f"t{t + 1}"


def fmt_types(w: Sequence[int]) -> str:
    return ",".join(fmt_type(x) for x in w)


def parse_type(token: str) -> int:
    token = token.strip()
    if not token.startswith("t") or not token[1:].isdigit() or int(token[1:]) < 1:
        raise DomainError(f"bad type token {token!r}; expected t1, t2, ...")
    return int(token[1:]) - 1


def parse_agent(token: str, prefix: str) -> int:
    token = token.strip()
    if not token.startswith(prefix) or not token[1:].isdigit() or int(token[1:]) < 1:
        raise DomainError(f"bad agent token {token!r}; expected {prefix}1, {prefix}2, ...")
    return int(token[1:]) - 1
