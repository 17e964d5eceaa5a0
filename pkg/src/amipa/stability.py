"""Matching states, blocking and stability."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .information import InformationSet, consistency_set
from .market import Universe, universe
from .matching import Matching


@dataclass
class MatchingState:
    w: tuple
    mu: Matching
    info: Mapping[int, InformationSet]
    universe: Universe

    def worker_info(self, j: int) -> InformationSet:
        # workers receive no announcements in the one-sided model
        return InformationSet(self.universe, self.universe.fixing(j, self.w[j]).copy())


def minimal_state(w: Sequence[int], mu: Matching, L: int) -> MatchingState:
    U = universe(len(w), L)
    w = tuple(w)
    info = {i: consistency_set(U, w, mu, i) for i in range(len(mu.firm_partner))}
    return MatchingState(w, mu, info, U)


def is_individually_rational(state: MatchingState) -> bool:
    # every type is positive, so only being unmatched fails
    return all(p is not None for p in state.mu.firm_partner) and all(
        p is not None for p in state.mu.worker_partner
    )


def _worker_prefers(mu: Matching, i: int, j: int) -> bool:
    current = mu.of_worker(j)
    return current is None or i < current


def blocks(i: int, j: int, state: MatchingState) -> bool:
    mu = state.mu
    partner = mu.of_firm(i)
    if partner == j or not _worker_prefers(mu, i, j):
        return False
    if partner is None:
        return True
    rows = state.info[i].rows()
    # rank order: smaller rank is the higher type
    return bool(np.all(rows[:, j] < rows[:, partner]))


def is_stable(state: MatchingState):
    """``(True, None)`` or ``(False, (i, j))`` with the first blocking pair,
    firms from highest type down, then workers by index."""
    n_firms = len(state.mu.firm_partner)
    for i in range(n_firms):
        for j in range(state.mu.n_workers):
            if blocks(i, j, state):
                return False, (i, j)
    return True, None


def prop1_characterization(w: Sequence[int], mu: Matching, L: int) -> bool:
    lowest = [j for j, x in enumerate(w) if x == L - 1]
    if not lowest:
        return True
    return mu.of_firm(len(mu.firm_partner) - 1) == lowest[0]
