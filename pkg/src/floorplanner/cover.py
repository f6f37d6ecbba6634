"""Weighted set cover over the free-space universe.

The universe is the set of free cells covered by at least one candidate;
free cells no candidate reaches are reported separately instead of failing
the run.  Selection repeatedly takes the candidate minimizing
weight / newly-covered, compared with cross-multiplied integers so ties are
exact, and an exhaustive branch-and-bound solver provides the optimum on
small instances for verification.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import TooLarge, UniverseNotCoverable
from .model import CandidateRect


def build_universe(cands, grid) -> tuple[frozenset, frozenset]:
    """(coverable free cells, uncoverable free cells) as flat indices."""
    free_mask = grid.free_mask()
    fx, fy = free_mask.nonzero()
    all_free = frozenset(int(i) for i in fx + grid.nx * fy)
    covered: set[int] = set()
    for c in cands:
        covered |= c.covered_free
    universe = frozenset(all_free & covered)
    return universe, frozenset(all_free - covered)


class GreedyStep(NamedTuple):
    index: int
    weight: int
    gained: int


@dataclass(frozen=True)
class CoverResult:
    selected: tuple[CandidateRect, ...]
    steps: tuple[GreedyStep, ...]

    @property
    def total_weight(self) -> int:
        return sum(c.weight for c in self.selected)


def greedy_cover(cands, universe) -> CoverResult:
    """Greedy weighted cover of `universe`, selection order preserved.

    Each round scans candidates in input order and picks the one with the
    smallest weight / newly-covered ratio; ratio ties go to the larger
    weight, and remaining ties to the earliest candidate (input order is the
    plane-id tuple order when candidates come from pruning).  Comparisons
    cross-multiply integers, never divide.
    """
    uncovered = set(universe)
    selected = []
    steps = []
    while uncovered:
        best_i = -1
        best_gain = 0
        best_weight = 0
        for i, c in enumerate(cands):
            gain = len(c.covered_free & uncovered)
            if gain == 0:
                continue
            if best_i < 0:
                better = True
            else:
                lhs = c.weight * best_gain
                rhs = best_weight * gain
                better = lhs < rhs or (lhs == rhs and c.weight > best_weight)
            if better:
                best_i, best_gain, best_weight = i, gain, c.weight
        if best_i < 0:
            raise UniverseNotCoverable(
                f"{len(uncovered)} universe cell(s) covered by no candidate")
        chosen = cands[best_i]
        selected.append(chosen)
        steps.append(GreedyStep(index=best_i, weight=chosen.weight, gained=best_gain))
        uncovered -= chosen.covered_free
    return CoverResult(selected=tuple(selected), steps=tuple(steps))


def optimal_cover(cands, universe, limit: int = 20) -> CoverResult:
    """Minimum-total-weight cover by exhaustive search.

    Branches on the uncovered cell with the fewest coverers and bounds on
    accumulated weight.  Raises TooLarge beyond `limit` candidates and
    UniverseNotCoverable when some universe cell has no coverer.
    """
    cands = list(cands)
    if len(cands) > limit:
        raise TooLarge(f"{len(cands)} candidates exceeds the exhaustive limit {limit}")
    target = frozenset(universe)
    coverers: dict[int, tuple[int, ...]] = {}
    for cell in target:
        who = tuple(i for i, c in enumerate(cands) if cell in c.covered_free)
        if not who:
            raise UniverseNotCoverable(f"cell {cell} covered by no candidate")
        coverers[cell] = who

    best_weight = math.inf
    best_sel: tuple[int, ...] | None = None

    def dfs(uncovered: frozenset, chosen: tuple[int, ...], weight: int) -> None:
        nonlocal best_weight, best_sel
        if weight >= best_weight:
            return
        if not uncovered:
            best_weight = weight
            best_sel = chosen
            return
        cell = min(uncovered, key=lambda e: (len(coverers[e]), e))
        for i in coverers[cell]:
            dfs(uncovered - cands[i].covered_free, chosen + (i,),
                weight + cands[i].weight)

    dfs(target, (), 0)
    sel = tuple(sorted(best_sel or ()))
    return CoverResult(
        selected=tuple(cands[i] for i in sel),
        steps=tuple(GreedyStep(index=i, weight=cands[i].weight, gained=0) for i in sel),
    )


def harmonic(n: int) -> float:
    """H(n) = 1 + 1/2 + ... + 1/n, the greedy approximation factor bound."""
    return sum(1.0 / k for k in range(1, n + 1))
