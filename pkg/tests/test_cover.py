"""Greedy weighted set cover and the exhaustive reference solver."""
import itertools
import math

import numpy as np
import pytest

from floorplanner.cover import build_universe, greedy_cover, harmonic, optimal_cover
from floorplanner.errors import TooLarge, UniverseNotCoverable
from floorplanner.ingest import slice_grid
from floorplanner.model import CandidateRect


def _cand(cells, weight):
    return CandidateRect(plane_ids=(0, 1, 2, 3), bounds=(0.0, 1.0, 0.0, 1.0),
                         weight=weight, covered_free=frozenset(cells))


def _random_instance(rng, n_cands=15, n_cells=200):
    cells = range(rng.integers(5, n_cells + 1))
    cands = []
    for _ in range(rng.integers(3, n_cands + 1)):
        k = rng.integers(1, max(2, len(cells)))
        chosen = rng.choice(len(cells), size=min(k, len(cells)), replace=False)
        cands.append(_cand((int(c) for c in chosen),
                           weight=int(rng.integers(1, 500))))
    universe = frozenset().union(*(c.covered_free for c in cands))
    return cands, universe


def _brute_force_weight(cands, universe):
    best = math.inf
    for r in range(1, len(cands) + 1):
        for combo in itertools.combinations(range(len(cands)), r):
            covered = frozenset().union(*(cands[i].covered_free for i in combo))
            if universe <= covered:
                best = min(best, sum(cands[i].weight for i in combo))
    return best


def test_build_universe_splits_coverable(observed):
    _, scene = observed("two_rooms_shared_wall")
    from floorplanner.candidates import enumerate_rects, prune_rects
    from floorplanner.ingest import project_segments_2d
    grid = slice_grid(scene.grid, 1.0)
    planes = scene.planes
    segs = project_segments_2d(scene.clouds.values(), planes)
    kept = prune_rects(enumerate_rects(planes), planes, segs, [], grid)
    universe, uncoverable = build_universe(kept, grid)
    free = grid.free_mask()
    all_free = {int(ix + grid.nx * iy) for ix, iy in zip(*free.nonzero())}
    by_union = set().union(*(c.covered_free for c in kept))
    assert universe == all_free & by_union
    assert uncoverable == all_free - by_union
    assert universe.isdisjoint(uncoverable)


def test_greedy_prefers_better_ratio():
    cands = [_cand({0, 1}, 10), _cand({0, 1, 2, 3}, 12)]
    res = greedy_cover(cands, frozenset({0, 1, 2, 3}))
    assert [s.index for s in res.steps] == [1]


def test_greedy_ratio_tie_takes_larger_weight():
    # 6/2 == 12/4: the heavier candidate finishes the job in one pick
    cands = [_cand({0, 1}, 6), _cand({0, 1, 2, 3}, 12)]
    res = greedy_cover(cands, frozenset({0, 1, 2, 3}))
    assert [s.index for s in res.steps] == [1]


def test_greedy_full_tie_takes_earliest():
    cands = [_cand({0, 1}, 8), _cand({2, 3}, 8), _cand({4}, 99)]
    res = greedy_cover(cands, frozenset(range(5)))
    assert [s.index for s in res.steps] == [0, 1, 2]


def test_greedy_covers_and_reports_steps():
    rng = np.random.default_rng(7)
    for _ in range(20):
        cands, universe = _random_instance(rng)
        res = greedy_cover(cands, universe)
        covered = set().union(*(c.covered_free for c in res.selected))
        assert universe <= covered
        assert len(res.steps) == len(res.selected)
        assert sum(s.gained for s in res.steps) >= len(universe)
        assert res.total_weight == sum(s.weight for s in res.steps)


def test_greedy_rejects_uncoverable_universe():
    with pytest.raises(UniverseNotCoverable):
        greedy_cover([_cand({0}, 1)], frozenset({0, 99}))


def test_optimal_matches_brute_force():
    rng = np.random.default_rng(21)
    for _ in range(15):
        cands, universe = _random_instance(rng, n_cands=7, n_cells=12)
        opt = optimal_cover(cands, universe)
        assert opt.total_weight == _brute_force_weight(cands, universe)
        covered = set().union(*(c.covered_free for c in opt.selected))
        assert universe <= covered


def test_optimal_never_above_greedy():
    rng = np.random.default_rng(3)
    for _ in range(25):
        cands, universe = _random_instance(rng, n_cands=12, n_cells=60)
        assert (optimal_cover(cands, universe).total_weight
                <= greedy_cover(cands, universe).total_weight)


def test_greedy_within_harmonic_bound():
    rng = np.random.default_rng(9)
    for _ in range(25):
        cands, universe = _random_instance(rng, n_cands=12, n_cells=80)
        greedy = greedy_cover(cands, universe)
        opt = optimal_cover(cands, universe)
        d_star = max(len(c.covered_free) for c in cands)
        assert greedy.total_weight <= harmonic(d_star) * opt.total_weight + 1e-9


def test_optimal_size_limit():
    cands = [_cand({i}, 1) for i in range(21)]
    with pytest.raises(TooLarge):
        optimal_cover(cands, frozenset(range(21)))
    # at the limit it still runs
    res = optimal_cover(cands[:20], frozenset(range(20)))
    assert res.total_weight == 20


def test_optimal_rejects_uncoverable():
    with pytest.raises(UniverseNotCoverable):
        optimal_cover([_cand({0}, 1)], frozenset({0, 5}))


def test_harmonic_values():
    assert harmonic(1) == 1.0
    assert harmonic(3) == pytest.approx(1.0 + 0.5 + 1.0 / 3.0)
