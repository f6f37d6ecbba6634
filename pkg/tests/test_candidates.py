"""Rectangle enumeration and the four pruning rules."""
import numpy as np
import pytest

from floorplanner.candidates import enumerate_rects, prune_rects
from floorplanner.ingest import project_segments_2d, slice_grid
from floorplanner.model import Axis, plane_partition


def _inputs(scene, height=1.0):
    grid = slice_grid(scene.grid, height)
    planes = tuple(sorted(scene.planes, key=lambda p: p.id))
    segs = project_segments_2d(scene.clouds.values(), planes)
    return planes, segs, grid


def test_enumeration_counts(observed, batched):
    _, one = observed("one_room")
    assert len(enumerate_rects(one.planes)) == 1
    _, three = observed("three_rooms_corridor")
    assert len(enumerate_rects(three.planes)) == 72
    _, quad = observed("four_rooms_quad")
    assert plane_partition(quad.planes).sizes == (2, 1, 2, 1)
    assert len(enumerate_rects(quad.planes)) == 4


def test_enumeration_order_and_bounds(observed):
    _, scene = observed("one_room")
    (r,) = enumerate_rects(scene.planes)
    assert r.bounds == (0.0, 6.0, 0.0, 6.0)
    assert r.weight == 0 and r.covered_free == frozenset()


def test_three_rooms_pruning(observed, batched):
    _, scene = observed("three_rooms_corridor")
    planes, segs, grid = _inputs(scene)
    _, _, result = batched("three_rooms_corridor")
    kept = prune_rects(enumerate_rects(planes), planes, segs,
                       result.plan.doorways, grid)
    assert len(kept) == 9
    bounds = {r.bounds for r in kept}
    # the corridor rectangle over its full extent must survive
    assert (-2.0, 28.0, 6.1, 8.1) in bounds


def test_pruning_rules_hold_on_survivors(observed, batched):
    """Re-check every rule with independent arithmetic."""
    _, scene = observed("office_block")
    planes, segs, grid = _inputs(scene)
    _, _, result = batched("office_block")
    doorways = result.plan.doorways
    by_id = {p.id: p for p in planes}
    eps = grid.resolution
    kept = prune_rects(enumerate_rects(planes), planes, segs, doorways, grid)
    assert len(kept) == 26
    for r in kept:
        x0, x1, y0, y1 = r.bounds
        assert x1 - x0 >= 1.0 - 1e-9 and y1 - y0 >= 1.0 - 1e-9
        for pid, coords in segs.items():
            p = by_id[pid]
            for c in np.asarray(coords):
                px, py = (p.offset, c) if p.axis is Axis.X else (c, p.offset)
                assert not (x0 + eps < px < x1 - eps and y0 + eps < py < y1 - eps)
        for d in doorways:
            p = by_id[d.plane_id]
            lo, hi = d.interval
            if p.axis is Axis.X:
                cut = (x0 + eps < p.offset < x1 - eps
                       and min(hi, y1 - eps) > max(lo, y0 + eps))
            else:
                cut = (y0 + eps < p.offset < y1 - eps
                       and min(hi, x1 - eps) > max(lo, x0 + eps))
            assert not cut
        assert len(r.covered_free) > 0


def test_weight_and_coverage_bookkeeping(observed):
    _, scene = observed("one_room")
    planes, segs, grid = _inputs(scene)
    (r,) = prune_rects(enumerate_rects(planes), planes, segs, [], grid)
    (ix0, ix1), (iy0, iy1) = r.cell_span
    assert r.weight == (ix1 - ix0) * (iy1 - iy0) == 3600
    free = grid.free_mask()
    for flat in r.covered_free:
        ix, iy = flat % grid.nx, flat // grid.nx
        assert ix0 <= ix < ix1 and iy0 <= iy < iy1
        assert free[ix, iy]
    assert len(r.covered_free) == int(free[ix0:ix1, iy0:iy1].sum())


def test_min_dim_monotonicity(observed, batched):
    _, scene = observed("ell_corridor_rooms")
    planes, segs, grid = _inputs(scene)
    _, _, result = batched("ell_corridor_rooms")
    cands = enumerate_rects(planes)
    prev = None
    for d in (0.5, 1.0, 2.5, 6.0):
        kept = {r.bounds for r in prune_rects(cands, planes, segs,
                                              result.plan.doorways, grid,
                                              min_dim=d)}
        if prev is not None:
            assert kept <= prev
        prev = kept


def test_erosion_monotonicity(observed, batched):
    """A larger erosion only shrinks the blocking interior, never grows it."""
    _, scene = observed("three_rooms_corridor")
    planes, segs, grid = _inputs(scene)
    _, _, result = batched("three_rooms_corridor")
    cands = enumerate_rects(planes)
    prev = None
    for eps in (0.02, 0.1, 0.3):
        kept = {r.bounds for r in prune_rects(cands, planes, segs,
                                              result.plan.doorways, grid,
                                              eps=eps)}
        if prev is not None:
            assert prev <= kept
        prev = kept


def test_degenerate_pairs_dropped(observed):
    # outward-facing plane pairs give non-positive extent and violate (a)
    _, scene = observed("two_rooms_shared_wall")
    planes, segs, grid = _inputs(scene)
    kept = prune_rects(enumerate_rects(planes), planes, segs, [], grid)
    for r in kept:
        assert r.width > 0 and r.height > 0
