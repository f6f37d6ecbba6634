"""Rectangle candidate enumeration and pruning.

Every pair of an east-facing and a west-facing x-plane spans a horizontal
extent, and likewise along y; their cross product enumerates all axis-
aligned rectangles the plane set can explain.  Pruning then keeps a
candidate only if it is wide enough in both axes, contains no observed
segment point and no doorway strictly inside its eroded interior, and
covers at least one free grid cell.
"""
from __future__ import annotations

from dataclasses import replace

import numpy as np

from .model import Axis, CandidateRect, OccupancyGrid2D, plane_partition


def enumerate_rects(planes) -> list[CandidateRect]:
    """All plane-pair rectangles, degenerate ones included.

    Output is ordered by the (x_lo, x_hi, y_lo, y_hi) plane-id tuple; the
    nested loops over id-sorted partitions produce that order directly.
    """
    part = plane_partition(planes)
    out = []
    for px in part.x_pos:
        for qx in part.x_neg:
            for py in part.y_pos:
                for qy in part.y_neg:
                    out.append(CandidateRect(
                        plane_ids=(px.id, qx.id, py.id, qy.id),
                        bounds=(px.offset, qx.offset, py.offset, qy.offset),
                    ))
    return out


def prune_rects(cands, planes, segments_2d, doorways,
                grid: OccupancyGrid2D | None, min_dim: float = 1.0,
                eps: float | None = None) -> list[CandidateRect]:
    """Apply the four pruning rules and attach weights and coverage.

    A candidate survives iff (a) both extents are at least min_dim (which
    also removes outward-facing pairs, whose extent is non-positive); (b) no
    projected segment point lies strictly inside the rectangle eroded by eps
    (default one cell) per side; (c) no doorway's open interval cuts the
    eroded interior; (d) it covers at least one free cell.  Survivors carry
    weight = total cells inside bounds clipped to the grid, the flat indices
    of their free cells, and their cell span.

    Eroding before the interior tests is what lets a rectangle coexist with
    its own walls: the defining planes' segment points sit exactly on the
    bounds, never strictly inside.
    """
    by_id = {p.id: p for p in planes}
    if eps is None:
        eps = grid.resolution if grid is not None else 0.1

    xs_parts, ys_parts = [], []
    for pid, coords in segments_2d.items():
        plane = by_id[pid]
        if len(coords) == 0:
            continue
        along = np.asarray(coords, dtype=np.float64)
        fixed = np.full(along.shape, plane.offset)
        if plane.axis is Axis.X:
            xs_parts.append(fixed)
            ys_parts.append(along)
        else:
            xs_parts.append(along)
            ys_parts.append(fixed)
    if xs_parts:
        sx = np.concatenate(xs_parts)
        sy = np.concatenate(ys_parts)
    else:
        sx = sy = np.empty(0)

    free = grid.free_mask() if grid is not None else None
    survivors = []
    for cand in cands:
        xmin, xmax, ymin, ymax = cand.bounds
        if xmax - xmin < min_dim or ymax - ymin < min_dim:
            continue
        ex_lo, ex_hi = xmin + eps, xmax - eps
        ey_lo, ey_hi = ymin + eps, ymax - eps
        if sx.size and bool(np.any(
                (sx > ex_lo) & (sx < ex_hi) & (sy > ey_lo) & (sy < ey_hi))):
            continue
        blocked = False
        for d in doorways:
            plane = by_id[d.plane_id]
            lo, hi = d.interval
            if plane.axis is Axis.X:
                hit = ex_lo < plane.offset < ex_hi and max(lo, ey_lo) < min(hi, ey_hi)
            else:
                hit = ey_lo < plane.offset < ey_hi and max(lo, ex_lo) < min(hi, ex_hi)
            if hit:
                blocked = True
                break
        if blocked:
            continue
        if grid is None:
            continue
        ix0, ix1 = grid.cell_span(xmin, xmax, Axis.X)
        iy0, iy1 = grid.cell_span(ymin, ymax, Axis.Y)
        if ix1 <= ix0 or iy1 <= iy0:
            continue
        sub = free[ix0:ix1, iy0:iy1]
        if not sub.any():
            continue
        fx, fy = np.nonzero(sub)
        flat = (ix0 + fx) + grid.nx * (iy0 + fy)
        survivors.append(replace(
            cand,
            weight=(ix1 - ix0) * (iy1 - iy0),
            covered_free=frozenset(int(i) for i in flat),
            cell_span=((ix0, ix1), (iy0, iy1)),
        ))
    return survivors
