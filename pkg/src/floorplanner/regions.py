"""Region extraction from the selected rectangle cover.

The union is computed on the cell raster, where rectangles are exact, then
split into 4-connected components.  Component boundaries are walked along
directed cell edges that keep the interior on the left, so outer loops come
out counter-clockwise and hole loops clockwise; at a vertex with two
outgoing edges (two cells of one component touching diagonally) the walk
takes the rightmost turn, which keeps each maximal circuit in one piece.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import InvariantViolation
from .model import (
    CellStats,
    Doorway,
    OccupancyGrid2D,
    Region,
    RegionLabel,
    Transition,
)

PLANE_TOL = 0.15
MIN_OVERLAP_FRAC = 0.5

# rightmost-first preference: cross < 0 is a right turn, 0 straight, > 0 left
_DIRS = ((1, 0), (0, 1), (-1, 0), (0, -1))


def _turn_rank(indir: tuple[int, int], outdir: tuple[int, int]) -> int:
    cross = indir[0] * outdir[1] - indir[1] * outdir[0]
    if cross < 0:
        return 0
    if cross == 0:
        return 1
    return 2


def _boundary_loops(mask: np.ndarray) -> list[list[tuple[int, int]]]:
    """Closed lattice-corner loops of a cell mask, interior on the left."""
    nx, ny = mask.shape
    pad = np.zeros((nx + 2, ny + 2), dtype=bool)
    pad[1:-1, 1:-1] = mask
    south = mask & ~pad[1:-1, :-2]
    north = mask & ~pad[1:-1, 2:]
    west = mask & ~pad[:-2, 1:-1]
    east = mask & ~pad[2:, 1:-1]

    out_edges: dict[tuple[int, int], list[tuple[int, int]]] = {}

    def add(vx: int, vy: int, d: tuple[int, int]) -> None:
        out_edges.setdefault((vx, vy), []).append(d)

    for ix, iy in zip(*np.nonzero(south)):
        add(int(ix), int(iy), (1, 0))
    for ix, iy in zip(*np.nonzero(east)):
        add(int(ix) + 1, int(iy), (0, 1))
    for ix, iy in zip(*np.nonzero(north)):
        add(int(ix) + 1, int(iy) + 1, (-1, 0))
    for ix, iy in zip(*np.nonzero(west)):
        add(int(ix), int(iy) + 1, (0, -1))

    loops = []
    while out_edges:
        start = min(out_edges)
        dirs = out_edges[start]
        d = next(pref for pref in _DIRS if pref in dirs)
        loop = [start]
        vertex = start
        while True:
            dirs.remove(d)
            if not dirs:
                del out_edges[vertex]
            vertex = (vertex[0] + d[0], vertex[1] + d[1])
            if vertex == start:
                break
            loop.append(vertex)
            dirs = out_edges[vertex]
            d = min(dirs, key=lambda o: _turn_rank(d, o))
        loops.append(loop)
    return loops


def _compress(loop: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Drop collinear vertices and rotate to the lexicographic minimum."""
    n = len(loop)
    corners = []
    for i in range(n):
        prev = loop[i - 1]
        cur = loop[i]
        nxt = loop[(i + 1) % n]
        din = (cur[0] - prev[0], cur[1] - prev[1])
        dout = (nxt[0] - cur[0], nxt[1] - cur[1])
        if din[0] * dout[1] - din[1] * dout[0] != 0:
            corners.append(cur)
    k = corners.index(min(corners))
    return corners[k:] + corners[:k]


def _signed_area2(loop) -> float:
    total = 0.0
    for i in range(len(loop)):
        x0, y0 = loop[i]
        x1, y1 = loop[(i + 1) % len(loop)]
        total += x0 * y1 - x1 * y0
    return total


def union_to_regions(selected, grid: OccupancyGrid2D) -> list[Region]:
    """Group covered cells into regions with traced boundaries.

    Region ids follow the bottom-left-most cell of each component.  Every
    cell inside a selected rectangle belongs to its component regardless of
    state; that is where speculation lives.
    """
    mask = np.zeros((grid.nx, grid.ny), dtype=bool)
    for c in selected:
        if c.cell_span is None:
            raise InvariantViolation("selected candidate lacks a cell span")
        (ix0, ix1), (iy0, iy1) = c.cell_span
        mask[ix0:ix1, iy0:iy1] = True
    labels, count = ndimage.label(mask)
    if count == 0:
        return []

    order = []
    for k in range(1, count + 1):
        xs, ys = np.nonzero(labels == k)
        order.append((int(np.min(xs + grid.nx * ys)), k))
    order.sort()

    regions = []
    for rid, (_, k) in enumerate(order):
        comp = labels == k
        loops = [_compress(lp) for lp in _boundary_loops(comp)]
        outers = [lp for lp in loops if _signed_area2(lp) > 0]
        holes = [lp for lp in loops if _signed_area2(lp) < 0]
        if len(outers) != 1:
            raise InvariantViolation(
                f"component {k} traced to {len(outers)} outer loops")

        def to_m(loop):
            return tuple(grid.corner(vx, vy) for vx, vy in loop)

        states = grid.states[comp]
        stats = CellStats(
            free=int(np.count_nonzero(states == 1)),
            occupied=int(np.count_nonzero(states == 2)),
            unobserved=int(np.count_nonzero(states == 0)),
        )
        members = []
        for i, c in enumerate(selected):
            (ix0, _), (iy0, _) = c.cell_span
            if labels[ix0, iy0] == k:
                members.append(i)
        xs, ys = np.nonzero(comp)
        regions.append(Region(
            id=rid,
            outer_boundary=to_m(outers[0]),
            holes=tuple(to_m(h) for h in holes),
            member_rects=tuple(members),
            label=RegionLabel.UNLABELED,
            cell_stats=stats,
            cells=frozenset(int(i) for i in xs + grid.nx * ys),
        ))
    return regions


def filter_regions(regions, max_ratio: float = 1000.0) -> tuple[list[Region], list[Region]]:
    """Split regions into (kept, rejected) by the total/free cell ratio.

    Kept iff total <= max_ratio * free, compared exactly; a region with no
    free cells is always rejected.
    """
    kept, rejected = [], []
    for r in regions:
        if r.cell_stats.free > 0 and r.cell_stats.total <= max_ratio * r.cell_stats.free:
            kept.append(r)
        else:
            rejected.append(r)
    return kept, rejected


def _plane_overlap(region: Region, axis_index: int, offset: float,
                   interval: tuple[float, float], tol: float) -> float:
    """Summed length of region boundary edges on the plane inside interval."""
    total = 0.0
    for loop in (region.outer_boundary, *region.holes):
        n = len(loop)
        for i in range(n):
            a = loop[i]
            b = loop[(i + 1) % n]
            if abs(a[axis_index] - offset) > tol or abs(b[axis_index] - offset) > tol:
                continue
            other = 1 - axis_index
            lo = min(a[other], b[other])
            hi = max(a[other], b[other])
            ov = min(hi, interval[1]) - max(lo, interval[0])
            if ov > 0:
                total += ov
    return total


def attach_transitions(regions, doorways, planes, plane_tol: float = PLANE_TOL,
                       min_overlap_frac: float = MIN_OVERLAP_FRAC,
                       ) -> tuple[list[Transition], list[int]]:
    """Attach each doorway to the regions whose boundaries front it.

    A region qualifies when its boundary edges on the doorway's plane
    (within plane_tol, which spans a one-cell wall) overlap the open
    interval by at least min_overlap_frac of the doorway width.  Two
    qualifying regions give a region-to-region transition (the top two by
    overlap); exactly one gives a transition to the exterior (None); zero
    leaves the doorway in the unattached list.
    """
    by_id = {p.id: p for p in planes}
    transitions = []
    unattached = []
    for d in sorted(doorways, key=lambda d: d.id):
        plane = by_id[d.plane_id]
        scored = []
        for r in regions:
            ov = _plane_overlap(r, plane.axis.index, plane.offset, d.interval, plane_tol)
            if ov >= min_overlap_frac * d.width:
                scored.append((-ov, r.id))
        scored.sort()
        if not scored:
            unattached.append(d.id)
        elif len(scored) == 1:
            transitions.append(Transition(d.id, scored[0][1], None))
        else:
            a, b = sorted((scored[0][1], scored[1][1]))
            transitions.append(Transition(d.id, a, b))
    return transitions, unattached
