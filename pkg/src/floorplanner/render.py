"""Deterministic SVG rendering of a floor plan over its occupancy slice.

The drawing is plain string assembly: black page, white known-free cells,
gray speculated-free cells (unobserved but inside the plan), cyan room and
magenta corridor polygons, yellow doorway ticks, and a 1 m scale bar.
Identical inputs yield identical bytes.
"""
from __future__ import annotations

import numpy as np

from .model import CellState, FloorPlan, OccupancyGrid2D, RegionLabel

SCALE = 40.0
MARGIN = 0.5
BAR_ROOM = 1.0

BLACK = "#000000"
WHITE = "#ffffff"
GRAY = "#808080"
CYAN = "#00ffff"
MAGENTA = "#ff00ff"
YELLOW = "#ffff00"

_FILL = {RegionLabel.ROOM: CYAN, RegionLabel.CORRIDOR: MAGENTA,
         RegionLabel.UNLABELED: GRAY}


def _inside(polygon, cx: np.ndarray, cy: np.ndarray) -> np.ndarray:
    """Even-odd test of points against one rectilinear ring.

    Cell centers sit half a cell off the corner lattice the boundaries live
    on, so no point ever lies on an edge and the half-open crossing rule is
    exact.  Only vertical edges can cross the horizontal test ray.
    """
    inside = np.zeros(cx.shape, dtype=bool)
    n = len(polygon)
    for i in range(n):
        x0, y0 = polygon[i - 1]
        x1, y1 = polygon[i]
        if x0 != x1:
            continue
        lo, hi = (y0, y1) if y0 < y1 else (y1, y0)
        inside ^= (cy >= lo) & (cy < hi) & (cx < x0)
    return inside


def plan_cell_mask(plan: FloorPlan, grid: OccupancyGrid2D) -> np.ndarray:
    """Boolean mask, indexed [ix, iy] like grid.states, of cells whose
    centers lie inside the plan.

    Works from the region polygons alone so plans loaded from disk (which
    carry no cell sets) rasterize the same as freshly computed ones.
    """
    xs = grid.origin[0] + (np.arange(grid.nx) + 0.5) * grid.resolution
    ys = grid.origin[1] + (np.arange(grid.ny) + 0.5) * grid.resolution
    cx, cy = np.meshgrid(xs, ys, indexing="ij")
    mask = np.zeros((grid.nx, grid.ny), dtype=bool)
    for region in plan.regions:
        m = _inside(region.outer_boundary, cx, cy)
        for hole in region.holes:
            m &= ~_inside(hole, cx, cy)
        mask |= m
    return mask


def _runs(row: np.ndarray):
    """Yield (start, stop) index pairs of True runs in a boolean row."""
    idx = np.flatnonzero(np.diff(np.concatenate(([False], row, [False])).astype(np.int8)))
    for a, b in zip(idx[::2], idx[1::2]):
        yield int(a), int(b)


def _path(rings) -> str:
    parts = []
    for ring in rings:
        pts = " L ".join(f"{x:.3f} {y:.3f}" for x, y in ring)
        parts.append(f"M {pts} Z")
    return " ".join(parts)


def render_svg(plan: FloorPlan, grid: OccupancyGrid2D, planes=()) -> str:
    """Render one plan snapshot to an SVG document string.

    `planes` locates doorway ticks; doorways whose plane is not supplied
    are skipped rather than guessed.
    """
    x0, y0 = grid.origin[0], grid.origin[1]
    x1 = x0 + grid.nx * grid.resolution
    y1 = y0 + grid.ny * grid.resolution
    vx0, vx1 = x0 - MARGIN, x1 + MARGIN
    vy0, vy1 = y0 - MARGIN - BAR_ROOM, y1 + MARGIN

    def sx(x: float) -> float:
        return (x - vx0) * SCALE

    def sy(y: float) -> float:
        return (vy1 - y) * SCALE

    width = (vx1 - vx0) * SCALE
    height = (vy1 - vy0) * SCALE
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" '
        f'height="{height:.0f}" viewBox="0 0 {width:.3f} {height:.3f}">',
        f'<rect x="0" y="0" width="{width:.3f}" height="{height:.3f}" fill="{BLACK}"/>',
    ]

    in_plan = plan_cell_mask(plan, grid)
    free = grid.states == CellState.FREE
    speculated = (grid.states == CellState.UNOBSERVED) & in_plan
    cell = grid.resolution * SCALE
    for color, mask in ((WHITE, free), (GRAY, speculated)):
        for iy in range(grid.ny):
            ry = sy(y0 + (iy + 1) * grid.resolution)
            for a, b in _runs(mask[:, iy]):
                out.append(
                    f'<rect x="{sx(x0 + a * grid.resolution):.3f}" y="{ry:.3f}" '
                    f'width="{(b - a) * cell:.3f}" height="{cell:.3f}" fill="{color}"/>')

    for region in plan.regions:
        rings = [[(sx(x), sy(y)) for x, y in region.outer_boundary]]
        rings.extend([(sx(x), sy(y)) for x, y in hole] for hole in region.holes)
        color = _FILL[region.label]
        out.append(f'<path d="{_path(rings)}" fill="{color}" fill-opacity="0.55" '
                   f'fill-rule="evenodd" stroke="{color}" '
                   f'stroke-width="{0.06 * SCALE:.3f}"/>')

    by_id = {p.id: p for p in planes}
    for d in plan.doorways:
        p = by_id.get(d.plane_id)
        if p is None:
            continue
        lo, hi = d.interval
        if p.axis.index == 0:
            pts = (sx(p.offset), sy(lo), sx(p.offset), sy(hi))
        else:
            pts = (sx(lo), sy(p.offset), sx(hi), sy(p.offset))
        out.append(f'<line x1="{pts[0]:.3f}" y1="{pts[1]:.3f}" x2="{pts[2]:.3f}" '
                   f'y2="{pts[3]:.3f}" stroke="{YELLOW}" '
                   f'stroke-width="{0.15 * SCALE:.3f}" stroke-linecap="round"/>')

    ybar = y0 - 0.6
    out.append(f'<line x1="{sx(x0):.3f}" y1="{sy(ybar):.3f}" x2="{sx(x0 + 1.0):.3f}" '
               f'y2="{sy(ybar):.3f}" stroke="{WHITE}" stroke-width="3" '
               'stroke-linecap="square"/>')
    out.append(f'<text x="{sx(x0 + 1.2):.3f}" y="{sy(ybar) + 5.0:.3f}" '
               f'font-family="monospace" font-size="14" fill="{WHITE}">1 m</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(path, plan: FloorPlan, grid: OccupancyGrid2D, planes=()) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(render_svg(plan, grid, planes))
