"""Boundary-shape semantics: turning functions and region labels.

The turning function of a closed polygon maps normalized arclength
s in [0, 1) to the cumulative heading of the boundary tangent.  It is a step
function that starts at the heading of the first edge and gains 2*pi over one
counter-clockwise lap.  Shape similarity is the L2 distance between two
turning functions, minimized over rotation (a vertical offset, closed form)
and over starting point (a horizontal shift).  Between shifts that align a
jump of one function with a jump of the other, the squared objective is
concave in the shift, so evaluating only those alignments is exact.
"""
from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, replace

from .errors import DegeneratePolygon
from .model import Region, RegionLabel

TWO_PI = 2.0 * math.pi


def _wrap(angle: float) -> float:
    """Wrap to (-pi, pi]."""
    a = math.fmod(angle, TWO_PI)
    if a <= -math.pi:
        a += TWO_PI
    elif a > math.pi:
        a -= TWO_PI
    return a


@dataclass(frozen=True)
class TurningFunction:
    """Step function: angles[i] holds on [jumps_at[i], jumps_at[i+1]).

    jumps_at is strictly increasing with jumps_at[0] == 0.0; the function
    continues beyond one lap via eval_ext, which adds 2*pi per full lap.
    """

    jumps_at: tuple[float, ...]
    angles: tuple[float, ...]

    def eval(self, s: float) -> float:
        return self.angles[bisect_right(self.jumps_at, s) - 1]

    def eval_ext(self, x: float) -> float:
        lap = math.floor(x)
        return self.eval(x - lap) + TWO_PI * lap


def turning_function(vertices) -> TurningFunction:
    """Build the turning function of a CCW simple polygon.

    Raises DegeneratePolygon when the input has fewer than 4 vertices, a
    zero-length edge, clockwise winding, or does not close through one full
    CCW lap.
    """
    verts = [(float(x), float(y)) for x, y in vertices]
    n = len(verts)
    if n < 4:
        raise DegeneratePolygon(f"polygon needs at least 4 vertices, got {n}")
    lengths = []
    headings = []
    area2 = 0.0
    for i in range(n):
        x0, y0 = verts[i]
        x1, y1 = verts[(i + 1) % n]
        dx, dy = x1 - x0, y1 - y0
        edge = math.hypot(dx, dy)
        if edge <= 0.0:
            raise DegeneratePolygon(f"zero-length edge at vertex {i}")
        lengths.append(edge)
        headings.append(math.atan2(dy, dx))
        area2 += x0 * y1 - x1 * y0
    if area2 <= 0.0:
        raise DegeneratePolygon("boundary must wind counter-clockwise")
    total = math.fsum(lengths)
    jumps = [0.0]
    angles = [headings[0]]
    arc = 0.0
    for i in range(1, n):
        arc += lengths[i - 1]
        jumps.append(arc / total)
        angles.append(angles[-1] + _wrap(headings[i] - headings[i - 1]))
    swept = angles[-1] + _wrap(headings[0] - headings[-1]) - angles[0]
    if abs(swept - TWO_PI) > 1e-6:
        raise DegeneratePolygon("boundary does not close through one CCW lap")
    return TurningFunction(jumps_at=tuple(jumps), angles=tuple(angles))


def _objective(a: TurningFunction, b: TurningFunction, t: float) -> float:
    """Squared L2 gap at shift t with the optimal rotation absorbed.

    With g(s) = a(s + t) - b(s), the best rotation is -mean(g) and the
    residual is integral(g^2) - integral(g)^2.
    """
    cuts = sorted(
        {0.0, 1.0}
        | set(b.jumps_at)
        | {(p - t) % 1.0 for p in a.jumps_at}
    )
    i1 = 0.0
    i2 = 0.0
    for lo, hi in zip(cuts, cuts[1:]):
        width = hi - lo
        if width <= 0.0:
            continue
        mid = 0.5 * (lo + hi)
        g = a.eval_ext(mid + t) - b.eval(mid)
        i1 += g * width
        i2 += g * g * width
    return i2 - i1 * i1


def turning_distance(a: TurningFunction, b: TurningFunction) -> float:
    """L2 distance between turning functions, minimized over rotation and
    starting point.  Only shifts aligning a jump of `a` with a jump of `b`
    are evaluated; the objective is concave between them."""
    best = math.inf
    shifts = {(pa - pb) % 1.0 for pa in a.jumps_at for pb in b.jumps_at}
    for t in sorted(shifts):
        d2 = _objective(a, b, t)
        if d2 < best:
            best = d2
    return math.sqrt(max(best, 0.0))


_UNIT_SQUARE = turning_function([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])


def squareness(boundary) -> float:
    """Turning distance from a closed boundary to the unit square."""
    return turning_distance(turning_function(boundary), _UNIT_SQUARE)


def classify(region: Region, perim_max: float = 60.0,
             turndist_max: float = 1.0) -> RegionLabel:
    """Room iff the outline is both short and square-like, else Corridor.

    Both comparisons are strict, so a perimeter of exactly perim_max already
    classifies as Corridor.  Holes are ignored; only the outer boundary
    matters.
    """
    if region.perimeter < perim_max and squareness(region.outer_boundary) < turndist_max:
        return RegionLabel.ROOM
    return RegionLabel.CORRIDOR


def label_regions(regions, perim_max: float = 60.0,
                  turndist_max: float = 1.0) -> tuple[Region, ...]:
    return tuple(
        replace(r, label=classify(r, perim_max, turndist_max)) for r in regions
    )
