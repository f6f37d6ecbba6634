"""Independent numeric oracle for the boundary-shape distance.

Rebuilds the cumulative-heading step function with numpy and minimizes the
L2 gap over a dense grid of starting-point shifts in addition to the
jump-alignment shifts, so it would catch an implementation that misses a
better interior shift.  Rotation is absorbed in closed form (subtract the
mean gap).  Only valid for simple CCW rectilinear polygons.
"""
import numpy as np

TWO_PI = 2.0 * np.pi


def step_function(vertices):
    """Return (jump positions, angles) of the cumulative heading."""
    v = np.asarray(vertices, dtype=float)
    d = np.roll(v, -1, axis=0) - v
    lengths = np.hypot(d[:, 0], d[:, 1])
    if np.any(lengths <= 0):
        raise ValueError("zero-length edge")
    heading = np.arctan2(d[:, 1], d[:, 0])
    turn = np.diff(heading)
    turn = (turn + np.pi) % TWO_PI - np.pi
    angles = np.concatenate(([heading[0]], heading[0] + np.cumsum(turn)))
    s = np.concatenate(([0.0], np.cumsum(lengths[:-1]))) / lengths.sum()
    return s, angles


def _gap_squared(sa, aa, sb, ab, t):
    """Exact integral of the squared gap at shift t, best rotation removed."""
    cuts = np.unique(np.concatenate(((sa - t) % 1.0, sb, [0.0, 1.0])))
    mids = 0.5 * (cuts[:-1] + cuts[1:])
    widths = np.diff(cuts)
    x = mids + t
    lap = np.floor(x)
    ia = np.searchsorted(sa, x - lap, side="right") - 1
    ib = np.searchsorted(sb, mids, side="right") - 1
    g = aa[ia] + TWO_PI * lap - ab[ib]
    m1 = float(np.dot(g, widths))
    m2 = float(np.dot(g * g, widths))
    return m2 - m1 * m1


def distance_oracle(verts_a, verts_b, grid=2048):
    sa, aa = step_function(verts_a)
    sb, ab = step_function(verts_b)
    shifts = set(np.unique((sa[:, None] - sb[None, :]) % 1.0).tolist())
    shifts.update(i / grid for i in range(grid))
    best = min(_gap_squared(sa, aa, sb, ab, t) for t in shifts)
    return float(np.sqrt(max(best, 0.0)))
