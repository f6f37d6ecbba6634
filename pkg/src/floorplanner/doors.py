"""Doorway detection on wall planes.

Points on a plane (kept below door height) are binned into a histogram of
in-plane positions.  At an aperture the smoothed gradient of that histogram
shows a falling edge at the left jamb followed by a rising edge at the right
jamb, so an antisymmetric two-impulse template (-1 at 0, +1 at w) correlated
with the gradient peaks where an edge pair sits w apart.  Detections are
thresholded, non-maximum suppressed across both positions and template
widths, then checked against the measured jamb separation and for wall
evidence on both flanks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
from scipy.ndimage import gaussian_filter1d

from .model import Doorway, LayoutPlane, SegmentCloud

DETECT_WIDTHS = (0.8, 1.2)
WIDTH_STEP = 0.1
BIN_WIDTH = 0.1
SIGMA_BINS = 2.0
NMS_RADIUS = 0.5
MIN_FLANK = 0.5
RESPONSE_FRAC = 0.5
# an aperture interior must be near-empty relative to its flanking wall
# evidence; the guard keeps jamb bins (noise + smoothing bleed) out of it
CORE_FRAC = 0.25
CORE_GUARD = 0.2


@dataclass(frozen=True)
class Histogram:
    """Counts over uniform bins; bin b spans [origin + b*w, origin + (b+1)*w)."""

    origin: float
    bin_width: float
    counts: np.ndarray

    def __len__(self) -> int:
        return len(self.counts)

    def centers(self) -> np.ndarray:
        return self.origin + (np.arange(len(self.counts)) + 0.5) * self.bin_width


@dataclass(frozen=True)
class Signal:
    """Real values on the same bin axis as the histogram they derive from."""

    origin: float
    bin_width: float
    values: np.ndarray

    def __len__(self) -> int:
        return len(self.values)


def plane_histogram(cloud: SegmentCloud, plane: LayoutPlane,
                    z_max: float = 2.0, bin_width: float = BIN_WIDTH) -> Histogram:
    """Histogram of in-plane coordinates of points at or below z_max.

    Bins are anchored to the absolute lattice (multiples of bin_width) and
    span the retained points' extent padded by one empty bin per side.  A
    cloud with no retained points yields an empty histogram.
    """
    if bin_width <= 0:
        raise ValueError("bin_width must be positive")
    pts = cloud.points
    coords = pts[pts[:, 2] <= z_max][:, plane.axis.other.index]
    if coords.size == 0:
        return Histogram(origin=0.0, bin_width=bin_width, counts=np.zeros(0, dtype=np.int64))
    bins = np.floor(coords / bin_width).astype(np.int64)
    b0 = int(bins.min()) - 1
    b1 = int(bins.max()) + 1
    counts = np.bincount(bins - b0, minlength=b1 - b0 + 1)
    counts.flags.writeable = False
    return Histogram(origin=b0 * bin_width, bin_width=bin_width, counts=counts)


def smoothed_gradient(hist: Histogram, sigma_bins: float = SIGMA_BINS) -> Signal:
    """Central-difference derivative of the Gaussian-smoothed counts."""
    counts = np.asarray(hist.counts, dtype=np.float64)
    if counts.size < 2:
        values = np.zeros_like(counts)
    else:
        smooth = gaussian_filter1d(counts, sigma=sigma_bins, mode="reflect", truncate=4.0)
        values = np.gradient(smooth)
    values.flags.writeable = False
    return Signal(origin=hist.origin, bin_width=hist.bin_width, values=values)


@lru_cache(maxsize=32)
def _unit_aperture_response(bin_width: float, sigma_bins: float, width: float) -> float:
    """Peak template response of a width-wide aperture in a height-1 wall."""
    wb = round(width / bin_width)
    pad = 8 * wb
    counts = np.ones(2 * pad + wb)
    counts[pad:pad + wb] = 0.0
    smooth = gaussian_filter1d(counts, sigma=sigma_bins, mode="reflect", truncate=4.0)
    g = np.gradient(smooth)
    return float(np.max(g[wb:] - g[:-wb]))


def ideal_response(median_height: float, bin_width: float = BIN_WIDTH,
                   sigma_bins: float = SIGMA_BINS, width: float = 1.0) -> float:
    """Response a clean aperture would score in a wall of the given height."""
    return median_height * _unit_aperture_response(bin_width, sigma_bins, width)


def detect_doorways(signal: Signal, plane_id: int,
                    widths: tuple[float, float] = DETECT_WIDTHS,
                    width_step: float = WIDTH_STEP,
                    response_min: float | None = None,
                    histogram: Histogram | None = None,
                    min_flank: float = MIN_FLANK,
                    id_start: int = 0) -> list[Doorway]:
    """Detect apertures in one plane's gradient signal.

    When response_min is None it defaults to RESPONSE_FRAC times the ideal
    response of a 1 m aperture in a wall of the histogram's median positive
    bin height (requires `histogram`).  The histogram, when given, also
    gates detections on having wall evidence within min_flank of both jambs
    and on a near-empty interior between them.  Detections whose measured
    jamb separation falls outside the template band (padded by 1.5 steps)
    are rejected; the survivors are returned in center order with ids
    numbered from id_start.
    """
    g = np.asarray(signal.values, dtype=np.float64)
    n = g.size
    if n == 0:
        return []
    bw = signal.bin_width
    if response_min is None:
        if histogram is None:
            raise ValueError("response_min needs a histogram to default from")
        positive = histogram.counts[histogram.counts > 0]
        if positive.size == 0:
            return []
        response_min = RESPONSE_FRAC * ideal_response(
            float(np.median(positive)), bin_width=bw, sigma_bins=SIGMA_BINS)

    steps = max(1, round((widths[1] - widths[0]) / width_step)) + 1
    template_widths = [widths[0] + k * width_step for k in range(steps)]
    peaks = []
    for w in template_widths:
        wb = round(w / bw)
        if wb <= 0 or wb >= n:
            continue
        resp = g[wb:] - g[:-wb]
        for b in range(resp.size):
            v = resp[b]
            if v < response_min:
                continue
            left = resp[b - 1] if b > 0 else -math.inf
            right = resp[b + 1] if b + 1 < resp.size else -math.inf
            if v > left and v >= right:
                center = signal.origin + (b + 0.5 + 0.5 * wb) * bw
                peaks.append((v, center, w, b, wb))

    peaks.sort(key=lambda p: (-p[0], p[1], p[2]))
    kept: list[tuple] = []
    for cand in peaks:
        ok = True
        for other in kept:
            gap = abs(cand[1] - other[1])
            if gap < NMS_RADIUS or gap < 0.5 * (cand[2] + other[2]):
                ok = False
                break
        if ok:
            kept.append(cand)

    band_lo = widths[0] - 1.5 * width_step
    band_hi = widths[1] + 1.5 * width_step
    win = round(0.3 / bw)
    accepted = []
    for v, center, w, b, wb in kept:
        fall_lo = max(0, b - win)
        fall = fall_lo + int(np.argmin(g[fall_lo:min(n, b + win + 1)]))
        rise_lo = max(0, b + wb - win)
        rise = rise_lo + int(np.argmax(g[rise_lo:min(n, b + wb + win + 1)]))
        measured = (rise - fall) * bw
        if not (band_lo <= measured <= band_hi):
            continue
        if histogram is not None:
            cts = np.asarray(histogram.counts, dtype=np.float64)
            centers = histogram.centers()
            left_edge = center - w / 2.0
            right_edge = center + w / 2.0
            lwin = (centers >= left_edge - min_flank - 1e-9) & (centers < left_edge)
            rwin = (centers > right_edge) & (centers <= right_edge + min_flank + 1e-9)
            if not (np.any(cts[lwin] > 0) and np.any(cts[rwin] > 0)):
                continue
            # a wall-density step can fake an edge pair, but unlike a real
            # aperture it leaves plenty of points between the jambs
            n_w = max(1, round(min_flank / bw))
            flank_level = min(cts[lwin].sum(), cts[rwin].sum()) / n_w
            core = (centers > left_edge + CORE_GUARD) & (centers < right_edge - CORE_GUARD)
            core_max = float(cts[core].max()) if np.any(core) else 0.0
            if core_max > CORE_FRAC * flank_level:
                continue
        accepted.append((center, w, v))

    accepted.sort(key=lambda a: a[0])
    return [
        Doorway(id=id_start + i, plane_id=plane_id, center=c, width=w, response=v)
        for i, (c, w, v) in enumerate(accepted)
    ]


def merge_twin_doorways(doorways, planes, max_gap: float = 0.3,
                        min_overlap_frac: float = 0.5) -> list[Doorway]:
    """Collapse the two per-face detections of one physical door.

    Interior walls have a face on each side, so a single aperture is found
    on two planes of the same axis and opposite facing whose offsets differ
    by the wall thickness.  Among paired detections the stronger response
    wins (ties: lower plane id); survivors are renumbered in (plane, center)
    order.
    """
    by_id = {p.id: p for p in planes}
    order = sorted(doorways, key=lambda d: (-d.response, by_id[d.plane_id].id, d.center))
    consumed: set[int] = set()
    winners = []
    for d in order:
        if d.id in consumed:
            continue
        p = by_id[d.plane_id]
        for e in order:
            if e.id == d.id or e.id in consumed:
                continue
            q = by_id[e.plane_id]
            if q.axis is not p.axis or q.facing is p.facing:
                continue
            if abs(q.offset - p.offset) > max_gap:
                continue
            lo = max(d.interval[0], e.interval[0])
            hi = min(d.interval[1], e.interval[1])
            if hi - lo >= min_overlap_frac * min(d.width, e.width):
                consumed.add(e.id)
        winners.append(d)
    winners.sort(key=lambda d: (by_id[d.plane_id].id, d.center))
    return [replace(d, id=i) for i, d in enumerate(winners)]
