"""Matplotlib diagnostics saved by the report path.

One overview image of the plan over its occupancy slice, plus one profile
figure per observed plane showing the point histogram, the smoothed
gradient, and any detected apertures.  Files are PNG with the software
tag stripped so reruns produce identical bytes.
"""
from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.patches import PathPatch
from matplotlib.path import Path

from .doors import plane_histogram, smoothed_gradient
from .ingest import Scene
from .model import CellState, RegionLabel
from .render import plan_cell_mask

_SAVE_KW = {"dpi": 110, "metadata": {"Software": None}}

_RGB = {
    "outside": (0.0, 0.0, 0.0),
    "free": (1.0, 1.0, 1.0),
    "speculated": (0.5, 0.5, 0.5),
}
_REGION_RGB = {RegionLabel.ROOM: (0.0, 1.0, 1.0),
               RegionLabel.CORRIDOR: (1.0, 0.0, 1.0),
               RegionLabel.UNLABELED: (0.6, 0.6, 0.6)}


def _underlay(result) -> np.ndarray:
    grid = result.grid
    img = np.zeros((grid.ny, grid.nx, 3))
    free = (grid.states == CellState.FREE).T
    spec = ((grid.states == CellState.UNOBSERVED) & plan_cell_mask(result.plan, grid)).T
    img[free] = _RGB["free"]
    img[spec] = _RGB["speculated"]
    return img


def save_plan_figure(result, path: str, planes=()) -> str:
    """Overview image: occupancy underlay, region fills, doorway ticks."""
    grid = result.grid
    x0, y0 = grid.origin
    extent = (x0, x0 + grid.nx * grid.resolution,
              y0, y0 + grid.ny * grid.resolution)
    fig, ax = plt.subplots(figsize=(9, 9 * grid.ny / max(grid.nx, 1)))
    ax.imshow(_underlay(result), origin="lower", extent=extent,
              interpolation="nearest")

    for region in result.plan.regions:
        verts, codes = [], []
        # CCW outer plus CW holes fill correctly under the nonzero rule
        for ring in (region.outer_boundary, *region.holes):
            verts.extend(list(ring) + [ring[0]])
            codes.extend([Path.MOVETO] + [Path.LINETO] * (len(ring) - 1)
                         + [Path.CLOSEPOLY])
        color = _REGION_RGB[region.label]
        ax.add_patch(PathPatch(Path(verts, codes), facecolor=color, alpha=0.45,
                               edgecolor=color, linewidth=1.5))
        bx0, bx1, by0, by1 = region.bbox
        ax.text((bx0 + bx1) / 2, (by0 + by1) / 2,
                f"{region.id}:{region.label.value}",
                ha="center", va="center", fontsize=8, color="black")

    by_id = {p.id: p for p in planes}
    for d in result.plan.doorways:
        p = by_id.get(d.plane_id)
        if p is None:
            continue
        lo, hi = d.interval
        if p.axis.index == 0:
            ax.plot([p.offset, p.offset], [lo, hi], color="gold", linewidth=3)
        else:
            ax.plot([lo, hi], [p.offset, p.offset], color="gold", linewidth=3)

    ax.set_xlim(extent[0], extent[1])
    ax.set_ylim(extent[2], extent[3])
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    ax.set_title(f"floor plan at h={result.plan.slice_height} m")
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)
    return path


def save_plane_profiles(scene: Scene, result, directory: str) -> list[str]:
    """One histogram/gradient/detection figure per observed plane."""
    os.makedirs(directory, exist_ok=True)
    params = result.params
    doors_by_plane: dict[int, list] = {}
    for d in result.plan.doorways:
        doors_by_plane.setdefault(d.plane_id, []).append(d)
    paths = []
    for plane in sorted(scene.planes, key=lambda p: p.id):
        cloud = scene.clouds.get(plane.id)
        if cloud is None:
            continue
        hist = plane_histogram(cloud, plane, z_max=params.z_max,
                               bin_width=params.bin_width)
        signal = smoothed_gradient(hist, sigma_bins=params.sigma_bins)
        fig, (ax0, ax1) = plt.subplots(2, 1, sharex=True, figsize=(8, 5))
        if len(hist):
            ax0.bar(hist.centers(), hist.counts, width=hist.bin_width,
                    color="steelblue")
            ax1.plot(signal.origin + (np.arange(len(signal)) + 0.5) * signal.bin_width,
                     signal.values, color="firebrick")
        for d in doors_by_plane.get(plane.id, []):
            lo, hi = d.interval
            for ax in (ax0, ax1):
                ax.axvspan(lo, hi, color="gold", alpha=0.4)
        ax0.set_ylabel("points per bin")
        ax1.set_ylabel("smoothed gradient")
        ax1.set_xlabel("in-plane coordinate [m]")
        ax0.set_title(f"plane {plane.id}: {plane.axis.value}={plane.offset} "
                      f"facing {plane.facing.value}")
        out = os.path.join(directory, f"plane_{plane.id:04d}.png")
        fig.savefig(out, **_SAVE_KW)
        plt.close(fig)
        paths.append(out)
    return paths
