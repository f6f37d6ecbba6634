"""End-to-end plan estimation, batch and online, plus the text outputs.

run_batch chains the stages slice -> doors -> candidates -> cover ->
regions -> semantics over one Scene and returns a BatchResult.  run_online
replays a scene's trajectory prefix by prefix at a fixed time interval and
runs the same batch pipeline on each prefix, so the final snapshot is the
batch answer by construction.

The floor-plan file is line-oriented text.  Every float is written with
repr() so identical inputs produce byte-identical files.
"""
from __future__ import annotations

import csv
import io
from contextlib import contextmanager
from dataclasses import dataclass, fields
from typing import Optional

import numpy as np

from .candidates import enumerate_rects, prune_rects
from .cover import GreedyStep, build_universe, greedy_cover
from .doors import detect_doorways, merge_twin_doorways, plane_histogram, smoothed_gradient
from .errors import LayoutError, SchemaViolation, StageError
from .ingest import Scene, project_segments_2d, slice_grid
from .model import (
    Axis,
    CandidateRect,
    CellStats,
    Doorway,
    Facing,
    FloorPlan,
    LayoutPlane,
    OccupancyGrid2D,
    Region,
    RegionLabel,
    Transition,
)
from .regions import attach_transitions, filter_regions, union_to_regions
from .semantics import label_regions, squareness
from .synth import load_world, observe_world

FORMAT_MAGIC = "floorplan 1"


@dataclass(frozen=True)
class PipelineParams:
    """Every tunable threshold of the batch pipeline.

    None means "derive from the data": erosion falls back to the grid
    resolution and response_min to the detector's wall-height heuristic.
    """

    slice_height: float = 1.0
    z_max: float = 2.0
    bin_width: float = 0.1
    sigma_bins: float = 2.0
    widths: tuple[float, float] = (0.8, 1.2)
    width_step: float = 0.1
    response_min: Optional[float] = None
    min_flank: float = 0.5
    min_dim: float = 1.0
    erosion: Optional[float] = None
    max_ratio: float = 1000.0
    plane_tol: float = 0.15
    transition_overlap: float = 0.5
    perim_max: float = 60.0
    turndist_max: float = 1.0

    def provenance(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class BatchResult:
    """One batch run: the plan plus everything the reports need."""

    plan: FloorPlan
    grid: OccupancyGrid2D
    selected: tuple[CandidateRect, ...]
    steps: tuple[GreedyStep, ...]
    candidates_total: int
    candidates_kept: int
    universe_size: int
    uncoverable: frozenset
    doorways_raw: int
    rejected_regions: tuple[Region, ...]
    params: PipelineParams

    @property
    def pruning_fraction(self) -> float:
        if self.candidates_total == 0:
            return 0.0
        return 1.0 - self.candidates_kept / self.candidates_total

    @property
    def cells_in_plan(self) -> int:
        return sum(r.cell_stats.total for r in self.plan.regions)

    @property
    def known_free_in_plan(self) -> int:
        return sum(r.cell_stats.free for r in self.plan.regions)

    @property
    def occupied_in_plan(self) -> int:
        return sum(r.cell_stats.occupied for r in self.plan.regions)

    @property
    def speculated_free(self) -> int:
        return self.cells_in_plan - self.known_free_in_plan - self.occupied_in_plan


@dataclass(frozen=True)
class OnlineSnapshot:
    """Batch result for the trajectory prefix ending at `time` seconds."""

    time: float
    scene: Scene
    result: BatchResult


@dataclass(frozen=True)
class OnlineResult:
    snapshots: tuple[OnlineSnapshot, ...]
    interval: float

    @property
    def final(self) -> BatchResult:
        return self.snapshots[-1].result


@contextmanager
def _stage(name: str):
    """Tag in-stage failures with the stage name; input errors keep theirs."""
    try:
        yield
    except StageError:
        raise
    except LayoutError as exc:
        raise StageError(name, exc) from exc


def detect_scene_doorways(scene: Scene, params: Optional[PipelineParams] = None,
                          ) -> tuple[list[Doorway], list[Doorway]]:
    """Run the aperture detector over every observed plane.

    Returns (raw detections, merged doorways); merging collapses the two
    faces of the same physical opening.
    """
    if params is None:
        params = PipelineParams()
    planes = tuple(sorted(scene.planes, key=lambda p: p.id))
    raw: list[Doorway] = []
    for plane in planes:
        cloud = scene.clouds.get(plane.id)
        if cloud is None:
            continue
        hist = plane_histogram(cloud, plane, z_max=params.z_max,
                               bin_width=params.bin_width)
        signal = smoothed_gradient(hist, sigma_bins=params.sigma_bins)
        raw.extend(detect_doorways(
            signal, plane.id,
            widths=params.widths, width_step=params.width_step,
            response_min=params.response_min, histogram=hist,
            min_flank=params.min_flank, id_start=len(raw)))
    return raw, merge_twin_doorways(raw, planes)


def run_batch(scene: Scene, params: Optional[PipelineParams] = None) -> BatchResult:
    """Estimate a floor plan from one scene.

    A scene with no observed planes degrades gracefully to an empty plan;
    a scene without an occupancy grid cannot be sliced and is rejected.
    """
    if params is None:
        params = PipelineParams()
    if scene.grid is None:
        raise SchemaViolation("scene has no occupancy grid; cannot slice")

    with _stage("slice"):
        grid2d = slice_grid(scene.grid, params.slice_height)

    planes = tuple(sorted(scene.planes, key=lambda p: p.id))
    with _stage("doors"):
        segs2d = project_segments_2d(scene.clouds.values(), planes, z_max=params.z_max)
        raw, doorways = detect_scene_doorways(scene, params)

    with _stage("candidates"):
        cands = enumerate_rects(planes)
        kept = prune_rects(cands, planes, segs2d, doorways, grid2d,
                           min_dim=params.min_dim, eps=params.erosion)

    with _stage("cover"):
        universe, uncoverable = build_universe(kept, grid2d)
        cover = greedy_cover(kept, universe)

    with _stage("regions"):
        selected = list(cover.selected)
        regions = union_to_regions(selected, grid2d)
        kept_regions, rejected = filter_regions(regions, max_ratio=params.max_ratio)

    with _stage("semantics"):
        labeled = label_regions(kept_regions, perim_max=params.perim_max,
                                turndist_max=params.turndist_max)
        transitions, unattached = attach_transitions(
            labeled, doorways, planes,
            plane_tol=params.plane_tol,
            min_overlap_frac=params.transition_overlap)

    plan = FloorPlan(
        regions=tuple(labeled),
        doorways=tuple(doorways),
        transitions=tuple(transitions),
        unattached=tuple(unattached),
        slice_height=params.slice_height,
        provenance=params.provenance(),
    )
    return BatchResult(
        plan=plan,
        grid=grid2d,
        selected=tuple(selected),
        steps=tuple(cover.steps),
        candidates_total=len(cands),
        candidates_kept=len(kept),
        universe_size=len(universe),
        uncoverable=uncoverable,
        doorways_raw=len(raw),
        rejected_regions=tuple(rejected),
        params=params,
    )


def _snapshot_times(t_max: float, interval: float) -> list[float]:
    times = []
    k = 1
    while k * interval < t_max - 1e-9:
        times.append(k * interval)
        k += 1
    times.append(t_max)
    return times


def run_online(scene: Scene, interval: float = 15.0,
               params: Optional[PipelineParams] = None) -> OnlineResult:
    """Re-estimate the plan at fixed time intervals along the trajectory.

    Each snapshot re-observes the world from scratch using only the poses
    up to its boundary, then runs the batch pipeline on that prefix scene.
    Per-pose seeding makes the prefix observations identical to the same
    poses within the full run, so the last snapshot reproduces run_batch
    on the full scene exactly.
    """
    if interval <= 0:
        raise SchemaViolation("online interval must be positive")
    if scene.trajectory is None or len(scene.trajectory) == 0:
        raise SchemaViolation("online mode needs a trajectory with timestamps")
    if scene.world_path is None:
        raise SchemaViolation("online mode needs the scene's world description")

    world = load_world(scene.world_path)
    obs = scene.observation or {}
    times = np.asarray(scene.trajectory, dtype=np.float64)[:, 0]
    snapshots = []
    for t in _snapshot_times(float(times.max()), interval):
        prefix = scene.trajectory[times <= t + 1e-9]
        sub = observe_world(
            world, prefix,
            noise=float(obs.get("noise", 0.0)),
            dropout=float(obs.get("dropout", 0.0)),
            seed=int(obs.get("seed", 0)),
            angular_res_deg=float(obs.get("angular_res_deg", 0.5)),
            max_range=float(obs.get("max_range", 20.0)),
            min_plane_points=int(obs.get("min_plane_points", 5)),
            assoc_tol=float(obs.get("assoc_tol", 0.15)),
        )
        snapshots.append(OnlineSnapshot(time=t, scene=sub, result=run_batch(sub, params)))
    return OnlineResult(snapshots=tuple(snapshots), interval=interval)


def _fmt(value) -> str:
    """One parameter value as text; tuples flatten, None spells auto."""
    if value is None:
        return "auto"
    if isinstance(value, tuple):
        return " ".join(repr(float(v)) for v in value)
    if isinstance(value, bool):
        return repr(value)
    if isinstance(value, float):
        return repr(value)
    return repr(float(value)) if isinstance(value, int) else str(value)


def format_floorplan(result: BatchResult, planes=()) -> str:
    """Serialize a batch result as deterministic line-oriented text.

    `planes` supplies axis/facing/offset for the doorway lines so a saved
    plan can be re-rendered without the original scene.  Candidate cell
    sets are not serialized; readers get geometry, weights and stats.
    """
    plan = result.plan
    by_id = {p.id: p for p in planes}
    out = [FORMAT_MAGIC]
    out.append(f"slice_height {repr(plan.slice_height)}")
    for name in sorted(plan.provenance):
        out.append(f"param {name} {_fmt(plan.provenance[name])}")
    for i, r in enumerate(result.selected):
        ids = " ".join(str(p) for p in r.plane_ids)
        bounds = " ".join(repr(float(b)) for b in r.bounds)
        out.append(f"rect {i} planes {ids} bounds {bounds} weight {r.weight}")
    for r in plan.regions:
        members = " ".join(str(m) for m in r.member_rects)
        s = r.cell_stats
        out.append(f"region {r.id} label {r.label.value} "
                   f"stats {s.free} {s.occupied} {s.unobserved} rects {members}".rstrip())
        out.append("outer " + " ".join(
            f"{repr(float(x))} {repr(float(y))}" for x, y in r.outer_boundary))
        for hole in r.holes:
            out.append("hole " + " ".join(
                f"{repr(float(x))} {repr(float(y))}" for x, y in hole))
    for d in plan.doorways:
        p = by_id.get(d.plane_id)
        where = (f"axis {p.axis.value} facing {p.facing.value} offset {repr(float(p.offset))} "
                 if p is not None else "")
        out.append(f"doorway {d.id} plane {d.plane_id} {where}"
                   f"center {repr(float(d.center))} width {repr(float(d.width))} "
                   f"response {repr(float(d.response))}")
    for t in plan.transitions:
        b = "exterior" if t.region_b is None else str(t.region_b)
        out.append(f"transition {t.doorway_id} {t.region_a} {b}")
    if plan.unattached:
        out.append("unattached " + " ".join(str(i) for i in plan.unattached))
    out.append(f"stat candidates_total {result.candidates_total}")
    out.append(f"stat candidates_kept {result.candidates_kept}")
    out.append(f"stat pruning_fraction {repr(result.pruning_fraction)}")
    out.append(f"stat greedy_iterations {len(result.steps)}")
    out.append(f"stat cover_weight {sum(s.weight for s in result.steps)}")
    out.append(f"stat universe {result.universe_size}")
    out.append(f"stat uncoverable {len(result.uncoverable)}")
    out.append(f"stat doorways_raw {result.doorways_raw}")
    out.append(f"stat regions_rejected {len(result.rejected_regions)}")
    out.append(f"stat cells_in_plan {result.cells_in_plan}")
    out.append(f"stat known_free {result.known_free_in_plan}")
    out.append(f"stat occupied {result.occupied_in_plan}")
    out.append(f"stat speculated_free {result.speculated_free}")
    return "\n".join(out) + "\n"


def write_floorplan(path, result: BatchResult, planes=()) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_floorplan(result, planes))


def _parse_pairs(tokens: list[str], what: str) -> tuple[tuple[float, float], ...]:
    if len(tokens) % 2 != 0:
        raise SchemaViolation(f"{what} has an odd coordinate count")
    it = iter(tokens)
    try:
        return tuple((float(x), float(y)) for x, y in zip(it, it))
    except ValueError as exc:
        raise SchemaViolation(f"{what}: {exc}") from exc


def read_floorplan(path) -> tuple[FloorPlan, tuple[CandidateRect, ...], dict,
                                  tuple[LayoutPlane, ...]]:
    """Load a saved floor-plan file.

    Returns the plan, the selected rectangles (geometry and weight only;
    coverage sets are not stored), the stats block, and lightweight planes
    rebuilt from the doorway lines for rendering.  Region cell sets are
    left empty.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise SchemaViolation(f"cannot read floor plan {path}: {exc}") from exc
    if not lines or lines[0] != FORMAT_MAGIC:
        raise SchemaViolation(f"{path} is not a floor-plan file")

    slice_height = None
    provenance: dict = {}
    rects: list[CandidateRect] = []
    regions: list[Region] = []
    pending: Optional[dict] = None
    doorways: list[Doorway] = []
    planes: dict[int, LayoutPlane] = {}
    transitions: list[Transition] = []
    unattached: tuple[int, ...] = ()
    stats: dict = {}

    def flush() -> None:
        nonlocal pending
        if pending is None:
            return
        if pending["outer"] is None:
            raise SchemaViolation(f"region {pending['id']} has no outer boundary")
        regions.append(Region(
            id=pending["id"], outer_boundary=pending["outer"],
            holes=tuple(pending["holes"]), member_rects=pending["rects"],
            label=pending["label"], cell_stats=pending["stats"]))
        pending = None

    try:
        for line in lines[1:]:
            if not line.strip():
                continue
            tok = line.split()
            kind = tok[0]
            if kind == "slice_height":
                slice_height = float(tok[1])
            elif kind == "param":
                provenance[tok[1]] = " ".join(tok[2:])
            elif kind == "rect":
                rects.append(CandidateRect(
                    plane_ids=tuple(int(v) for v in tok[3:7]),
                    bounds=tuple(float(v) for v in tok[8:12]),
                    weight=int(tok[13])))
            elif kind == "region":
                flush()
                has_members = "rects" in tok
                end = tok.index("rects") if has_members else len(tok)
                pending = {
                    "id": int(tok[1]),
                    "label": RegionLabel(tok[3]),
                    "stats": CellStats(int(tok[5]), int(tok[6]), int(tok[7])),
                    "rects": tuple(int(v) for v in tok[end + 1:]) if has_members else (),
                    "outer": None, "holes": []}
            elif kind == "outer":
                pending["outer"] = _parse_pairs(tok[1:], "outer boundary")
            elif kind == "hole":
                pending["holes"].append(_parse_pairs(tok[1:], "hole"))
            elif kind == "doorway":
                rest = dict(zip(tok[2::2], tok[3::2]))
                did = int(tok[1])
                pid = int(rest["plane"])
                if "axis" in rest:
                    planes.setdefault(pid, LayoutPlane(
                        id=pid, axis=Axis(rest["axis"]),
                        facing=Facing(rest["facing"]),
                        offset=float(rest["offset"])))
                doorways.append(Doorway(
                    id=did, plane_id=pid, center=float(rest["center"]),
                    width=float(rest["width"]), response=float(rest["response"])))
            elif kind == "transition":
                b = None if tok[3] == "exterior" else int(tok[3])
                transitions.append(Transition(int(tok[1]), int(tok[2]), b))
            elif kind == "unattached":
                unattached = tuple(int(v) for v in tok[1:])
            elif kind == "stat":
                raw = tok[2]
                stats[tok[1]] = float(raw) if "." in raw or "e" in raw else int(raw)
            else:
                raise SchemaViolation(f"unknown floor-plan line kind '{kind}'")
        flush()
    except SchemaViolation:
        raise
    except (ValueError, KeyError, IndexError, TypeError, AttributeError) as exc:
        raise SchemaViolation(f"malformed floor-plan file {path}: {exc}") from exc
    if slice_height is None:
        raise SchemaViolation(f"{path} is missing slice_height")

    plan = FloorPlan(
        regions=tuple(regions), doorways=tuple(doorways),
        transitions=tuple(transitions), unattached=unattached,
        slice_height=slice_height, provenance=provenance)
    return plan, tuple(rects), stats, tuple(sorted(planes.values(), key=lambda p: p.id))


def _region_features(r: Region, resolution: float) -> dict:
    x0, x1, y0, y1 = r.bbox
    w, h = x1 - x0, y1 - y0
    aspect = max(w, h) / min(w, h) if min(w, h) > 0 else float("inf")
    return {
        "area": r.cell_stats.total * resolution * resolution,
        "perimeter": r.perimeter,
        "turndist_square": squareness(r.outer_boundary),
        "aspect": aspect,
        "width": w,
        "height": h,
    }


def format_report(result: BatchResult, scene: Scene) -> str:
    """Human-readable run summary; deterministic for identical inputs."""
    plan = result.plan
    grid = result.grid
    out = [f"scene {scene.name}"]
    out.append(f"slice height {repr(plan.slice_height)} m on a "
               f"{grid.nx}x{grid.ny} grid at {repr(grid.resolution)} m")
    if not scene.planes:
        out.append("planes observed 0 (none; the plan is empty)")
    else:
        out.append(f"planes observed {len(scene.planes)}")
    out.append(f"segment points {sum(len(c.points) for c in scene.clouds.values())}")
    out.append(f"doorways detected {result.doorways_raw}, merged {len(plan.doorways)}")
    out.append(f"candidates enumerated {result.candidates_total}, kept "
               f"{result.candidates_kept}, pruning fraction {repr(result.pruning_fraction)}")
    out.append(f"universe {result.universe_size} free cells, "
               f"uncoverable {len(result.uncoverable)}")
    out.append(f"greedy iterations {len(result.steps)}, cover weight "
               f"{sum(s.weight for s in result.steps)}")
    out.append(f"regions kept {len(plan.regions)}, rejected {len(result.rejected_regions)}")
    for r in plan.regions:
        f = _region_features(r, grid.resolution)
        out.append(f"  region {r.id}: {r.label.value}, area {repr(f['area'])} m2, "
                   f"perimeter {repr(f['perimeter'])} m, aspect {repr(f['aspect'])}, "
                   f"turndist {repr(f['turndist_square'])}, free {r.cell_stats.free}, "
                   f"occupied {r.cell_stats.occupied}, "
                   f"speculated {r.cell_stats.unobserved}")
    out.append(f"transitions {len(plan.transitions)}")
    for t in plan.transitions:
        b = "exterior" if t.region_b is None else f"region {t.region_b}"
        out.append(f"  doorway {t.doorway_id}: region {t.region_a} <-> {b}")
    if plan.unattached:
        out.append("unattached doorways " + " ".join(str(i) for i in plan.unattached))
    out.append(f"speculated free cells {result.speculated_free} = "
               f"{result.cells_in_plan} in plan - {result.known_free_in_plan} known free - "
               f"{result.occupied_in_plan} occupied")
    return "\n".join(out) + "\n"


def format_regions_csv(result: BatchResult) -> str:
    """Per-region feature table for spreadsheet diagnostics."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["region_id", "label", "area_m2", "perimeter_m", "turndist_square",
                "aspect", "width_m", "height_m", "free", "occupied", "unobserved",
                "total"])
    res = result.grid.resolution
    for r in result.plan.regions:
        f = _region_features(r, res)
        s = r.cell_stats
        w.writerow([r.id, r.label.value, repr(f["area"]), repr(f["perimeter"]),
                    repr(f["turndist_square"]), repr(f["aspect"]), repr(f["width"]),
                    repr(f["height"]), s.free, s.occupied, s.unobserved, s.total])
    return buf.getvalue()


def format_timeline(online: OnlineResult) -> str:
    """One line per online snapshot, ordered by time."""
    out = [f"online interval {repr(online.interval)} s, "
           f"snapshots {len(online.snapshots)}"]
    for snap in online.snapshots:
        r = snap.result
        out.append(f"t {repr(snap.time)} planes {len(snap.scene.planes)} "
                   f"candidates {r.candidates_kept}/{r.candidates_total} "
                   f"regions {len(r.plan.regions)} doorways {len(r.plan.doorways)} "
                   f"transitions {len(r.plan.transitions)} "
                   f"plan_cells {r.cells_in_plan} speculated {r.speculated_free}")
    return "\n".join(out) + "\n"
