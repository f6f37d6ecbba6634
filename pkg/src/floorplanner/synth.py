"""Synthetic Manhattan worlds with ground truth.

A world description lists axis-aligned spaces (rooms and corridors) and the
doorways connecting them.  Adjacent spaces either share a one-cell-thick
wall slab (bounds 0.1 m apart, doorways allowed) or touch exactly (an open
junction that merges them into one region, no wall there).  The outer hull
keeps zero-thickness walls at the free-space boundary, so the voxel grid is
exactly the bounding box of the spaces.

Observation casts panoramic horizontal rays from each trajectory pose.
Wall faces are intersected analytically (inclusive span ends keep corners
water-tight; aperture intervals are open and transparent below 2 m); the
first hit yields a segment point, subject to dropout and Gaussian noise,
and marks the wall's body cell Occupied.  Traversed cells become Free via
exact grid stepping.  Randomness is drawn from a fresh generator seeded per
pose, so observing a trajectory prefix reproduces the full run bit-exactly
on the shared poses.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
import yaml
from numba import njit

from .errors import InvalidSpec, PoseOutsideFreeSpace
from .ingest import ASSOC_TOL, Scene
from .model import (
    Axis,
    CellState,
    Facing,
    LayoutPlane,
    RegionLabel,
    SegmentCloud,
    VoxelGrid,
    cell_range,
)

DOOR_HEIGHT = 2.0
WALL_THICKNESS = 0.1
_ALIGN_EPS = 1e-9

_SIDES = ("west", "east", "south", "north")


@dataclass(frozen=True)
class Space:
    name: str
    kind: str
    bounds: tuple[float, float, float, float]


@dataclass(frozen=True)
class Face:
    """One side of one space: a bounded piece of an infinite plane.

    `body` is the grid column (along `axis`) of the occupied wall cells
    behind this face; apertures are open in-plane intervals transparent
    below door height.
    """

    plane_id: int
    axis: Axis
    facing: Facing
    offset: float
    lo: float
    hi: float
    body: int
    apertures: tuple[tuple[float, float], ...] = ()


@dataclass(frozen=True)
class GroundDoorway:
    id: int
    axis: Axis
    center: float
    width: float
    space_a: str
    space_b: str
    offset_a: float
    offset_b: float


@dataclass(frozen=True)
class GroundRegion:
    spaces: tuple[str, ...]
    label: RegionLabel
    cells: frozenset
    bbox: tuple[float, float, float, float]


@dataclass(frozen=True)
class World:
    name: str
    resolution: float
    height: float
    spaces: tuple[Space, ...]
    planes: tuple[LayoutPlane, ...]
    faces: tuple[Face, ...]
    doorways: tuple[GroundDoorway, ...]
    groups: tuple[tuple[int, ...], ...]
    origin: tuple[float, float, float]
    dims: tuple[int, int, int]
    trajectory_spec: dict = field(default_factory=dict)
    observation: dict = field(default_factory=dict)


def _aligned(v: float) -> bool:
    return abs(v / WALL_THICKNESS - round(v / WALL_THICKNESS)) < 1e-6


def _parse_spaces(spec: dict) -> list[Space]:
    spaces = []
    names = set()
    for i, rec in enumerate(spec.get("spaces", [])):
        try:
            name = str(rec["name"])
            kind = str(rec.get("kind", "room"))
            b = tuple(float(v) for v in rec["bounds"])
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidSpec(f"space {i}: {e}") from e
        if kind not in ("room", "corridor"):
            raise InvalidSpec(f"space {name}: unknown kind {kind!r}")
        if len(b) != 4 or b[0] >= b[1] or b[2] >= b[3]:
            raise InvalidSpec(f"space {name}: bounds must be (x0, x1, y0, y1) with x0<x1, y0<y1")
        if not all(_aligned(v) for v in b):
            raise InvalidSpec(f"space {name}: bounds must align to the {WALL_THICKNESS} m lattice")
        if name in names:
            raise InvalidSpec(f"duplicate space name {name!r}")
        names.add(name)
        spaces.append(Space(name=name, kind=kind, bounds=b))
    if not spaces:
        raise InvalidSpec("world has no spaces")
    for i, a in enumerate(spaces):
        for b in spaces[i + 1:]:
            ax0, ax1, ay0, ay1 = a.bounds
            bx0, bx1, by0, by1 = b.bounds
            if min(ax1, bx1) - max(ax0, bx0) > _ALIGN_EPS and \
               min(ay1, by1) - max(ay0, by0) > _ALIGN_EPS:
                raise InvalidSpec(f"spaces {a.name} and {b.name} overlap")
    return spaces


def _adjacency(a: Space, b: Space):
    """(axis, gap, cross interval) when b sits after a (or None)."""
    ax0, ax1, ay0, ay1 = a.bounds
    bx0, bx1, by0, by1 = b.bounds
    for axis, (a_hi, b_lo, c_lo, c_hi) in (
        (Axis.X, (ax1, bx0, max(ay0, by0), min(ay1, by1))),
        (Axis.Y, (ay1, by0, max(ax0, bx0), min(ax1, bx1))),
    ):
        gap = b_lo - a_hi
        if -_ALIGN_EPS <= gap <= WALL_THICKNESS + _ALIGN_EPS and c_hi - c_lo > _ALIGN_EPS:
            return axis, gap, (c_lo, c_hi)
    return None


def generate_world(spec: dict, seed: int = 0) -> World:
    """Build a world from its description; geometry is fully deterministic.

    Raises InvalidSpec for overlapping spaces, doorways between spaces that
    do not share a wall, and apertures outside the shared overlap.
    """
    spaces = _parse_spaces(spec)
    resolution = float(spec.get("resolution", 0.1))
    height = float(spec.get("height", 3.0))
    by_name = {s.name: i for i, s in enumerate(spaces)}

    margin = float(spec.get("margin", 0.0))
    x0 = min(s.bounds[0] for s in spaces) - margin
    x1 = max(s.bounds[1] for s in spaces) + margin
    y0 = min(s.bounds[2] for s in spaces) - margin
    y1 = max(s.bounds[3] for s in spaces) + margin
    dims = (int(round((x1 - x0) / resolution)),
            int(round((y1 - y0) / resolution)),
            int(round(height / resolution)))
    origin = (x0, y0, 0.0)

    # side -> (axis, facing, offset, cross interval)
    def sides(s: Space):
        sx0, sx1, sy0, sy1 = s.bounds
        return {
            "west": (Axis.X, Facing.POSITIVE, sx0, (sy0, sy1)),
            "east": (Axis.X, Facing.NEGATIVE, sx1, (sy0, sy1)),
            "south": (Axis.Y, Facing.POSITIVE, sy0, (sx0, sx1)),
            "north": (Axis.Y, Facing.NEGATIVE, sy1, (sx0, sx1)),
        }

    spans: dict[tuple[int, str], list[tuple[float, float]]] = {
        (i, side): [sides(s)[side][3]] for i, s in enumerate(spaces) for side in _SIDES
    }
    apertures: dict[tuple[int, str], list[tuple[float, float]]] = {}

    def cut(key, interval):
        lo, hi = interval
        new = []
        for slo, shi in spans[key]:
            left = (slo, min(shi, lo))
            right = (max(slo, hi), shi)
            if left[1] - left[0] > _ALIGN_EPS:
                new.append(left)
            if right[1] - right[0] > _ALIGN_EPS:
                new.append(right)
        spans[key] = new

    # open junctions: remove the touching wall pieces, merge the groups
    parent = list(range(len(spaces)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    junctions = {}
    for i, a in enumerate(spaces):
        for j, b in enumerate(spaces):
            if i == j:
                continue
            adj = _adjacency(a, b)
            if adj is None:
                continue
            axis, gap, cross = adj
            lo_side = "east" if axis is Axis.X else "north"
            hi_side = "west" if axis is Axis.X else "south"
            if gap <= _ALIGN_EPS:
                cut((i, lo_side), cross)
                cut((j, hi_side), cross)
                parent[find(i)] = find(j)
            else:
                junctions[(i, j)] = (axis, cross)

    doorways = []
    for k, rec in enumerate(spec.get("doorways", []) or []):
        try:
            na, nb = rec["between"]
            center = float(rec["center"])
            width = float(rec["width"])
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidSpec(f"doorway {k}: {e}") from e
        if width <= 0:
            raise InvalidSpec(f"doorway {k}: width must be positive")
        if na not in by_name or nb not in by_name:
            raise InvalidSpec(f"doorway {k}: unknown space in {na!r}-{nb!r}")
        i, j = by_name[na], by_name[nb]
        pair = junctions.get((i, j))
        swapped = False
        if pair is None:
            pair = junctions.get((j, i))
            swapped = pair is not None
        if pair is None:
            raise InvalidSpec(f"doorway {k}: {na} and {nb} share no wall")
        axis, cross = pair
        lo, hi = center - width / 2.0, center + width / 2.0
        if lo < cross[0] - _ALIGN_EPS or hi > cross[1] + _ALIGN_EPS:
            raise InvalidSpec(
                f"doorway {k}: aperture [{lo}, {hi}] outside shared overlap {cross}")
        first, second = (j, i) if swapped else (i, j)
        lo_side = "east" if axis is Axis.X else "north"
        hi_side = "west" if axis is Axis.X else "south"
        apertures.setdefault((first, lo_side), []).append((lo, hi))
        apertures.setdefault((second, hi_side), []).append((lo, hi))
        off_axis = 0 if axis is Axis.X else 2
        doorways.append(GroundDoorway(
            id=k, axis=axis, center=center, width=width,
            space_a=spaces[first].name, space_b=spaces[second].name,
            offset_a=spaces[first].bounds[off_axis + 1],
            offset_b=spaces[second].bounds[off_axis],
        ))

    # gaps: doorway-less openings in a single face, usually to the exterior
    for k, rec in enumerate(spec.get("gaps", []) or []):
        try:
            name = rec["space"]
            side = rec["side"]
            center = float(rec["center"])
            width = float(rec["width"])
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidSpec(f"gap {k}: {e}") from e
        if name not in by_name:
            raise InvalidSpec(f"gap {k}: unknown space {name!r}")
        if side not in _SIDES:
            raise InvalidSpec(f"gap {k}: unknown side {side!r}")
        if width <= 0:
            raise InvalidSpec(f"gap {k}: width must be positive")
        i = by_name[name]
        cross = sides(spaces[i])[side][3]
        lo, hi = center - width / 2.0, center + width / 2.0
        if lo < cross[0] - _ALIGN_EPS or hi > cross[1] + _ALIGN_EPS:
            raise InvalidSpec(
                f"gap {k}: aperture [{lo}, {hi}] outside face extent {cross}")
        apertures.setdefault((i, side), []).append((lo, hi))

    # deduplicate planes by (axis, facing, offset); ids run west-to-east,
    # south-to-north for readability
    keys = set()
    for i, s in enumerate(spaces):
        for side in _SIDES:
            if not spans[(i, side)]:
                continue
            axis, facing, offset, _ = sides(s)[side]
            keys.add((axis, facing, round(offset, 6)))
    ordered = sorted(keys, key=lambda k: (k[0].value, k[2], k[1].value))
    plane_ids = {k: pid for pid, k in enumerate(ordered)}
    planes = tuple(
        LayoutPlane(id=pid, axis=k[0], facing=k[1], offset=k[2])
        for k, pid in sorted(plane_ids.items(), key=lambda kv: kv[1])
    )

    faces = []
    for i, s in enumerate(spaces):
        for side in _SIDES:
            axis, facing, offset, _ = sides(s)[side]
            cell = round((offset - origin[axis.index]) / resolution)
            body = cell - 1 if facing is Facing.POSITIVE else cell
            body = min(max(body, 0), dims[axis.index] - 1)
            aps = tuple(sorted(apertures.get((i, side), [])))
            for lo, hi in spans[(i, side)]:
                faces.append(Face(
                    plane_id=plane_ids[(axis, facing, round(offset, 6))],
                    axis=axis, facing=facing, offset=offset,
                    lo=lo, hi=hi, body=body,
                    apertures=tuple(a for a in aps if a[0] < hi and a[1] > lo),
                ))

    group_map: dict[int, list[int]] = {}
    for i in range(len(spaces)):
        group_map.setdefault(find(i), []).append(i)
    groups = tuple(tuple(v) for _, v in sorted(group_map.items()))

    return World(
        name=str(spec.get("name", "world")),
        resolution=resolution,
        height=height,
        spaces=tuple(spaces),
        planes=planes,
        faces=tuple(faces),
        doorways=tuple(doorways),
        groups=groups,
        origin=origin,
        dims=dims,
        trajectory_spec=dict(spec.get("trajectory", {}) or {}),
        observation=dict(spec.get("observation", {}) or {}),
    )


def load_world(path: str) -> World:
    with open(path) as f:
        spec = yaml.safe_load(f)
    if not isinstance(spec, dict):
        raise InvalidSpec(f"world file {path}: top level must be a mapping")
    return generate_world(spec)


def gt_regions(world: World) -> list[GroundRegion]:
    """Ground-truth regions: junction-connected space groups on the grid."""
    nx, ny = world.dims[0], world.dims[1]
    out = []
    for group in world.groups:
        cells: set[int] = set()
        for i in group:
            x0, x1, y0, y1 = world.spaces[i].bounds
            ix0, ix1 = cell_range(x0, x1, world.origin[0], world.resolution, nx)
            iy0, iy1 = cell_range(y0, y1, world.origin[1], world.resolution, ny)
            for iy in range(iy0, iy1):
                cells.update(range(ix0 + nx * iy, ix1 + nx * iy))
        kinds = {world.spaces[i].kind for i in group}
        label = RegionLabel.CORRIDOR if "corridor" in kinds else RegionLabel.ROOM
        out.append(GroundRegion(
            spaces=tuple(world.spaces[i].name for i in group),
            label=label,
            cells=frozenset(cells),
            bbox=(
                min(world.spaces[i].bounds[0] for i in group),
                max(world.spaces[i].bounds[1] for i in group),
                min(world.spaces[i].bounds[2] for i in group),
                max(world.spaces[i].bounds[3] for i in group),
            ),
        ))
    return out


def gt_transitions(world: World) -> list[tuple[int, int, int]]:
    """(doorway id, group index a, group index b) for every doorway."""
    which = {}
    for g, group in enumerate(world.groups):
        for i in group:
            which[world.spaces[i].name] = g
    out = []
    for d in world.doorways:
        a, b = sorted((which[d.space_a], which[d.space_b]))
        out.append((d.id, a, b))
    return out


def build_trajectory(world: World) -> np.ndarray:
    """Timestamped poses along the world's waypoint path.

    Motion is piecewise linear at constant speed; poses are emitted every
    `interval` seconds from t = 0 through the end of the path.
    """
    ts = world.trajectory_spec
    waypoints = [(float(x), float(y)) for x, y in ts.get("waypoints", [])]
    if len(waypoints) < 1:
        raise InvalidSpec(f"world {world.name}: trajectory needs waypoints")
    speed = float(ts.get("speed", 1.0))
    interval = float(ts.get("interval", 0.5))
    z = float(ts.get("z", 1.0))
    if speed <= 0 or interval <= 0:
        raise InvalidSpec("trajectory speed and interval must be positive")

    seg_len = [math.dist(a, b) for a, b in zip(waypoints, waypoints[1:])]
    total = sum(seg_len)
    duration = total / speed
    n = int(math.floor(duration / interval + 1e-9)) + 1
    rows = np.empty((n, 4))
    cum = np.concatenate(([0.0], np.cumsum(seg_len)))
    pts = np.asarray(waypoints)
    for k in range(n):
        t = k * interval
        arc = min(t * speed, total)
        seg = int(np.searchsorted(cum, arc, side="right")) - 1
        seg = min(seg, len(seg_len) - 1) if seg_len else 0
        if seg_len:
            frac = (arc - cum[seg]) / seg_len[seg]
            pos = pts[seg] * (1 - frac) + pts[seg + 1] * frac
        else:
            pos = pts[0]
        rows[k] = (t, pos[0], pos[1], z)
    return rows


def _pose_in_free_space(world: World, x: float, y: float) -> bool:
    for s in world.spaces:
        x0, x1, y0, y1 = s.bounds
        if x0 < x < x1 and y0 < y < y1:
            return True
    for d in world.doorways:
        lo = min(d.offset_a, d.offset_b)
        hi = max(d.offset_a, d.offset_b)
        a_lo, a_hi = d.center - d.width / 2.0, d.center + d.width / 2.0
        if d.axis is Axis.X:
            if lo <= x <= hi and a_lo < y < a_hi:
                return True
        else:
            if lo <= y <= hi and a_lo < x < a_hi:
                return True
    return False


@njit(cache=True)
def _carve_rays(layer, ox, oy, gx, gy, res, dirs, t_ends):
    nx, ny = layer.shape
    for r in range(dirs.shape[0]):
        dx = dirs[r, 0]
        dy = dirs[r, 1]
        t_end = t_ends[r]
        ix = int(math.floor((ox - gx) / res))
        iy = int(math.floor((oy - gy) / res))
        if dx > 0.0:
            step_x = 1
            t_max_x = (gx + (ix + 1) * res - ox) / dx
            t_dx = res / dx
        elif dx < 0.0:
            step_x = -1
            t_max_x = (gx + ix * res - ox) / dx
            t_dx = -res / dx
        else:
            step_x = 0
            t_max_x = 1e30
            t_dx = 1e30
        if dy > 0.0:
            step_y = 1
            t_max_y = (gy + (iy + 1) * res - oy) / dy
            t_dy = res / dy
        elif dy < 0.0:
            step_y = -1
            t_max_y = (gy + iy * res - oy) / dy
            t_dy = -res / dy
        else:
            step_y = 0
            t_max_y = 1e30
            t_dy = 1e30
        while True:
            if ix < 0 or ix >= nx or iy < 0 or iy >= ny:
                break
            if layer[ix, iy] == 0:
                layer[ix, iy] = 1
            if t_max_x <= t_max_y:
                if t_max_x >= t_end:
                    break
                ix += step_x
                t_max_x += t_dx
            else:
                if t_max_y >= t_end:
                    break
                iy += step_y
                t_max_y += t_dy


def observe_world(world: World, trajectory: np.ndarray, noise: float = 0.0,
                  dropout: float = 0.0, seed: int = 0,
                  angular_res_deg: float = 0.5, max_range: float = 20.0,
                  min_plane_points: int = 5,
                  assoc_tol: float = ASSOC_TOL) -> Scene:
    """Simulate panoramic scans along a trajectory.

    Returns a Scene holding the observed planes (those collecting at least
    min_plane_points segment points), their clouds, and the voxel grid.
    Dropout and noise affect segment points only, never the grid; noisy
    points whose off-plane residual exceeds 0.8 * assoc_tol are discarded
    the way a front end would fail to associate them.
    """
    rows = np.asarray(trajectory, dtype=np.float64).reshape(-1, 4)
    for t, x, y, _z in rows:
        if not _pose_in_free_space(world, x, y):
            raise PoseOutsideFreeSpace(f"pose at t={t}: ({x}, {y}) is not in free space")

    faces = world.faces
    n_f = len(faces)
    f_axis = np.array([f.axis.index for f in faces], dtype=np.int64)
    f_off = np.array([f.offset for f in faces])
    # a face blocks rays arriving from its free side: outward normal +axis
    # means the ray must travel in -axis
    f_req = np.array([-1.0 if f.facing is Facing.POSITIVE else 1.0 for f in faces])
    f_lo = np.array([f.lo for f in faces])
    f_hi = np.array([f.hi for f in faces])
    f_body = np.array([f.body for f in faces], dtype=np.int64)
    f_plane = np.array([f.plane_id for f in faces], dtype=np.int64)
    max_ap = max((len(f.apertures) for f in faces), default=0)
    ap_lo = np.full((n_f, max(max_ap, 1)), np.inf)
    ap_hi = np.full((n_f, max(max_ap, 1)), -np.inf)
    for i, f in enumerate(faces):
        for k, (lo, hi) in enumerate(f.apertures):
            ap_lo[i, k] = lo
            ap_hi[i, k] = hi

    n_rays = int(round(360.0 / angular_res_deg))
    theta = np.arange(n_rays) * math.radians(angular_res_deg)
    dirs = np.column_stack((np.cos(theta), np.sin(theta)))

    nx, ny, nz = world.dims
    gx, gy, _ = world.origin
    res = world.resolution
    states = np.zeros((nx, ny, nz), dtype=np.uint8)
    layers: dict[int, np.ndarray] = {}
    points_by_plane: dict[int, list[np.ndarray]] = {p.id: [] for p in world.planes}

    for pose_idx, (_t, ox, oy, oz) in enumerate(rows):
        rng = np.random.default_rng([seed, pose_idx])
        origin2 = np.array((ox, oy))
        t_all = np.full((n_f, n_rays), np.inf)
        with np.errstate(divide="ignore", invalid="ignore"):
            for i in range(n_f):
                ax = f_axis[i]
                d = dirs[:, ax]
                t = (f_off[i] - origin2[ax]) / d
                valid = (np.sign(d) == f_req[i]) & (t > 1e-9)
                cross = origin2[1 - ax] + t * dirs[:, 1 - ax]
                valid &= (cross >= f_lo[i]) & (cross <= f_hi[i])
                if oz < DOOR_HEIGHT and len(faces[i].apertures):
                    in_ap = np.zeros(n_rays, dtype=bool)
                    for k in range(len(faces[i].apertures)):
                        in_ap |= (cross > ap_lo[i, k]) & (cross < ap_hi[i, k])
                    valid &= ~in_ap
                t_all[i] = np.where(valid, t, np.inf)
        t_hit = t_all.min(axis=0)
        face_hit = t_all.argmin(axis=0)
        hits = t_hit <= max_range
        t_ends = np.where(hits, t_hit, max_range)

        kz = int(math.floor((oz - world.origin[2]) / res))
        if not (0 <= kz < nz):
            raise PoseOutsideFreeSpace(f"pose {pose_idx}: height {oz} outside the grid")
        layer = layers.get(kz)
        if layer is None:
            layer = layers.setdefault(kz, np.zeros((nx, ny), dtype=np.uint8))
        _carve_rays(layer, ox, oy, gx, gy, res, dirs, t_ends)

        hit_idx = np.nonzero(hits)[0]
        n_h = hit_idx.size
        hx = ox + t_hit[hit_idx] * dirs[hit_idx, 0]
        hy = oy + t_hit[hit_idx] * dirs[hit_idx, 1]
        fi = face_hit[hit_idx]
        cross = np.where(f_axis[fi] == 0, hy, hx)
        cross_cell = np.floor(
            (cross - np.where(f_axis[fi] == 0, gy, gx)) / res).astype(np.int64)
        cross_cell = np.clip(cross_cell, 0, np.where(f_axis[fi] == 0, ny, nx) - 1)
        occ_ix = np.where(f_axis[fi] == 0, f_body[fi], cross_cell)
        occ_iy = np.where(f_axis[fi] == 0, cross_cell, f_body[fi])
        layer[occ_ix, occ_iy] = CellState.OCCUPIED

        if n_h:
            uniforms = rng.random(n_h)
            keep = uniforms >= dropout
            pts = np.column_stack((hx, hy, np.full(n_h, oz)))
            if noise > 0.0:
                pts = pts + rng.normal(0.0, noise, (n_h, 3))
                residual = np.abs(
                    np.where(f_axis[fi] == 0, pts[:, 0], pts[:, 1]) - f_off[fi])
                keep &= residual <= 0.8 * assoc_tol
            for i in np.nonzero(keep)[0]:
                points_by_plane[int(f_plane[fi[i]])].append(pts[i])

    for kz, layer in layers.items():
        states[:, :, kz] = layer

    observed_planes = []
    clouds = {}
    for plane in world.planes:
        pts = points_by_plane[plane.id]
        if len(pts) >= min_plane_points:
            observed_planes.append(plane)
            clouds[plane.id] = SegmentCloud(plane_id=plane.id, points=np.array(pts))

    traj = rows.copy()
    traj.flags.writeable = False
    return Scene(
        name=world.name,
        planes=tuple(observed_planes),
        clouds=clouds,
        grid=VoxelGrid(origin=world.origin, resolution=res, states=states),
        trajectory=traj,
        observation={
            "seed": int(seed),
            "noise": float(noise),
            "dropout": float(dropout),
            "angular_res_deg": float(angular_res_deg),
            "max_range": float(max_range),
            "min_plane_points": int(min_plane_points),
        },
    )


def observe_from_spec(world: World, trajectory: Optional[np.ndarray] = None) -> Scene:
    """Observe along the world's own trajectory with its own parameters."""
    if trajectory is None:
        trajectory = build_trajectory(world)
    obs = world.observation
    return observe_world(
        world, trajectory,
        noise=float(obs.get("noise", 0.0)),
        dropout=float(obs.get("dropout", 0.0)),
        seed=int(obs.get("seed", 0)),
        angular_res_deg=float(obs.get("angular_res_deg", 0.5)),
        max_range=float(obs.get("max_range", 20.0)),
        min_plane_points=int(obs.get("min_plane_points", 5)),
    )


def make_wall_cloud(plane: LayoutPlane, span: tuple[float, float],
                    apertures=(), z_range: tuple[float, float] = (0.0, 2.0),
                    density: float = 1000.0, noise: float = 0.0,
                    dropout: float = 0.0, seed: int = 0) -> SegmentCloud:
    """Sample a single wall's segment cloud directly, skipping ray casting.

    Points are uniform over the span minus the open apertures, `density`
    per meter, with z uniform in z_range.  Used to exercise doorway
    detection on controlled inputs.
    """
    rng = np.random.default_rng(seed)
    lo, hi = span
    n = int(round(density * (hi - lo)))
    coords = rng.uniform(lo, hi, n)
    mask = np.ones(n, dtype=bool)
    for a_lo, a_hi in apertures:
        mask &= ~((coords > a_lo) & (coords < a_hi))
    if dropout > 0.0:
        mask &= rng.random(n) >= dropout
    coords = coords[mask]
    m = coords.size
    zs = rng.uniform(z_range[0], z_range[1], m)
    along = coords + (rng.normal(0.0, noise, m) if noise > 0.0 else 0.0)
    off = np.full(m, plane.offset) + (rng.normal(0.0, noise, m) if noise > 0.0 else 0.0)
    if plane.axis is Axis.X:
        pts = np.column_stack((off, along, zs))
    else:
        pts = np.column_stack((along, off, zs))
    return SegmentCloud(plane_id=plane.id, points=pts)
