"""Scene file formats and the 2-D occupancy slice.

A scene lives in one directory: a YAML manifest naming the planes, one
segment file per plane, a voxel-grid file, and optionally a trajectory and
the generating world description.  All lengths are meters, binary bodies are
little-endian, and float text fields are written with repr() so that
read(write(x)) == x bit-exactly.

Manifest layout::

    scene: one_room
    planes:
      - {id: 0, axis: x, facing: positive, offset_m: 0.0,
         segments: segments/plane_0000.bin}
    voxel_grid: occupancy.vox          # optional
    trajectory: trajectory.txt         # optional, rows "t x y z"
    world: world.yaml                  # optional, generating world
    observation: {seed: 1, noise: 0.0, dropout: 0.0}   # optional

Segment files hold flat x y z float64 triplets: ``.bin`` is raw
little-endian, anything else is whitespace-separated text with one point per
line.  The voxel-grid file is an ASCII header (magic, origin, resolution,
dims) followed by one state byte per voxel (0 unobserved, 1 free,
2 occupied), x-fastest.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import yaml

from .errors import (
    HeightOutOfRange,
    InvariantViolation,
    MissingFile,
    SchemaViolation,
)
from .model import (
    Axis,
    Facing,
    LayoutPlane,
    OccupancyGrid2D,
    SegmentCloud,
    VoxelGrid,
)

ASSOC_TOL = 0.15

_VOXEL_MAGIC = "voxelgrid 1"


def _require(path: str, what: str) -> str:
    if not os.path.isfile(path):
        raise MissingFile(f"{what}: {path}")
    return path


def read_segments(path: str) -> np.ndarray:
    """Load one segment file as an (n, 3) float64 array."""
    _require(path, "segment file")
    if path.endswith(".bin"):
        raw = np.fromfile(path, dtype="<f8")
        if raw.size % 3 != 0:
            raise SchemaViolation(f"segment file {path}: length not a multiple of 3")
        return raw.reshape(-1, 3)
    try:
        raw = np.loadtxt(path, dtype=np.float64, ndmin=2)
    except ValueError as e:
        raise SchemaViolation(f"segment file {path}: {e}") from e
    if raw.size == 0:
        return np.empty((0, 3))
    if raw.shape[1] != 3:
        raise SchemaViolation(f"segment file {path}: expected 3 columns, got {raw.shape[1]}")
    return raw


def write_segments(path: str, points: np.ndarray) -> None:
    pts = np.ascontiguousarray(points, dtype=np.float64).reshape(-1, 3)
    if path.endswith(".bin"):
        pts.astype("<f8").tofile(path)
        return
    with open(path, "w") as f:
        for x, y, z in pts:
            f.write(f"{float(x)!r} {float(y)!r} {float(z)!r}\n")


def read_voxel_grid(path: str) -> VoxelGrid:
    _require(path, "voxel grid file")
    with open(path, "rb") as f:
        header = {}
        magic = f.readline().decode("ascii", "replace").strip()
        if magic != _VOXEL_MAGIC:
            raise SchemaViolation(f"voxel grid {path}: bad magic {magic!r}")
        for _ in range(3):
            line = f.readline().decode("ascii", "replace").split()
            if not line:
                raise SchemaViolation(f"voxel grid {path}: truncated header")
            header[line[0]] = line[1:]
        tail = f.readline().decode("ascii", "replace").strip()
        if tail != "data":
            raise SchemaViolation(f"voxel grid {path}: expected 'data' line, got {tail!r}")
        try:
            origin = tuple(float(v) for v in header["origin"])
            resolution = float(header["resolution"][0])
            dims = tuple(int(v) for v in header["dims"])
        except (KeyError, ValueError, IndexError) as e:
            raise SchemaViolation(f"voxel grid {path}: malformed header ({e})") from e
        if len(origin) != 3 or len(dims) != 3:
            raise SchemaViolation(f"voxel grid {path}: origin/dims must have 3 entries")
        body = f.read()
    n = dims[0] * dims[1] * dims[2]
    if len(body) != n:
        raise SchemaViolation(f"voxel grid {path}: body has {len(body)} bytes, expected {n}")
    states = np.frombuffer(body, dtype=np.uint8).reshape(dims, order="F")
    if states.size and states.max() > 2:
        raise SchemaViolation(f"voxel grid {path}: state byte out of range")
    return VoxelGrid(origin=origin, resolution=resolution, states=states)


def write_voxel_grid(path: str, grid: VoxelGrid) -> None:
    ox, oy, oz = grid.origin
    with open(path, "wb") as f:
        f.write(f"{_VOXEL_MAGIC}\n".encode())
        f.write(f"origin {ox!r} {oy!r} {oz!r}\n".encode())
        f.write(f"resolution {grid.resolution!r}\n".encode())
        f.write(f"dims {grid.dims[0]} {grid.dims[1]} {grid.dims[2]}\n".encode())
        f.write(b"data\n")
        f.write(grid.states.ravel(order="F").tobytes())


def read_trajectory(path: str) -> np.ndarray:
    """Rows of (t, x, y, z), sorted check left to callers."""
    _require(path, "trajectory file")
    try:
        rows = np.loadtxt(path, dtype=np.float64, ndmin=2)
    except ValueError as e:
        raise SchemaViolation(f"trajectory file {path}: {e}") from e
    if rows.size == 0:
        return np.empty((0, 4))
    if rows.shape[1] != 4:
        raise SchemaViolation(f"trajectory file {path}: expected 4 columns, got {rows.shape[1]}")
    return rows


def write_trajectory(path: str, rows: np.ndarray) -> None:
    with open(path, "w") as f:
        for t, x, y, z in np.asarray(rows, dtype=np.float64).reshape(-1, 4):
            # repr of the Python float round-trips exactly; numpy scalars don't
            f.write(f"{float(t)!r} {float(x)!r} {float(y)!r} {float(z)!r}\n")


@dataclass(frozen=True)
class Scene:
    """Everything a manifest points at, loaded and validated."""

    name: str
    planes: tuple[LayoutPlane, ...]
    clouds: dict[int, SegmentCloud]
    grid: Optional[VoxelGrid] = None
    trajectory: Optional[np.ndarray] = None
    world_path: Optional[str] = None
    observation: dict = field(default_factory=dict)


def _parse_plane(rec, idx: int) -> tuple[LayoutPlane, str]:
    if not isinstance(rec, dict):
        raise SchemaViolation(f"plane record {idx} is not a mapping")
    for key in ("id", "axis", "facing", "offset_m", "segments"):
        if key not in rec:
            raise SchemaViolation(f"plane record {idx}: missing field {key!r}")
    try:
        axis = Axis(rec["axis"])
        facing = Facing(rec["facing"])
    except ValueError as e:
        raise SchemaViolation(f"plane record {idx}: {e}") from e
    try:
        plane = LayoutPlane(id=int(rec["id"]), axis=axis, facing=facing,
                            offset=float(rec["offset_m"]))
    except (TypeError, ValueError) as e:
        raise SchemaViolation(f"plane record {idx}: {e}") from e
    return plane, str(rec["segments"])


def load_scene(manifest_path: str, assoc_tol: float = ASSOC_TOL) -> Scene:
    """Load and validate a scene manifest.

    Raises MissingFile for absent files, SchemaViolation for malformed ones,
    and InvariantViolation when segment points sit farther than assoc_tol
    from their plane (the message reports every offending plane).
    """
    _require(manifest_path, "scene manifest")
    with open(manifest_path) as f:
        try:
            doc = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise SchemaViolation(f"manifest {manifest_path}: {e}") from e
    if doc is None:
        doc = {}
    if not isinstance(doc, dict):
        raise SchemaViolation(f"manifest {manifest_path}: top level must be a mapping")
    base = os.path.dirname(os.path.abspath(manifest_path))

    planes = []
    clouds = {}
    seen_ids = set()
    offenders = []
    for idx, rec in enumerate(doc.get("planes", []) or []):
        plane, seg_rel = _parse_plane(rec, idx)
        if plane.id in seen_ids:
            raise InvariantViolation(f"duplicate plane id {plane.id}")
        seen_ids.add(plane.id)
        try:
            pts = read_segments(os.path.join(base, seg_rel))
        except MissingFile as e:
            raise MissingFile(f"plane {plane.id} segments: {e}") from e
        off = np.abs(pts[:, plane.axis.index] - plane.offset) if len(pts) else np.empty(0)
        bad = int(np.count_nonzero(off > assoc_tol))
        if bad:
            offenders.append(
                f"plane {plane.id}: {bad} point(s) farther than {assoc_tol} m "
                f"from offset {plane.offset} (worst {off.max():.3f} m)"
            )
        planes.append(plane)
        clouds[plane.id] = SegmentCloud(plane_id=plane.id, points=pts)
    if offenders:
        raise InvariantViolation("; ".join(offenders))

    grid = None
    if doc.get("voxel_grid"):
        grid = read_voxel_grid(os.path.join(base, str(doc["voxel_grid"])))
    trajectory = None
    if doc.get("trajectory"):
        trajectory = read_trajectory(os.path.join(base, str(doc["trajectory"])))
        trajectory.flags.writeable = False
    world_path = None
    if doc.get("world"):
        world_path = os.path.join(base, str(doc["world"]))
    observation = doc.get("observation") or {}
    if not isinstance(observation, dict):
        raise SchemaViolation(f"manifest {manifest_path}: observation must be a mapping")

    return Scene(
        name=str(doc.get("scene", os.path.basename(base))),
        planes=tuple(planes),
        clouds=clouds,
        grid=grid,
        trajectory=trajectory,
        world_path=world_path,
        observation=dict(observation),
    )


def save_scene(directory: str, scene: Scene, segment_format: str = "bin") -> str:
    """Write a scene under `directory` and return the manifest path."""
    os.makedirs(os.path.join(directory, "segments"), exist_ok=True)
    plane_recs = []
    for plane in scene.planes:
        rel = f"segments/plane_{plane.id:04d}.{segment_format}"
        write_segments(os.path.join(directory, rel), scene.clouds[plane.id].points)
        plane_recs.append({
            "id": plane.id,
            "axis": plane.axis.value,
            "facing": plane.facing.value,
            "offset_m": float(plane.offset),
            "segments": rel,
        })
    doc: dict = {"scene": scene.name, "planes": plane_recs}
    if scene.grid is not None:
        write_voxel_grid(os.path.join(directory, "occupancy.vox"), scene.grid)
        doc["voxel_grid"] = "occupancy.vox"
    if scene.trajectory is not None:
        write_trajectory(os.path.join(directory, "trajectory.txt"), scene.trajectory)
        doc["trajectory"] = "trajectory.txt"
    if scene.world_path is not None:
        doc["world"] = os.path.relpath(scene.world_path, directory)
    if scene.observation:
        doc["observation"] = dict(scene.observation)
    manifest = os.path.join(directory, "scene.yaml")
    with open(manifest, "w") as f:
        yaml.safe_dump(doc, f, sort_keys=False)
    return manifest


def slice_grid(grid: VoxelGrid, h: float) -> OccupancyGrid2D:
    """Extract the horizontal layer containing height h.

    The layer index is floor((h - origin_z) / resolution); h must satisfy
    origin_z <= h < origin_z + nz * resolution.
    """
    z0, z1 = grid.z_extent
    if not (z0 <= h < z1):
        raise HeightOutOfRange(f"h={h} outside grid z range [{z0}, {z1})")
    k = math.floor((h - z0) / grid.resolution)
    k = min(k, grid.dims[2] - 1)
    return OccupancyGrid2D(
        origin=(grid.origin[0], grid.origin[1]),
        resolution=grid.resolution,
        states=grid.states[:, :, k].copy(),
        slice_height=h,
    )


def project_segments_2d(clouds, planes, z_max: float = 2.0) -> dict[int, np.ndarray]:
    """In-plane horizontal coordinates of all points at or below z_max.

    Doorways show as gaps below door height, so the low points are the ones
    kept: y for x-axis planes, x for y-axis planes, per plane id.
    """
    by_id = {p.id: p for p in planes}
    out: dict[int, np.ndarray] = {}
    for cloud in clouds:
        plane = by_id.get(cloud.plane_id)
        if plane is None:
            raise InvariantViolation(f"segment cloud references unknown plane {cloud.plane_id}")
        pts = cloud.points
        keep = pts[:, 2] <= z_max
        coords = pts[keep, plane.axis.other.index]
        coords.flags.writeable = False
        out[plane.id] = coords
    return out
