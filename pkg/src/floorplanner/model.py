"""Domain types for layout estimation.

Frame conventions: x east, y north, z up, all lengths in meters.  A plane is
an infinite axis-aligned vertical surface; its facing is the direction of the
outward normal, which points into the free space it bounds.  An x-axis plane
with positive facing is therefore a valid west wall, and an inward-facing
pair satisfies offset(positive) < offset(negative).

All types are immutable value objects.  Numpy payloads are marked read-only
on construction; treat every instance as shareable without locking.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import NamedTuple, Optional

import numpy as np

from .errors import InvariantViolation

# Cells are compared against rectangle bounds through their centers; the
# epsilon keeps lattice-aligned bounds stable under float division.
_SPAN_EPS = 1e-9


class Axis(Enum):
    """Horizontal world axis a plane is perpendicular to."""

    X = "x"
    Y = "y"

    @property
    def index(self) -> int:
        return 0 if self is Axis.X else 1

    @property
    def other(self) -> "Axis":
        return Axis.Y if self is Axis.X else Axis.X


class Facing(Enum):
    """Direction of a plane's outward (into free space) normal."""

    POSITIVE = "positive"
    NEGATIVE = "negative"


class CellState(IntEnum):
    """Occupancy of a voxel or 2-D grid cell; values match the file format."""

    UNOBSERVED = 0
    FREE = 1
    OCCUPIED = 2


class RegionLabel(Enum):
    ROOM = "room"
    CORRIDOR = "corridor"
    UNLABELED = "unlabeled"


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class LayoutPlane:
    """One infinite axis-aligned vertical layout plane.

    Attributes:
        id: Non-negative scene-unique integer.
        axis: Axis the plane is perpendicular to.
        facing: Side its outward normal points to.
        offset: Signed position along `axis`, meters.
    """

    id: int
    axis: Axis
    facing: Facing
    offset: float

    @property
    def partition_key(self) -> tuple[str, str]:
        return (self.axis.value, self.facing.value)


@dataclass(frozen=True)
class SegmentCloud:
    """Points associated with one plane, float64 rows of (x, y, z)."""

    plane_id: int
    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.size == 0:
            pts = pts.reshape(0, 3)
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise InvariantViolation(
                f"segment cloud for plane {self.plane_id} must be (n, 3), "
                f"got {pts.shape}"
            )
        object.__setattr__(self, "points", _freeze(pts))

    def __len__(self) -> int:
        return self.points.shape[0]


def cell_range(lo: float, hi: float, origin: float, res: float, n: int) -> tuple[int, int]:
    """Half-open index range of cells whose centers fall in [lo, hi)."""
    i0 = math.ceil((lo - origin) / res - 0.5 - _SPAN_EPS)
    i1 = math.ceil((hi - origin) / res - 0.5 - _SPAN_EPS)
    i0 = min(max(i0, 0), n)
    i1 = min(max(i1, 0), n)
    # ranges entirely off-grid clamp to an empty pair, never an inverted one
    return i0, max(i0, i1)


@dataclass(frozen=True)
class VoxelGrid:
    """Axis-aligned 3-D occupancy map with uniform cubic voxels.

    Attributes:
        origin: World position of the grid's minimum corner.
        resolution: Voxel edge length, meters.
        states: uint8 array indexed [ix, iy, iz] with CellState values.
    """

    origin: tuple[float, float, float]
    resolution: float
    states: np.ndarray

    def __post_init__(self):
        if self.resolution <= 0:
            raise InvariantViolation("voxel resolution must be positive")
        st = np.asarray(self.states, dtype=np.uint8)
        if st.ndim != 3 or min(st.shape) < 1:
            raise InvariantViolation(f"voxel states must be 3-D and non-empty, got {st.shape}")
        object.__setattr__(self, "origin", tuple(float(v) for v in self.origin))
        object.__setattr__(self, "states", _freeze(st))

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.states.shape

    @property
    def z_extent(self) -> tuple[float, float]:
        return self.origin[2], self.origin[2] + self.dims[2] * self.resolution


@dataclass(frozen=True)
class OccupancyGrid2D:
    """One horizontal slice of a voxel grid.

    states is indexed [ix, iy]; flat cell index is ix + nx * iy (x-fastest).
    """

    origin: tuple[float, float]
    resolution: float
    states: np.ndarray
    slice_height: float

    def __post_init__(self):
        if self.resolution <= 0:
            raise InvariantViolation("grid resolution must be positive")
        st = np.asarray(self.states, dtype=np.uint8)
        if st.ndim != 2 or min(st.shape) < 1:
            raise InvariantViolation(f"grid states must be 2-D and non-empty, got {st.shape}")
        object.__setattr__(self, "origin", tuple(float(v) for v in self.origin))
        object.__setattr__(self, "states", _freeze(st))

    @property
    def nx(self) -> int:
        return self.states.shape[0]

    @property
    def ny(self) -> int:
        return self.states.shape[1]

    def cell_span(self, lo: float, hi: float, axis: Axis) -> tuple[int, int]:
        """Clipped half-open index range along `axis` for bounds [lo, hi)."""
        k = axis.index
        n = self.states.shape[k]
        return cell_range(lo, hi, self.origin[k], self.resolution, n)

    def flat(self, ix: np.ndarray, iy: np.ndarray):
        return ix + self.nx * iy

    def corner(self, ix: int, iy: int) -> tuple[float, float]:
        """World coordinates of the lattice corner (ix, iy)."""
        return (self.origin[0] + ix * self.resolution,
                self.origin[1] + iy * self.resolution)

    def state_counts(self) -> dict[CellState, int]:
        counts = np.bincount(self.states.ravel(), minlength=3)
        return {s: int(counts[s.value]) for s in CellState}

    def free_mask(self) -> np.ndarray:
        return self.states == CellState.FREE


@dataclass(frozen=True)
class Doorway:
    """A detected wall aperture, located on its parent plane.

    center is the in-plane horizontal coordinate (y for x-axis planes, x for
    y-axis planes); the open interval is (center - width/2, center + width/2).
    """

    id: int
    plane_id: int
    center: float
    width: float
    response: float

    def __post_init__(self):
        if self.width <= 0:
            raise InvariantViolation(f"doorway {self.id} width must be positive")

    @property
    def interval(self) -> tuple[float, float]:
        return (self.center - self.width / 2.0, self.center + self.width / 2.0)


@dataclass(frozen=True)
class CandidateRect:
    """Axis-aligned rectangle spanned by two x-planes and two y-planes.

    plane_ids is (x_lo, x_hi, y_lo, y_hi); bounds is (xmin, xmax, ymin, ymax).
    weight counts every grid cell inside bounds (any state), clipped to the
    grid; covered_free holds flat indices of the free cells among them.  Both
    are populated by pruning and stay empty on raw enumeration output.
    """

    plane_ids: tuple[int, int, int, int]
    bounds: tuple[float, float, float, float]
    weight: int = 0
    covered_free: frozenset = frozenset()
    cell_span: Optional[tuple[tuple[int, int], tuple[int, int]]] = None

    @property
    def width(self) -> float:
        return self.bounds[1] - self.bounds[0]

    @property
    def height(self) -> float:
        return self.bounds[3] - self.bounds[2]


class CellStats(NamedTuple):
    free: int
    occupied: int
    unobserved: int

    @property
    def total(self) -> int:
        return self.free + self.occupied + self.unobserved


class Transition(NamedTuple):
    """Doorway attachment; region_b is None when it opens to the exterior."""

    doorway_id: int
    region_a: int
    region_b: Optional[int]


@dataclass(frozen=True)
class Region:
    """A 4-connected component of the selected rectangle union.

    outer_boundary is a CCW simple rectilinear polygon on cell corners with
    collinear vertices merged; holes (CW, same convention) are kept for
    bookkeeping but ignored by classification.  cells holds flat grid indices.
    """

    id: int
    outer_boundary: tuple[tuple[float, float], ...]
    holes: tuple[tuple[tuple[float, float], ...], ...]
    member_rects: tuple[int, ...]
    label: RegionLabel
    cell_stats: CellStats
    cells: frozenset = frozenset()

    @property
    def perimeter(self) -> float:
        verts = self.outer_boundary
        return sum(
            abs(verts[i][0] - verts[i - 1][0]) + abs(verts[i][1] - verts[i - 1][1])
            for i in range(len(verts))
        )

    @property
    def bbox(self) -> tuple[float, float, float, float]:
        xs = [v[0] for v in self.outer_boundary]
        ys = [v[1] for v in self.outer_boundary]
        return min(xs), max(xs), min(ys), max(ys)


@dataclass(frozen=True)
class FloorPlan:
    """Final labeled plan for one slice height."""

    regions: tuple[Region, ...]
    doorways: tuple[Doorway, ...]
    transitions: tuple[Transition, ...]
    unattached: tuple[int, ...]
    slice_height: float
    provenance: dict = field(default_factory=dict)


@dataclass(frozen=True)
class PlanePartition:
    """Planes grouped by (axis, facing), each group sorted by id."""

    x_pos: tuple[LayoutPlane, ...]
    x_neg: tuple[LayoutPlane, ...]
    y_pos: tuple[LayoutPlane, ...]
    y_neg: tuple[LayoutPlane, ...]

    @property
    def sizes(self) -> tuple[int, int, int, int]:
        return (len(self.x_pos), len(self.x_neg), len(self.y_pos), len(self.y_neg))


def plane_partition(planes) -> PlanePartition:
    """Split planes into the four (axis, facing) classes."""
    groups = {
        (Axis.X, Facing.POSITIVE): [],
        (Axis.X, Facing.NEGATIVE): [],
        (Axis.Y, Facing.POSITIVE): [],
        (Axis.Y, Facing.NEGATIVE): [],
    }
    for p in planes:
        groups[(p.axis, p.facing)].append(p)
    ordered = {k: tuple(sorted(v, key=lambda p: p.id)) for k, v in groups.items()}
    return PlanePartition(
        x_pos=ordered[(Axis.X, Facing.POSITIVE)],
        x_neg=ordered[(Axis.X, Facing.NEGATIVE)],
        y_pos=ordered[(Axis.Y, Facing.POSITIVE)],
        y_neg=ordered[(Axis.Y, Facing.NEGATIVE)],
    )
