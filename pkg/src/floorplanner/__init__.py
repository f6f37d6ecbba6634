"""Floor-plan estimation from partial axis-aligned indoor observations.

The package turns layout planes, their point segments, and a voxel
occupancy map into a labeled 2-D floor plan: doorway detection on wall
point histograms, rectangle candidates from plane pairs, a weighted
set cover over observed free space, raster regions with room/corridor
labels, and doorway transitions between them.  `synth` generates the
ground-truth worlds the test suite measures against.
"""
from .errors import (
    DegeneratePolygon,
    HeightOutOfRange,
    InvalidSpec,
    InvariantViolation,
    LayoutError,
    MissingFile,
    PoseOutsideFreeSpace,
    SchemaViolation,
    StageError,
    TooLarge,
    UniverseNotCoverable,
)
from .model import (
    Axis,
    CandidateRect,
    CellState,
    CellStats,
    Doorway,
    Facing,
    FloorPlan,
    LayoutPlane,
    OccupancyGrid2D,
    Region,
    RegionLabel,
    SegmentCloud,
    Transition,
    VoxelGrid,
    plane_partition,
)
from .ingest import Scene, load_scene, save_scene, slice_grid, project_segments_2d
from .doors import detect_doorways, merge_twin_doorways, plane_histogram, smoothed_gradient
from .candidates import enumerate_rects, prune_rects
from .cover import build_universe, greedy_cover, harmonic, optimal_cover
from .regions import attach_transitions, filter_regions, union_to_regions
from .semantics import classify, label_regions, squareness, turning_distance, turning_function
from .pipeline import (
    BatchResult,
    OnlineResult,
    PipelineParams,
    read_floorplan,
    run_batch,
    run_online,
    write_floorplan,
)
from .render import render_svg, write_svg
from .synth import (
    build_trajectory,
    generate_world,
    gt_regions,
    gt_transitions,
    load_world,
    make_wall_cloud,
    observe_from_spec,
    observe_world,
)

__version__ = "0.1.0"

__all__ = [
    "Axis", "BatchResult", "CandidateRect", "CellState", "CellStats",
    "DegeneratePolygon", "Doorway", "Facing", "FloorPlan", "HeightOutOfRange",
    "InvalidSpec", "InvariantViolation", "LayoutError", "LayoutPlane",
    "MissingFile", "OccupancyGrid2D", "OnlineResult", "PipelineParams",
    "PoseOutsideFreeSpace", "Region", "RegionLabel", "Scene", "SchemaViolation",
    "SegmentCloud", "StageError", "TooLarge", "Transition",
    "UniverseNotCoverable", "VoxelGrid", "attach_transitions",
    "build_trajectory", "build_universe", "classify", "detect_doorways",
    "enumerate_rects", "filter_regions", "generate_world", "greedy_cover",
    "gt_regions", "gt_transitions", "harmonic", "label_regions", "load_scene",
    "load_world", "make_wall_cloud", "merge_twin_doorways", "observe_from_spec",
    "observe_world", "optimal_cover", "plane_histogram", "plane_partition",
    "project_segments_2d", "prune_rects", "read_floorplan", "render_svg",
    "run_batch", "run_online", "save_scene", "slice_grid", "smoothed_gradient",
    "squareness", "turning_distance", "turning_function", "union_to_regions",
    "write_floorplan", "write_svg",
]
