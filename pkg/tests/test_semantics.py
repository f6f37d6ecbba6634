"""Boundary-shape distance and region labeling."""
import math

import numpy as np
import pytest

from floorplanner.errors import DegeneratePolygon
from floorplanner.model import (
    CandidateRect,
    CellState,
    CellStats,
    OccupancyGrid2D,
    Region,
    RegionLabel,
)
from floorplanner.regions import union_to_regions
from floorplanner.semantics import (
    classify,
    label_regions,
    squareness,
    turning_distance,
    turning_function,
)

from turning_oracle import distance_oracle

SQUARE = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]
LSHAPE = [(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)]
USHAPE = [(0.0, 0.0), (7.0, 0.0), (7.0, 5.0), (5.0, 5.0), (5.0, 2.0),
          (2.0, 2.0), (2.0, 5.0), (0.0, 5.0)]


def _rect(a, b=1.0):
    return [(0.0, 0.0), (float(a), 0.0), (float(a), float(b)), (0.0, float(b))]


def _random_polygon(rng, grid_n=8):
    states = np.full((grid_n, grid_n), CellState.FREE, dtype=np.uint8)
    g = OccupancyGrid2D(origin=(0.0, 0.0), resolution=1.0, states=states,
                        slice_height=1.0)
    rects = []
    for _ in range(rng.integers(2, 5)):
        x0, y0 = rng.integers(0, grid_n - 1, size=2)
        x1 = rng.integers(x0 + 1, grid_n + 1)
        y1 = rng.integers(y0 + 1, grid_n + 1)
        rects.append(CandidateRect(
            plane_ids=(0, 1, 2, 3),
            bounds=(float(x0), float(x1), float(y0), float(y1)),
            weight=int((x1 - x0) * (y1 - y0)),
            cell_span=((int(x0), int(x1)), (int(y0), int(y1)))))
    regions = union_to_regions(rects, g)
    return regions[0].outer_boundary


def test_unit_square_turning_function():
    tf = turning_function(SQUARE)
    assert tf.jumps_at == (0.0, 0.25, 0.5, 0.75)
    assert tf.angles == pytest.approx(
        (0.0, math.pi / 2, math.pi, 3 * math.pi / 2))
    assert tf.eval(0.1) == 0.0
    assert tf.eval(0.25) == pytest.approx(math.pi / 2)
    assert tf.eval_ext(1.1) == pytest.approx(2 * math.pi)


def test_rectangle_distances_match_closed_form():
    # an a:1 rectangle against the square mismatches the jump positions on
    # a fraction m = 2 * (a / (2a + 2) - 1/4) of the arclength, giving
    # d = (pi / 2) * sqrt(m * (1 - m))
    for a in (2.0, 3.0, 20.0):
        x = a / (2.0 * (a + 1.0))
        m = 2.0 * (x - 0.25)
        want = 0.5 * math.pi * math.sqrt(m * (1.0 - m))
        assert squareness(_rect(a)) == pytest.approx(want, abs=1e-9)
    assert squareness(_rect(2.0)) == pytest.approx(
        math.pi * math.sqrt(5.0) / 12.0, abs=1e-9)
    assert squareness(_rect(20.0)) == pytest.approx(
        math.pi * math.sqrt(437.0) / 84.0, abs=1e-9)


def test_l_shape_distance_closed_form():
    assert squareness(LSHAPE) == pytest.approx(math.pi / 4.0, abs=1e-9)


def test_identity_and_symmetry():
    rng = np.random.default_rng(11)
    polys = [SQUARE, LSHAPE, USHAPE] + [_random_polygon(rng) for _ in range(5)]
    for p in polys:
        assert turning_distance(turning_function(p), turning_function(p)) \
            <= 1e-9
    for i in range(0, len(polys) - 1, 2):
        a, b = turning_function(polys[i]), turning_function(polys[i + 1])
        assert turning_distance(a, b) == pytest.approx(
            turning_distance(b, a), abs=1e-9)


def test_similarity_invariance():
    base = squareness(LSHAPE)
    shifted = [(x + 13.5, y - 2.25) for x, y in LSHAPE]
    scaled = [(3.0 * x, 3.0 * y) for x, y in LSHAPE]
    rotated = [(-y, x) for x, y in LSHAPE]  # 90 degree turn keeps CCW winding
    restarted = LSHAPE[2:] + LSHAPE[:2]
    for variant in (shifted, scaled, rotated, restarted):
        assert squareness(variant) == pytest.approx(base, abs=1e-9)


def test_distance_matches_oracle():
    rng = np.random.default_rng(29)
    for _ in range(20):
        pa = _random_polygon(rng)
        pb = _random_polygon(rng)
        got = turning_distance(turning_function(pa), turning_function(pb))
        assert got == pytest.approx(distance_oracle(pa, pb), abs=1e-6)


def test_triangle_inequality():
    rng = np.random.default_rng(47)
    polys = [_random_polygon(rng) for _ in range(12)]
    tfs = [turning_function(p) for p in polys]
    for _ in range(100):
        i, j, k = rng.integers(0, len(tfs), size=3)
        dij = turning_distance(tfs[i], tfs[j])
        djk = turning_distance(tfs[j], tfs[k])
        dik = turning_distance(tfs[i], tfs[k])
        assert dik <= dij + djk + 1e-9


def test_degenerate_polygons_raise():
    with pytest.raises(DegeneratePolygon):
        turning_function([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)])
    with pytest.raises(DegeneratePolygon):
        turning_function(list(reversed(SQUARE)))  # clockwise
    with pytest.raises(DegeneratePolygon):
        turning_function([(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 1.0)])
    with pytest.raises(DegeneratePolygon):
        # bowtie: zero signed area
        turning_function([(0.0, 0.0), (1.0, 1.0), (1.0, 0.0), (0.0, 1.0)])


def _region(boundary, perimeter_check=None):
    r = Region(id=0, outer_boundary=tuple(boundary), holes=(),
               member_rects=(0,), label=RegionLabel.UNLABELED,
               cell_stats=CellStats(10, 0, 0))
    if perimeter_check is not None:
        assert r.perimeter == pytest.approx(perimeter_check)
    return r


def test_classify_perimeter_gate():
    assert classify(_region(_rect(30.0, 2.0), 64.0)) is RegionLabel.CORRIDOR
    assert classify(_region(_rect(9.0, 9.0), 36.0)) is RegionLabel.ROOM
    # the perimeter comparison is strict: exactly 60 is already a corridor
    assert classify(_region(_rect(15.0, 15.0), 60.0)) is RegionLabel.CORRIDOR
    assert classify(_region(_rect(14.9, 14.9))) is RegionLabel.ROOM


def test_classify_shape_gate():
    u = _region(USHAPE, 30.0)
    assert distance_oracle(USHAPE, SQUARE) > 1.0
    assert classify(u) is RegionLabel.CORRIDOR
    assert classify(u, turndist_max=1.2) is RegionLabel.ROOM


def test_label_regions_sets_labels():
    labeled = label_regions([_region(_rect(4.0, 4.0)), _region(USHAPE)])
    assert [r.label for r in labeled] == [RegionLabel.ROOM, RegionLabel.CORRIDOR]
