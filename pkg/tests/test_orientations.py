import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from shapely.geometry import MultiPolygon, box

from sectorcover import geometry as geo
from sectorcover.orientations import OrientationSet, edge_directions, extract_orientations


def _axial(a, b):
    d = abs(a - b) % math.pi
    return min(d, math.pi - d)


def test_rectangle_orientations():
    o = extract_orientations(box(0, 0, 4, 2))
    assert o.angles == pytest.approx((0.0, math.pi / 2))
    assert o.weights == pytest.approx((8.0, 4.0))


def test_rotated_rectangle():
    r = geo.rectangle((0, 0), 4, 2, math.pi / 6)
    o = extract_orientations(r)
    assert len(o) == 2
    expect = sorted([math.pi / 6, math.pi / 6 + math.pi / 2])
    for a, e in zip(o.angles, expect):
        assert _axial(a, e) <= math.radians(2)


def test_lshape(lshape):
    assert extract_orientations(lshape).angles == pytest.approx((0.0, math.pi / 2))


def test_empty_region_rejected():
    with pytest.raises(ValueError):
        extract_orientations(MultiPolygon())


def test_near_parallel_edges_cluster():
    # a slightly skewed quad: opposite edges differ by well under 2 degrees
    env = geo.make_environment([(0, 0), (10, 0), (10, 3), (0, 3.1)])
    o = extract_orientations(env)
    assert len(o) == 2


def test_max_count_keeps_heaviest():
    env = geo.make_environment([(0, 0), (10, 0), (11, 1), (11, 5), (0, 5)])
    o = extract_orientations(env, max_count=2)
    assert len(o) == 2
    assert o.angles == pytest.approx((0.0, math.pi / 2))


def test_edge_directions_fold_pi():
    angles, lengths = edge_directions(box(0, 0, 2, 1))
    assert all(0 <= a < math.pi for a in angles)
    assert sum(lengths) == pytest.approx(6.0)


def test_from_angles_sorts_and_folds():
    o = OrientationSet.from_angles([math.pi / 2, math.pi + 0.1])
    assert o.angles == pytest.approx((0.1, math.pi / 2))


@settings(max_examples=40, deadline=None)
@given(st.floats(0, math.pi), st.floats(1, 5), st.floats(0.5, 1))
def test_rotation_equivariance(theta, w, ratio):
    r = geo.rectangle((0, 0), w, w * ratio, theta)
    o = extract_orientations(r)
    assert len(o) == 2
    assert min(_axial(a, theta) for a in o.angles) <= 1e-6
