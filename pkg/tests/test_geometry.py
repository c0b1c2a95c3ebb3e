import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from shapely.geometry import MultiPolygon, Polygon, box

from sectorcover import geometry as geo
from sectorcover.geometry import GeometryError


def test_area_unit_square(unit_square):
    assert geo.area(unit_square) == 1.0


def test_area_empty():
    assert geo.area(MultiPolygon()) == 0.0
    assert geo.area(None) == 0.0


def test_area_rectangle_with_hole():
    env = geo.make_environment([(0, 0), (4, 0), (4, 2), (0, 2)], [[(1, 0.5), (1, 1.5), (2, 1.5), (2, 0.5)]])
    assert geo.area(env) == pytest.approx(7.0, abs=1e-12)


def test_area_rejects_bowtie():
    with pytest.raises(GeometryError):
        geo.area(Polygon([(0, 0), (1, 1), (1, 0), (0, 1)]))


def test_make_environment_rejects_self_intersection():
    with pytest.raises(GeometryError) as err:
        geo.make_environment([(0, 0), (1, 1), (1, 0), (0, 1)])
    assert err.value.where == "outer"


def test_make_environment_rejects_hole_outside():
    with pytest.raises(GeometryError, match="strictly inside"):
        geo.make_environment([(0, 0), (2, 0), (2, 2), (0, 2)], [[(3, 3), (4, 4), (4, 3)]])


def test_make_environment_rejects_touching_hole():
    with pytest.raises(GeometryError):
        geo.make_environment([(0, 0), (2, 0), (2, 2), (0, 2)], [[(0, 0.5), (1, 1), (1, 0.5)]])


def test_make_environment_rejects_overlapping_holes():
    holes = [[(1, 1), (1, 3), (3, 3), (3, 1)], [(2, 2), (2, 4), (4, 4), (4, 2)]]
    with pytest.raises(GeometryError, match="intersect"):
        geo.make_environment([(0, 0), (5, 0), (5, 5), (0, 5)], holes)


def test_make_environment_rejects_degenerate():
    with pytest.raises(GeometryError, match="3 distinct"):
        geo.make_environment([(0, 0), (1, 0), (1, 1e-12)])


def test_make_environment_welds_and_reorients():
    cw = [(0, 0), (0, 1), (1, 1), (1, 1 + 1e-12), (1, 0), (0, 0)]
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        env = geo.make_environment(cw)
    assert any("clockwise" in str(w.message) for w in caught)
    assert env.exterior.is_ccw
    assert len(env.exterior.coords) == 5


def test_holes_oriented_clockwise():
    with pytest.warns(UserWarning, match="counterclockwise"):
        env = geo.make_environment([(0, 0), (4, 0), (4, 4), (0, 4)], [[(1, 1), (2, 1), (2, 2), (1, 2)]])
    assert env.exterior.is_ccw
    assert not env.interiors[0].is_ccw


def test_boolean_examples(unit_square):
    assert geo.boolean(unit_square, unit_square, "difference").is_empty
    u = geo.boolean(unit_square, box(5, 5, 6, 6), "union")
    assert geo.area(u) == pytest.approx(2.0)
    i = geo.boolean(box(0, 0, 2, 1), box(1, 0, 3, 1), "intersection")
    assert i.equals(MultiPolygon([box(1, 0, 2, 1)]))
    assert geo.area(i) == pytest.approx(1.0)


def test_boolean_bad_op(unit_square):
    with pytest.raises(ValueError):
        geo.boolean(unit_square, unit_square, "xor")


def test_boolean_drops_slivers():
    a = box(0, 0, 1, 1)
    b = box(0, 0, 1, 1 - 1e-13)
    assert geo.boolean(a, b, "difference").is_empty


def test_erode_rectangle():
    e = geo.erode(box(0, 0, 4, 2), 0.2)
    assert e.equals_exact(MultiPolygon([box(0.2, 0.2, 3.8, 1.8)]), 1e-9) or e.symmetric_difference(
        box(0.2, 0.2, 3.8, 1.8)
    ).area < 1e-12
    assert geo.area(e) == pytest.approx(3.6 * 1.6)


def test_erode_zero_is_identity(lshape):
    assert geo.erode(lshape, 0.0).symmetric_difference(lshape).area == 0.0


def test_erode_past_half_extent(unit_square):
    assert geo.erode(unit_square, 0.6).is_empty


def test_erode_negative_radius(unit_square):
    with pytest.raises(ValueError):
        geo.erode(unit_square, -0.1)


def test_rotate_quarter_turn(unit_square):
    r = geo.rotate(unit_square, math.pi / 2)
    assert r.symmetric_difference(box(-1, 0, 0, 1)).area < 1e-12


def test_rotate_identity(lshape):
    assert list(geo.rotate(lshape, 0.0).exterior.coords) == list(lshape.exterior.coords)


def test_rotate_central_symmetry():
    r = box(0, 0, 2, 1)
    assert geo.rotate(r, math.pi, (1, 0.5)).symmetric_difference(r).area < 1e-12


def test_rectangle_and_extent():
    r = geo.rectangle((1, 1), 4, 2, math.pi / 6)
    assert r.area == pytest.approx(8.0)
    lo, hi = geo.extent_along(r, math.pi / 6)
    assert hi - lo == pytest.approx(4.0)
    lo, hi = geo.extent_along(r, math.pi / 6 + math.pi / 2)
    assert hi - lo == pytest.approx(2.0)


coords = st.floats(-50, 50, allow_nan=False)


@settings(max_examples=60, deadline=None)
@given(coords, coords, st.floats(0.1, 10), st.floats(0.1, 10), coords, coords, st.floats(0.1, 10), st.floats(0.1, 10))
def test_inclusion_exclusion(x0, y0, w0, h0, x1, y1, w1, h1):
    a, b = box(x0, y0, x0 + w0, y0 + h0), box(x1, y1, x1 + w1, y1 + h1)
    lhs = geo.area(geo.boolean(a, b, "union"))
    rhs = geo.area(a) + geo.area(b) - geo.area(geo.boolean(a, b, "intersection"))
    assert lhs == pytest.approx(rhs, abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(st.floats(0, 2 * math.pi), st.floats(-5, 5), st.floats(-5, 5))
def test_rotation_preserves_area(angle, px, py):
    env = geo.make_environment([(0, 0), (4, 0), (4, 2), (2, 2), (2, 4), (0, 4)])
    assert geo.area(geo.rotate(env, angle, (px, py))) == pytest.approx(12.0, abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.5, 6), st.floats(0.5, 6), st.floats(0, 0.24))
def test_erosion_of_rectangle_is_rectangle(w, h, r):
    e = geo.erode(box(0, 0, w, h), r)
    assert geo.area(e) == pytest.approx(max(w - 2 * r, 0) * max(h - 2 * r, 0), abs=1e-9)


def test_erosion_sagitta_bound():
    # concave corners produce arcs; their chords must stay within the sagitta bound
    env = geo.make_environment([(0, 0), (4, 0), (4, 2), (2, 2), (2, 4), (0, 4)])
    exact_missing = (4 - math.pi) * 0.5**2 / 4  # fillet lost at the reflex corner is not area
    e = geo.erode(env, 0.5)
    pts = np.asarray(e.geoms[0].exterior.coords)
    d = np.hypot(pts[:, 0] - 2, pts[:, 1] - 2)
    arc = d[(d > 0.1) & (d < 0.9)]
    assert np.allclose(arc, 0.5, atol=1e-9)
    assert exact_missing > 0
