"""Polygon primitives shared by every planning stage.

Regions are shapely geometries. An *environment* component is a valid
``Polygon`` with a counterclockwise shell and clockwise holes; a region set is
a ``MultiPolygon`` of interior-disjoint components (possibly empty). All
functions are pure and return new geometries.
"""

from __future__ import annotations

import math
import warnings
from typing import Iterable, Sequence, Union

import shapely
from shapely import affinity
from shapely.geometry import MultiPolygon, Polygon, box
from shapely.geometry.base import BaseGeometry
from shapely.geometry.polygon import orient
from shapely.validation import explain_validity

EPS_GEOM = 1e-9
# chord approximation of erosion arcs
MAX_SAGITTA = 1e-3

Point = tuple[float, float]
Region = Union[Polygon, MultiPolygon]


class GeometryError(ValueError):
    """Raised for rings or regions that violate the polygon invariants."""

    def __init__(self, message: str, *, where: str | None = None):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)


def _weld(coords: Sequence[Sequence[float]], where: str) -> list[Point]:
    pts = [(float(x), float(y)) for x, y in coords]
    if len(pts) > 1 and pts[0] == pts[-1]:
        pts = pts[:-1]
    for i, (x, y) in enumerate(pts):
        if not (math.isfinite(x) and math.isfinite(y)):
            raise GeometryError(f"vertex {i} is not finite: ({x}, {y})", where=where)
    welded: list[Point] = []
    for p in pts:
        if welded and math.dist(welded[-1], p) <= EPS_GEOM:
            continue
        welded.append(p)
    while len(welded) > 1 and math.dist(welded[0], welded[-1]) <= EPS_GEOM:
        welded.pop()
    if len(welded) < 3:
        raise GeometryError("ring needs at least 3 distinct vertices", where=where)
    return welded


def make_environment(
    outer: Sequence[Sequence[float]],
    holes: Iterable[Sequence[Sequence[float]]] = (),
) -> Polygon:
    """Build a validated environment polygon from an outer ring and holes.

    Near-duplicate vertices are welded. Rings with the wrong winding are
    re-oriented with a warning.

    Raises:
        GeometryError: if a ring is degenerate or self-intersecting, a hole is
            not strictly inside the outer ring, or holes overlap.
    """
    shell = _weld(outer, "outer")
    hole_rings = [_weld(h, f"holes[{i}]") for i, h in enumerate(holes)]

    shell_ring = shapely.LinearRing(shell)
    if not shell_ring.is_simple:
        raise GeometryError("ring is self-intersecting", where="outer")
    if not shell_ring.is_ccw:
        warnings.warn("outer ring is clockwise; re-orienting", stacklevel=2)
    outer_poly = Polygon(shell)
    for i, h in enumerate(hole_rings):
        ring = shapely.LinearRing(h)
        if not ring.is_simple:
            raise GeometryError("ring is self-intersecting", where=f"holes[{i}]")
        if ring.is_ccw:
            warnings.warn(f"holes[{i}] is counterclockwise; re-orienting", stacklevel=2)
        hp = Polygon(h)
        if not outer_poly.contains(hp) or hp.boundary.intersects(outer_poly.boundary):
            raise GeometryError("hole is not strictly inside the outer ring", where=f"holes[{i}]")
    for i in range(len(hole_rings)):
        for j in range(i + 1, len(hole_rings)):
            if Polygon(hole_rings[i]).intersects(Polygon(hole_rings[j])):
                raise GeometryError(f"holes[{i}] and holes[{j}] intersect", where="holes")

    poly = Polygon(shell, hole_rings)
    if not poly.is_valid:
        raise GeometryError(explain_validity(poly))
    if poly.area <= 0:
        raise GeometryError("environment has non-positive area")
    return orient(poly, sign=1.0)


def as_region(geom: BaseGeometry | None) -> MultiPolygon:
    """Normalize any geometry to a ``MultiPolygon`` of its polygonal parts."""
    if geom is None or geom.is_empty:
        return MultiPolygon()
    if isinstance(geom, MultiPolygon):
        return geom
    if isinstance(geom, Polygon):
        return MultiPolygon([geom])
    parts = [g for g in getattr(geom, "geoms", []) if isinstance(g, (Polygon, MultiPolygon))]
    polys: list[Polygon] = []
    for g in parts:
        polys.extend(g.geoms if isinstance(g, MultiPolygon) else [g])
    return MultiPolygon(polys)


def _drop_slivers(geom: BaseGeometry) -> MultiPolygon:
    keep = []
    for p in as_region(geom).geoms:
        if p.is_empty or p.area <= EPS_GEOM**2:
            continue
        # mean thickness of a thin strip is about 2 * area / perimeter
        if 2.0 * p.area / p.length < EPS_GEOM:
            continue
        keep.append(orient(p, sign=1.0))
    return MultiPolygon(keep)


def check_region(region: BaseGeometry) -> None:
    if region.is_empty:
        return
    if not isinstance(region, (Polygon, MultiPolygon)):
        raise GeometryError(f"expected a polygonal region, got {region.geom_type}")
    if not region.is_valid:
        raise GeometryError(explain_validity(region))


def area(region: BaseGeometry | None) -> float:
    """Area of a region set; 0.0 for an empty one.

    Raises:
        GeometryError: if the region is self-intersecting or otherwise invalid.
    """
    if region is None or region.is_empty:
        return 0.0
    check_region(region)
    return float(region.area)


def boolean(a: BaseGeometry, b: BaseGeometry, op: str) -> MultiPolygon:
    """Union, difference or intersection of two regions, slivers removed."""
    if op == "union":
        out = shapely.union(a, b)
    elif op == "difference":
        out = shapely.difference(a, b)
    elif op == "intersection":
        out = shapely.intersection(a, b)
    else:
        raise ValueError(f"unknown boolean op {op!r}")
    return _drop_slivers(out)


def union_all(regions: Iterable[BaseGeometry]) -> MultiPolygon:
    regions = [r for r in regions if r is not None and not r.is_empty]
    if not regions:
        return MultiPolygon()
    return _drop_slivers(shapely.union_all(regions))


def _quad_segs(radius: float) -> int:
    # sagitta of a chord spanning pi/(2q) is r (1 - cos(pi / (4 q)))
    if radius <= MAX_SAGITTA:
        return 1
    half = math.acos(1.0 - MAX_SAGITTA / radius)
    return max(1, min(256, math.ceil(math.pi / (4.0 * half))))


def erode(region: BaseGeometry, radius: float) -> MultiPolygon:
    """Minkowski difference of a region with a disk of the given radius."""
    if radius < 0:
        raise ValueError("erosion radius must be non-negative")
    if radius <= EPS_GEOM:
        return as_region(region)
    out = shapely.buffer(region, -radius, quad_segs=_quad_segs(radius), join_style="round")
    return _drop_slivers(out)


def rotate(region: BaseGeometry, angle: float, pivot: Point = (0.0, 0.0)) -> BaseGeometry:
    """Rigid rotation by ``angle`` radians (counterclockwise) about ``pivot``."""
    if angle == 0:
        return region
    return affinity.rotate(region, angle, origin=pivot, use_radians=True)


def rectangle(center: Point, width: float, height: float, theta: float) -> Polygon:
    """Rectangle whose ``width`` side runs along direction ``theta``."""
    cx, cy = center
    c, s = math.cos(theta), math.sin(theta)
    hw, hh = width / 2.0, height / 2.0
    corners = [(-hw, -hh), (hw, -hh), (hw, hh), (-hw, hh)]
    return Polygon([(cx + c * u - s * v, cy + s * u + c * v) for u, v in corners])


def bounding_box(region: BaseGeometry) -> Polygon:
    return box(*region.bounds)


def extent_along(region: BaseGeometry, direction: float) -> tuple[float, float]:
    """(min, max) of the region's vertices projected onto a unit direction."""
    c, s = math.cos(direction), math.sin(direction)
    xy = shapely.get_coordinates(region)
    if len(xy) == 0:
        return 0.0, 0.0
    proj = xy[:, 0] * c + xy[:, 1] * s
    return float(proj.min()), float(proj.max())


def ring_coords(ring) -> list[Point]:
    """Vertices of a shapely ring without the closing duplicate."""
    return [(float(x), float(y)) for x, y in list(ring.coords)[:-1]]
