"""Boustrophedon cell decomposition with a vertical sweep line.

The environment is cut into slabs at every vertex x-coordinate; within a slab
each connected piece is a trapezoid. Neighbouring pieces are glued into one
cell when the sweep line passes between them without an event, i.e. the left
piece's right side and the right piece's left side are the same interval and
neither touches any other piece. Anything else (a reflex vertex opening or
closing a passage, a vertical wall) starts a new cell.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import shapely
from shapely.geometry import MultiPolygon, Polygon, box
from shapely.geometry.base import BaseGeometry

from . import geometry as geo

_TOL = 1e-7


@dataclass(frozen=True)
class BcdCell:
    left_x: float
    right_x: float
    shape: Polygon

    @property
    def area(self) -> float:
        return self.shape.area


def _side(piece: Polygon, x: float) -> tuple[float, float] | None:
    xy = shapely.get_coordinates(piece)
    on = np.abs(xy[:, 0] - x) <= _TOL
    if not on.any():
        return None
    ys = xy[on, 1]
    return float(ys.min()), float(ys.max())


def _find(parent: list[int], i: int) -> int:
    while parent[i] != i:
        parent[i] = parent[parent[i]]
        i = parent[i]
    return i


def bcd_decompose(env: BaseGeometry) -> list[BcdCell]:
    """Split ``env`` into x-monotone cells, ordered by left x then lowest y."""
    cells: list[BcdCell] = []
    for comp in geo.as_region(env).geoms:
        cells.extend(_decompose_polygon(comp))
    cells.sort(key=lambda c: (c.left_x, c.shape.bounds[1], c.right_x))
    return cells


def _decompose_polygon(poly: Polygon) -> list[BcdCell]:
    xs = np.unique(np.round(shapely.get_coordinates(poly)[:, 0], 12))
    minx, miny, maxx, maxy = poly.bounds
    pieces: list[tuple[int, Polygon]] = []  # (slab index, piece)
    for s, (x0, x1) in enumerate(zip(xs, xs[1:])):
        strip = box(x0, miny - 1.0, x1, maxy + 1.0)
        for part in geo.boolean(poly, strip, "intersection").geoms:
            pieces.append((s, part))

    parent = list(range(len(pieces)))
    by_slab: dict[int, list[int]] = {}
    for k, (s, _) in enumerate(pieces):
        by_slab.setdefault(s, []).append(k)

    for s in range(len(xs) - 2):
        x = xs[s + 1]
        lefts = [(k, _side(pieces[k][1], x)) for k in by_slab.get(s, [])]
        rights = [(k, _side(pieces[k][1], x)) for k in by_slab.get(s + 1, [])]
        lefts = [(k, iv) for k, iv in lefts if iv is not None]
        rights = [(k, iv) for k, iv in rights if iv is not None]

        def overlaps(a, b):
            return min(a[1], b[1]) - max(a[0], b[0]) > _TOL

        for kl, il in lefts:
            partners = [(kr, ir) for kr, ir in rights if overlaps(il, ir)]
            if len(partners) != 1:
                continue
            kr, ir = partners[0]
            if sum(overlaps(ir, other) for _, other in lefts) != 1:
                continue
            if abs(il[0] - ir[0]) <= _TOL and abs(il[1] - ir[1]) <= _TOL:
                parent[_find(parent, kl)] = _find(parent, kr)

    groups: dict[int, list[int]] = {}
    for k in range(len(pieces)):
        groups.setdefault(_find(parent, k), []).append(k)
    cells = []
    for members in groups.values():
        shape = geo.union_all(pieces[k][1] for k in members)
        if isinstance(shape, MultiPolygon) and len(shape.geoms) == 1:
            shape = shape.geoms[0]
        x0, _, x1, _ = shape.bounds
        cells.append(BcdCell(float(x0), float(x1), shape))
    return cells


def bcd_sector_count(env: BaseGeometry) -> int:
    return len(bcd_decompose(env))
