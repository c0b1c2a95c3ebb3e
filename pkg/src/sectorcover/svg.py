"""Minimal SVG rendering of environments, sectors and coverage plans."""

from __future__ import annotations

import math
from typing import Iterable, Sequence

from shapely.geometry.base import BaseGeometry

from . import geometry as geo

PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f",
)


def _fmt(v: float) -> str:
    return f"{v:.4f}".rstrip("0").rstrip(".")


def _ring_d(coords) -> str:
    pts = list(coords)
    head = f"M{_fmt(pts[0][0])},{_fmt(pts[0][1])}"
    return head + "".join(f"L{_fmt(x)},{_fmt(y)}" for x, y in pts[1:]) + "Z"


def region_path(region: BaseGeometry, **attrs) -> str:
    d = " ".join(
        _ring_d(ring.coords)
        for poly in geo.as_region(region).geoms
        for ring in [poly.exterior, *poly.interiors]
    )
    extra = " ".join(f'{k.replace("_", "-")}="{v}"' for k, v in attrs.items())
    return f'<path d="{d}" fill-rule="evenodd" {extra}/>'


def polyline(points: Sequence[Sequence[float]], **attrs) -> str:
    pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in points)
    extra = " ".join(f'{k.replace("_", "-")}="{v}"' for k, v in attrs.items())
    return f'<polyline points="{pts}" fill="none" {extra}/>'


class Canvas:
    """SVG document in world coordinates (y up), framed on a region."""

    def __init__(self, frame: BaseGeometry, margin: float = 0.05):
        minx, miny, maxx, maxy = frame.bounds
        mx, my = (maxx - minx) * margin, (maxy - miny) * margin
        self.box = (minx - mx, miny - my, maxx - minx + 2 * mx, maxy - miny + 2 * my)
        self.scale = max(self.box[2], self.box[3])
        self.items: list[str] = []

    @property
    def stroke(self) -> str:
        return _fmt(self.scale / 400)

    def add(self, item: str) -> None:
        self.items.append(item)

    def extend(self, items: Iterable[str]) -> None:
        self.items.extend(items)

    def arrow(self, origin, theta: float, length: float, color: str) -> None:
        x, y = origin
        tx, ty = x + length * math.cos(theta), y + length * math.sin(theta)
        head = length * 0.25
        left = (tx - head * math.cos(theta - 0.4), ty - head * math.sin(theta - 0.4))
        right = (tx - head * math.cos(theta + 0.4), ty - head * math.sin(theta + 0.4))
        self.add(polyline([(x, y), (tx, ty)], stroke=color, stroke_width=self.stroke))
        self.add(polyline([left, (tx, ty), right], stroke=color, stroke_width=self.stroke))

    def render(self) -> str:
        x, y, w, h = self.box
        # flip y so that world coordinates read upward
        return (
            '<svg xmlns="http://www.w3.org/2000/svg" '
            f'viewBox="{_fmt(x)} {_fmt(-(y + h))} {_fmt(w)} {_fmt(h)}">\n'
            '<g transform="scale(1,-1)">\n' + "\n".join(self.items) + "\n</g>\n</svg>\n"
        )


def decomposition_svg(env: BaseGeometry, regions) -> str:
    cv = Canvas(env)
    cv.add(region_path(env, fill="#d9d9d9", stroke="#555555", stroke_width=cv.stroke))
    for k, r in enumerate(regions):
        color = PALETTE[k % len(PALETTE)]
        cv.add(region_path(r.shape, fill=color, fill_opacity="0.35", stroke=color, stroke_width=cv.stroke))
    for k, r in enumerate(regions):
        c = r.shape.representative_point() if r.is_merged else r.shape.centroid
        cv.arrow((c.x, c.y), r.theta, cv.scale / 25, "#000000")
    return cv.render()


def plan_svg(env: BaseGeometry, plan) -> str:
    cv = Canvas(env)
    cv.add(region_path(env, fill="#eeeeee", stroke="#555555", stroke_width=cv.stroke))
    for k, lm in enumerate(plan.lawnmowers):
        color = PALETTE[plan.order[k] % len(PALETTE)]
        cv.add(polyline(lm.waypoints, stroke=color, stroke_width=cv.stroke))
    for leg in plan.transitions:
        cv.add(polyline(leg, stroke="#000000", stroke_width=cv.stroke, stroke_dasharray=_fmt(cv.scale / 100)))
    if plan.lawnmowers:
        sx, sy = plan.lawnmowers[0].entry
        cv.add(f'<circle cx="{_fmt(sx)}" cy="{_fmt(sy)}" r="{_fmt(cv.scale / 80)}" fill="#2ca02c"/>')
    return cv.render()
