"""Serpentine (lawnmower) coverage paths for single sectors."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import shapely
from shapely.geometry import LineString, MultiPoint
from shapely.geometry.base import BaseGeometry

from . import geometry as geo
from .gsect import CoverageRegion

VARIANTS = ("A-forward", "A-reverse", "B-forward", "B-reverse")


@dataclass(frozen=True)
class LawnmowerPath:
    waypoints: tuple[tuple[float, float], ...]
    variant: str
    sector_index: int
    n_lines: int

    @property
    def length(self) -> float:
        return polyline_length(self.waypoints)

    @property
    def entry(self) -> tuple[float, float]:
        return self.waypoints[0]

    @property
    def exit(self) -> tuple[float, float]:
        return self.waypoints[-1]


def polyline_length(points) -> float:
    return float(sum(math.dist(a, b) for a, b in zip(points, points[1:])))


def lemma1_bound(w: float, h: float, tool_width: float) -> float:
    """Upper bound w * ceil(h / l) on the length of a rectangle's lawnmower path."""
    if tool_width <= 0:
        raise ValueError("tool_width must be positive")
    return w * math.ceil(h / tool_width - 1e-12)


def sweep_offsets(lo: float, hi: float, tool_width: float) -> list[float]:
    """Perpendicular offsets of the coverage lines across [lo, hi].

    Lines sit l/2 in from ``lo`` and one tool width apart; the last one is
    clamped to l/2 in from ``hi``. A band no wider than the tool gets one
    line through its middle.
    """
    h = hi - lo
    if h <= tool_width + 1e-12:
        return [(lo + hi) / 2.0]
    n = math.ceil(h / tool_width - 1e-9)
    offs = [lo + tool_width / 2 + k * tool_width for k in range(n - 1)]
    offs.append(hi - tool_width / 2)
    return offs


def _line_intervals(frame: BaseGeometry, y: float, x0: float, x1: float, inset: float) -> list[tuple[float, float]]:
    cut = shapely.intersection(frame, LineString([(x0 - 1.0, y), (x1 + 1.0, y)]))
    spans = []
    for part in getattr(cut, "geoms", [cut]):
        if part.is_empty:
            continue
        xs = [c[0] for c in part.coords]
        a, b = min(xs), max(xs)
        if b - a > 2 * inset:
            spans.append((a + inset, b - inset))
        else:
            spans.append(((a + b) / 2.0,) * 2)
    spans.sort()
    # touching pieces of one chord come back separately from shapely
    merged: list[tuple[float, float]] = []
    for a, b in spans:
        if merged and a <= merged[-1][1] + 1e-12:
            merged[-1] = (merged[-1][0], max(b, merged[-1][1]))
        else:
            merged.append((a, b))
    return merged


def _serpentine(lines: list[list[tuple[float, float]]], offsets: list[float], flip_first: bool) -> list[tuple[float, float]]:
    pts: list[tuple[float, float]] = []
    for k, (y, spans) in enumerate(zip(offsets, lines)):
        rightward = (k % 2 == 0) != flip_first
        seq = spans if rightward else [(b, a) for a, b in reversed(spans)]
        for a, b in seq:
            for p in ((a, y), (b, y)):
                if not pts or pts[-1] != p:
                    pts.append(p)
    return pts


def generate_lawnmower(
    region: CoverageRegion,
    tool_width: float,
    sector_index: int = 0,
) -> list[LawnmowerPath]:
    """The four directed lawnmower paths covering ``region`` along its theta.

    Variant A starts its first line heading along theta, variant B against
    it; each is also emitted reversed. Lines run l/2 inside the region's
    extent; for non-rectangular regions a line may break into several spans,
    visited in order along the sweep direction.
    """
    if tool_width <= 0:
        raise ValueError("tool_width must be positive")
    theta = region.theta
    frame = geo.rotate(region.shape, -theta)
    x0, y0, x1, y1 = frame.bounds
    offsets = sweep_offsets(y0, y1, tool_width)
    if len(offsets) == 1 and x1 - x0 <= tool_width + 1e-12:
        # thinner than the tool both ways: visit the center
        c = ((x0 + x1) / 2, (y0 + y1) / 2)
        lines = [[(c[0], c[0])]]
        offsets = [c[1]]
    else:
        lines = [_line_intervals(frame, y, x0, x1, tool_width / 2) for y in offsets]
        keep = [k for k, spans in enumerate(lines) if spans]
        offsets = [offsets[k] for k in keep]
        lines = [lines[k] for k in keep]

    c, s = math.cos(theta), math.sin(theta)

    def world(pts):
        return tuple((c * x - s * y, s * x + c * y) for x, y in pts)

    paths = []
    for name, flip in (("A", False), ("B", True)):
        fwd = world(_serpentine(lines, offsets, flip))
        paths.append(LawnmowerPath(fwd, f"{name}-forward", sector_index, len(offsets)))
        paths.append(LawnmowerPath(fwd[::-1], f"{name}-reverse", sector_index, len(offsets)))
    return paths


def sample_region(region: BaseGeometry, spacing: float) -> np.ndarray:
    """Grid points at ``spacing`` inside ``region`` (n x 2 array)."""
    if region.is_empty:
        return np.empty((0, 2))
    minx, miny, maxx, maxy = region.bounds
    xs = np.arange(minx + spacing / 2, maxx, spacing)
    ys = np.arange(miny + spacing / 2, maxy, spacing)
    gx, gy = np.meshgrid(xs, ys)
    inside = shapely.contains_xy(region, gx, gy)
    return np.column_stack([gx[inside], gy[inside]])


def coverage_fraction(region: BaseGeometry, path: LawnmowerPath, tool_width: float) -> float:
    """Share of samples of the l/2-inset region within l/2 of the path.

    Samples are taken on an l/4 grid; returns 1.0 when the inset is empty.
    """
    core = geo.erode(region, tool_width / 2 * (1 - 1e-9))
    pts = sample_region(core, tool_width / 4)
    if len(pts) == 0:
        return 1.0
    wp = path.waypoints
    track = LineString(wp) if len(wp) > 1 else MultiPoint(wp)
    d = shapely.distance(track, shapely.points(pts))
    return float(np.mean(d <= tool_width / 2 + 1e-9))
