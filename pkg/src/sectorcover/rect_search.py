"""Largest inscribed rectangle at a fixed orientation.

The region is rasterized into cells that lie certainly inside it, the largest
all-ones block of cells is found, and the block is then certified against the
continuous region (shrinking it a cell per side when a boundary feature slips
between the sample points).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import shapely
from shapely.geometry import Polygon, box
from shapely.geometry.base import BaseGeometry

from .geometry import EPS_GEOM, Point, check_region, rectangle, rotate

CONTAINMENT_RTOL = 1e-6
MAX_SHRINK_STEPS = 4


@dataclass(frozen=True)
class Sector:
    """Oriented rectangle; ``width`` is the long side and runs along ``theta``."""

    center: Point
    width: float
    height: float
    theta: float

    def __post_init__(self):
        if not (self.width >= self.height > 0):
            raise ValueError(f"need width >= height > 0, got {self.width} x {self.height}")

    @property
    def area(self) -> float:
        return self.width * self.height

    def polygon(self) -> Polygon:
        return rectangle(self.center, self.width, self.height, self.theta)

    def corners(self) -> list[Point]:
        return [tuple(c) for c in list(self.polygon().exterior.coords)[:-1]]


@dataclass(frozen=True)
class RasterGrid:
    origin: Point
    cell_size: float
    occupancy: np.ndarray  # bool, shape (rows, cols); row 0 at the bottom

    @property
    def shape(self) -> tuple[int, int]:
        return self.occupancy.shape

    def cell_box(self, rect: "CellRect") -> Polygon:
        x0 = self.origin[0] + rect.col * self.cell_size
        y0 = self.origin[1] + rect.row * self.cell_size
        return box(x0, y0, x0 + rect.n_cols * self.cell_size, y0 + rect.n_rows * self.cell_size)


class CellRect(NamedTuple):
    row: int
    col: int
    n_rows: int
    n_cols: int

    @property
    def area(self) -> int:
        return self.n_rows * self.n_cols


def rasterize(region: BaseGeometry, cell_size: float) -> RasterGrid | None:
    """Mark cells whose center and four corners lie in the region.

    Returns None for an empty region.
    """
    if cell_size <= 0:
        raise ValueError("cell_size must be positive")
    if region.is_empty:
        return None
    minx, miny, maxx, maxy = region.bounds
    cols = max(1, math.ceil((maxx - minx) / cell_size - 1e-9))
    rows = max(1, math.ceil((maxy - miny) / cell_size - 1e-9))
    # tolerance pad so grid nodes lying on the boundary count as inside
    probe = shapely.buffer(region, EPS_GEOM, join_style="mitre")
    shapely.prepare(probe)

    xs = minx + cell_size * np.arange(cols + 1)
    ys = miny + cell_size * np.arange(rows + 1)
    gx, gy = np.meshgrid(xs, ys)
    corners = shapely.contains_xy(probe, gx, gy)
    cx, cy = np.meshgrid(xs[:-1] + cell_size / 2, ys[:-1] + cell_size / 2)
    centers = shapely.contains_xy(probe, cx, cy)
    occ = centers & corners[:-1, :-1] & corners[:-1, 1:] & corners[1:, :-1] & corners[1:, 1:]
    return RasterGrid((float(minx), float(miny)), float(cell_size), occ)


def max_rectangle_cells(occupancy: np.ndarray) -> CellRect | None:
    """Largest all-ones block via the row-wise height/left/right recurrence.

    For every row, each column carries the height of its run of ones ending
    at that row and the widest span over which that height can be extended;
    both are updated with vectorized prefix max/min scans. The first maximum
    in (row, column) scan order wins.
    """
    occ = np.asarray(occupancy, dtype=bool)
    rows, cols = occ.shape
    if rows == 0 or cols == 0 or not occ.any():
        return None
    idx = np.arange(cols)
    height = np.zeros(cols, dtype=np.int64)
    left = np.zeros(cols, dtype=np.int64)
    right = np.full(cols, cols, dtype=np.int64)
    best, best_rect = 0, None
    for r in range(rows):
        line = occ[r]
        height = np.where(line, height + 1, 0)
        # first column of the current run of ones, and one past its end
        run_left = np.maximum.accumulate(np.where(line, 0, idx + 1))
        run_right = np.minimum.accumulate(np.where(line, cols, idx)[::-1])[::-1]
        left = np.where(line, np.maximum(left, run_left), 0)
        right = np.where(line, np.minimum(right, run_right), cols)
        areas = height * (right - left)
        j = int(np.argmax(areas))
        if areas[j] > best:
            best = int(areas[j])
            h = int(height[j])
            best_rect = CellRect(r - h + 1, int(left[j]), h, int(right[j] - left[j]))
    return best_rect


def brute_force_rect_oracle(grid: RasterGrid | np.ndarray) -> CellRect | None:
    """Exact largest all-ones block using a monotone stack per histogram row."""
    occ = grid.occupancy if isinstance(grid, RasterGrid) else np.asarray(grid, dtype=bool)
    rows, cols = occ.shape
    heights = [0] * cols
    best, best_rect = 0, None
    for r in range(rows):
        for c in range(cols):
            heights[c] = heights[c] + 1 if occ[r, c] else 0
        stack: list[int] = []
        for c in range(cols + 1):
            h = heights[c] if c < cols else 0
            while stack and heights[stack[-1]] >= h:
                top = stack.pop()
                left = stack[-1] + 1 if stack else 0
                a = heights[top] * (c - left)
                if a > best:
                    best = a
                    best_rect = CellRect(r - heights[top] + 1, left, heights[top], c - left)
            if c < cols:
                stack.append(c)
    return best_rect


def _contained(rect: Polygon, region: BaseGeometry) -> bool:
    outside = shapely.difference(rect, region).area
    return outside < CONTAINMENT_RTOL * rect.area


def _certify(cand: Polygon, region: BaseGeometry, cell_size: float) -> Polygon | None:
    for _ in range(MAX_SHRINK_STEPS + 1):
        if cand.is_empty or cand.area <= 0:
            return None
        if _contained(cand, region):
            return cand
        minx, miny, maxx, maxy = cand.bounds
        residual = shapely.difference(cand, region)
        rx0, ry0, rx1, ry1 = residual.bounds
        # pull in only the sides the residual touches
        step = [
            rx0 < minx + cell_size,
            ry0 < miny + cell_size,
            rx1 > maxx - cell_size,
            ry1 > maxy - cell_size,
        ]
        if not any(step):
            step = [True] * 4
        minx += cell_size * step[0]
        miny += cell_size * step[1]
        maxx -= cell_size * step[2]
        maxy -= cell_size * step[3]
        if maxx - minx <= EPS_GEOM or maxy - miny <= EPS_GEOM:
            return None
        cand = box(minx, miny, maxx, maxy)
    return None


def _sector_from_box(rect: Polygon, theta: float, pivot: Point) -> Sector:
    minx, miny, maxx, maxy = rect.bounds
    dx, dy = maxx - minx, maxy - miny
    c = ((minx + maxx) / 2.0, (miny + maxy) / 2.0)
    cg = rotate(shapely.Point(c), theta, pivot) if theta else shapely.Point(c)
    if dx >= dy:
        return Sector((cg.x, cg.y), dx, dy, theta % math.pi)
    return Sector((cg.x, cg.y), dy, dx, (theta + math.pi / 2.0) % math.pi)


def largest_axis_rect(region: BaseGeometry, cell_size: float) -> Sector | None:
    """Largest certified axis-parallel rectangle inside ``region``."""
    return largest_rect_at(region, 0.0, cell_size)


def largest_rect_at(
    region: BaseGeometry,
    theta: float,
    cell_size: float,
    pivot: Point = (0.0, 0.0),
) -> Sector | None:
    """Largest certified rectangle with sides along ``theta`` and ``theta + pi/2``.

    Raises:
        GeometryError: if ``region`` is not a valid polygonal region.
    """
    check_region(region)
    frame = rotate(region, -theta, pivot)
    grid = rasterize(frame, cell_size)
    if grid is None:
        return None
    cells = max_rectangle_cells(grid.occupancy)
    if cells is None:
        return None
    rect = _certify(grid.cell_box(cells), frame, cell_size)
    if rect is None:
        return None
    return _sector_from_box(rect, theta, pivot)


def contains_certificate(sector: Sector, region: BaseGeometry) -> bool:
    """True when ``sector`` lies inside ``region`` up to the area tolerance."""
    return _contained(sector.polygon(), region)
