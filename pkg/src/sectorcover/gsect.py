"""Greedy sector decomposition and local sector merging."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from shapely.geometry import MultiPolygon
from shapely.geometry.base import BaseGeometry

from . import geometry as geo
from .orientations import OrientationSet
from .rect_search import Sector, largest_rect_at

logger = logging.getLogger(__name__)

DEFAULT_TOOL_WIDTH = 0.8


@dataclass(frozen=True)
class DecompositionConfig:
    """Parameters of the greedy decomposition.

    Attributes:
        gamma: minimum fraction of the environment area to cover.
        beta: erosion radius applied to a chosen sector before it is removed
            from the working region; 0 gives interior-disjoint sectors.
        max_sectors: hard cap on greedy iterations.
        min_sector_area: stop once the best candidate is smaller than this.
        cell_size: raster resolution of the rectangle search.
    """

    gamma: float = 0.95
    beta: float = DEFAULT_TOOL_WIDTH / 4
    max_sectors: int = 100
    min_sector_area: float = DEFAULT_TOOL_WIDTH**2
    cell_size: float = DEFAULT_TOOL_WIDTH / 4

    def __post_init__(self):
        if not 0 < self.gamma <= 1:
            raise ValueError(f"gamma must lie in (0, 1], got {self.gamma}")
        if self.beta < 0:
            raise ValueError(f"beta must be non-negative, got {self.beta}")
        if self.max_sectors < 1:
            raise ValueError("max_sectors must be at least 1")
        if self.min_sector_area <= 0:
            raise ValueError("min_sector_area must be positive")
        if self.cell_size <= 0:
            raise ValueError("cell_size must be positive")

    @classmethod
    def for_tool(cls, tool_width: float, **overrides) -> "DecompositionConfig":
        """Defaults scaled to a tool width: beta = cell = l/4, min area = l^2."""
        params = dict(
            beta=tool_width / 4,
            min_sector_area=tool_width**2,
            cell_size=tool_width / 4,
        )
        params.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**params)


@dataclass(frozen=True)
class CoverageRegion:
    """A sector to be covered by one lawnmower path along ``theta``."""

    shape: BaseGeometry
    theta: float
    is_merged: bool = False
    sector: Sector | None = None

    @property
    def area(self) -> float:
        return geo.area(self.shape)

    @classmethod
    def from_sector(cls, sector: Sector) -> "CoverageRegion":
        return cls(sector.polygon(), sector.theta, False, sector)


@dataclass(frozen=True)
class CoverageStats:
    coverage_ratio: float
    overlap_alpha: float
    widest_width: float
    sector_count: int


@dataclass(frozen=True)
class Candidate:
    theta: float
    sector: Sector
    gain: float


@dataclass
class Decomposition:
    sectors: list[CoverageRegion]
    covered: MultiPolygon
    stats: CoverageStats
    target_reached: bool = True
    history: list[list[Candidate]] = field(default_factory=list, compare=False, repr=False)

    @property
    def status(self) -> str:
        return "ok" if self.target_reached else "target unreached"


def _width_of(region: CoverageRegion) -> float:
    if region.sector is not None and not region.is_merged:
        return region.sector.width
    lo, hi = geo.extent_along(region.shape, region.theta)
    return hi - lo


def compute_stats(sectors: Sequence[CoverageRegion], env: BaseGeometry) -> tuple[MultiPolygon, CoverageStats]:
    """Recompute covered area and coverage statistics from scratch."""
    env_area = geo.area(env)
    covered = geo.boolean(geo.union_all(s.shape for s in sectors), env, "intersection")
    cov = geo.area(covered)
    total = sum(geo.area(s.shape) for s in sectors)
    ratio = min(1.0, cov / env_area) if env_area > 0 else 0.0
    alpha = max(0.0, (total - cov) / env_area) if env_area > 0 else 0.0
    widest = max((_width_of(s) for s in sectors), default=0.0)
    return covered, CoverageStats(ratio, alpha, widest, len(sectors))


def marginal_gain(covered: BaseGeometry, candidate: BaseGeometry, env: BaseGeometry) -> float:
    """Area of ``candidate`` inside ``env`` not yet in ``covered``."""
    inside = geo.boolean(candidate, env, "intersection")
    if covered is None or covered.is_empty:
        return geo.area(inside)
    return geo.area(geo.boolean(inside, covered, "difference"))


def _pick(cands: list[Candidate], tol: float) -> Candidate:
    best = max(c.gain for c in cands)
    tied = [c for c in cands if c.gain >= best - tol]
    return min(tied, key=lambda c: (c.theta, c.sector.center[0], c.sector.center[1]))


def gsect(
    env: BaseGeometry,
    orientations: OrientationSet | Sequence[float],
    cfg: DecompositionConfig = DecompositionConfig(),
) -> Decomposition:
    """Greedy rectangular sector decomposition.

    Each round searches the uncovered working region for its largest
    rectangle at every candidate orientation, keeps the one adding the most
    new area (ties: smallest orientation, then lowest center), erodes it by
    ``cfg.beta`` and carves the eroded shape out of the working region. If
    no candidate from the working region adds new area, the round searches
    the uncovered part of the environment instead. Stops
    when the covered fraction reaches ``cfg.gamma``, after
    ``cfg.max_sectors`` rounds, or when nothing of at least
    ``cfg.min_sector_area`` fits. The returned decomposition has
    ``target_reached`` False in the latter two cases.
    """
    thetas = sorted(float(t) % math.pi for t in orientations)
    if not thetas:
        raise ValueError("at least one orientation is required")
    env_area = geo.area(env)
    target = cfg.gamma * env_area
    tol = 1e-9 * max(env_area, 1.0)

    working = geo.as_region(env)
    covered: BaseGeometry = MultiPolygon()
    chosen: list[CoverageRegion] = []
    history: list[list[Candidate]] = []
    covered_area = 0.0

    def candidates(region):
        out = []
        for theta in thetas:
            s = largest_rect_at(region, theta, cfg.cell_size)
            if s is not None:
                out.append(Candidate(theta, s, marginal_gain(covered, s.polygon(), env)))
        return out

    while covered_area < target - tol and len(chosen) < cfg.max_sectors:
        cands = candidates(working)
        if cfg.beta > 0 and (not cands or _pick(cands, tol).gain <= tol):
            # overlap strips can hold the largest rectangles while adding
            # nothing new; fall back to the uncovered part of the environment
            logger.debug("working region yields no new area; searching uncovered region")
            cands = candidates(geo.boolean(env, covered, "difference"))
        if not cands:
            logger.info("no candidate rectangle fits the working region")
            break
        best = _pick(cands, tol)
        if best.sector.area < cfg.min_sector_area:
            logger.info("best candidate %.4g m^2 is below min_sector_area", best.sector.area)
            break
        if best.gain <= tol:
            logger.info("best candidate adds no new area")
            break
        history.append(cands)
        region = CoverageRegion.from_sector(best.sector)
        chosen.append(region)
        covered = geo.boolean(covered, geo.boolean(region.shape, env, "intersection"), "union")
        covered_area = geo.area(covered)
        working = geo.boolean(working, geo.erode(region.shape, cfg.beta), "difference")
        logger.debug("sector %d: gain %.4f, covered %.4f", len(chosen), best.gain, covered_area / env_area)

    covered, stats = compute_stats(chosen, env)
    reached = stats.coverage_ratio * env_area >= target - tol
    if not reached:
        logger.warning("coverage target %.3f unreached (achieved %.4f)", cfg.gamma, stats.coverage_ratio)
    return Decomposition(chosen, covered, stats, reached, history)


def count_lines(shape: BaseGeometry, theta: float, tool_width: float) -> int:
    """Coverage lines needed along ``theta``: ceil(perpendicular extent / l)."""
    lo, hi = geo.extent_along(shape, theta + math.pi / 2)
    return max(1, math.ceil((hi - lo) / tool_width - 1e-9))


def merge_sectors(
    decomp: Decomposition,
    env: BaseGeometry,
    tool_width: float = DEFAULT_TOOL_WIDTH,
    adjacency_tol: float | None = None,
) -> Decomposition:
    """Fold sectors into a neighbour whose lawnmower path can absorb them.

    Sectors are visited smallest first. A sector merges into the largest
    adjacent sector whose orientation covers the union with no more lines
    than the two need separately; the union keeps the neighbour's
    orientation. Repeats until no merge applies.
    """
    eps_adj = tool_width / 10 if adjacency_tol is None else adjacency_tol
    regions = list(decomp.sectors)

    merged_any = True
    while merged_any:
        merged_any = False
        order = sorted(range(len(regions)), key=lambda i: (regions[i].area, i))
        for i in order:
            q = regions[i]
            lines_q = count_lines(q.shape, q.theta, tool_width)
            options = []
            for j, adj in enumerate(regions):
                if j == i or q.shape.distance(adj.shape) > eps_adj:
                    continue
                union = geo.union_all([q.shape, adj.shape])
                if count_lines(union, adj.theta, tool_width) <= lines_q + count_lines(adj.shape, adj.theta, tool_width):
                    options.append((adj.area, -j, j, union))
            if not options:
                continue
            _, _, j, union = max(options, key=lambda o: (o[0], o[1]))
            regions[j] = CoverageRegion(union, regions[j].theta, True, None)
            del regions[i]
            merged_any = True
            break

    covered, stats = compute_stats(regions, env)
    return Decomposition(regions, covered, stats, decomp.target_reached, decomp.history)


def greedy_cover(
    candidates: Sequence[BaseGeometry],
    env: BaseGeometry,
    gamma: float,
    area_fn: Callable[[Sequence[BaseGeometry]], float] | None = None,
) -> list[int]:
    """Greedy set cover over an explicit finite candidate list.

    Returns candidate indices in pick order. Ties go to the lowest index.

    Raises:
        ValueError: if the candidates cannot reach ``gamma`` coverage.
    """
    if area_fn is None:
        def area_fn(shapes):
            return geo.area(geo.boolean(geo.union_all(shapes), env, "intersection"))
    target = gamma * geo.area(env)
    tol = 1e-9 * max(geo.area(env), 1.0)
    picked: list[int] = []
    current = 0.0
    while current < target - tol:
        base = [candidates[k] for k in picked]
        best, best_gain = None, tol
        for k, c in enumerate(candidates):
            if k in picked:
                continue
            g = area_fn(base + [c]) - current
            if g > best_gain + tol:
                best, best_gain = k, g
        if best is None:
            raise ValueError("candidates cannot reach the coverage target")
        picked.append(best)
        current = area_fn([candidates[k] for k in picked])
    return picked
