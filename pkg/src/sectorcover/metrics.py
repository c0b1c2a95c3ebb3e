"""Coverage bounds, an exhaustive minimum-cover oracle and the run report."""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass
from typing import Sequence

from shapely.geometry.base import BaseGeometry

from . import geometry as geo
from .gsect import Decomposition, DecompositionConfig
from .rect_search import Sector
from .touring import CoveragePlan, RobotModel

ORACLE_MAX_CANDIDATES = 16


class UnboundedFactorError(ValueError):
    """The greedy approximation factor diverges at gamma = 1."""


class InfeasibleCoverError(ValueError):
    """No subset of the candidates reaches the requested coverage."""


def approx_factor(gamma: float) -> float:
    """Greedy cover size ratio bound 1 + ln(1 / (1 - gamma))."""
    if gamma >= 1:
        raise UnboundedFactorError("approximation factor is unbounded for gamma = 1")
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    return 1.0 + math.log(1.0 / (1.0 - gamma))


def _shape(c) -> BaseGeometry:
    return c.polygon() if isinstance(c, Sector) else c


def brute_force_min_cover(
    candidates: Sequence[Sector | BaseGeometry],
    env: BaseGeometry,
    gamma: float,
) -> tuple[int, ...]:
    """Smallest subset of candidates covering ``gamma`` of ``env``.

    Subsets are enumerated by increasing size; the first feasible one in
    lexicographic index order is returned.

    Raises:
        InfeasibleCoverError: if even all candidates fall short.
    """
    if len(candidates) > ORACLE_MAX_CANDIDATES:
        raise ValueError(f"oracle supports at most {ORACLE_MAX_CANDIDATES} candidates")
    shapes = [geo.boolean(_shape(c), env, "intersection") for c in candidates]
    env_area = geo.area(env)
    need = gamma * env_area - 1e-9 * max(env_area, 1.0)
    for k in range(1, len(shapes) + 1):
        for subset in itertools.combinations(range(len(shapes)), k):
            if geo.area(geo.union_all(shapes[i] for i in subset)) >= need:
                return subset
    raise InfeasibleCoverError(f"candidates cannot cover {gamma:.3g} of the environment")


def lower_bound_optimal_length(env: BaseGeometry, robot: RobotModel) -> float:
    """Any coverage path sweeps at most l per meter, so L* >= |W| / l."""
    return geo.area(env) / robot.tool_width


def prop1_rhs(optimal_length: float, alpha: float, widest_width: float, n_sectors: int) -> float:
    """Upper bound (2 + alpha) L* + (1 + sqrt 2) w' |S| on the touring path length."""
    return (2.0 + alpha) * optimal_length + (1.0 + math.sqrt(2.0)) * widest_width * n_sectors


@dataclass(frozen=True)
class MetricsReport:
    sector_count: int
    num_coverage_lines: int
    percent_area: float
    cost_seconds: float
    path_length: float
    overlap_alpha: float
    widest_width: float
    approx_factor_bound: float | None
    prop1_rhs: float | None
    lawnmower_time: float = 0.0
    transition_time: float = 0.0
    solver: str = "none"
    tour: str = "open"

    def to_dict(self) -> dict:
        d = asdict(self)
        # short column names with units, stable for downstream consumers
        return {
            "sector_count": d["sector_count"],
            "lines": d["num_coverage_lines"],
            "percent_area": d["percent_area"],
            "cost_s": d["cost_seconds"],
            "path_length_m": d["path_length"],
            "overlap_alpha": d["overlap_alpha"],
            "widest_width_m": d["widest_width"],
            "approx_factor_bound": d["approx_factor_bound"],
            "prop1_rhs_m": d["prop1_rhs"],
            "lawnmower_time_s": d["lawnmower_time"],
            "transition_time_s": d["transition_time"],
            "gtsp_solver": d["solver"],
            "tour": d["tour"],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MetricsReport":
        return cls(
            sector_count=d["sector_count"],
            num_coverage_lines=d["lines"],
            percent_area=d["percent_area"],
            cost_seconds=d["cost_s"],
            path_length=d["path_length_m"],
            overlap_alpha=d["overlap_alpha"],
            widest_width=d["widest_width_m"],
            approx_factor_bound=d["approx_factor_bound"],
            prop1_rhs=d["prop1_rhs_m"],
            lawnmower_time=d["lawnmower_time_s"],
            transition_time=d["transition_time_s"],
            solver=d["gtsp_solver"],
            tour=d["tour"],
        )


def compile_report(
    decomp: Decomposition,
    plan: CoveragePlan | None,
    cfg: DecompositionConfig,
    robot: RobotModel,
    optimal_length: float | None = None,
) -> MetricsReport:
    """Summarize a decomposition and its plan.

    ``prop1_rhs`` is filled only when the optimal coverage length is known
    exactly and passed as ``optimal_length``.
    """
    stats = decomp.stats
    lines = sum(p.n_lines for p in plan.lawnmowers) if plan is not None else 0
    try:
        factor = approx_factor(cfg.gamma)
    except UnboundedFactorError:
        factor = None
    rhs = None
    if optimal_length is not None:
        rhs = prop1_rhs(optimal_length, stats.overlap_alpha, stats.widest_width, stats.sector_count)
    return MetricsReport(
        sector_count=stats.sector_count,
        num_coverage_lines=lines,
        percent_area=stats.coverage_ratio,
        cost_seconds=plan.total_time if plan is not None else 0.0,
        path_length=plan.total_length if plan is not None else 0.0,
        overlap_alpha=stats.overlap_alpha,
        widest_width=stats.widest_width,
        approx_factor_bound=factor,
        prop1_rhs=rhs,
        lawnmower_time=plan.lawnmower_time if plan is not None else 0.0,
        transition_time=plan.transition_time if plan is not None else 0.0,
        solver=plan.solver if plan is not None else "none",
    )
