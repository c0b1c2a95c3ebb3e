"""End-to-end orchestration: orientations, decomposition, merging, touring."""

from __future__ import annotations

import math
from dataclasses import dataclass

from shapely.geometry.base import BaseGeometry

from .gsect import Decomposition, DecompositionConfig, gsect, merge_sectors
from .lawnmower import generate_lawnmower
from .metrics import MetricsReport, compile_report
from .orientations import OrientationSet, extract_orientations
from .touring import CoveragePlan, GtspInstance, RobotModel, build_gtsp, solve_gtsp


@dataclass
class PlanResult:
    orientations: OrientationSet
    decomposition: Decomposition
    merged: Decomposition | None
    instance: GtspInstance
    plan: CoveragePlan
    report: MetricsReport

    @property
    def final(self) -> Decomposition:
        return self.merged if self.merged is not None else self.decomposition


def decompose(
    env: BaseGeometry,
    cfg: DecompositionConfig,
    *,
    tool_width: float,
    orientations: OrientationSet | None = None,
    cluster_tol: float = math.radians(2.0),
    max_orientations: int = 8,
    merge: bool = True,
) -> tuple[OrientationSet, Decomposition, Decomposition | None]:
    """Run the greedy decomposition and, optionally, the merge pass."""
    if orientations is None:
        orientations = extract_orientations(env, cluster_tol, max_orientations)
    decomp = gsect(env, orientations, cfg)
    merged = merge_sectors(decomp, env, tool_width) if merge else None
    return orientations, decomp, merged


def plan_coverage(
    env: BaseGeometry,
    cfg: DecompositionConfig,
    robot: RobotModel,
    *,
    orientations: OrientationSet | None = None,
    cluster_tol: float = math.radians(2.0),
    max_orientations: int = 8,
    merge: bool = True,
    seed: int = 0,
) -> PlanResult:
    """Decompose, generate lawnmower variants and solve the sector tour.

    Raises:
        UnreachableError: if two sectors lie in disconnected free space.
    """
    thetas, decomp, merged = decompose(
        env,
        cfg,
        tool_width=robot.tool_width,
        orientations=orientations,
        cluster_tol=cluster_tol,
        max_orientations=max_orientations,
        merge=merge,
    )
    final = merged if merged is not None else decomp
    if not final.sectors:
        raise ValueError("decomposition produced no sectors")
    variants = [generate_lawnmower(r, robot.tool_width, k) for k, r in enumerate(final.sectors)]
    inst = build_gtsp(variants, env, robot)
    plan = solve_gtsp(inst, seed, robot)
    report = compile_report(final, plan, cfg, robot)
    return PlanResult(thetas, decomp, merged, inst, plan, report)
