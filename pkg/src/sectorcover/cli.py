"""``sector-cover`` command line.

Exit codes: 0 ok, 1 bad input, 2 coverage target unreached, 3 sectors
unreachable from one another.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path
from typing import Callable, Sequence

from . import io
from .bcd import bcd_sector_count
from .geometry import GeometryError
from .gsect import DecompositionConfig
from .pipeline import decompose, plan_coverage
from .svg import decomposition_svg, plan_svg
from .touring import RobotModel, UnreachableError, polyline_times
from .verify import AreaFn, run_all, union_area

EXIT_OK, EXIT_INPUT, EXIT_UNREACHED, EXIT_UNREACHABLE = 0, 1, 2, 3

log = logging.getLogger("sectorcover")


def _run_config(args) -> io.RunConfig:
    cfg = io.load_config(args.config)
    if getattr(args, "gamma", None) is not None:
        cfg.gamma = args.gamma
    if getattr(args, "beta", None) is not None:
        cfg.beta = args.beta
    if getattr(args, "seed", None) is not None:
        cfg.gtsp_seed = args.seed
    if getattr(args, "no_merge", False):
        cfg.merge = False
    return cfg


def _decomp_config(cfg: io.RunConfig) -> DecompositionConfig:
    r = cfg.resolved()
    return DecompositionConfig(
        gamma=r["gamma"],
        beta=r["beta"],
        max_sectors=r["max_sectors"],
        min_sector_area=r["min_sector_area"],
        cell_size=r["cell_size"],
    )


def _decomposition_doc(env, cfg, thetas, decomp, merged) -> dict:
    return {
        "environment": io.map_to_dict(env),
        "config": cfg.resolved(),
        "orientations": list(thetas.angles),
        **io.decomposition_to_dict(decomp),
        "merged": io.decomposition_to_dict(merged) if merged is not None else None,
    }


def cmd_decompose(args) -> int:
    env = io.load_map(args.map)
    cfg = _run_config(args)
    thetas, decomp, merged = decompose(
        env,
        _decomp_config(cfg),
        tool_width=cfg.tool_width,
        cluster_tol=math.radians(cfg.cluster_tol_deg),
        max_orientations=cfg.max_orientations,
        merge=cfg.merge,
    )
    out = Path(args.out)
    io.write_atomic(out / "decomposition.json", io.dumps(_decomposition_doc(env, cfg, thetas, decomp, merged)))
    shown = merged if merged is not None else decomp
    io.write_atomic(out / "decomposition.svg", decomposition_svg(env, shown.sectors))
    print(f"{len(decomp.sectors)} sectors ({len(shown.sectors)} after merging), "
          f"coverage {decomp.stats.coverage_ratio:.4f}, status {decomp.status}")
    return EXIT_OK if decomp.target_reached else EXIT_UNREACHED


def plan_document(result, robot: RobotModel, seed: int) -> dict:
    plan = result.plan
    steps = []
    for k, lm in enumerate(plan.lawnmowers):
        if k > 0:
            leg = plan.transitions[k - 1]
            steps.append({
                "kind": "transition",
                "from_sector": plan.order[k - 1],
                "to_sector": plan.order[k],
                "waypoints": [list(p) for p in leg],
                "segment_times": polyline_times(leg, robot),
            })
        steps.append({
            "kind": "coverage",
            "sector": plan.order[k],
            "variant": lm.variant,
            "coverage_lines": lm.n_lines,
            "waypoints": [list(p) for p in lm.waypoints],
            "segment_times": polyline_times(lm.waypoints, robot),
        })
    return {
        "tour": "open",
        "solver": plan.solver,
        "seed": seed,
        "order": list(plan.order),
        "steps": steps,
        "totals": {
            "coverage_lines": sum(lm.n_lines for lm in plan.lawnmowers),
            "lawnmower_time_s": plan.lawnmower_time,
            "transition_time_s": plan.transition_time,
            "total_time_s": plan.total_time,
            "lawnmower_length_m": plan.lawnmower_length,
            "transition_length_m": plan.transition_length,
            "total_length_m": plan.total_length,
        },
    }


def cmd_plan(args) -> int:
    env = io.load_map(args.map)
    cfg = _run_config(args)
    robot = RobotModel(cfg.tool_width, cfg.v_max, cfg.accel)
    try:
        result = plan_coverage(
            env,
            _decomp_config(cfg),
            robot,
            cluster_tol=math.radians(cfg.cluster_tol_deg),
            max_orientations=cfg.max_orientations,
            merge=cfg.merge,
            seed=cfg.gtsp_seed,
        )
    except UnreachableError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_UNREACHABLE
    out = Path(args.out)
    io.write_atomic(
        out / "decomposition.json",
        io.dumps(_decomposition_doc(env, cfg, result.orientations, result.decomposition, result.merged)),
    )
    io.write_atomic(out / "decomposition.svg", decomposition_svg(env, result.final.sectors))
    io.write_atomic(out / "plan.json", io.dumps(plan_document(result, robot, cfg.gtsp_seed)))
    io.write_atomic(out / "plan.svg", plan_svg(env, result.plan))
    io.write_atomic(out / "report.json", io.dumps(result.report.to_dict()))
    r = result.report
    print(f"sectors {r.sector_count}  lines {r.num_coverage_lines}  "
          f"area {100 * r.percent_area:.1f}%  cost {r.cost_seconds:.1f} s")
    return EXIT_OK if result.decomposition.target_reached else EXIT_UNREACHED


def cmd_verify(args, area_fn: AreaFn = union_area) -> int:
    if args.trials < 1:
        print("usage error: --trials must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    results = run_all(args.seed, args.trials, area_fn)
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_INPUT


def cmd_compare(args) -> int:
    env = io.load_map(args.map)
    cfg = _run_config(args)
    cfg.merge = True
    _, decomp, merged = decompose(
        env,
        _decomp_config(cfg),
        tool_width=cfg.tool_width,
        cluster_tol=math.radians(cfg.cluster_tol_deg),
        max_orientations=cfg.max_orientations,
    )
    bcd = bcd_sector_count(env)
    rows = [
        ("method", "sectors", "coverage"),
        ("BCD", str(bcd), "1.0000"),
        ("G-Sect", str(len(decomp.sectors)), f"{decomp.stats.coverage_ratio:.4f}"),
        ("G-Sect merged", str(len(merged.sectors)), f"{merged.stats.coverage_ratio:.4f}"),
    ]
    for name, n, cov in rows:
        print(f"{name:<14} {n:>8} {cov:>9}")
    return EXIT_OK if decomp.target_reached else EXIT_UNREACHED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sector-cover", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, out=True):
        p.add_argument("--map", required=True, help="map JSON file")
        p.add_argument("--config", help="key = value config file")
        if out:
            p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--gamma", type=float)
        p.add_argument("--beta", type=float)
        p.add_argument("--seed", type=int)
        p.add_argument("--no-merge", action="store_true")

    common(sub.add_parser("decompose", help="greedy sector decomposition"))
    common(sub.add_parser("plan", help="decompose and tour the sectors"))
    common(sub.add_parser("compare", help="sector counts vs boustrophedon cells"), out=False)
    v = sub.add_parser("verify", help="randomized property checks")
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--trials", type=int, default=100)
    return parser


COMMANDS: dict[str, Callable] = {
    "decompose": cmd_decompose,
    "plan": cmd_plan,
    "verify": cmd_verify,
    "compare": cmd_compare,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose, format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (io.MapError, GeometryError, OSError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
