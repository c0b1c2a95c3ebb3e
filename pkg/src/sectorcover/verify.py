"""Randomized property checks behind ``sector-cover verify``.

Each check draws seeded random instances and returns a :class:`CheckResult`
holding the first counterexample it found, if any.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from shapely.geometry import Polygon, box
from shapely.geometry.base import BaseGeometry

from . import geometry as geo
from .gsect import CoverageRegion, greedy_cover
from .lawnmower import generate_lawnmower, lemma1_bound
from .metrics import approx_factor, brute_force_min_cover
from .rect_search import Sector
from .touring import RobotModel, segment_time

AreaFn = Callable[[Sequence[BaseGeometry], BaseGeometry], float]


def union_area(shapes: Sequence[BaseGeometry], env: BaseGeometry) -> float:
    """Area of the union of ``shapes`` inside ``env``."""
    if not shapes:
        return 0.0
    return geo.area(geo.boolean(geo.union_all(shapes), env, "intersection"))


@dataclass
class CheckResult:
    name: str
    trials: int
    failures: int = 0
    counterexample: dict | None = field(default=None, repr=False)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        out = f"{status} {self.name} ({self.trials - self.failures}/{self.trials})"
        if self.counterexample is not None:
            out += f"\n    counterexample: {self.counterexample}"
        return out

    def record(self, ok: bool, example: dict) -> None:
        if not ok:
            self.failures += 1
            if self.counterexample is None:
                self.counterexample = example


# ------------------------------------------------------------- generators


def random_environment(rng: np.random.Generator, size: float = 10.0) -> BaseGeometry:
    """Union of two to four overlapping boxes inside [0, size]^2."""
    boxes = [box(0.2 * size, 0.2 * size, 0.6 * size, 0.6 * size)]
    for _ in range(rng.integers(1, 4)):
        w, h = rng.uniform(0.2, 0.6, 2) * size
        x = rng.uniform(0.0, size - w)
        y = rng.uniform(0.0, size - h)
        boxes.append(box(x, y, x + w, y + h))
    return geo.union_all(boxes)


def random_rectangle(rng: np.random.Generator, size: float = 10.0) -> Polygon:
    w = rng.uniform(0.5, 0.5 * size)
    h = rng.uniform(0.5, w)
    c = tuple(rng.uniform(0.0, size, 2))
    return Sector(c, w, h, rng.uniform(0.0, math.pi)).polygon()


def random_cover_instance(rng: np.random.Generator, max_candidates: int = 12):
    """Environment plus at most ``max_candidates`` rectangles covering it."""
    env = random_environment(rng)
    minx, miny, maxx, maxy = env.bounds
    nx, ny = rng.integers(1, 4), rng.integers(1, 4)
    xs = np.sort(np.r_[minx, rng.uniform(minx, maxx, nx - 1), maxx])
    ys = np.sort(np.r_[miny, rng.uniform(miny, maxy, ny - 1), maxy])
    cands = []
    for i in range(nx):
        for j in range(ny):
            cell = box(xs[i], ys[j], xs[i + 1], ys[j + 1])
            if geo.area(geo.boolean(cell, env, "intersection")) > 1e-6:
                cands.append(cell)
    while len(cands) < max_candidates and rng.random() < 0.8:
        cands.append(random_rectangle(rng))
    order = rng.permutation(len(cands))
    return env, [cands[k] for k in order]


# ----------------------------------------------------------------- checks


def check_coverage_function(rng: np.random.Generator, trials: int, area_fn: AreaFn = union_area) -> list[CheckResult]:
    """Normalization, monotonicity and diminishing returns of union area."""
    norm = CheckResult("coverage: normalized a(empty) = 0", trials)
    mono = CheckResult("coverage: monotone a(A) <= a(B)", trials)
    sub = CheckResult("coverage: submodular marginal(A, x) >= marginal(B, x)", trials)
    for t in range(trials):
        env = random_environment(rng)
        pool = [random_rectangle(rng) for _ in range(rng.integers(2, 7))]
        in_b = rng.random(len(pool)) < 0.7
        in_a = in_b & (rng.random(len(pool)) < 0.5)
        A = [p for p, f in zip(pool, in_a) if f]
        B = [p for p, f in zip(pool, in_b) if f]
        x = random_rectangle(rng)
        a_empty = area_fn([], env)
        aA, aB = area_fn(A, env), area_fn(B, env)
        gain_a = area_fn(A + [x], env) - aA
        gain_b = area_fn(B + [x], env) - aB
        ex = {"trial": t, "|A|": len(A), "|B|": len(B), "a(A)": aA, "a(B)": aB,
              "marginal_A": gain_a, "marginal_B": gain_b}
        norm.record(abs(a_empty) <= 1e-12, {"trial": t, "a(empty)": a_empty})
        mono.record(aA <= aB + 1e-9, ex)
        sub.record(gain_a >= gain_b - 1e-9, ex)
    return [norm, mono, sub]


def check_greedy_bound(rng: np.random.Generator, trials: int, gamma: float = 0.95) -> CheckResult:
    """Greedy finite cover stays within ceil(factor * optimum)."""
    res = CheckResult(f"greedy cover: |S| <= ceil({approx_factor(gamma):.4f} |S*|)", trials)
    factor = approx_factor(gamma)
    for t in range(trials):
        env, cands = random_cover_instance(rng)
        greedy = greedy_cover(cands, env, gamma)
        opt = brute_force_min_cover(cands, env, gamma)
        bound = math.ceil(factor * len(opt))
        res.record(len(greedy) <= bound, {"trial": t, "greedy": len(greedy), "optimal": len(opt), "bound": bound})
    return res


def lawnmower_exact_length(w: float, h: float, l: float) -> float:
    """Closed-form length of the clamped serpentine over a w x h rectangle."""
    if h <= l:
        return max(w - l, 0.0)
    n = math.ceil(h / l - 1e-9)
    return n * max(w - l, 0.0) + (h - l)


def random_rect_and_tool(rng: np.random.Generator) -> tuple[float, float, float]:
    w = rng.uniform(0.5, 20.0)
    h = rng.uniform(0.1, w)
    l = rng.uniform(0.1, 2.0)
    return w, h, l


def check_lawnmower_length(rng: np.random.Generator, trials: int) -> list[CheckResult]:
    """Lawnmower length obeys the w * ceil(h / l) bound and the closed form."""
    bound = CheckResult("lawnmower: length <= w ceil(h/l)", trials)
    exact = CheckResult("lawnmower: length = n (w - l) + (h - l)", trials)
    variants = CheckResult("lawnmower: four variants share length, reverses mirror", trials)
    for t in range(trials):
        w, h, l = random_rect_and_tool(rng)
        sector = Sector(tuple(rng.uniform(-5, 5, 2)), w, h, rng.uniform(0, math.pi))
        paths = generate_lawnmower(CoverageRegion.from_sector(sector), l)
        length = paths[0].length
        ex = {"trial": t, "w": w, "h": h, "l": l, "length": length, "bound": lemma1_bound(w, h, l)}
        bound.record(length <= lemma1_bound(w, h, l) + 1e-9, ex)
        exact.record(abs(length - lawnmower_exact_length(w, h, l)) <= 1e-9 * max(1.0, w * h), ex)
        same = max(p.length for p in paths) - min(p.length for p in paths) <= 1e-9
        mirrored = paths[1].waypoints == paths[0].waypoints[::-1] and paths[3].waypoints == paths[2].waypoints[::-1]
        variants.record(same and mirrored, ex)
    return [bound, exact, variants]


def check_time_model(rng: np.random.Generator, trials: int, robot: RobotModel = RobotModel()) -> list[CheckResult]:
    cont = CheckResult("time model: continuous at d = v^2/a", 1)
    d0 = robot.v_max**2 / robot.accel
    below = 2.0 * math.sqrt(d0 / robot.accel)
    above = d0 / robot.v_max + robot.v_max / robot.accel
    cont.record(abs(segment_time(d0, robot) - below) <= 1e-12 and abs(below - above) <= 1e-12,
                {"t(d0)": segment_time(d0, robot), "triangular": below, "trapezoidal": above})
    mono = CheckResult("time model: monotone and superadditive", trials)
    for t in range(trials):
        d1, d2 = rng.uniform(0.0, 3 * d0, 2)
        lo, hi = sorted((d1, d2))
        ok = segment_time(lo, robot) <= segment_time(hi, robot) + 1e-12
        ok &= segment_time(d1, robot) + segment_time(d2, robot) >= segment_time(d1 + d2, robot) - 1e-12
        mono.record(ok, {"trial": t, "d1": d1, "d2": d2})
    return [cont, mono]


def run_all(seed: int, trials: int, area_fn: AreaFn = union_area) -> list[CheckResult]:
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = np.random.default_rng(seed)
    results = []
    results += check_coverage_function(rng, trials, area_fn)
    results.append(check_greedy_bound(rng, max(1, min(trials, 50))))
    results += check_lawnmower_length(rng, trials)
    results += check_time_model(rng, trials)
    return results
