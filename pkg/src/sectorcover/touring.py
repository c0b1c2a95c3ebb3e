"""Sector touring: transition paths, the time model and the GTSP tour."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import shapely
from scipy.sparse.csgraph import shortest_path
from shapely.geometry import LineString
from shapely.geometry.base import BaseGeometry

from . import geometry as geo
from .lawnmower import LawnmowerPath, polyline_length

EXACT_MAX_SETS = 6


class UnreachableError(RuntimeError):
    """No obstacle-free path joins two points of the environment."""

    def __init__(self, start, goal, detail: str = ""):
        self.start, self.goal = start, goal
        msg = f"no obstacle-free path from {tuple(start)} to {tuple(goal)}"
        super().__init__(f"{msg} ({detail})" if detail else msg)


@dataclass(frozen=True)
class RobotModel:
    tool_width: float = 0.8
    v_max: float = 1.0
    accel: float = 0.5

    def __post_init__(self):
        for name in ("tool_width", "v_max", "accel"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


def segment_time(distance: float, robot: RobotModel) -> float:
    """Rest-to-rest straight-line travel time under a trapezoidal profile."""
    if distance < 0:
        raise ValueError("distance must be non-negative")
    v, a = robot.v_max, robot.accel
    if distance >= v * v / a:
        return distance / v + v / a
    return 2.0 * math.sqrt(distance / a)


def polyline_times(points: Sequence[Sequence[float]], robot: RobotModel) -> list[float]:
    """Per-segment times; the robot stops at every vertex."""
    return [segment_time(math.dist(p, q), robot) for p, q in zip(points, points[1:])]


def polyline_time(points, robot: RobotModel) -> float:
    return float(sum(polyline_times(points, robot)))


def reflex_vertices(env: BaseGeometry) -> list[tuple[float, float]]:
    """Vertices whose interior angle in free space exceeds 180 degrees."""
    out = []
    for poly in geo.as_region(env).geoms:
        for ring in [poly.exterior, *poly.interiors]:
            pts = geo.ring_coords(ring)
            n = len(pts)
            for i in range(n):
                (ax, ay), (bx, by), (cx, cy) = pts[i - 1], pts[i], pts[(i + 1) % n]
                # free space lies left of every ring after orient(sign=1)
                if (bx - ax) * (cy - by) - (by - ay) * (cx - bx) < -1e-12:
                    out.append((bx, by))
    return out


class VisibilityGraph:
    """Shortest obstacle-free paths whose bends are reflex vertices."""

    def __init__(self, env: BaseGeometry):
        self.env = env
        self._free = shapely.buffer(env, geo.EPS_GEOM, join_style="mitre")
        shapely.prepare(self._free)
        self.nodes = np.asarray(reflex_vertices(env), dtype=float).reshape(-1, 2)
        n = len(self.nodes)
        weights = np.zeros((n, n))
        if n > 1:
            iu, ju = np.triu_indices(n, 1)
            segs = shapely.linestrings(np.stack([self.nodes[iu], self.nodes[ju]], axis=1))
            vis = shapely.covers(self._free, segs)
            d = np.linalg.norm(self.nodes[iu] - self.nodes[ju], axis=1)
            weights[iu[vis], ju[vis]] = d[vis]
            weights[ju[vis], iu[vis]] = d[vis]
        if n:
            self._dist, self._pred = shortest_path(weights, method="D", directed=False, return_predecessors=True)
        else:
            self._dist = np.zeros((0, 0))
            self._pred = np.zeros((0, 0), dtype=int)
        self._cache: dict[tuple[float, float], np.ndarray] = {}

    def visible(self, p, q) -> bool:
        if p == q:
            return bool(shapely.covers(self._free, shapely.Point(p)))
        return bool(shapely.covers(self._free, LineString([p, q])))

    def _visible_nodes(self, p) -> np.ndarray:
        key = (float(p[0]), float(p[1]))
        if key not in self._cache:
            if len(self.nodes) == 0:
                self._cache[key] = np.zeros(0, dtype=bool)
            else:
                segs = shapely.linestrings(
                    np.stack([np.broadcast_to(key, self.nodes.shape), self.nodes], axis=1)
                )
                self._cache[key] = shapely.covers(self._free, segs)
        return self._cache[key]

    def path(self, start, goal) -> list[tuple[float, float]]:
        """Shortest polyline from ``start`` to ``goal`` inside the environment.

        Raises:
            UnreachableError: if the points lie in different components or
                outside the environment.
        """
        p = (float(start[0]), float(start[1]))
        q = (float(goal[0]), float(goal[1]))
        for pt in (p, q):
            if not shapely.covers(self._free, shapely.Point(pt)):
                raise UnreachableError(p, q, f"{pt} lies outside the environment")
        if p == q:
            return [p, q]
        if self.visible(p, q):
            return [p, q]
        vp, vq = self._visible_nodes(p), self._visible_nodes(q)
        if not vp.any() or not vq.any():
            raise UnreachableError(p, q)
        dp = np.where(vp, np.linalg.norm(self.nodes - p, axis=1), np.inf)
        dq = np.where(vq, np.linalg.norm(self.nodes - q, axis=1), np.inf)
        total = dp[:, None] + self._dist + dq[None, :]
        i, j = np.unravel_index(np.argmin(total), total.shape)
        if not np.isfinite(total[i, j]):
            raise UnreachableError(p, q)
        chain = [j]
        while chain[-1] != i:
            chain.append(self._pred[i, chain[-1]])
        chain.reverse()
        return [p, *(tuple(map(float, self.nodes[k])) for k in chain), q]


def visibility_path(env: BaseGeometry, start, goal) -> list[tuple[float, float]]:
    """One-off shortest obstacle-free path; see :class:`VisibilityGraph`."""
    return VisibilityGraph(env).path(start, goal)


@dataclass
class GtspInstance:
    """Node groups (one per sector) and the time to move between them.

    ``cost[u, v]`` is the transition time from the exit of node ``u`` to the
    entry of node ``v`` plus the coverage time of ``v``; entries within a
    set are ``inf``.
    """

    sets: list[list[int]]
    coverage_time: np.ndarray
    cost: np.ndarray
    entry: list[tuple[float, float]] | None = None
    exit: list[tuple[float, float]] | None = None
    paths: list[LawnmowerPath] | None = None
    transitions: dict[tuple[int, int], list[tuple[float, float]]] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if any(len(s) == 0 for s in self.sets):
            raise ValueError("every set needs at least one node")
        self.set_of = np.empty(len(self.coverage_time), dtype=int)
        for k, s in enumerate(self.sets):
            self.set_of[s] = k

    @property
    def n_nodes(self) -> int:
        return len(self.coverage_time)


def build_gtsp(
    paths: Sequence[Sequence[LawnmowerPath]],
    env: BaseGeometry,
    robot: RobotModel,
    graph: VisibilityGraph | None = None,
) -> GtspInstance:
    """Assemble the touring instance from per-sector lawnmower variants."""
    if any(len(p) == 0 for p in paths):
        raise ValueError("every sector needs at least one lawnmower variant")
    graph = graph or VisibilityGraph(env)
    flat: list[LawnmowerPath] = []
    sets = []
    for variants in paths:
        sets.append(list(range(len(flat), len(flat) + len(variants))))
        flat.extend(variants)
    n = len(flat)
    cov = np.array([polyline_time(p.waypoints, robot) for p in flat])
    entry = [p.entry for p in flat]
    exit_ = [p.exit for p in flat]
    set_of = np.repeat(np.arange(len(sets)), [len(s) for s in sets])

    cost = np.full((n, n), np.inf)
    transitions = {}
    leg_cache: dict[tuple, tuple[list, float]] = {}
    for u in range(n):
        for v in range(n):
            if set_of[u] == set_of[v]:
                continue
            key = (exit_[u], entry[v])
            if key not in leg_cache:
                try:
                    poly = graph.path(*key)
                except UnreachableError as err:
                    raise UnreachableError(
                        err.start, err.goal, f"sectors {set_of[u]} and {set_of[v]} are disconnected"
                    ) from None
                leg_cache[key] = (poly, polyline_time(poly, robot))
            poly, t = leg_cache[key]
            transitions[(u, v)] = poly
            cost[u, v] = t + cov[v]
    return GtspInstance(sets, cov, cost, entry, exit_, flat, transitions)


@dataclass(frozen=True)
class Tour:
    order: tuple[int, ...]
    nodes: tuple[int, ...]
    cost: float
    method: str


def tour_cost(inst: GtspInstance, nodes: Sequence[int]) -> float:
    """Coverage time of the first node plus every leg cost, summed in order."""
    total = float(inst.coverage_time[nodes[0]])
    for u, v in zip(nodes, nodes[1:]):
        total = total + float(inst.cost[u, v])
    return total


def best_nodes(inst: GtspInstance, order: Sequence[int]) -> tuple[float, tuple[int, ...]]:
    """Optimal node per set for a fixed set order (layered shortest path)."""
    best = {u: (float(inst.coverage_time[u]), (u,)) for u in inst.sets[order[0]]}
    for k in order[1:]:
        layer = {}
        for v in inst.sets[k]:
            cands = [(c + float(inst.cost[u, v]), seq) for u, (c, seq) in best.items()]
            c, seq = min(cands, key=lambda t: (t[0], t[1]))
            layer[v] = (c, seq + (v,))
        best = layer
    c, seq = min(best.values(), key=lambda t: (t[0], t[1]))
    return c, seq


def _exact(inst: GtspInstance) -> Tour:
    best = None
    for order in itertools.permutations(range(len(inst.sets))):
        c, nodes = best_nodes(inst, order)
        if best is None or c < best.cost:
            best = Tour(order, nodes, c, "exact")
    return best


def _nearest_neighbor(inst: GtspInstance, first: int, rng: np.random.Generator | None) -> list[int]:
    order = [first]
    remaining = set(range(len(inst.sets))) - {first}
    current = min(inst.sets[first], key=lambda u: (inst.coverage_time[u], u))
    while remaining:
        ranked = sorted(
            (min(float(inst.cost[current, v]) for v in inst.sets[k]), k) for k in remaining
        )
        pick = ranked[0]
        if rng is not None and len(ranked) > 1 and rng.random() < 0.3:
            pick = ranked[1]
        k = pick[1]
        current = min(inst.sets[k], key=lambda v: (inst.cost[current, v], v))
        order.append(k)
        remaining.discard(k)
    return order


def _improve(inst: GtspInstance, order: list[int]) -> tuple[float, list[int], tuple[int, ...]]:
    cost, nodes = best_nodes(inst, order)
    improved = True
    while improved:
        improved = False
        k = len(order)
        for i in range(k - 1):
            for j in range(i + 1, k):
                cand = order[:i] + order[i : j + 1][::-1] + order[j + 1 :]
                c, n = best_nodes(inst, cand)
                if c < cost - 1e-12:
                    order, cost, nodes, improved = cand, c, n, True
        for i in range(k):
            for j in range(k):
                if i == j:
                    continue
                cand = order[:i] + order[i + 1 :]
                cand.insert(j, order[i])
                c, n = best_nodes(inst, cand)
                if c < cost - 1e-12:
                    order, cost, nodes, improved = cand, c, n, True
    return cost, order, nodes


def _heuristic(inst: GtspInstance, seed: int, restarts: int = 4) -> Tour:
    rng = np.random.default_rng(seed)
    best = None
    for r in range(restarts + 1):
        first = 0 if r == 0 else int(rng.integers(len(inst.sets)))
        order = _nearest_neighbor(inst, first, None if r == 0 else rng)
        c, order, nodes = _improve(inst, order)
        if best is None or c < best.cost:
            best = Tour(tuple(order), nodes, c, "heuristic")
    return best


def solve_tour(inst: GtspInstance, seed: int = 0, method: str = "auto") -> Tour:
    """Open GTSP tour with free start: one node per set, minimum total time.

    Instances with at most ``EXACT_MAX_SETS`` sets are enumerated exactly;
    larger ones use nearest-neighbour construction with seeded restarts and
    2-opt / relocation moves, re-choosing every set's node optimally after
    each move.
    """
    if method not in ("auto", "exact", "heuristic"):
        raise ValueError(f"unknown method {method!r}")
    if method == "exact" or (method == "auto" and len(inst.sets) <= EXACT_MAX_SETS):
        return _exact(inst)
    return _heuristic(inst, seed)


@dataclass
class CoveragePlan:
    order: tuple[int, ...]
    chosen_variant: tuple[str, ...]
    nodes: tuple[int, ...]
    lawnmowers: list[LawnmowerPath]
    transitions: list[list[tuple[float, float]]]
    lawnmower_time: float
    transition_time: float
    total_time: float
    lawnmower_length: float
    transition_length: float
    total_length: float
    solver: str

    def waypoints(self) -> list[tuple[float, float]]:
        pts: list[tuple[float, float]] = []
        for k, lm in enumerate(self.lawnmowers):
            if k > 0:
                pts.extend(self.transitions[k - 1][1:-1])
            pts.extend(lm.waypoints)
        return pts


def solve_gtsp(inst: GtspInstance, seed: int = 0, robot: RobotModel | None = None, method: str = "auto") -> CoveragePlan:
    """Solve the touring instance and assemble the coverage plan.

    With geometry attached (instances from :func:`build_gtsp`) and a robot
    model, totals are recomputed from the polylines and checked against the
    matrix accounting.
    """
    tour = solve_tour(inst, seed, method)
    nodes = tour.nodes
    if inst.paths is not None and robot is not None:
        lms = [inst.paths[u] for u in nodes]
        legs = [inst.transitions[(u, v)] for u, v in zip(nodes, nodes[1:])]
        lt = float(sum(polyline_time(p.waypoints, robot) for p in lms))
        tt = float(sum(polyline_time(leg, robot) for leg in legs))
        ll = float(sum(p.length for p in lms))
        tl = float(sum(polyline_length(leg) for leg in legs))
        if abs((lt + tt) - tour.cost) > 1e-6 * max(1.0, tour.cost):
            raise RuntimeError(f"plan time {lt + tt} disagrees with tour cost {tour.cost}")
        variants = tuple(p.variant for p in lms)
    else:
        lms, legs = [], []
        lt = float(sum(inst.coverage_time[u] for u in nodes))
        tt = tour.cost - lt
        ll = tl = 0.0
        variants = tuple(str(u) for u in nodes)
    return CoveragePlan(
        order=tour.order,
        chosen_variant=variants,
        nodes=nodes,
        lawnmowers=lms,
        transitions=legs,
        lawnmower_time=lt,
        transition_time=tt,
        total_time=lt + tt,
        lawnmower_length=ll,
        transition_length=tl,
        total_length=ll + tl,
        solver=tour.method,
    )
