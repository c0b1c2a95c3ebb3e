"""scikit-learn style front end.

``SectorDecomposer`` fits a sector decomposition to an environment and
predicts the sector owning each query point; ``CoveragePlanner`` additionally
tours the sectors. Both follow the estimator conventions (constructor only
stores parameters, learned state ends in ``_``) so they work with
``get_params``/``set_params``/``clone``.
"""

from __future__ import annotations

import math

import numpy as np
import shapely
from shapely.geometry import MultiPolygon, Polygon
from shapely.geometry.base import BaseGeometry
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from . import geometry as geo
from .gsect import DecompositionConfig
from .io import parse_map
from .orientations import OrientationSet
from .pipeline import decompose, plan_coverage
from .touring import RobotModel


def check_environment(X) -> Polygon | MultiPolygon:
    """Coerce ``X`` to a validated environment.

    Accepts a shapely polygon/multipolygon, a map dict (``outer``/``holes``
    or ``components``), an ``(outer, holes)`` pair or a bare outer ring.
    """
    if isinstance(X, BaseGeometry):
        if isinstance(X, Polygon):
            return geo.make_environment(geo.ring_coords(X.exterior), [geo.ring_coords(r) for r in X.interiors])
        if isinstance(X, MultiPolygon):
            return MultiPolygon([check_environment(p) for p in X.geoms])
        raise geo.GeometryError(f"expected a polygonal environment, got {X.geom_type}")
    if isinstance(X, dict):
        return parse_map(X)
    if isinstance(X, tuple) and len(X) == 2 and np.ndim(X[0]) == 2:
        return geo.make_environment(X[0], X[1])
    ring = check_array(X, ensure_min_samples=3)
    if ring.shape[1] != 2:
        raise ValueError(f"expected (n, 2) vertex array, got shape {ring.shape}")
    return geo.make_environment(ring)


class SectorDecomposer(BaseEstimator):
    """Greedy rectangular sector decomposition as an estimator.

    Parameters left as None are derived from ``tool_width``: ``beta`` and
    ``cell_size`` default to l/4, ``min_sector_area`` to l^2. ``orientations``
    (radians) bypasses edge-based orientation extraction.
    """

    def __init__(
        self,
        gamma=0.95,
        beta=None,
        tool_width=0.8,
        cell_size=None,
        max_sectors=100,
        min_sector_area=None,
        cluster_tol=math.radians(2.0),
        max_orientations=8,
        orientations=None,
        merge=True,
    ):
        self.gamma = gamma
        self.beta = beta
        self.tool_width = tool_width
        self.cell_size = cell_size
        self.max_sectors = max_sectors
        self.min_sector_area = min_sector_area
        self.cluster_tol = cluster_tol
        self.max_orientations = max_orientations
        self.orientations = orientations
        self.merge = merge

    def _config(self) -> DecompositionConfig:
        return DecompositionConfig.for_tool(
            self.tool_width,
            gamma=self.gamma,
            beta=self.beta,
            max_sectors=self.max_sectors,
            min_sector_area=self.min_sector_area,
            cell_size=self.cell_size,
        )

    def _thetas(self):
        if self.orientations is None:
            return None
        return OrientationSet.from_angles(self.orientations)

    def fit(self, X, y=None):
        env = check_environment(X)
        thetas, decomp, merged = decompose(
            env,
            self._config(),
            tool_width=self.tool_width,
            orientations=self._thetas(),
            cluster_tol=self.cluster_tol,
            max_orientations=self.max_orientations,
            merge=self.merge,
        )
        self._store(env, thetas, decomp, merged)
        return self

    def _store(self, env, thetas, decomp, merged):
        self.environment_ = env
        self.orientations_ = thetas
        self.decomposition_ = decomp
        self.merged_ = merged
        final = merged if merged is not None else decomp
        self.sectors_ = final.sectors
        self.stats_ = final.stats
        self.n_sectors_ = len(final.sectors)
        self.target_reached_ = decomp.target_reached

    def predict(self, X) -> np.ndarray:
        """Index of the first sector containing each (x, y) point, -1 if none."""
        check_is_fitted(self, "sectors_")
        pts = check_array(X)
        labels = np.full(len(pts), -1, dtype=int)
        for k, region in enumerate(self.sectors_):
            hit = shapely.intersects_xy(region.shape, pts[:, 0], pts[:, 1])
            labels[(labels < 0) & hit] = k
        return labels

    def score(self, X=None, y=None) -> float:
        """Covered fraction of the fitted environment."""
        check_is_fitted(self, "stats_")
        return self.stats_.coverage_ratio


class CoveragePlanner(SectorDecomposer):
    """Decomposition plus lawnmower generation and GTSP sector touring."""

    def __init__(
        self,
        gamma=0.95,
        beta=None,
        tool_width=0.8,
        cell_size=None,
        max_sectors=100,
        min_sector_area=None,
        cluster_tol=math.radians(2.0),
        max_orientations=8,
        orientations=None,
        merge=True,
        v_max=1.0,
        accel=0.5,
        random_state=0,
    ):
        super().__init__(
            gamma=gamma,
            beta=beta,
            tool_width=tool_width,
            cell_size=cell_size,
            max_sectors=max_sectors,
            min_sector_area=min_sector_area,
            cluster_tol=cluster_tol,
            max_orientations=max_orientations,
            orientations=orientations,
            merge=merge,
        )
        self.v_max = v_max
        self.accel = accel
        self.random_state = random_state

    def fit(self, X, y=None):
        env = check_environment(X)
        robot = RobotModel(self.tool_width, self.v_max, self.accel)
        result = plan_coverage(
            env,
            self._config(),
            robot,
            orientations=self._thetas(),
            cluster_tol=self.cluster_tol,
            max_orientations=self.max_orientations,
            merge=self.merge,
            seed=self.random_state,
        )
        self._store(env, result.orientations, result.decomposition, result.merged)
        self.robot_ = robot
        self.instance_ = result.instance
        self.plan_ = result.plan
        self.report_ = result.report
        return self

    def transform(self, X=None) -> np.ndarray:
        """Waypoints of the fitted coverage plan as an (n, 2) array."""
        check_is_fitted(self, "plan_")
        return np.asarray(self.plan_.waypoints(), dtype=float)
