"""Candidate coverage orientations from environment edges."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from shapely.geometry.base import BaseGeometry

from .geometry import as_region

DEFAULT_CLUSTER_TOL = math.radians(2.0)
DEFAULT_MAX_COUNT = 8


@dataclass(frozen=True)
class OrientationSet:
    """Sorted orientations in [0, pi) with the edge length supporting each."""

    angles: tuple[float, ...]
    weights: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.angles)

    def __iter__(self):
        return iter(self.angles)

    @classmethod
    def from_angles(cls, angles, weights=None) -> "OrientationSet":
        angles = [float(a) % math.pi for a in angles]
        weights = [1.0] * len(angles) if weights is None else [float(w) for w in weights]
        pairs = sorted(zip(angles, weights))
        return cls(tuple(a for a, _ in pairs), tuple(w for _, w in pairs))


def _axial_distance(a: float, b: float) -> float:
    d = abs(a - b) % math.pi
    return min(d, math.pi - d)


def _axial_mean(angles: np.ndarray, weights: np.ndarray) -> float:
    # mean on the doubled angle so that 0 and pi coincide
    s = float(np.sum(weights * np.sin(2.0 * angles)))
    c = float(np.sum(weights * np.cos(2.0 * angles)))
    return (math.atan2(s, c) / 2.0) % math.pi


def edge_directions(region: BaseGeometry) -> tuple[np.ndarray, np.ndarray]:
    """Angles (mod pi) and lengths of every boundary and hole edge."""
    angles, lengths = [], []
    for poly in as_region(region).geoms:
        for ring in [poly.exterior, *poly.interiors]:
            xy = np.asarray(ring.coords)
            d = np.diff(xy, axis=0)
            length = np.hypot(d[:, 0], d[:, 1])
            keep = length > 0
            angles.append(np.arctan2(d[keep, 1], d[keep, 0]) % math.pi)
            lengths.append(length[keep])
    if not angles:
        return np.empty(0), np.empty(0)
    a = np.concatenate(angles)
    # atan2 of a leftward edge gives pi, which must fold onto 0
    a[np.isclose(a, math.pi, rtol=0.0, atol=1e-12)] = 0.0
    return a, np.concatenate(lengths)


def extract_orientations(
    region: BaseGeometry,
    cluster_tol: float = DEFAULT_CLUSTER_TOL,
    max_count: int = DEFAULT_MAX_COUNT,
) -> OrientationSet:
    """Cluster edge directions and keep the most heavily supported ones.

    Every edge is assigned to exactly one cluster: edges are visited from
    longest to shortest and join the first cluster whose length-weighted axial
    mean lies within ``cluster_tol``, otherwise they start a new cluster.
    Clusters whose means drift closer than ``cluster_tol`` are then fused.
    The ``max_count`` clusters with the largest total edge length are
    returned, sorted by angle.
    """
    if cluster_tol <= 0:
        raise ValueError("cluster_tol must be positive")
    if max_count < 1:
        raise ValueError("max_count must be at least 1")
    angles, lengths = edge_directions(region)
    if len(angles) == 0:
        raise ValueError("region has no edges")

    members: list[list[int]] = []
    centers: list[float] = []
    for i in sorted(range(len(angles)), key=lambda k: (-lengths[k], angles[k])):
        for c, center in enumerate(centers):
            if _axial_distance(angles[i], center) <= cluster_tol:
                members[c].append(i)
                idx = members[c]
                centers[c] = _axial_mean(angles[idx], lengths[idx])
                break
        else:
            members.append([i])
            centers.append(float(angles[i]))

    fused = True
    while fused:
        fused = False
        for a in range(len(centers)):
            for b in range(a + 1, len(centers)):
                if _axial_distance(centers[a], centers[b]) < cluster_tol:
                    members[a].extend(members.pop(b))
                    centers.pop(b)
                    idx = members[a]
                    centers[a] = _axial_mean(angles[idx], lengths[idx])
                    fused = True
                    break
            if fused:
                break

    weights = [float(lengths[m].sum()) for m in members]
    ranked = sorted(range(len(centers)), key=lambda c: (-weights[c], centers[c]))[:max_count]
    return OrientationSet.from_angles([centers[c] for c in ranked], [weights[c] for c in ranked])
