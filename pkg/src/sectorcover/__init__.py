"""Rectangular sector decomposition and sector touring for coverage planning."""

from .estimators import CoveragePlanner, SectorDecomposer, check_environment
from .geometry import GeometryError, make_environment
from .gsect import CoverageRegion, Decomposition, DecompositionConfig, gsect, merge_sectors
from .lawnmower import generate_lawnmower, lemma1_bound
from .orientations import OrientationSet, extract_orientations
from .pipeline import plan_coverage
from .rect_search import Sector, largest_axis_rect, largest_rect_at
from .touring import RobotModel, UnreachableError, build_gtsp, segment_time, solve_gtsp, visibility_path

__all__ = [
    "CoveragePlanner",
    "CoverageRegion",
    "Decomposition",
    "DecompositionConfig",
    "GeometryError",
    "OrientationSet",
    "RobotModel",
    "Sector",
    "SectorDecomposer",
    "UnreachableError",
    "build_gtsp",
    "check_environment",
    "extract_orientations",
    "generate_lawnmower",
    "gsect",
    "largest_axis_rect",
    "largest_rect_at",
    "lemma1_bound",
    "make_environment",
    "merge_sectors",
    "plan_coverage",
    "segment_time",
    "solve_gtsp",
    "visibility_path",
]
__version__ = "0.1.0"
