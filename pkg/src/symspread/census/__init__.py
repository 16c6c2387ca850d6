"""Exhaustive censuses and the pruned linear-set search."""

from .report import CensusReport, parallel_map, resolve_workers
from .planes import (
    classify_all_planes, disjoint_plane_census, orbit_transitivity_check, nucleus_meets,
)

__all__ = [
    "CensusReport", "parallel_map", "resolve_workers", "classify_all_planes",
    "disjoint_plane_census", "orbit_transitivity_check", "nucleus_meets",
]
