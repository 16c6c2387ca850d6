"""Symplectic spreads, the quadric Veronese surface and rank-6 linear sets over small fields."""

from .errors import BudgetExceeded, CheckpointError, FieldError, GeometryError, SymspreadError
from .field_tower import GF, FieldTower, create_tower, find_quadratic_param, moore_independence
from .matrix_proj import ProjPoint, Subspace, enumerate_subspaces, gaussian_binomial
from .veronese import IntersectionProfile, SymPoint, plane_profile, secant_eval, v2
from .linear_sets import LinearSetSpec, FGSystem, derive_fg, disjoint_from_secant, linset_points
from .spread_kit import SpreadSet, desarguesian_spread_set, validate_spread_set

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded", "CheckpointError", "FieldError", "GeometryError", "SymspreadError",
    "GF", "FieldTower", "create_tower", "find_quadratic_param", "moore_independence",
    "ProjPoint", "Subspace", "enumerate_subspaces", "gaussian_binomial",
    "IntersectionProfile", "SymPoint", "plane_profile", "secant_eval", "v2",
    "LinearSetSpec", "FGSystem", "derive_fg", "disjoint_from_secant", "linset_points",
    "SpreadSet", "desarguesian_spread_set", "validate_spread_set",
]
