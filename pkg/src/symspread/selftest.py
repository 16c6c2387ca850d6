"""Fast built-in checks behind ``symspread selftest``."""

from __future__ import annotations

from typing import Callable

from .field_tower import create_tower, find_quadratic_param
from .linear_sets import base_field, derive_fg, disjoint_from_secant, zero_spec
from .matrix_proj import gaussian_binomial, identity, projective_points
from .veronese import (
    classify_contained_plane, count_secant_points, nucleus_plane, secant_eval, v2,
)


def _f4_mul():
    F = create_tower(2, [2])[0]
    return F.mul(2, 2) == 3 and F.mul(2, 3) == 1


def _secant_count_f2():
    F = create_tower(2, [1])[0]
    return sum(secant_eval(t, F)[1] for t in projective_points(5, F)) == 35


def _nucleus_plane():
    F = create_tower(2, [2])[0]
    S = nucleus_plane(F)
    return count_secant_points(S) == 21 and classify_contained_plane(S)[0] == "nucleus"


def _veronese_rank():
    F = create_tower(2, [2])[0]
    return all(v2(P, F).rank() == 1 for P in projective_points(2, F))


def _plane_counts():
    return (gaussian_binomial(6, 3, 2), gaussian_binomial(6, 3, 4)) == (1395, 376805)


def _zero_spec():
    F = base_field(2)
    spec = zero_spec(find_quadratic_param(F))
    v = disjoint_from_secant(spec, derive_fg(spec))
    return (not v.disjoint) and v.witness_param == (1, 0, 0, 0, 0, 0) and v.oracles_agree


def _identity_lift():
    from .veronese import lift_collineation

    F = create_tower(2, [2])[0]
    return lift_collineation(identity(3), F) == identity(6)


CHECKS: list[tuple[str, Callable[[], bool]]] = [
    ("f4-multiplication", _f4_mul),
    ("secant-points-pg52", _secant_count_f2),
    ("nucleus-plane", _nucleus_plane),
    ("veronese-rank-one", _veronese_rank),
    ("plane-counts", _plane_counts),
    ("zero-spec-not-disjoint", _zero_spec),
    ("identity-lift", _identity_lift),
]


def run_selftest() -> list[tuple[str, bool]]:
    out = []
    for name, fn in CHECKS:
        try:
            ok = bool(fn())
        except Exception:
            ok = False
        out.append((name, ok))
    return out
