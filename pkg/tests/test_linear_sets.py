import random

import pytest

from symspread.errors import BudgetExceeded, FieldError
from symspread.field_tower import create_tower, find_quadratic_param
from symspread.linear_sets import (
    FGSystem, FORBIDDEN_MONOMIALS, LinearSetSpec, base_field, derive_fg, derive_fg_symbolic,
    disjoint_from_secant, displayed_fg, displayed_fg_for, fg_zeros, linset_points,
    random_spec, spec_from_ext_matrix, zero_spec,
)
from symspread.poly import Poly
from symspread.spread_kit import desarguesian_spread_set, spread_to_linset


@pytest.fixture(scope="module")
def param(f2):
    return find_quadratic_param(f2)


@pytest.fixture(scope="module")
def des_spec(t123, param):
    return spread_to_linset(desarguesian_spread_set(t123[2], t123[1]), t123[0], param).spec


def test_zero_spec_points(param):
    pts = linset_points(zero_spec(param))
    assert len(pts) == 21 and set(pts.values()) == {2}
    assert all(P[3:] == (0, 0, 0) for P in pts)


def test_desarguesian_points(des_spec):
    pts = linset_points(des_spec)
    assert len(pts) == 21 and set(pts.values()) == {2}
    assert des_spec.is_ext_linear()


def test_weight_one_points_balance(param):
    rng = random.Random(4)
    seen_weight_one = False
    for _ in range(20):
        pts = linset_points(random_spec(param, rng))
        assert sum(2 ** w - 1 for w in pts.values()) == 63
        seen_weight_one |= 1 in pts.values()
    assert seen_weight_one


def test_cap_on_q(t123):
    F = create_tower(2, [3, 2, 3])[0]
    spec = zero_spec(find_quadratic_param(F))
    with pytest.raises(BudgetExceeded):
        linset_points(spec)


def test_zero_spec_fg_matches_display(f2, param):
    fg = derive_fg(zero_spec(param))
    x = [Poly.var(f2, 6, i) for i in range(6)]
    x1, x2, y1, y2, z1, z2 = x
    assert fg.f == x1 * y1 * z1 + x1 * y2 * z2 + x2 * y1 * z2 + x2 * y2 * z1 + x2 * y2 * z2
    assert fg.g == x1 * y1 * z2 + x1 * y2 * z1 + x2 * y1 * z1 + x1 * y2 * z2 + x2 * y1 * z2 + x2 * y2 * z1
    assert (1, 0, 0, 0, 0, 0) in fg_zeros(fg)


@pytest.mark.parametrize("q", [2, 4, 16])
def test_symbolic_identity_with_display(q):
    F = base_field(q)
    a = find_quadratic_param(F).a
    xs = [Poly.var(F, 12, i) for i in range(6)]
    ls = [Poly.var(F, 12, 6 + i) for i in range(6)]
    assert derive_fg_symbolic(F, a) == displayed_fg(F, a, xs, ls)


def test_monomial_absence_and_degree(param):
    rng = random.Random(7)
    for _ in range(100):
        fg = derive_fg(random_spec(param, rng))
        assert fg.f.is_homogeneous(3) and fg.g.is_homogeneous(3)
        for m in FORBIDDEN_MONOMIALS:
            assert fg.f.coeff(m) == 0 and fg.g.coeff(m) == 0


def test_fg_and_display_agree_for_specs(param):
    rng = random.Random(8)
    for _ in range(20):
        s = random_spec(param, rng)
        assert derive_fg(s) == displayed_fg_for(s)


def test_distinct_specs_distinct_systems(param):
    rng = random.Random(10)
    specs = {random_spec(param, rng) for _ in range(40)}
    systems = {(derive_fg(s).f, derive_fg(s).g) for s in specs}
    assert len(systems) == len(specs)


def test_desarguesian_disjoint(des_spec):
    v = disjoint_from_secant(des_spec)
    assert v.disjoint and v.fg_disjoint and v.oracles_agree and not v.meets_nucleus
    assert fg_zeros(derive_fg(des_spec)) == []


def test_zero_spec_verdict(param):
    v = disjoint_from_secant(zero_spec(param))
    assert not v.disjoint and v.witness_param == (1, 0, 0, 0, 0, 0)


def test_oracles_agree_exhaustive_points_q2(param):
    rng = random.Random(12)
    for _ in range(150):
        v = disjoint_from_secant(random_spec(param, rng))
        assert v.secant_params == v.fg_params


def test_oracles_agree_sampled_q4():
    F = base_field(4)
    param = find_quadratic_param(F)
    rng = random.Random(13)
    for _ in range(100):
        v = disjoint_from_secant(random_spec(param, rng))
        assert v.oracles_agree


def test_chevalley_warning_sample():
    # a linear h and a cubic g in 6 variables (total degree 4 < 6) share a projective zero
    for q in (2, 4):
        F = base_field(q)
        param = find_quadratic_param(F)
        rng = random.Random(q)
        for _ in range(15):
            g = derive_fg(random_spec(param, rng)).g
            h = Poly.linear(F, [rng.randrange(q) for _ in range(6)])
            assert fg_zeros(FGSystem(h, g, param.a, F))


def test_json_round_trips(f2, param, des_spec):
    assert LinearSetSpec.from_json(des_spec.to_json(), f2) == des_spec
    fg = derive_fg(des_spec)
    assert FGSystem.from_json(fg.to_json(), f2) == fg


def test_spec_validation(param):
    with pytest.raises(ValueError):
        LinearSetSpec(param, ((0,) * 6,) * 5)
    with pytest.raises(FieldError):
        LinearSetSpec(param, ((2,) * 6,) * 6)


def test_ext_matrix_spec_is_plane(param, f4):
    spec = spec_from_ext_matrix(param, [[1, 2, 0], [0, 3, 1], [1, 1, 1]])
    assert spec.is_ext_linear()
    assert set(linset_points(spec).values()) == {2}
