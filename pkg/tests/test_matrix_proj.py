import itertools
import random

import pytest
from hypothesis import given, strategies as st

from symspread.errors import BudgetExceeded, GeometryError
from symspread.field_tower import create_tower
from symspread.matrix_proj import (
    ProjPoint, Subspace, canonical_vector, conjugate, det, det_cofactor, det_rank_kernel,
    enumerate_subspaces, gaussian_binomial, identity, is_rational, kernel, mat_inv, matmul,
    normalize_point, projective_points, rank, rref, span_meet,
)
from symspread.veronese import sym_to_matrix


def test_det_rank_kernel_examples(f2):
    assert det_rank_kernel(identity(3), f2) == (1, 3, [])
    d, r, K = det_rank_kernel([[1, 1, 1]] * 3, f2)
    assert (d, r, len(K)) == (0, 1, 2)
    for k in K:
        assert matmul([k], [[1, 1, 1]] * 3, f2) == [[0, 0, 0]]


def test_invertible_symmetric_f2(f2):
    n = sum(det(sym_to_matrix(t), f2) != 0 for t in itertools.product(range(2), repeat=6))
    assert n == 28


@given(st.lists(st.integers(0, 3), min_size=16, max_size=16))
def test_det_elimination_vs_cofactor(entries):
    F = create_tower(2, [2])[0]
    M = [entries[4 * i:4 * i + 4] for i in range(4)]
    assert det(M, F) == det_cofactor(M, F)
    assert (det(M, F) != 0) == (rank(M, F) == 4)


@given(st.lists(st.integers(0, 2), min_size=9, max_size=9))
def test_det_odd_characteristic(entries):
    F = create_tower(3, [1])[0]
    M = [entries[3 * i:3 * i + 3] for i in range(3)]
    assert det(M, F) == det_cofactor(M, F)
    if det(M, F):
        assert matmul(M, mat_inv(M, F), F) == identity(3)


def test_kernel_dimension(f4):
    rng = random.Random(2)
    for _ in range(50):
        M = [[rng.randrange(4) for _ in range(5)] for _ in range(3)]
        K = kernel(M, f4)
        assert len(K) + rank(M, f4) == 3
        for k in K:
            assert all(x == 0 for x in matmul([k], M, f4)[0])


def test_normalize_examples(f4):
    xi = 2
    assert normalize_point([xi, xi], f4).coords == (1, 1)
    assert canonical_vector([0, xi, 1], f4) == (0, 1, f4.inv(xi))
    assert f4.inv(xi) == 3
    assert canonical_vector([1, 0, 0], f4) == (1, 0, 0)
    with pytest.raises(GeometryError):
        canonical_vector([0, 0], f4)


def test_projective_point_counts(f2, f4):
    assert len(list(projective_points(5, f2))) == 63
    assert len(list(projective_points(2, f4))) == 21


@pytest.mark.parametrize("p,degs", [(2, [1]), (3, [1]), (2, [2])])
def test_enumeration_matches_gaussian_binomial(p, degs):
    F = create_tower(p, degs)[0]
    q = F.order
    for n in range(1, 6 if q < 4 else 5):
        for k in range(n + 1):
            total = gaussian_binomial(n + 1, k + 1, q)
            if total > 20000:
                continue
            subs = list(enumerate_subspaces(n, F, k))
            assert len(subs) == total
            assert len(set(subs)) == total


def test_plane_counts():
    assert gaussian_binomial(6, 3, 2) == 1395 == 63 * 31 * 15 // (7 * 3 * 1)
    assert gaussian_binomial(6, 3, 4) == 376805
    assert gaussian_binomial(6, 4, 2) == 651
    assert gaussian_binomial(6, 4, 4) == 93093


def test_enumeration_cursor_and_budget(f2):
    full = list(enumerate_subspaces(5, f2, 2))
    tail = list(enumerate_subspaces(5, f2, 2, cursor=(3, 5)))
    assert full[-len(tail):] == tail
    with pytest.raises(BudgetExceeded):
        list(enumerate_subspaces(5, f2, 2, budget=100))


def test_canonical_order_lexicographic(f2):
    planes = list(enumerate_subspaces(4, f2, 1))
    assert all(S.basis == tuple(map(tuple, rref(S.basis, f2)[0])) for S in planes)
    assert planes == sorted(planes, key=lambda S: (S.pivots, [x for r in S.basis for x in r]))


def test_span_meet_examples(f2):
    plane = Subspace.from_rows(f2, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]])
    l1 = Subspace.from_rows(f2, [[1, 0, 0, 0], [0, 1, 0, 0]])
    l2 = Subspace.from_rows(f2, [[1, 0, 0, 0], [0, 0, 1, 0]])
    m = span_meet("meet", l1, l2)
    assert m.dim == 0 and m.basis == ((1, 0, 0, 0),)
    assert span_meet("span", plane, plane) == plane
    A = Subspace.from_rows(f2, [[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0]])
    B = Subspace.from_rows(f2, [[0, 0, 0, 1, 0, 0], [0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 1]])
    assert span_meet("meet", A, B).dim == -1
    with pytest.raises(GeometryError):
        span_meet("meet", plane, A)


def test_membership_invariance(f4):
    rng = random.Random(5)
    for _ in range(30):
        rows = [[rng.randrange(4) for _ in range(6)] for _ in range(3)]
        S = Subspace.from_rows(f4, rows)
        mixed = [rows[0], [f4.add(a, f4.mul(2, b)) for a, b in zip(rows[0], rows[1])], rows[2]]
        assert Subspace.from_rows(f4, mixed) == S or rank(rows, f4) < 3
        v = [f4.mul(3, x) for x in rows[1]]
        if any(v):
            assert S.contains(v) and S.contains(normalize_point(v, f4))


def test_conjugate_examples(f4, f2):
    assert conjugate(ProjPoint((1, 1, 0), f4), 1, f2).coords == (1, 1, 0)
    assert conjugate(ProjPoint((1, 2, 0), f4), 1, f2).coords == (1, 3, 0)


def test_conjugate_orbit_size_three(t123):
    F4, F64 = t123[1], t123[2]
    P = ProjPoint(canonical_vector([1, 4, 16], F64), F64)
    orbit = {P.coords, conjugate(P, 1, F4).coords, conjugate(P, 2, F4).coords}
    assert len(orbit) == 3
    assert conjugate(P, 3, F4).coords == P.coords


def test_conjugate_is_collineation(t123):
    F4, F64 = t123[1], t123[2]
    rng = random.Random(9)
    for _ in range(10):
        S = Subspace.from_rows(F64, [[rng.randrange(64) for _ in range(4)] for _ in range(2)])
        C = conjugate(S, 1, F4)
        assert C.dim == S.dim
        for v in list(S.points())[:5]:
            assert C.contains([F64.frobenius(x, F4) for x in v])
    R = Subspace.from_rows(F64, [[1, 2, 3, 0]])
    assert is_rational(R, F4) and conjugate(R, 1, F4) == R
