import json
import random

import pytest

from symspread.errors import GeometryError
from symspread.field_tower import create_tower
from symspread.matrix_proj import identity, mat_inv, matmul, rank
from symspread.spread_kit import (
    SpreadSet, desarguesian_spread_set, injective_on_vectors, is_symmetric, load_spread_set,
    pairwise_nonsingular, presemifield_ops, self_dual_basis, spread_cover, spread_to_linset,
    validate_spread_set,
)
from symspread.veronese import plane_profile


@pytest.fixture(scope="module")
def des8():
    T = create_tower(2, [1, 3])
    return desarguesian_spread_set(T[1], T[0])


@pytest.fixture(scope="module")
def des64(t123):
    return desarguesian_spread_set(t123[2], t123[1])


def _tup(M):
    return tuple(tuple(r) for r in M)


def test_desarguesian_q2(des8):
    assert len(des8) == 8
    assert all(is_symmetric(A) for A in des8.matrices)
    assert pairwise_nonsingular(des8)
    assert _tup(identity(3)) in des8.matrices
    assert des8.matrices[1] == _tup(identity(3))  # element 1
    flags = validate_spread_set(des8)
    assert flags["spread"] and flags["semifield"] and flags["symplectic"] and not flags["kerdock"]


def test_desarguesian_over_f4(des64, t123):
    F4 = t123[1]
    assert len(des64) == 64 and all(is_symmetric(A) for A in des64.matrices)
    flat = [[x for r in A for x in r] for A in des64.matrices]
    assert rank(flat, F4) == 3
    basis = self_dual_basis(t123[2], F4)
    tr = lambda u, v: t123[2].trace(t123[2].mul(u, v), F4)
    assert [[tr(u, v) for v in basis] for u in basis] == identity(3)


def test_small_sets(f2):
    zero, I = _tup([[0] * 3] * 3), _tup(identity(3))
    flags = validate_spread_set(SpreadSet(3, f2, (zero, I)))
    assert flags["spread"] and not flags["full"] and not flags["semifield"] and flags["symplectic"]
    J = _tup([[int(i != j) for j in range(4)] for i in range(4)])
    z4 = _tup([[0] * 4] * 4)
    flags = validate_spread_set(SpreadSet(4, f2, (z4, J)))
    assert flags["spread"] and flags["alternating"] and not flags["kerdock"]


def test_cover_partition(des8):
    res = spread_cover(des8)
    assert len(res.elements) == 9
    assert sum(S.num_points() for S in res.elements) == 63
    assert res.partition and res.isotropic


def test_affine_plane_order_4():
    T = create_tower(2, [1, 2])
    C = desarguesian_spread_set(T[1], T[0])
    res = spread_cover(C)
    assert res.plane_checked and res.plane_ok
    assert len(res.elements) * 4 == 20


def test_spread_iff_partition(des8, f2):
    rng = random.Random(3)
    for _ in range(20):
        mats = list(des8.matrices)
        k = rng.randrange(1, 8)
        mats[k] = _tup([[rng.randrange(2) for _ in range(3)] for _ in range(3)])
        C = SpreadSet(3, f2, tuple(mats))
        flags = validate_spread_set(C)
        assert flags["spread"] == pairwise_nonsingular(C) == injective_on_vectors(C)
        assert spread_cover(C, require_spread=False).partition == flags["spread"]
        if not flags["spread"]:
            with pytest.raises(GeometryError):
                spread_cover(C)


def test_non_symmetric_spread_has_isotropy_witness(des8, f2):
    P = [[1, 1, 0], [0, 1, 0], [0, 0, 1]]
    Pi = mat_inv(P, f2)
    C = SpreadSet(3, f2, tuple(_tup(matmul(matmul(Pi, A, f2), P, f2)) for A in des8.matrices))
    flags = validate_spread_set(C)
    assert flags["spread"] and not flags["symplectic"]
    res = spread_cover(C)
    assert res.partition and not res.isotropic and res.isotropy_witness is not None


def test_transport_to_plane(des64, t123):
    img = spread_to_linset(des64, t123[0])
    assert img.fq_dim == 6 and len(img.points) == 21
    assert img.plane is not None
    assert (0, 0, 0, 0, 0, 0) not in img.points
    assert plane_profile(img.plane, t123[2]).tag == "three-conjugate-lines"


def test_transport_rejects(des8, t123):
    with pytest.raises(Exception):
        spread_to_linset(des8, t123[0])


def test_presemifield_field_cases(des8, des64):
    ps = presemifield_ops(des8)
    assert len(ps.left_nucleus()) == len(ps.center()) == 8
    assert ps.distributive() and ps.zero_divisor_free()
    ps = presemifield_ops(des64)
    assert len(ps.center()) == 64 and ps.distributive()


def test_presemifield_rejects_non_semifield(f2):
    zero, I = _tup([[0] * 3] * 3), _tup(identity(3))
    with pytest.raises(GeometryError):
        presemifield_ops(SpreadSet(3, f2, (zero, I)))


def test_json_import(des64, tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps(des64.to_json()))
    C = load_spread_set(path)
    assert C == des64
    assert validate_spread_set(C)["semifield"]
