"""Spread sets, the Desarguesian construction and presemifield bookkeeping.

A spread set C is a set of n x n matrices over F_q with ``S(A) = {(x, xA)}``;
together with ``S(inf) = {(0, y)}`` these form a spread of PG(2n-1, q)
exactly when all differences of members are nonsingular.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import BudgetExceeded, FieldError, GeometryError
from .field_tower import GF, FieldTower, QuadraticParam, digits, find_quadratic_param, undigits
from .linear_sets import LinearSetSpec
from .matrix_proj import (
    Subspace, canonical_vector, det, projective_points, rank, vecmat,
)
from .veronese import matrix_to_sym

Matrix = tuple[tuple[int, ...], ...]

PLANE_AXIOM_CAP = 256
PRESEMIFIELD_CAP = 1 << 12


@dataclass(frozen=True)
class SpreadSet:
    n: int
    field: GF
    matrices: tuple[Matrix, ...]

    def __len__(self):
        return len(self.matrices)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "field": {"tower": self.field.tower.descriptor(), "index": self.field.index},
            "matrices": [[x for row in A for x in row] for A in self.matrices],
        }

    @classmethod
    def from_json(cls, data: dict) -> "SpreadSet":
        n = int(data["n"])
        T = FieldTower.from_descriptor(data["field"]["tower"])
        F = T[int(data["field"]["index"])]
        mats = []
        for flat in data["matrices"]:
            if len(flat) != n * n:
                raise ValueError("matrix entry count does not match n")
            if not all(F.contains(int(x)) for x in flat):
                raise FieldError("matrix entry outside the field")
            mats.append(tuple(tuple(int(x) for x in flat[i * n:(i + 1) * n]) for i in range(n)))
        return cls(n, F, tuple(mats))


def load_spread_set(path) -> SpreadSet:
    with open(path) as fh:
        return SpreadSet.from_json(json.load(fh))


# -- Desarguesian construction ------------------------------------------------------

@lru_cache(maxsize=None)
def self_dual_basis(ext: GF, sub: GF) -> tuple[int, ...]:
    """First ordered basis (element order) with Tr(e_i e_j) = delta_ij."""
    n = ext.check_subfield(sub)
    tr = lambda u, v: ext.trace(ext.mul(u, v), sub)
    cands = [e for e in ext.elements() if e and tr(e, e) == 1]

    def extend(basis):
        if len(basis) == n:
            return basis
        for e in cands:
            if all(tr(e, b) == 0 for b in basis):
                found = extend(basis + [e])
                if found:
                    return found
        return None

    found = extend([])
    if found is None:
        raise FieldError(f"no trace-self-dual basis of {ext} over {sub}")
    return tuple(found)


def multiplication_matrix(a: int, basis: Sequence[int], ext: GF, sub: GF) -> Matrix:
    """M_a[i][j] = Tr(a e_i e_j); for a self-dual basis, e_i * a = sum_j M_a[i][j] e_j."""
    return tuple(tuple(ext.trace(ext.mul(a, ext.mul(ei, ej)), sub) for ej in basis)
                 for ei in basis)


def desarguesian_spread_set(ext: GF, sub: GF) -> SpreadSet:
    basis = self_dual_basis(ext, sub)
    mats = tuple(multiplication_matrix(a, basis, ext, sub) for a in ext.elements())
    return SpreadSet(len(basis), sub, mats)


# -- validation ----------------------------------------------------------------------

def _sub(A, B, F: GF) -> Matrix:
    return tuple(tuple(F.sub(x, y) for x, y in zip(r, s)) for r, s in zip(A, B))


def _add(A, B, F: GF) -> Matrix:
    return tuple(tuple(F.add(x, y) for x, y in zip(r, s)) for r, s in zip(A, B))


def pairwise_nonsingular(C: SpreadSet) -> bool:
    """Direct route: det(A - B) != 0 for all distinct pairs."""
    F = C.field
    return all(det(_sub(A, B, F), F) != 0 for A, B in itertools.combinations(C.matrices, 2))


def injective_on_vectors(C: SpreadSet) -> bool:
    """A - B singular iff xA = xB for some x != 0; check every nonzero x."""
    F = C.field
    for x in projective_points(C.n - 1, F):
        seen = set()
        for A in C.matrices:
            img = tuple(vecmat(x, A, F))
            if img in seen:
                return False
            seen.add(img)
    return True


def is_symmetric(A: Matrix) -> bool:
    return all(A[i][j] == A[j][i] for i in range(len(A)) for j in range(i))


def is_alternating(A: Matrix, F: GF) -> bool:
    n = len(A)
    return all(A[i][i] == 0 for i in range(n)) and all(
        A[i][j] == F.neg(A[j][i]) for i in range(n) for j in range(i))


def validate_spread_set(C: SpreadSet) -> dict[str, bool]:
    F = C.field
    mats = C.matrices
    zero = tuple((0,) * C.n for _ in range(C.n))
    distinct = len(set(mats)) == len(mats)
    spread = distinct and zero in mats and injective_on_vectors(C)
    full = distinct and len(mats) == F.order ** C.n
    members = set(mats)
    additive = distinct and all(_add(A, B, F) in members for A, B in itertools.combinations(mats, 2))
    alternating = all(is_alternating(A, F) for A in mats)
    return {
        "spread": spread,
        "full": full,
        "additive": additive,
        "semifield": spread and full and additive,
        "symplectic": all(is_symmetric(A) for A in mats),
        "alternating": alternating,
        "kerdock": spread and alternating and C.n % 2 == 0 and len(mats) == F.order ** (C.n - 1),
    }


# -- the spread itself --------------------------------------------------------------

def spread_elements(C: SpreadSet) -> list[Subspace]:
    F, n = C.field, C.n
    out = []
    for A in C.matrices:
        rows = [[int(i == j) for j in range(n)] + list(A[i]) for i in range(n)]
        out.append(Subspace.from_rows(F, rows, 2 * n - 1))
    out.append(Subspace.from_rows(F, [[0] * n + [int(i == j) for j in range(n)] for i in range(n)],
                                  2 * n - 1))
    return out


def beta(u: Sequence[int], v: Sequence[int], n: int, F: GF) -> int:
    """x1 y2^T - y1 x2^T for u = (x1, y1), v = (x2, y2)."""
    s = 0
    for i in range(n):
        s = F.add(s, F.mul(u[i], v[n + i]))
        s = F.sub(s, F.mul(u[n + i], v[i]))
    return s


def isotropy_witness(S: Subspace, n: int) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    F = S.field
    for u, v in itertools.combinations_with_replacement(S.basis, 2):
        if beta(u, v, n, F) != 0:
            return u, v
    return None


@dataclass
class CoverResult:
    elements: list[Subspace]
    partition: bool
    uncovered: int
    multiply_covered: int
    plane_checked: bool
    plane_ok: bool | None
    isotropic: bool
    isotropy_witness: tuple | None


def _affine_plane_ok(C: SpreadSet, elems: list[Subspace]) -> bool:
    """Points are vectors of F^{2n}, lines are cosets of spread elements."""
    F, n = C.field, C.n
    N = F.order ** (2 * n)
    vecs = [tuple(digits(c, F.order, 2 * n)) for c in range(N)]
    code = {v: i for i, v in enumerate(vecs)}
    pair_lines = np.zeros((N, N), dtype=np.int16)
    nlines = 0
    for S in elems:
        Svecs = list(S.vectors())
        covered = np.zeros(N, dtype=np.int16)
        for v in vecs:
            if covered[code[v]]:
                continue
            line = sorted(code[tuple(F.add(a, b) for a, b in zip(v, w))] for w in Svecs)
            covered[line] += 1
            nlines += 1
            idx = np.array(line)
            pair_lines[np.ix_(idx, idx)] += 1
        if not np.all(covered == 1):
            return False
    np.fill_diagonal(pair_lines, 1)
    k = F.order ** n
    return bool(np.all(pair_lines == 1)) and nlines == (k + 1) * k


def spread_cover(C: SpreadSet, check_plane: bool = True, require_spread: bool = True) -> CoverResult:
    """Spread elements, the partition count, isotropy and (tiny cases) the affine plane."""
    F, n = C.field, C.n
    if require_spread and not validate_spread_set(C)["spread"]:
        raise GeometryError("not a spread set")
    elems = spread_elements(C)
    counts: dict[tuple[int, ...], int] = {}
    for S in elems:
        for P in S.points():
            counts[P] = counts.get(P, 0) + 1
    total = (F.order ** (2 * n) - 1) // (F.order - 1)
    uncovered = total - len(counts)
    multi = sum(1 for c in counts.values() if c > 1)
    wit = None
    for S in elems:
        wit = isotropy_witness(S, n)
        if wit:
            break
    plane_checked = check_plane and F.order ** (2 * n) <= PLANE_AXIOM_CAP and uncovered == multi == 0
    return CoverResult(
        elements=elems,
        partition=uncovered == 0 and multi == 0,
        uncovered=uncovered,
        multiply_covered=multi,
        plane_checked=plane_checked,
        plane_ok=_affine_plane_ok(C, elems) if plane_checked else None,
        isotropic=wit is None,
        isotropy_witness=wit,
    )


# -- transport to a linear set -----------------------------------------------------

@dataclass
class LinsetImage:
    points: frozenset[tuple[int, ...]]
    spec: LinearSetSpec
    fq_dim: int
    plane: Subspace | None


def spread_to_linset(C: SpreadSet, sub: GF, param: QuadraticParam | None = None) -> LinsetImage:
    """Symmetric 3x3 spread set over F_{q^2}, closed over F_q, as a rank-6 linear set."""
    E = C.field
    if C.n != 3:
        raise GeometryError("transport is defined for 3x3 matrices")
    if E.check_subfield(sub) != 2:
        raise FieldError(f"{E} is not a quadratic extension of {sub}")
    if not all(is_symmetric(A) for A in C.matrices):
        raise GeometryError("spread set has non-symmetric members")
    param = param or find_quadratic_param(sub)
    if param.ext != E:
        raise FieldError("quadratic parameter lives in another field")
    ts = [matrix_to_sym(A) for A in C.matrices]
    members = set(ts)
    coords = [[c for x in t for c in E.coords(x, sub)] for t in ts]
    dim = rank(coords, sub)
    closed = all(tuple(E.add(x, y) for x, y in zip(s, t)) in members
                 for s, t in itertools.combinations(ts, 2))
    closed = closed and all(tuple(E.mul(c, x) for x in t) in members
                            for c in sub.elements() for t in ts)
    if dim != 6 or not closed or len(ts) != sub.order ** 6:
        raise GeometryError(f"not an F_{sub.order}-space of dimension 6 (rank {dim})")
    by_diag = {t[:3]: t for t in ts}
    if len(by_diag) != len(ts):
        raise GeometryError("diagonal projection is not injective")
    cols = []
    for k in range(6):
        u = [int(k == j) for j in range(6)]
        diag = tuple(param.combine(u[i], u[i + 1]) for i in (0, 2, 4))
        t = by_diag[diag]
        cols.append([c for x in t[3:] for c in param.xi_coords(x)])
    spec = LinearSetSpec(param, tuple(tuple(cols[c][r] for c in range(6)) for r in range(6)))
    pts = frozenset(canonical_vector(t, E) for t in ts if any(t))
    plane = None
    if len(pts) == E.order ** 2 + E.order + 1:
        S = Subspace.from_rows(E, [list(t) for t in ts if any(t)], 5)
        if S.dim == 2:
            plane = S
    return LinsetImage(pts, spec, dim, plane)


# -- presemifield ------------------------------------------------------------------

@dataclass
class Presemifield:
    field: GF
    n: int
    table: np.ndarray
    add: np.ndarray

    @property
    def order(self) -> int:
        return len(self.table)

    def distributive(self) -> bool:
        T, A = self.table, self.add
        for x in range(self.order):
            if not np.array_equal(T[x][A], A[T[x][:, None], T[x][None, :]]):
                return False
            if not np.array_equal(T[:, x][A], A[T[:, x][:, None], T[:, x][None, :]]):
                return False
        return True

    def zero_divisor_free(self) -> bool:
        return bool(np.all(self.table[1:, 1:] != 0))

    def left_nucleus(self) -> list[int]:
        T = self.table
        return [k for k in range(self.order) if np.array_equal(T[k][T], T[T[k]])]

    def middle_nucleus(self) -> list[int]:
        T = self.table
        return [k for k in range(self.order) if np.array_equal(T[:, T[k]], T[T[:, k]])]

    def right_nucleus(self) -> list[int]:
        T = self.table
        return [k for k in range(self.order) if np.array_equal(T[T, k], T[:, T[:, k]])]

    def center(self) -> list[int]:
        T = self.table
        nuc = set(self.left_nucleus()) & set(self.middle_nucleus()) & set(self.right_nucleus())
        return sorted(k for k in nuc if np.array_equal(T[k], T[:, k]))


def presemifield_ops(C: SpreadSet) -> Presemifield:
    """x o y = x M(y), where M(y) is the member whose first row is y."""
    F, n = C.field, C.n
    N = F.order ** n
    if N > PRESEMIFIELD_CAP:
        raise BudgetExceeded(f"{N} elements exceeds cap {PRESEMIFIELD_CAP}")
    flags = validate_spread_set(C)
    if not flags["semifield"]:
        raise GeometryError("spread set is not additive and full")
    by_row = {A[0]: A for A in C.matrices}
    if len(by_row) != N:
        raise GeometryError("first rows do not determine members")
    vecs = [digits(c, F.order, n) for c in range(N)]
    table = np.zeros((N, N), dtype=np.int64)
    for y, vy in enumerate(vecs):
        M = by_row[tuple(vy)]
        for x, vx in enumerate(vecs):
            table[x, y] = undigits(vecmat(vx, M, F), F.order)
    D = np.array(vecs, dtype=np.int64)
    S = F.vadd(D[:, None, :], D[None, :, :])
    add = (S * (F.order ** np.arange(n))).sum(axis=-1)
    return Presemifield(F, n, table, add)
