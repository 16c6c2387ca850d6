"""Quadric Veronese surface V in PG(5, F), its secant variety V1 and plane profiles.

Coordinate convention (also the wire format): a point ``t = (t0, ..., t5)``
is the symmetric matrix::

    | t0 t3 t4 |
    | t3 t1 t5 |
    | t4 t5 t2 |

V is the set of rank-1 matrices, V1 the rank <= 2 ones (a cubic hypersurface).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import BudgetExceeded, GeometryError
from .field_tower import GF
from .matrix_proj import (
    Subspace, canonical_vector, det, kernel, projective_points, rank,
    right_kernel, transpose, matmul,
)
from .poly import Poly

# t index -> matrix position
SYM_INDEX = ((0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2))

DEFAULT_MAX_EXT_ORDER = 4096


def sym_to_matrix(t: Sequence[int]) -> list[list[int]]:
    A = [[0] * 3 for _ in range(3)]
    for k, (i, j) in enumerate(SYM_INDEX):
        A[i][j] = A[j][i] = t[k]
    return A


def matrix_to_sym(A: Sequence[Sequence[int]]) -> tuple[int, ...]:
    if any(A[i][j] != A[j][i] for i in range(3) for j in range(3)):
        raise GeometryError("matrix is not symmetric")
    return tuple(A[i][j] for i, j in SYM_INDEX)


@dataclass(frozen=True)
class SymPoint:
    t: tuple[int, ...]
    field: GF

    @classmethod
    def from_matrix(cls, A, F: GF) -> "SymPoint":
        return cls(canonical_vector(matrix_to_sym(A), F), F)

    def matrix(self) -> list[list[int]]:
        return sym_to_matrix(self.t)

    def rank(self) -> int:
        return rank(self.matrix(), self.field)

    def on_veronese(self) -> bool:
        return self.rank() == 1

    def on_secant(self) -> bool:
        return self.rank() <= 2


def v2(P: Sequence[int], F: GF) -> SymPoint:
    """(x, y, z) -> (x^2, y^2, z^2, xy, xz, yz)."""
    x, y, z = P
    if not (x or y or z):
        raise GeometryError("zero vector")
    m = F.mul
    t = (m(x, x), m(y, y), m(z, z), m(x, y), m(x, z), m(y, z))
    return SymPoint(canonical_vector(t, F), F)


def veronese_preimage(T: SymPoint) -> tuple[int, ...]:
    """R with v2(R) = T for a rank-1 T (any nonzero row of the matrix)."""
    A = T.matrix()
    if rank(A, T.field) != 1:
        raise GeometryError("point is not on the Veronese surface")
    row = next(r for r in A if any(r))
    return canonical_vector(row, T.field)


def secant_value(t: Sequence[int], F: GF) -> int:
    """t0 t1 t2 - t0 t5^2 - t1 t4^2 - t2 t3^2 + 2 t3 t4 t5."""
    t0, t1, t2, t3, t4, t5 = t
    m, a, s = F.mul, F.add, F.sub
    v = m(m(t0, t1), t2)
    v = s(v, m(t0, m(t5, t5)))
    v = s(v, m(t1, m(t4, t4)))
    v = s(v, m(t2, m(t3, t3)))
    if F.p != 2:
        v = a(v, m(a(1, 1), m(m(t3, t4), t5)))
    return v


def secant_eval(T: SymPoint | Sequence[int], F: GF | None = None) -> tuple[int, bool]:
    """Cubic-equation value and V1 membership, cross-checked against the determinant."""
    if isinstance(T, SymPoint):
        t, F = T.t, T.field
    else:
        t = tuple(T)
    value = secant_value(t, F)
    by_det = det(sym_to_matrix(t), F) == 0
    if (value == 0) != by_det:
        raise ArithmeticError("secant equation and determinant disagree")
    return value, value == 0


def secant_poly(F: GF) -> Poly:
    t = [Poly.var(F, 6, i) for i in range(6)]
    two = F.add(1, 1)
    c = t[0] * t[1] * t[2] - t[0] * t[5] * t[5] - t[1] * t[4] * t[4] - t[2] * t[3] * t[3]
    if two:
        c = c + t[3] * t[4] * t[5] * two
    return c


def secant_values_np(T: np.ndarray, F: GF) -> np.ndarray:
    """Vectorised secant cubic on an integer array (..., 6)."""
    T = np.asarray(T, dtype=np.int64)
    t0, t1, t2, t3, t4, t5 = (T[..., i] for i in range(6))
    mul, add, sub = F.vmul, F.vadd, F.vsub
    v = mul(mul(t0, t1), t2)
    v = sub(v, mul(t0, mul(t5, t5)))
    v = sub(v, mul(t1, mul(t4, t4)))
    v = sub(v, mul(t2, mul(t3, t3)))
    if F.p != 2:
        v = add(v, mul(np.full_like(t3, F.add(1, 1)), mul(mul(t3, t4), t5)))
    return v


# -- special planes -----------------------------------------------------------

def nucleus_plane(F: GF) -> Subspace:
    if F.p != 2:
        raise GeometryError("the nucleus plane exists only in characteristic 2")
    return Subspace.from_rows(F, [[0, 0, 0, 1, 0, 0], [0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 1]])


def conic_plane(F: GF, line: Sequence[int]) -> Subspace:
    """Plane spanned by v2 of three points of the line {u . x = 0}."""
    p, q = right_kernel([list(line)], F)
    r = [F.add(a, b) for a, b in zip(p, q)]
    return Subspace.from_rows(F, [v2(p, F).t, v2(q, F).t, v2(r, F).t])


def _bilinear_row(v: Sequence[int], w: Sequence[int], F: GF) -> list[int]:
    """Coefficients (in t-order) of the linear form A -> v A w^T on symmetric A."""
    out = []
    for i, j in SYM_INDEX:
        if i == j:
            out.append(F.mul(v[i], w[i]))
        else:
            out.append(F.add(F.mul(v[i], w[j]), F.mul(v[j], w[i])))
    return out


def tangent_plane(F: GF, P: Sequence[int]) -> Subspace:
    """{A : v_i A v_j^T = 0} for a basis v1, v2 of the lines through P."""
    v1, v2_ = right_kernel([list(P)], F)
    eqs = [_bilinear_row(v1, v1, F), _bilinear_row(v1, v2_, F), _bilinear_row(v2_, v2_, F)]
    basis = right_kernel(eqs, F, 6)
    if len(basis) != 3:
        raise GeometryError("tangent construction did not give a plane")
    return Subspace.from_rows(F, basis)


def special_plane(kind: str, F: GF, arg=None) -> Subspace:
    if kind == "nucleus":
        return nucleus_plane(F)
    if kind == "conic":
        return conic_plane(F, arg)
    if kind == "tangent":
        return tangent_plane(F, arg)
    raise GeometryError(f"unknown plane kind {kind!r}")


def in_secant(v: Sequence[int], F: GF) -> bool:
    return secant_value(v, F) == 0


def count_secant_points(S: Subspace) -> int:
    return sum(1 for v in S.points() if in_secant(v, S.field))


def classify_contained_plane(S: Subspace) -> tuple[str, tuple[int, ...] | None]:
    """Return ("conic", line) / ("tangent", point) / ("nucleus", None) / ("unclassified", None)."""
    F = S.field
    if S.dim != 2 or S.n != 5:
        raise GeometryError("not a plane of PG(5)")
    if not contained_in_secant(S):
        raise GeometryError("plane is not contained in the secant variety")
    mats = [sym_to_matrix(r) for r in S.basis]
    stacked = [sum((mats[k][i] for k in range(3)), []) for i in range(3)]
    K = kernel(stacked, F)
    if K:
        line = canonical_vector(K[0], F)
        if len(K) == 1 and conic_plane(F, line) == S:
            return "conic", line
        return "unclassified", None
    if all(r[0] == r[1] == r[2] == 0 for r in S.basis):
        return "nucleus", None
    ver = [v for v in S.points() if rank(sym_to_matrix(v), F) == 1]
    if len(ver) == 1:
        P = veronese_preimage(SymPoint(ver[0], F))
        if tangent_plane(F, P) == S:
            return "tangent", P
    return "unclassified", None


# -- lifted collineations -------------------------------------------------------

def _sym_basis(k: int) -> list[list[int]]:
    t = [0] * 6
    t[k] = 1
    return sym_to_matrix(t)


def lift_collineation(M: Sequence[Sequence[int]], F: GF) -> list[list[int]]:
    """6x6 matrix L with t(v2(P)) L = t(v2(P M)), i.e. A -> M^T A M."""
    if det(M, F) == 0:
        raise GeometryError("singular matrix")
    Mt = transpose(M)
    return [list(matrix_to_sym(matmul(matmul(Mt, _sym_basis(k), F), M, F))) for k in range(6)]


def apply_lift(L, X, F: GF):
    if isinstance(X, SymPoint):
        return SymPoint(canonical_vector(matmul([list(X.t)], L, F)[0], F), F)
    if isinstance(X, Subspace):
        return Subspace.from_rows(F, matmul([list(r) for r in X.basis], L, F), X.n)
    return canonical_vector(matmul([list(X)], L, F)[0], F)


# -- intersection profiles ------------------------------------------------------

@dataclass
class IntersectionProfile:
    tag: str
    rational_points: int
    base_lines: int
    ext_lines: tuple[tuple[int, ...], ...] | None = None
    singular_points: tuple[tuple[int, ...], ...] = ()
    veronese_preimages: tuple[tuple[int, ...], ...] = ()
    witness: tuple[int, ...] | None = None
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "tag": self.tag,
            "rational_points": self.rational_points,
            "base_lines": self.base_lines,
            "ext_lines": None if self.ext_lines is None else [list(l) for l in self.ext_lines],
            "singular_points": [list(p) for p in self.singular_points],
            "veronese_preimages": [list(p) for p in self.veronese_preimages],
            "witness": None if self.witness is None else list(self.witness),
            "notes": list(self.notes),
        }


def restricted_cubic(S: Subspace, E: GF) -> Poly:
    """The secant cubic pulled back to a subspace, in its basis coefficients."""
    k = len(S.basis)
    cs = [Poly.var(E, k, i) for i in range(k)]
    ts = []
    for j in range(6):
        p = Poly(E, k)
        for i in range(k):
            if S.basis[i][j]:
                p = p + cs[i] * S.basis[i][j]
        ts.append(p)
    return secant_poly(E).subs(ts)


def plane_cubic(S: Subspace, E: GF) -> Poly:
    """det restricted to the plane: a ternary cubic in the basis coefficients (a, b, c)."""
    if S.dim != 2:
        raise GeometryError("not a plane")
    return restricted_cubic(S, E)


def contained_in_secant(S: Subspace) -> bool:
    """Containment as varieties: the pulled-back cubic is the zero polynomial.

    Over F_2 a nonzero cubic can vanish at every rational point, so a
    pointwise count is not enough.
    """
    return restricted_cubic(S, S.field).is_zero()


def derivative(P: Poly, i: int) -> Poly:
    F = P.field
    t = {}
    for m, c in P.terms.items():
        e = m[i]
        if e % F.p:
            mm = list(m)
            mm[i] -= 1
            t[tuple(mm)] = F.add(t.get(tuple(mm), 0), F.mul(c, e % F.p))
    return Poly(F, P.nvars, t)


def _cross(u, v, F: GF) -> tuple[int, ...]:
    m, s = F.mul, F.sub
    return (s(m(u[1], v[2]), m(u[2], v[1])),
            s(m(u[2], v[0]), m(u[0], v[2])),
            s(m(u[0], v[1]), m(u[1], v[0])))


def _line_points(p, q, F: GF) -> np.ndarray:
    """All points of the line through p and q as an array (|F|+1, 3)."""
    lam = np.arange(F.order, dtype=np.int64)
    P = np.asarray(p, dtype=np.int64)
    Qv = np.asarray(q, dtype=np.int64)
    pts = F.vadd(P[None, :], F.vmul(lam[:, None], Qv[None, :]))
    return np.vstack([pts, Qv[None, :]])


def _is_component(C: Poly, u: Sequence[int], E: GF) -> bool:
    p, q = right_kernel([list(u)], E)
    if E.order >= 3:
        return not C.evaluate_many(_line_points(p, q, E)[:4]).any()
    st = [Poly.var(E, 2, 0), Poly.var(E, 2, 1)]
    return C.subs([st[0] * p[i] + st[1] * q[i] for i in range(3)]).is_zero()


def line_components(C: Poly, E: GF, base: GF) -> tuple[tuple[int, ...], ...] | None:
    """Lines of PG(2, E) on which the ternary cubic C vanishes identically.

    Returns None when C is the zero polynomial (every line).  Every component
    meets a base line L that is not itself a component, so it suffices to
    look at lines through the (at most 3) zeros of C on L.
    """
    if C.is_zero():
        return None
    ref = None
    for u in projective_points(2, base):
        if not _is_component(C, u, E):
            ref = u
            break
    p, q = right_kernel([list(ref)], E)
    roots = [tuple(int(x) for x in r) for r, val in
             zip(_line_points(p, q, E), C.evaluate_many(_line_points(p, q, E))) if val == 0]
    found = set()
    for r in roots:
        r = canonical_vector(r, E)
        i = next(k for k, x in enumerate(r) if x)
        # lines through r <-> points d of the coordinate line {x_i = 0}
        e1, e2 = [[int(k == j) for k in range(3)] for j in range(3) if j != i]
        D = _line_points(e1, e2, E)
        R = np.asarray(r, dtype=np.int64)[None, :]
        if E.order >= 3:
            omega = 2 if E.order > 2 else 1
            ok = ~C.evaluate_many(D).astype(bool)
            ok &= ~C.evaluate_many(E.vadd(R, D)).astype(bool)
            ok &= ~C.evaluate_many(E.vadd(R, E.vmul(np.int64(omega), D))).astype(bool)
            cands = D[ok]
        else:
            cands = D
        for d in cands:
            u = canonical_vector(_cross(r, tuple(int(x) for x in d), E), E)
            if u not in found and _is_component(C, u, E):
                found.add(u)
    return tuple(sorted(found))


def _plane_point_to_pg5(S: Subspace, abc: Sequence[int], E: GF) -> tuple[int, ...]:
    v = [0] * 6
    for c, r in zip(abc, S.basis):
        if c:
            v = [E.add(x, E.mul(c, y)) for x, y in zip(v, r)]
    return canonical_vector(v, E)


def _frob_point(P: Sequence[int], E: GF, base: GF) -> tuple[int, ...]:
    return canonical_vector([E.frobenius(x, base) for x in P], E)


def plane_profile(S: Subspace, E: GF, max_ext_order: int = DEFAULT_MAX_EXT_ORDER) -> IntersectionProfile:
    """Profile of pi cap V1 for a plane pi of PG(5, F), using the cubic extension E of F."""
    F = S.field
    if S.dim != 2 or S.n != 5:
        raise GeometryError("plane_profile needs a plane of PG(5)")
    if E.check_subfield(F) != 3:
        raise GeometryError(f"{E} is not a cubic extension of {F}")
    if E.order > max_ext_order:
        raise BudgetExceeded(f"extension of order {E.order} exceeds cap {max_ext_order}")
    Q = F.order
    nplane = Q * Q + Q + 1
    C = plane_cubic(S, E)
    base_pts = np.array(list(projective_points(2, F)), dtype=np.int64)
    zero_mask = C.evaluate_many(base_pts) == 0
    rational = int(zero_mask.sum())
    if C.is_zero():
        kind, wit = classify_contained_plane(S)
        tag = "contained-" + kind if kind != "unclassified" else "other"
        return IntersectionProfile(tag, rational, nplane, None, witness=wit)

    lines = line_components(C, E, F)
    base_lines = sum(1 for u in lines if all(F.contains(x) for x in u))
    prof = IntersectionProfile("has-rational-points" if rational else "other",
                               rational, base_lines, lines)
    # singular points of the cubic on its line components
    grads = [derivative(C, i) for i in range(3)]
    sing = set()
    for u in lines:
        p, q = right_kernel([list(u)], E)
        pts = _line_points(p, q, E)
        mask = np.ones(len(pts), dtype=bool)
        for g in grads:
            mask &= g.evaluate_many(pts) == 0
        mask &= C.evaluate_many(pts) == 0
        for pt in pts[mask]:
            sing.add(canonical_vector(tuple(int(x) for x in pt), E))
    sing_pg5 = tuple(sorted(_plane_point_to_pg5(S, s, E) for s in sing))
    prof.singular_points = sing_pg5
    if rational:
        if not prof.witness:
            idx = int(np.flatnonzero(zero_mask)[0])
            prof.witness = _plane_point_to_pg5(S, base_pts[idx].tolist(), F)
        return prof

    # three conjugate lines through three conjugate Veronese points?
    ok = len(lines) == 3
    if ok:
        lset = set(lines)
        img = {canonical_vector([E.frobenius(x, F) for x in u], E) for u in lines}
        ok = img == lset and all(canonical_vector([E.frobenius(x, F) for x in u], E) != u
                                 for u in lines)
        if not ok:
            prof.notes.append("lines not a Frobenius 3-cycle")
    if ok:
        meets = {canonical_vector(_cross(lines[i], lines[j], E), E)
                 for i, j in ((0, 1), (0, 2), (1, 2))}
        ok = len(meets) == 3 and meets == sing
        if not ok:
            prof.notes.append("singular points are not the pairwise meets")
    if ok:
        pre = []
        for P in sing_pg5:
            T = SymPoint(P, E)
            if not T.on_veronese():
                ok = False
                prof.notes.append("singular point off the Veronese surface")
                break
            if all(F.contains(x) for x in P):
                ok = False
                prof.notes.append("singular point is base-rational")
                break
            pre.append(veronese_preimage(T))
        if ok and {_frob_point(P, E, F) for P in sing_pg5} != set(sing_pg5):
            ok = False
            prof.notes.append("singular points not permuted by Frobenius")
        prof.veronese_preimages = tuple(pre)
    if ok:
        prof.tag = "three-conjugate-lines"
    return prof


__all__ = [
    "SYM_INDEX", "SymPoint", "IntersectionProfile", "v2", "veronese_preimage",
    "secant_value", "secant_eval", "secant_poly", "secant_values_np",
    "nucleus_plane", "conic_plane", "tangent_plane", "special_plane",
    "classify_contained_plane", "count_secant_points", "lift_collineation",
    "apply_lift", "plane_profile", "plane_cubic", "restricted_cubic", "contained_in_secant", "line_components",
]
