"""Rank-6 F_q-linear sets of PG(5, q^2) written as graphs over the diagonal.

A spec is ``W = {(x, y, z, F1, F2, F3)}`` with ``x = x1 + x2*xi`` (same for y,
z) and ``F_i = first_i + xi*second_i`` for F_q-linear forms in the parameter
vector ``u = (x1, x2, y1, y2, z1, z2)``.  The six forms are stored as a 6x6
matrix over F_q: rows ``l1, l2, m1, m2, n1, n2``, columns ``x1 .. z2``.

Points of Lambda lie on V1 exactly when the cubic system (f, g) vanishes at u;
``derive_fg`` builds that system and ``disjoint_from_secant`` checks both
routes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import BudgetExceeded, FieldError
from .field_tower import GF, QuadraticParam, create_tower, find_quadratic_param
from .matrix_proj import canonical_vector, projective_points
from .poly import Poly
from .veronese import secant_value

VAR_NAMES = ("x1", "x2", "y1", "y2", "z1", "z2")
FORM_NAMES = ("l1", "l2", "m1", "m2", "n1", "n2")
MAX_Q = 4


@dataclass(frozen=True)
class LinearSetSpec:
    param: QuadraticParam
    forms: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.forms) != 6 or any(len(r) != 6 for r in self.forms):
            raise ValueError("forms must be a 6x6 matrix")
        if not all(self.param.base.contains(c) for r in self.forms for c in r):
            raise FieldError("form coefficients must lie in F_q")

    @property
    def base(self) -> GF:
        return self.param.base

    @property
    def ext(self) -> GF:
        return self.param.ext

    def form_values(self, u: Sequence[int]) -> list[int]:
        F = self.base
        out = []
        for row in self.forms:
            s = 0
            for c, x in zip(row, u):
                if c and x:
                    s = F.add(s, F.mul(c, x))
            out.append(s)
        return out

    def vector(self, u: Sequence[int]) -> tuple[int, ...]:
        """(x, y, z, F1, F2, F3) in F_{q^2}^6 for a parameter vector u."""
        c = self.param.combine
        v = self.form_values(u)
        return (c(u[0], u[1]), c(u[2], u[3]), c(u[4], u[5]),
                c(v[0], v[1]), c(v[2], v[3]), c(v[4], v[5]))

    def is_ext_linear(self) -> bool:
        """Whether W is an F_{q^2}-subspace (then Lambda is a plane)."""
        E, xi = self.ext, self.param.xi
        for u in _unit_vectors():
            v = self.vector(u)
            w = self.vector(_times_xi(u, self.param))
            if any(E.mul(xi, a) != b for a, b in zip(v, w)):
                return False
        return True

    def to_json(self) -> dict:
        return {"a": self.param.a, "forms": [list(r) for r in self.forms]}

    @classmethod
    def from_json(cls, data: dict, F: GF) -> "LinearSetSpec":
        param = find_quadratic_param(F)
        if "a" in data and int(data["a"]) != param.a:
            param = quadratic_param_for(F, int(data["a"]))
        return cls(param, tuple(tuple(int(c) for c in r) for r in data["forms"]))


def base_field(q: int) -> GF:
    """F_q as the bottom level of the tower F_q < F_{q^2} < F_{q^6} (q a power of 2)."""
    k = q.bit_length() - 1
    if q < 2 or q != 1 << k:
        raise FieldError("linear-set specs need q a power of 2")
    return create_tower(2, [k, 2, 3])[0]


def quadratic_param_for(F: GF, a: int) -> QuadraticParam:
    """QuadraticParam for a prescribed a (must give an irreducible t^2+at+1)."""
    base = find_quadratic_param(F)
    E = base.ext
    if any(F.add(F.mul(t, F.add(t, a)), 1) == 0 for t in F.elements()):
        raise FieldError(f"t^2 + {a} t + 1 is reducible over {F}")
    xi = next(x for x in E.elements() if E.add(E.mul(x, E.add(x, a)), 1) == 0)
    return QuadraticParam(F, E, a, xi)


def zero_spec(param: QuadraticParam) -> LinearSetSpec:
    return LinearSetSpec(param, tuple((0,) * 6 for _ in range(6)))


def _unit_vectors() -> Iterator[tuple[int, ...]]:
    for i in range(6):
        yield tuple(int(i == j) for j in range(6))


def _times_xi(u: Sequence[int], param: QuadraticParam) -> tuple[int, ...]:
    """Parameter vector of (xi x, xi y, xi z): xi (v1 + v2 xi) = v2 + (v1 + a v2) xi."""
    F, a = param.base, param.a
    out = []
    for k in range(0, 6, 2):
        v1, v2 = u[k], u[k + 1]
        out += [v2, F.add(v1, F.mul(a, v2))]
    return tuple(out)


def parameter_points(F: GF) -> list[tuple[int, ...]]:
    if F.order > MAX_Q:
        raise BudgetExceeded(f"q = {F.order} exceeds the enumeration cap {MAX_Q}")
    return list(projective_points(5, F))


def linset_points(spec: LinearSetSpec) -> dict[tuple[int, ...], int]:
    """Points of Lambda in PG(5, q^2) with their weights (1 or 2).

    Weight is decided by whether xi * v lies in W, and cross-checked against
    the number of parameter points mapping to the same projective point.
    """
    F, E = spec.base, spec.ext
    q = F.order
    fibre: dict[tuple[int, ...], int] = {}
    weight: dict[tuple[int, ...], int] = {}
    for u in parameter_points(F):
        v = spec.vector(u)
        P = canonical_vector(v, E)
        fibre[P] = fibre.get(P, 0) + 1
        if P not in weight:
            xv = spec.vector(_times_xi(u, spec.param))
            weight[P] = 2 if all(E.mul(spec.param.xi, a) == b for a, b in zip(v, xv)) else 1
    for P, w in weight.items():
        if fibre[P] != (q ** w - 1) // (q - 1):
            raise ArithmeticError("weight does not match fibre size")
    if sum(q ** w - 1 for w in weight.values()) != q ** 6 - 1:
        raise ArithmeticError("cardinality identity fails")
    return weight


# -- the (f, g) system --------------------------------------------------------------

@dataclass(frozen=True)
class FGSystem:
    f: Poly
    g: Poly
    a: int
    field: GF

    def to_json(self) -> dict:
        return {"a": self.a, "vars": list(VAR_NAMES), "f": self.f.to_json(), "g": self.g.to_json()}

    @classmethod
    def from_json(cls, data: dict, F: GF) -> "FGSystem":
        return cls(Poly.from_json(F, 6, data["f"]), Poly.from_json(F, 6, data["g"]), int(data["a"]), F)


class _XiPair:
    """P0 + xi*P1 with polynomial parts, multiplied using xi^2 = a xi + 1."""

    __slots__ = ("p0", "p1", "a")

    def __init__(self, p0: Poly, p1: Poly, a: int):
        self.p0, self.p1, self.a = p0, p1, a

    def __add__(self, o):
        return _XiPair(self.p0 + o.p0, self.p1 + o.p1, self.a)

    def __mul__(self, o):
        hi = self.p1 * o.p1
        return _XiPair(self.p0 * o.p0 + hi,
                       self.p0 * o.p1 + self.p1 * o.p0 + hi * self.a, self.a)

    def square_linear(self):
        # (c0 + xi c1)^2 = c0^2 + xi^2 c1^2 in characteristic 2
        s0, s1 = self.p0.square_linear(), self.p1.square_linear()
        return _XiPair(s0 + s1, s1 * self.a, self.a)


def _expand(F: GF, a: int, xs, ls) -> tuple[Poly, Poly]:
    """xyz + x F3^2 + y F2^2 + z F1^2 over the basis {1, xi}; returns (f, g)."""
    x, y, z = (_XiPair(xs[k], xs[k + 1], a) for k in (0, 2, 4))
    F1, F2, F3 = (_XiPair(ls[k], ls[k + 1], a) for k in (0, 2, 4))
    total = x * y * z + x * F3.square_linear() + y * F2.square_linear() + z * F1.square_linear()
    return total.p0, total.p1


def derive_fg(spec: LinearSetSpec) -> FGSystem:
    F = spec.base
    if F.p != 2:
        raise FieldError("the (f, g) expansion assumes characteristic 2")
    xs = [Poly.var(F, 6, i) for i in range(6)]
    ls = [Poly.linear(F, row) for row in spec.forms]
    f, g = _expand(F, spec.param.a, xs, ls)
    return FGSystem(f, g, spec.param.a, F)


def derive_fg_symbolic(F: GF, a: int) -> tuple[Poly, Poly]:
    """(f, g) with l1..n2 kept as six extra indeterminates (12 variables)."""
    xs = [Poly.var(F, 12, i) for i in range(6)]
    ls = [Poly.var(F, 12, 6 + i) for i in range(6)]
    return _expand(F, a, xs, ls)


def displayed_fg(F: GF, a: int, xs: Sequence[Poly], ls: Sequence[Poly]) -> tuple[Poly, Poly]:
    """The system written out term by term; squares by plain multiplication."""
    x1, x2, y1, y2, z1, z2 = xs
    l1, l2, m1, m2, n1, n2 = ls
    sq = lambda p: p * p
    a2p1 = F.add(F.mul(a, a), 1)
    f = (x1 * y1 * z1 + x1 * y2 * z2 + x2 * y1 * z2 + x2 * y2 * z1 + x2 * y2 * z2 * a
         + x1 * sq(n1) + y1 * sq(m1) + z1 * sq(l1)
         + x1 * sq(n2) + y1 * sq(m2) + z1 * sq(l2)
         + (x2 * sq(n2) + y2 * sq(m2) + z2 * sq(l2)) * a)
    g = (x1 * y1 * z2 + x1 * y2 * z1 + x2 * y1 * z1 + x2 * sq(n1) + y2 * sq(m1) + z2 * sq(l1)
         + (x1 * y2 * z2 + x2 * y1 * z2 + x2 * y2 * z1 + x1 * sq(n2) + y1 * sq(m2) + z1 * sq(l2)) * a
         + (x2 * y2 * z2 + x2 * sq(n2) + y2 * sq(m2) + z2 * sq(l2)) * a2p1)
    return f, g


def displayed_fg_for(spec: LinearSetSpec) -> FGSystem:
    F = spec.base
    xs = [Poly.var(F, 6, i) for i in range(6)]
    ls = [Poly.linear(F, row) for row in spec.forms]
    f, g = displayed_fg(F, spec.param.a, xs, ls)
    return FGSystem(f, g, spec.param.a, F)


FORBIDDEN_MONOMIALS = tuple(
    tuple(int(k in (i, j, w)) for k in range(6))
    for (i, j), others in (((0, 1), (2, 3, 4, 5)), ((2, 3), (0, 1, 4, 5)), ((4, 5), (0, 1, 2, 3)))
    for w in others
)


def fg_zeros(sys: FGSystem) -> list[tuple[int, ...]]:
    """Common zeros of f and g in PG(5, q), by brute force."""
    F = sys.field
    if F.order > 16:
        raise BudgetExceeded("fg_zeros is capped at q <= 16")
    pts = np.array(list(projective_points(5, F)), dtype=np.int64)
    mask = (sys.f.evaluate_many(pts) == 0) & (sys.g.evaluate_many(pts) == 0)
    return [tuple(int(x) for x in p) for p in pts[mask]]


@dataclass
class DisjointVerdict:
    disjoint: bool
    witness_param: tuple[int, ...] | None
    witness_point: tuple[int, ...] | None
    fg_disjoint: bool
    meets_nucleus: bool
    secant_params: tuple[tuple[int, ...], ...]
    fg_params: tuple[tuple[int, ...], ...]

    @property
    def oracles_agree(self) -> bool:
        return self.disjoint == self.fg_disjoint and self.secant_params == self.fg_params


def disjoint_from_secant(spec: LinearSetSpec, fg: FGSystem | None = None) -> DisjointVerdict:
    E = spec.ext
    hits = []
    nucleus = False
    for u in parameter_points(spec.base):
        v = spec.vector(u)
        if v[0] == v[1] == v[2] == 0:
            nucleus = True
        if secant_value(v, E) == 0:
            hits.append(u)
    if fg is None:
        fg = derive_fg(spec)
    zeros = tuple(sorted(fg_zeros(fg)))
    wit = hits[0] if hits else None
    return DisjointVerdict(
        disjoint=not hits,
        witness_param=wit,
        witness_point=canonical_vector(spec.vector(wit), E) if wit else None,
        fg_disjoint=not zeros,
        meets_nucleus=nucleus,
        secant_params=tuple(sorted(hits)),
        fg_params=zeros,
    )


def random_spec(param: QuadraticParam, rng) -> LinearSetSpec:
    q = param.base.order
    return LinearSetSpec(param, tuple(tuple(rng.randrange(q) for _ in range(6)) for _ in range(6)))


def spec_from_ext_matrix(param: QuadraticParam, M: Sequence[Sequence[int]]) -> LinearSetSpec:
    """Spec of the F_{q^2}-linear map (x, y, z) -> (x, y, z) M (M 3x3 over F_{q^2})."""
    E = param.ext
    cols = []
    for u in _unit_vectors():
        xyz = [param.combine(u[k], u[k + 1]) for k in (0, 2, 4)]
        Fv = []
        for j in range(3):
            s = 0
            for i in range(3):
                s = E.add(s, E.mul(xyz[i], M[i][j]))
            Fv += list(param.xi_coords(s))
        cols.append(Fv)
    return LinearSetSpec(param, tuple(tuple(cols[c][r] for c in range(6)) for r in range(6)))


def load_spec(path, F: GF) -> LinearSetSpec:
    with open(path) as fh:
        return LinearSetSpec.from_json(json.load(fh), F)
