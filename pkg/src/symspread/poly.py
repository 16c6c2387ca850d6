"""Sparse multivariate polynomials over a GF, keyed by exponent tuples."""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .field_tower import GF


class Poly:
    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field: GF, nvars: int, terms: dict | None = None):
        self.field = field
        self.nvars = nvars
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def var(cls, F: GF, nvars: int, i: int, coeff: int = 1) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return cls(F, nvars, {tuple(e): coeff})

    @classmethod
    def const(cls, F: GF, nvars: int, c: int) -> "Poly":
        return cls(F, nvars, {(0,) * nvars: c})

    @classmethod
    def linear(cls, F: GF, coeffs: Sequence[int]) -> "Poly":
        n = len(coeffs)
        return cls(F, n, {tuple(int(i == j) for j in range(n)): c for i, c in enumerate(coeffs)})

    def _same(self, other: "Poly"):
        if other.field != self.field or other.nvars != self.nvars:
            raise ValueError("incompatible polynomials")

    def __add__(self, other: "Poly") -> "Poly":
        self._same(other)
        F, t = self.field, dict(self.terms)
        for m, c in other.terms.items():
            t[m] = F.add(t.get(m, 0), c)
        return Poly(F, self.nvars, t)

    def __neg__(self) -> "Poly":
        return Poly(self.field, self.nvars, {m: self.field.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        F = self.field
        if isinstance(other, int):
            return Poly(F, self.nvars, {m: F.mul(c, other) for m, c in self.terms.items()})
        self._same(other)
        t: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                t[m] = F.add(t.get(m, 0), F.mul(c1, c2))
        return Poly(F, self.nvars, t)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Poly":
        r = Poly.const(self.field, self.nvars, 1)
        for _ in range(e):
            r = r * self
        return r

    def __eq__(self, other) -> bool:
        return (isinstance(other, Poly) and self.nvars == other.nvars
                and self.field == other.field and self.terms == other.terms)

    def __hash__(self):
        return hash(tuple(self.sorted_terms()))

    def __repr__(self):
        return f"Poly({self.sorted_terms()})"

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self) -> list[tuple[tuple[int, ...], int]]:
        return sorted(self.terms.items(), reverse=True)

    def coeff(self, monomial: Iterable[int]) -> int:
        return self.terms.get(tuple(monomial), 0)

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self, d: int | None = None) -> bool:
        degs = {sum(m) for m in self.terms}
        if d is not None:
            return degs <= {d}
        return len(degs) <= 1

    def square_linear(self) -> "Poly":
        """(sum c_i v_i)^2 = sum c_i^2 v_i^2, valid in characteristic 2."""
        F = self.field
        if F.p != 2:
            raise ValueError("Frobenius squaring of a linear form needs characteristic 2")
        if not self.is_homogeneous(1):
            raise ValueError("not a linear form")
        return Poly(F, self.nvars, {tuple(2 * e for e in m): F.mul(c, c)
                                    for m, c in self.terms.items()})

    def evaluate(self, point: Sequence[int]) -> int:
        F = self.field
        total = 0
        for m, c in self.terms.items():
            v = c
            for x, e in zip(point, m):
                if e:
                    v = F.mul(v, F.pow(x, e))
                    if v == 0:
                        break
            total = F.add(total, v)
        return total

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        """Evaluate at each row of an integer array of shape (P, nvars)."""
        F = self.field
        points = np.asarray(points, dtype=np.int64)
        total = np.zeros(len(points), dtype=np.int64)
        for m, c in self.terms.items():
            v = np.full(len(points), c, dtype=np.int64)
            for i, e in enumerate(m):
                if e:
                    v = F.vmul(v, F.vpow(points[:, i], e))
            total = F.vadd(total, v)
        return total

    def subs(self, values: Sequence["Poly"]) -> "Poly":
        """Substitute polynomials (all in a common ring) for the variables."""
        F = self.field
        target = values[0]
        out = Poly(F, target.nvars)
        powers: dict = {}
        for m, c in self.terms.items():
            term = Poly.const(F, target.nvars, c)
            for i, e in enumerate(m):
                if e:
                    key = (i, e)
                    if key not in powers:
                        powers[key] = values[i] ** e
                    term = term * powers[key]
            out = out + term
        return out

    def to_json(self) -> list[dict]:
        return [{"monomial": list(m), "coeff": c} for m, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, F: GF, nvars: int, data: list[dict]) -> "Poly":
        return cls(F, nvars, {tuple(d["monomial"]): int(d["coeff"]) for d in data})
