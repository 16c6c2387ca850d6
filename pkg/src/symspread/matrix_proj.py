"""Small dense linear algebra over a :class:`GF` and projective geometry PG(n, F).

Matrices are lists of rows of int encodings.  Vectors are row vectors and
matrices act on the right (``x -> x M``); in particular ``kernel`` is the left
kernel ``{x : x M = 0}``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import BudgetExceeded, GeometryError
from .field_tower import GF

Matrix = list[list[int]]

DEFAULT_ENUM_BUDGET = 5_000_000


def rref(M: Sequence[Sequence[int]], F: GF) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form with zero rows removed, and the pivot columns."""
    R = [list(r) for r in M]
    if not R:
        return [], []
    ncols = len(R[0])
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        piv = next((i for i in range(row, len(R)) if R[i][col]), None)
        if piv is None:
            continue
        R[row], R[piv] = R[piv], R[row]
        inv = F.inv(R[row][col])
        R[row] = [F.mul(inv, x) for x in R[row]]
        for i in range(len(R)):
            if i != row and R[i][col]:
                c = R[i][col]
                R[i] = [F.sub(x, F.mul(c, y)) for x, y in zip(R[i], R[row])]
        pivots.append(col)
        row += 1
        if row == len(R):
            break
    return R[:row], pivots


def rank(M: Sequence[Sequence[int]], F: GF) -> int:
    return len(rref(M, F)[1])


def det(M: Sequence[Sequence[int]], F: GF) -> int:
    n = len(M)
    if any(len(r) != n for r in M):
        raise GeometryError("determinant of a non-square matrix")
    A = [list(r) for r in M]
    d = 1
    for col in range(n):
        piv = next((i for i in range(col, n) if A[i][col]), None)
        if piv is None:
            return 0
        if piv != col:
            A[col], A[piv] = A[piv], A[col]
            d = F.neg(d)
        d = F.mul(d, A[col][col])
        inv = F.inv(A[col][col])
        for i in range(col + 1, n):
            if A[i][col]:
                c = F.mul(A[i][col], inv)
                A[i] = [F.sub(x, F.mul(c, y)) for x, y in zip(A[i], A[col])]
    return d


def det_cofactor(M: Sequence[Sequence[int]], F: GF) -> int:
    """Laplace expansion along the first row; independent check for tiny n."""
    n = len(M)
    if n == 0:
        return 1
    if n == 1:
        return M[0][0]
    total = 0
    for j in range(n):
        if M[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = F.mul(M[0][j], det_cofactor(minor, F))
        total = F.sub(total, term) if j % 2 else F.add(total, term)
    return total


def transpose(M: Sequence[Sequence[int]]) -> Matrix:
    return [list(c) for c in zip(*M)]


def right_kernel(M: Sequence[Sequence[int]], F: GF, ncols: int | None = None) -> Matrix:
    """Basis of {x : M x^T = 0}."""
    if ncols is None:
        ncols = len(M[0])
    R, pivots = rref(M, F) if M else ([], [])
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for r, p in zip(R, pivots):
            v[p] = F.neg(r[f])
        basis.append(v)
    return basis


def kernel(M: Sequence[Sequence[int]], F: GF) -> Matrix:
    """Left kernel {x : x M = 0}."""
    return right_kernel(transpose(M), F, len(M))


def det_rank_kernel(M: Sequence[Sequence[int]], F: GF) -> tuple[int, int, Matrix]:
    n = len(M)
    if any(len(r) != n for r in M):
        raise GeometryError("det_rank_kernel needs a square matrix")
    d = det(M, F)
    r = rank(M, F)
    K = kernel(M, F)
    if n <= 4 and det_cofactor(M, F) != d:
        raise ArithmeticError("cofactor and elimination determinants disagree")
    if (d == 0) != (r < n) or len(K) != n - r:
        raise ArithmeticError("inconsistent det/rank/kernel")
    return d, r, K


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]], F: GF) -> Matrix:
    Bt = transpose(B)
    out = []
    for row in A:
        out_row = []
        for col in Bt:
            s = 0
            for x, y in zip(row, col):
                if x and y:
                    s = F.add(s, F.mul(x, y))
            out_row.append(s)
        out.append(out_row)
    return out


def vecmat(v: Sequence[int], M: Sequence[Sequence[int]], F: GF) -> list[int]:
    return matmul([v], M, F)[0]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def mat_inv(M: Sequence[Sequence[int]], F: GF) -> Matrix:
    n = len(M)
    aug = [list(r) + identity(n)[i] for i, r in enumerate(M)]
    R, piv = rref(aug, F)
    if piv[:n] != list(range(n)) or len(R) < n:
        raise GeometryError("singular matrix")
    return [r[n:] for r in R]


# -- projective points ----------------------------------------------------------

@dataclass(frozen=True)
class ProjPoint:
    """A point of PG(n, F) stored with its first nonzero coordinate equal to 1."""

    coords: tuple[int, ...]
    field: GF

    @property
    def n(self) -> int:
        return len(self.coords) - 1

    def __iter__(self):
        return iter(self.coords)


def canonical_vector(v: Sequence[int], F: GF) -> tuple[int, ...]:
    lead = next((x for x in v if x), 0)
    if lead == 0:
        raise GeometryError("zero vector has no projective point")
    if lead == 1:
        return tuple(v)
    inv = F.inv(lead)
    return tuple(F.mul(inv, x) for x in v)


def normalize_point(v: Sequence[int], F: GF) -> ProjPoint:
    return ProjPoint(canonical_vector(v, F), F)


def projective_points(n: int, F: GF) -> Iterator[tuple[int, ...]]:
    """Canonical points of PG(n, F) in lexicographic order."""
    Q = F.order
    for lead in range(n + 1):
        for tail in itertools.product(range(Q), repeat=n - lead):
            yield (0,) * lead + (1,) + tail


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of an n-dimensional vector space over F_q."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


# -- subspaces ------------------------------------------------------------------

@dataclass(frozen=True)
class Subspace:
    """Projective subspace of PG(n, F), stored by its RREF basis (the dedup key)."""

    field: GF
    n: int
    basis: tuple[tuple[int, ...], ...]

    @classmethod
    def from_rows(cls, F: GF, rows: Sequence[Sequence[int]], n: int | None = None) -> "Subspace":
        rows = [list(r) for r in rows]
        if n is None:
            if not rows:
                raise GeometryError("ambient dimension needed for an empty subspace")
            n = len(rows[0]) - 1
        if any(len(r) != n + 1 for r in rows):
            raise GeometryError("row length does not match ambient dimension")
        R, _ = rref(rows, F)
        return cls(F, n, tuple(tuple(r) for r in R))

    @property
    def dim(self) -> int:
        return len(self.basis) - 1

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(r) if x) for r in self.basis)

    def vectors(self) -> Iterator[tuple[int, ...]]:
        F = self.field
        for coeffs in itertools.product(range(F.order), repeat=len(self.basis)):
            v = [0] * (self.n + 1)
            for c, r in zip(coeffs, self.basis):
                if c:
                    v = [F.add(x, F.mul(c, y)) for x, y in zip(v, r)]
            yield tuple(v)

    def points(self) -> Iterator[tuple[int, ...]]:
        """Canonical points; RREF makes each combination with leading coefficient 1 canonical."""
        F = self.field
        k = len(self.basis)
        for coeffs in projective_points(k - 1, F) if k else ():
            v = [0] * (self.n + 1)
            for c, r in zip(coeffs, self.basis):
                if c:
                    v = [F.add(x, F.mul(c, y)) for x, y in zip(v, r)]
            yield tuple(v)

    def num_points(self) -> int:
        Q = self.field.order
        return (Q ** len(self.basis) - 1) // (Q - 1)

    def contains(self, v: Sequence[int] | ProjPoint) -> bool:
        v = list(v.coords if isinstance(v, ProjPoint) else v)
        if len(v) != self.n + 1:
            raise GeometryError("ambient mismatch")
        return rank(list(self.basis) + [v], self.field) == len(self.basis)

    def contains_subspace(self, other: "Subspace") -> bool:
        return span_meet("span", self, other) == self

    def to_json(self) -> dict:
        return {"n": self.n, "order": self.field.order,
                "basis": [list(r) for r in self.basis]}


def _check_same_ambient(A: Subspace, B: Subspace):
    if A.n != B.n or A.field != B.field:
        raise GeometryError("subspaces live in different ambient spaces")


def span_meet(op: str, A: Subspace, B: Subspace) -> Subspace:
    _check_same_ambient(A, B)
    F = A.field
    if op == "span":
        return Subspace.from_rows(F, list(A.basis) + list(B.basis), A.n)
    if op != "meet":
        raise GeometryError(f"unknown operation {op!r}")
    if not A.basis or not B.basis:
        return Subspace(F, A.n, ())
    ka = len(A.basis)
    stacked = [list(r) for r in A.basis] + [[F.neg(x) for x in r] for r in B.basis]
    K = kernel(stacked, F)
    rows = []
    for k in K:
        v = [0] * (A.n + 1)
        for c, r in zip(k[:ka], A.basis):
            if c:
                v = [F.add(x, F.mul(c, y)) for x, y in zip(v, r)]
        rows.append(v)
    return Subspace.from_rows(F, rows, A.n)


def conjugate(S: Subspace | ProjPoint, i: int, sub: GF):
    """Apply x -> x^(s^i) coordinatewise (s = |sub|) and re-canonicalise."""
    if isinstance(S, ProjPoint):
        F = S.field
        return normalize_point([F.frobenius(x, sub, i) for x in S.coords], F)
    F = S.field
    rows = [[F.frobenius(x, sub, i) for x in r] for r in S.basis]
    return Subspace.from_rows(F, rows, S.n)


def is_rational(S: Subspace, sub: GF) -> bool:
    """Fixed by Frobenius over ``sub`` iff the RREF basis has entries in ``sub``."""
    return all(sub.contains(x) for r in S.basis for x in r)


# -- canonical enumeration ------------------------------------------------------

def pivot_patterns(n: int, k: int) -> list[tuple[int, ...]]:
    """Pivot column sets for k-dimensional subspaces of PG(n), lexicographic."""
    return list(itertools.combinations(range(n + 1), k + 1))


def free_positions(pattern: Sequence[int], n: int) -> list[tuple[int, int]]:
    ps = set(pattern)
    return [(r, j) for r, p in enumerate(pattern) for j in range(p + 1, n + 1) if j not in ps]


def pattern_sizes(n: int, k: int, Q: int) -> list[int]:
    return [Q ** len(free_positions(p, n)) for p in pivot_patterns(n, k)]


def rref_batch(F: GF, n: int, pattern: Sequence[int], start: int = 0,
               stop: int | None = None) -> np.ndarray:
    """RREF matrices for one pivot pattern as an array (count, k+1, n+1).

    Offsets are read as base-Q numbers over the free positions (row-major,
    most significant first), so offset order is lexicographic.
    """
    Q = F.order
    free = free_positions(pattern, n)
    total = Q ** len(free)
    stop = total if stop is None else min(stop, total)
    offs = np.arange(start, stop, dtype=np.int64)
    out = np.zeros((len(offs), len(pattern), n + 1), dtype=np.int64)
    for r, p in enumerate(pattern):
        out[:, r, p] = 1
    for idx, (r, j) in enumerate(free):
        w = Q ** (len(free) - 1 - idx)
        out[:, r, j] = (offs // w) % Q
    return out


def enumerate_subspaces(n: int, F: GF, k: int, budget: int = DEFAULT_ENUM_BUDGET,
                        cursor: tuple[int, int] = (0, 0)) -> Iterator[Subspace]:
    """Every k-dimensional subspace of PG(n, F) exactly once, in canonical order.

    ``cursor = (pattern index, offset)`` restarts the stream mid-way.
    """
    if not 0 <= k <= n:
        raise GeometryError(f"no {k}-dimensional subspaces in PG({n})")
    total = gaussian_binomial(n + 1, k + 1, F.order)
    if total > budget:
        raise BudgetExceeded(f"{total} subspaces exceeds budget {budget}")
    pats = pivot_patterns(n, k)
    pi, off = cursor
    for idx in range(pi, len(pats)):
        batch = rref_batch(F, n, pats[idx], off if idx == pi else 0)
        for M in batch:
            yield Subspace(F, n, tuple(tuple(int(x) for x in r) for r in M))
