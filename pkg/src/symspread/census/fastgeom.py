"""Vectorised geometry over small fields: vectors of F^6 as integer codes.

Code of v is ``sum v_i Q^i``; for Q a power of 2 addition of codes is XOR.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from ..errors import GeometryError
from ..field_tower import GF, create_tower
from ..matrix_proj import projective_points
from ..veronese import secant_values_np


def geometry_fields(Q: int) -> tuple[GF, GF]:
    """(F_Q, F_{Q^3}) from the standard tower for order Q.

    For Q = 2^(2k) the tower is (2, [k, 2, 3]) so that F_sqrt(Q) is also a level.
    """
    from ..field_tower import prime_factors

    ps = prime_factors(Q)
    if len(ps) != 1:
        raise GeometryError(f"{Q} is not a prime power")
    p = ps[0]
    k = 0
    while p ** k < Q:
        k += 1
    if p == 2 and k % 2 == 0:
        T = create_tower(2, [k // 2, 2, 3])
        return T[1], T[2]
    T = create_tower(p, [k, 3])
    return T[0], T[1]


class VectorTables:
    """Codes, scalar multiples and V1 membership for F_Q^dim."""

    def __init__(self, F: GF, dim: int = 6):
        self.field, self.dim = F, dim
        Q = self.Q = F.order
        self.N = Q ** dim
        self.xor = F.p == 2
        codes = np.arange(self.N, dtype=np.int64)
        self.digits = np.stack([(codes // Q ** i) % Q for i in range(dim)], axis=1)
        self.weights = Q ** np.arange(dim, dtype=np.int64)
        self.smul = np.stack([self.encode(F.vmul(np.full_like(self.digits, c), self.digits))
                              for c in range(Q)])
        self._add = None
        if dim == 6:
            self.on_secant = secant_values_np(self.digits, F) == 0
            self.on_secant[0] = False

    def encode(self, vecs: np.ndarray) -> np.ndarray:
        return (np.asarray(vecs, dtype=np.int64) * self.weights).sum(axis=-1)

    def add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.xor:
            return a ^ b
        if self._add is None:
            self._add = self.encode(self.field.vadd(self.digits[:, None, :], self.digits[None, :, :]))
        return self._add[a, b]

    def span_codes(self, rows: np.ndarray) -> np.ndarray:
        """Codes of one representative per point of each span; rows is (B, k+1) codes."""
        k1 = rows.shape[1]
        combos = np.array(list(projective_points(k1 - 1, self.field)), dtype=np.int64)
        out = np.empty((rows.shape[0], len(combos)), dtype=np.int64)
        for j, c in enumerate(combos):
            acc = self.smul[c[0], rows[:, 0]]
            for r in range(1, k1):
                acc = self.add(acc, self.smul[c[r], rows[:, r]])
            out[:, j] = acc
        return out

    def secant_counts(self, rows: np.ndarray) -> np.ndarray:
        return self.on_secant[self.span_codes(rows)].sum(axis=1)


@lru_cache(maxsize=None)
def tables_for(Q: int) -> VectorTables:
    return VectorTables(geometry_fields(Q)[0])
