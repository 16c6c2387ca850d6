"""Finite fields GF(p^k) built as explicit towers of extensions.

Every level of a tower is a :class:`GF`.  Elements are plain ``int`` encodings:
an element of a level of relative degree ``d`` over its base is
``c_0 + c_1 N + ... + c_{d-1} N^{d-1}`` where ``N`` is the base order and the
``c_k`` are base elements (recursively encoded).  Two consequences are used
throughout the package:

* embedding a lower level into a higher one is the identity on encodings;
* the coordinates of ``x`` over any lower level of order ``s`` are simply the
  base-``s`` digits of ``x``.

For p = 2 the encodings are packed bit vectors and addition is XOR.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import FieldError

MAX_TOTAL_DEGREE = 24
TABLE_LIMIT = 1 << 16   # log/exp tables are built up to this order
ADD_TABLE_LIMIT = 1024  # odd characteristic addition tables


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def digits(x: int, base: int, length: int) -> list[int]:
    out = []
    for _ in range(length):
        x, r = divmod(x, base)
        out.append(r)
    return out


def undigits(ds: Iterable[int], base: int) -> int:
    x = 0
    for d in reversed(list(ds)):
        x = x * base + d
    return x


class GF:
    """A single field of a tower.

    ``index`` is the position in ``tower.levels``; the prime field that sits
    under every tower has ``index == -1``.
    """

    def __init__(self, tower: "FieldTower", index: int, base: "GF | None",
                 degree: int, modulus: Sequence[int]):
        self.tower = tower
        self.index = index
        self.base = base
        self.degree = degree
        self.modulus = tuple(modulus)
        self.p = tower.p
        if base is None:
            self.order = self.p
            self.abs_degree = 1
        else:
            self.order = base.order ** degree
            self.abs_degree = base.abs_degree * degree
        self._exp: list[int] | None = None
        self._log: list[int] | None = None
        self._add_table: list[list[int]] | None = None
        if base is not None and self.order <= TABLE_LIMIT:
            self._build_tables()

    # -- construction helpers -------------------------------------------------

    def _build_tables(self):
        n1 = self.order - 1
        if n1 == 0:
            return
        factors = prime_factors(n1)
        gen = None
        for g in range(1, self.order):
            if all(self._slow_pow(g, n1 // r) != 1 for r in factors):
                gen = g
                break
        if gen is None:
            raise FieldError(f"no primitive element in GF({self.order}); modulus not irreducible?")
        exp = [0] * (2 * n1)
        log = [0] * self.order
        x = 1
        for k in range(n1):
            exp[k] = x
            log[x] = k
            x = self._slow_mul(x, gen)
        if x != 1:
            raise FieldError("primitive element order mismatch")
        exp[n1:] = exp[:n1]
        self._exp, self._log = exp, log
        self.primitive = gen

    def _slow_mul(self, a: int, b: int) -> int:
        if self.base is None:
            return (a * b) % self.p
        B, N, d, m = self.base, self.base.order, self.degree, self.modulus
        ca, cb = digits(a, N, d), digits(b, N, d)
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    if y:
                        prod[i + j] = B.add(prod[i + j], B.mul(x, y))
        for k in range(2 * d - 2, d - 1, -1):
            c = prod[k]
            if c:
                prod[k] = 0
                for j in range(d):
                    if m[j]:
                        prod[k - d + j] = B.sub(prod[k - d + j], B.mul(c, m[j]))
        return undigits(prod[:d], N)

    def _slow_pow(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self._slow_mul(r, a)
            a = self._slow_mul(a, a)
            e >>= 1
        return r

    # -- scalar arithmetic ----------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.base is None:
            return (a + b) % self.p
        if self._add_table is not None:
            return self._add_table[a][b]
        if self.order <= ADD_TABLE_LIMIT:
            self._add_table = [[self._digit_add(x, y) for y in range(self.order)]
                               for x in range(self.order)]
            return self._add_table[a][b]
        return self._digit_add(a, b)

    def _digit_add(self, a: int, b: int, sign: int = 1) -> int:
        p, r, w = self.p, 0, 1
        while a or b:
            a, da = divmod(a, p)
            b, db = divmod(b, p)
            r += ((da + sign * db) % p) * w
            w *= p
        return r

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        if self.base is None:
            return (-a) % self.p
        return self._digit_add(0, a, -1)

    def sub(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.base is None:
            return (a - b) % self.p
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self._log is not None:
            return self._exp[self._log[a] + self._log[b]]
        return self._slow_mul(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise FieldError("division by zero")
        if self._log is not None:
            return self._exp[(self.order - 1 - self._log[a]) % (self.order - 1)]
        return self._slow_pow(a, self.order - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        if a == 0:
            return 1 if e == 0 else 0
        if self._log is not None:
            return self._exp[(self._log[a] * e) % (self.order - 1)]
        return self._slow_pow(a, e % (self.order - 1))

    def elements(self) -> range:
        return range(self.order)

    def contains(self, x: int) -> bool:
        return 0 <= x < self.order

    # -- subfield structure ---------------------------------------------------

    def is_subfield(self, sub: "GF") -> bool:
        if sub.tower != self.tower:
            return False
        return sub.index <= self.index

    def check_subfield(self, sub: "GF") -> int:
        """Return the relative degree [self : sub], raising for non-levels."""
        if not self.is_subfield(sub):
            raise FieldError(f"GF({sub.order}) is not a designated subfield of GF({self.order})")
        return self.abs_degree // sub.abs_degree

    def frobenius(self, x: int, sub: "GF", i: int = 1) -> int:
        """x -> x^(s^i) with s = |sub|."""
        m = self.check_subfield(sub)
        return self.pow(x, sub.order ** (i % m)) if m > 1 else x

    def trace(self, x: int, sub: "GF") -> int:
        m = self.check_subfield(sub)
        t, y = 0, x
        for _ in range(m):
            t = self.add(t, y)
            y = self.pow(y, sub.order)
        return t

    def norm(self, x: int, sub: "GF") -> int:
        m = self.check_subfield(sub)
        n, y = 1, x
        for _ in range(m):
            n = self.mul(n, y)
            y = self.pow(y, sub.order)
        return n

    def coords(self, x: int, sub: "GF") -> list[int]:
        """Coordinates of ``x`` over ``sub`` in the tower basis."""
        m = self.check_subfield(sub)
        return digits(x, sub.order, m)

    # -- vectorised arithmetic (numpy) -------------------------------------------

    @cached_property
    def np_exp(self) -> np.ndarray:
        self._require_tables()
        return np.asarray(self._exp, dtype=np.int64)

    @cached_property
    def np_log(self) -> np.ndarray:
        self._require_tables()
        return np.asarray(self._log, dtype=np.int64)

    def _require_tables(self):
        if self.base is None and self._log is None:
            # prime field: build a log table directly
            n1 = self.p - 1
            if n1 == 0:
                self._exp, self._log = [1, 1], [0, 0]
                return
            for g in range(1, self.p):
                if all(pow(g, n1 // r, self.p) != 1 for r in prime_factors(n1)) or n1 == 1:
                    break
            exp = [pow(g, k, self.p) for k in range(n1)] * 2
            log = [0] * self.p
            for k in range(n1):
                log[exp[k]] = k
            self._exp, self._log = exp, log
        if self._log is None:
            raise FieldError(f"GF({self.order}) too large for table arithmetic")

    def vmul(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        r = self.np_exp[self.np_log[a] + self.np_log[b]]
        return np.where((a == 0) | (b == 0), 0, r)

    def vpow(self, a, e: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        r = self.np_exp[(self.np_log[a] * e) % (self.order - 1)]
        return np.where(a == 0, 0, r)

    def vadd(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        return self._vdigits(a, b, 1)

    def vsub(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        return self._vdigits(a, b, -1)

    def _vdigits(self, a, b, sign):
        p = self.p
        r = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        w = 1
        for _ in range(self.abs_degree):
            r += (((a // w) % p + sign * ((b // w) % p)) % p) * w
            w *= p
        return r

    @cached_property
    def mul_table(self) -> np.ndarray:
        if self.order > 4096:
            raise FieldError("multiplication table too large")
        e = np.arange(self.order)
        return self.vmul(e[:, None], e[None, :])

    def __repr__(self):
        return f"GF({self.p}^{self.abs_degree})"

    def __eq__(self, other):
        return isinstance(other, GF) and self.tower == other.tower and self.index == other.index

    def __hash__(self):
        return hash((self.tower.descriptor_key, self.index))


def _poly_rem_is_zero(f: list[int], g: list[int], F: GF) -> bool:
    """Whether monic g divides f (coefficient lists low -> high)."""
    r = list(f)
    dg = len(g) - 1
    for k in range(len(r) - 1, dg - 1, -1):
        c = r[k]
        if c:
            for j in range(dg + 1):
                if g[j]:
                    r[k - dg + j] = F.sub(r[k - dg + j], F.mul(c, g[j]))
    return not any(r[:dg])


def is_irreducible(modulus: Sequence[int], F: GF) -> bool:
    """Exhaustive factor search for a monic polynomial over ``F``."""
    d = len(modulus) - 1
    if d < 1 or modulus[-1] != 1:
        return False
    if d == 1:
        return True
    if modulus[0] == 0:
        return False
    f = list(modulus)
    # degree-1 factors: root search
    for r in F.elements():
        v = 0
        for c in reversed(f):
            v = F.add(F.mul(v, r), c)
        if v == 0:
            return False
    N = F.order
    for k in range(2, d // 2 + 1):
        for v in range(N ** k):
            g = digits(v, N, k) + [1]
            if g[0] and _poly_rem_is_zero(f, g, F):
                return False
    return True


def least_irreducible(F: GF, d: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree d over F.

    Candidates t^d + c_{d-1} t^{d-1} + ... + c_0 are ordered by the integer
    sum c_k N^k, i.e. lexicographically on (c_{d-1}, ..., c_0).
    """
    if d == 1:
        return (0, 1)
    N = F.order
    for v in range(N ** d):
        m = tuple(digits(v, N, d)) + (1,)
        if m[0] and is_irreducible(m, F):
            return m
    raise FieldError(f"no irreducible polynomial of degree {d} over {F}")


class FieldTower:
    """GF(p^d0) < GF(p^(d0 d1)) < ... with deterministic moduli.

    Immutable after construction and safe to share between processes.
    """

    def __init__(self, p: int, degrees: Sequence[int], moduli: Sequence[Sequence[int]] | None = None):
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        degrees = [int(d) for d in degrees]
        if not degrees:
            raise FieldError("empty degree list")
        if any(d < 1 for d in degrees):
            raise FieldError("degrees must be positive")
        total = 1
        for d in degrees:
            total *= d
        if total > MAX_TOTAL_DEGREE:
            raise FieldError(f"total degree {total} exceeds cap {MAX_TOTAL_DEGREE}")
        if moduli is not None and len(moduli) != len(degrees):
            raise FieldError("one modulus per level required")
        self.p = p
        self.degrees = tuple(degrees)
        self.prime = GF(self, -1, None, 1, (0, 1))
        self.levels: list[GF] = []
        base = self.prime
        for i, d in enumerate(degrees):
            if moduli is None:
                m = least_irreducible(base, d)
            else:
                m = tuple(int(c) for c in moduli[i])
                if len(m) != d + 1 or not all(base.contains(c) for c in m) \
                        or not is_irreducible(m, base):
                    raise FieldError(f"modulus {m} at level {i} is not monic irreducible of degree {d}")
            self.levels.append(GF(self, i, base, d, m))
            base = self.levels[-1]
        self.moduli = tuple(F.modulus for F in self.levels)

    @property
    def descriptor_key(self):
        return (self.p, self.degrees, self.moduli)

    def __eq__(self, other):
        return isinstance(other, FieldTower) and self.descriptor_key == other.descriptor_key

    def __hash__(self):
        return hash(self.descriptor_key)

    def __repr__(self):
        return f"FieldTower(p={self.p}, degrees={list(self.degrees)})"

    def __getitem__(self, i: int) -> GF:
        return self.levels[i]

    @property
    def top(self) -> GF:
        return self.levels[-1]

    def field_of_order(self, order: int) -> GF:
        for F in [self.prime] + self.levels:
            if F.order == order:
                return F
        raise FieldError(f"tower has no level of order {order}")

    def embed(self, x: int, src: GF, dst: GF) -> int:
        if not dst.is_subfield(src):
            raise FieldError("can only embed upwards in the same tower")
        if not src.contains(x):
            raise FieldError(f"{x} is not an element of {src}")
        return x

    def descriptor(self) -> dict:
        return {"p": self.p, "degrees": list(self.degrees),
                "moduli": [list(m) for m in self.moduli]}

    def to_json(self) -> str:
        return json.dumps(self.descriptor())

    @classmethod
    def from_descriptor(cls, desc: dict) -> "FieldTower":
        return cls(int(desc["p"]), desc["degrees"], desc.get("moduli"))


_TOWER_CACHE: dict[tuple[int, tuple[int, ...]], FieldTower] = {}


def create_tower(p: int, degrees: Sequence[int]) -> FieldTower:
    """Build (or fetch from cache) the deterministic tower for ``(p, degrees)``."""
    key = (int(p), tuple(int(d) for d in degrees))
    if key not in _TOWER_CACHE:
        _TOWER_CACHE[key] = FieldTower(*key)
    return _TOWER_CACHE[key]


# -- element wrapper ------------------------------------------------------------

@dataclass(frozen=True)
class Elem:
    """An element tagged with its field; supports ``+ - * / **``."""

    field: GF
    value: int

    def __post_init__(self):
        if not self.field.contains(self.value):
            raise FieldError(f"{self.value} is not an element of {self.field}")

    def __add__(self, o):
        return arith("add", self, o)

    def __sub__(self, o):
        return arith("sub", self, o)

    def __mul__(self, o):
        return arith("mul", self, o)

    def __truediv__(self, o):
        return arith("mul", self, arith("inv", o))

    def __pow__(self, e: int):
        return arith("pow", self, e)

    def __neg__(self):
        return Elem(self.field, self.field.neg(self.value))

    def is_zero(self) -> bool:
        return self.value == 0


def _common_field(x: Elem, y: Elem) -> GF:
    if x.field.tower != y.field.tower:
        raise FieldError("operands come from different towers")
    return x.field if x.field.index >= y.field.index else y.field


def arith(op: str, x: Elem, y=None) -> Elem:
    """Field operation dispatch; operands are embedded into the higher level."""
    if op == "inv":
        return Elem(x.field, x.field.inv(x.value))
    if op == "pow":
        return Elem(x.field, x.field.pow(x.value, int(y)))
    if op not in ("add", "sub", "mul"):
        raise FieldError(f"unknown operation {op!r}")
    F = _common_field(x, y)
    return Elem(F, getattr(F, op)(x.value, y.value))


def frobenius_trace(x: Elem, sub: GF, i: int = 1) -> tuple[Elem, Elem]:
    """Return (x^(s^i), Tr_{F/sub}(x)) where s = |sub| and F is x's field."""
    F = x.field
    return Elem(F, F.frobenius(x.value, sub, i)), Elem(sub, F.trace(x.value, sub))


@dataclass(frozen=True)
class QuadraticParam:
    """``a`` in F_q with t^2 + a t + 1 irreducible, and a root ``xi`` in F_{q^2}."""

    base: GF
    ext: GF
    a: int
    xi: int

    def xi_coords(self, v: int) -> tuple[int, int]:
        """Write v in F_{q^2} as c0 + c1*xi with c0, c1 in F_q."""
        b, e = self.base, self.ext
        u0, u1 = e.coords(self.xi, b)
        v0, v1 = e.coords(v, b)
        c1 = b.div(v1, u1)
        c0 = b.sub(v0, b.mul(c1, u0))
        return c0, c1

    def combine(self, c0: int, c1: int) -> int:
        return self.ext.add(c0, self.ext.mul(c1, self.xi))


def find_quadratic_param(F: GF) -> QuadraticParam:
    """Least a (in encoding order) with t^2 + a t + 1 irreducible over F."""
    if F.p != 2:
        raise FieldError("quadratic parameter search assumes characteristic 2")
    ext = None
    for L in F.tower.levels:
        if L.abs_degree == 2 * F.abs_degree and L.is_subfield(F):
            ext = L
            break
    if ext is None:
        raise FieldError(f"tower has no quadratic extension of {F}")
    for a in F.elements():
        if all(F.add(F.mul(t, F.add(t, a)), 1) != 0 for t in F.elements()):
            for xi in ext.elements():
                if ext.add(ext.mul(xi, ext.add(xi, a)), 1) == 0:
                    return QuadraticParam(F, ext, a, xi)
            raise FieldError("irreducible quadratic has no root in the extension")
    raise FieldError(f"no irreducible t^2+at+1 over {F}")


def moore_matrix(elements: Sequence[int], F: GF, sub: GF) -> list[list[int]]:
    k = len(elements)
    return [[F.frobenius(e, sub, i) for e in elements] for i in range(k)]


def moore_independence(elements: Sequence[int], F: GF, sub: GF) -> bool:
    """Linear independence over ``sub``, by Moore determinant and by rank.

    Both routes are computed; a disagreement is an arithmetic bug and raises.
    """
    from .matrix_proj import det, rank

    k = len(elements)
    if k == 0:
        raise FieldError("empty sequence")
    m = F.check_subfield(sub)
    if k > m:
        raise FieldError(f"{k} elements cannot be independent over a degree-{m} extension")
    by_moore = det(moore_matrix(elements, F, sub), F) != 0
    by_rank = rank([F.coords(e, sub) for e in elements], sub) == k
    if by_moore != by_rank:
        raise FieldError("Moore determinant disagrees with coordinate rank")
    return by_rank
