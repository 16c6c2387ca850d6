"""Pruned search for rank-6 F_2-linear sets of PG(5, 4) disjoint from V1.

A spec at q = 2 is a 36-bit integer, bit ``6r + c`` being ``forms[r][c]``.
The point of Lambda for parameter u depends F_2-linearly on those bits, so
each tested vector costs two table lookups and an XOR per candidate.

Restricted slice: F2 and F3 are F_4-linear in (x, y, z) and F1 is F_4-linear
plus ``a' x^2 + b' y^2 + c' z^2`` with a', b', c' in {0, 1}.  Every spec with
F2, F3 F_4-linear is brought into this slice by the diagonal torus
A -> D A D (see ``normalize_to_slice``), which preserves V1; the slice is an
F_2-space of dimension 21 and contains every F_4-linear spec.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..errors import BudgetExceeded, CheckpointError
from ..field_tower import QuadraticParam, create_tower, find_quadratic_param
from ..linear_sets import LinearSetSpec, derive_fg, disjoint_from_secant
from ..matrix_proj import projective_points, rref
from .fastgeom import tables_for
from .report import CensusReport, atomic_write, digest, parallel_map

NBITS = 36
CHUNK = 1 << 16
DEFAULT_CHECKPOINT_EVERY = 10 ** 7
SLICE_ID = "q2-torus-normalized-v1"
SLICE_HEADER = ("F2, F3 F_4-linear; F1 = F_4-linear + a'x^2 + b'y^2 + c'z^2 with a', b', c' "
                "in {0,1}; normal form under A -> DAD, D diagonal over F_4")
STRATEGIES = ("restricted-slice", "full")
WITNESS_CAP = 32


@lru_cache(maxsize=None)
def search_param() -> QuadraticParam:
    return find_quadratic_param(create_tower(2, [1, 2, 3])[0])


def spec_from_bits(bits: int, param: QuadraticParam | None = None) -> LinearSetSpec:
    param = param or search_param()
    return LinearSetSpec(param, tuple(tuple((bits >> (6 * r + c)) & 1 for c in range(6))
                                      for r in range(6)))


def bits_from_spec(spec: LinearSetSpec) -> int:
    if spec.base.order != 2:
        raise ValueError("bit encoding is for q = 2")
    return sum(spec.forms[r][c] << (6 * r + c) for r in range(6) for c in range(6))


def vector_order() -> list[tuple[int, ...]]:
    """Parameter vectors: x-only, y-only, z-only first, then the rest lexicographically."""
    F = search_param().base
    pts = list(projective_points(5, F))
    def only(u, k):
        return all(u[j] == 0 for j in range(6) if j // 2 != k)
    first = [u for k in range(3) for u in pts if only(u, k)]
    return first + [u for u in pts if u not in first]


# -- the slice -------------------------------------------------------------------

def _bits_of(forms) -> int:
    return sum(int(forms[r][c]) << (6 * r + c) for r in range(6) for c in range(6))


@lru_cache(maxsize=None)
def slice_basis() -> tuple[int, ...]:
    """21 spec bit-patterns: 18 for the F_4-linear part, then x^2, y^2, z^2 on F1."""
    a = search_param().a
    out = []
    for i in range(3):
        for var in range(3):
            for c in (1, 2):  # 1 and xi
                f = [[0] * 6 for _ in range(6)]
                if c == 1:
                    f[2 * i][2 * var] = 1
                    f[2 * i + 1][2 * var + 1] = 1
                else:
                    # xi (v1 + v2 xi) = v2 + (v1 + a v2) xi
                    f[2 * i][2 * var + 1] = 1
                    f[2 * i + 1][2 * var] = 1
                    f[2 * i + 1][2 * var + 1] ^= a
                out.append(_bits_of(f))
    for var in range(3):
        # (v1 + v2 xi)^2 = (v1 + a v2) + v2 xi
        f = [[0] * 6 for _ in range(6)]
        f[0][2 * var] = 1
        f[0][2 * var + 1] = a
        f[1][2 * var + 1] = 1
        out.append(_bits_of(f))
    return tuple(out)


def slice_spec_bits(index: int) -> int:
    bits = 0
    for j, b in enumerate(slice_basis()):
        if index >> j & 1:
            bits ^= b
    return bits


def slice_index(bits: int) -> int | None:
    """Coordinates of a spec in the slice basis, or None if it lies outside."""
    F2 = search_param().base
    basis = slice_basis()
    # columns = basis vectors, augmented with the target
    rows = [[(b >> r) & 1 for b in basis] + [(bits >> r) & 1] for r in range(NBITS)]
    R, piv = rref(rows, F2)
    if len(basis) in piv:
        return None
    idx = 0
    for r, p in enumerate(piv):
        if R[r][-1]:
            idx |= 1 << p
    return idx


def torus_act(spec: LinearSetSpec, lams: tuple[int, int, int], mu: int = 1) -> LinearSetSpec:
    """Spec of {mu D A D : A in W} for D = diag(lams) over F_{q^2}."""
    p = spec.param
    E = p.ext
    diag = [E.mul(mu, E.mul(l, l)) for l in lams]
    offd = [E.mul(mu, E.mul(lams[i], lams[j])) for i, j in ((0, 1), (0, 2), (1, 2))]
    cols = []
    for k in range(6):
        u2 = [int(k == j) for j in range(6)]
        xyz2 = [p.combine(u2[i], u2[i + 1]) for i in (0, 2, 4)]
        u = [c for i in range(3) for c in p.xi_coords(E.div(xyz2[i], diag[i]))]
        v = spec.vector(u)
        cols.append([c for i in range(3) for c in p.xi_coords(E.mul(offd[i], v[3 + i]))])
    return LinearSetSpec(p, tuple(tuple(cols[c][r] for c in range(6)) for r in range(6)))


def _semilinear_parts(spec: LinearSetSpec, i: int, var: int) -> tuple[int, int]:
    """(alpha, alpha') with F_i restricted to one variable equal to alpha v + alpha' v^q."""
    p = spec.param
    E, q = p.ext, p.base.order
    vals = []
    for c in (1, p.xi):
        c0, c1 = p.xi_coords(c)
        u = [0] * 6
        u[2 * var], u[2 * var + 1] = c0, c1
        vals.append(spec.vector(u)[3 + i])
    # alpha + alpha' = vals[0]; alpha xi + alpha' xi^q = vals[1]
    xq = E.pow(p.xi, q)
    ap = E.div(E.sub(vals[1], E.mul(p.xi, vals[0])), E.sub(xq, p.xi))
    return E.sub(vals[0], ap), ap


def normalize_to_slice(spec: LinearSetSpec) -> tuple[int, LinearSetSpec, tuple[int, int, int]] | None:
    """Bring a spec with F2, F3 F_4-linear into the slice; returns (index, spec, lams)."""
    E = spec.ext
    if any(_semilinear_parts(spec, i, v)[1] for i in (1, 2) for v in range(3)):
        return None
    for l1 in range(1, E.order):
        for l2 in range(1, E.order):
            for l3 in range(1, E.order):
                s = torus_act(spec, (l1, l2, l3))
                if all(_semilinear_parts(s, 0, v)[1] in (0, 1) for v in range(3)):
                    idx = slice_index(bits_from_spec(s))
                    if idx is not None:
                        return idx, s, (l1, l2, l3)
    return None


# -- vectorised rejection ---------------------------------------------------------

@lru_cache(maxsize=None)
def _contributions() -> tuple[np.ndarray, np.ndarray]:
    """xyz code per tested vector, and the F-part code contributed by each spec bit."""
    p = search_param()
    tab = tables_for(4)
    order = vector_order()
    xyz = np.array([tab.encode([p.combine(u[0], u[1]), p.combine(u[2], u[3]),
                                p.combine(u[4], u[5]), 0, 0, 0]) for u in order], dtype=np.int64)
    contrib = np.zeros((len(order), NBITS), dtype=np.int64)
    for k, u in enumerate(order):
        for b in range(NBITS):
            r, c = divmod(b, 6)
            if u[c]:
                val = 1 if r % 2 == 0 else p.xi
                contrib[k, b] = val * 4 ** (3 + r // 2)
    return xyz, contrib


def _xor_table(vals: np.ndarray) -> np.ndarray:
    """XOR of vals[j] over the set bits j of every index below 2^len(vals)."""
    t = np.zeros(1, dtype=np.int64)
    for v in vals:
        t = np.concatenate([t, t ^ v])
    return t


@lru_cache(maxsize=2)
def _tables(strategy: str):
    xyz, contrib = _contributions()
    if strategy == "full":
        gens = contrib
    else:
        basis = slice_basis()
        gens = np.stack([np.bitwise_xor.reduce(
            [contrib[:, j] for j in range(NBITS) if b >> j & 1] or [np.zeros(len(xyz), np.int64)])
            for b in basis], axis=1)
    nb = gens.shape[1]
    lo = nb // 2
    low = np.stack([_xor_table(g[:lo]) for g in gens]).astype(np.int16)
    high = np.stack([_xor_table(g[lo:]) for g in gens]).astype(np.int16)
    return xyz, low, high, lo, nb


def survivors(strategy: str, indices: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Indices disjoint on all 63 tested vectors, and the survivor count after each vector."""
    xyz, low, high, lo, _ = _tables(strategy)
    on_sec = tables_for(4).on_secant
    mask = (1 << lo) - 1
    alive = np.asarray(indices, dtype=np.int64)
    surv = np.zeros(len(xyz), dtype=np.int64)
    for k in range(len(xyz)):
        codes = xyz[k] ^ low[k][alive & mask] ^ high[k][alive >> lo]
        alive = alive[~on_sec[codes]]
        surv[k] = len(alive)
        if not len(alive):
            break
    return alive, surv


def index_bits(strategy: str, index: int) -> int:
    return index if strategy == "full" else slice_spec_bits(index)


def rejection_profile(n: int = 10 ** 6, seed: int = 0) -> np.ndarray:
    """Survivor counts after each tested vector for n uniformly random specs."""
    rng = np.random.default_rng(seed)
    return survivors("full", rng.integers(0, 1 << NBITS, size=n, dtype=np.int64))[1]


def check_spec(bits: int) -> dict:
    spec = spec_from_bits(bits)
    v = disjoint_from_secant(spec, derive_fg(spec))
    return {"bits": bits, "plane": spec.is_ext_linear(), "direct": v.disjoint,
            "fg": v.fg_disjoint, "agree": v.oracles_agree}


def _search_chunk(task):
    strategy, start, stop = task
    alive, surv = survivors(strategy, np.arange(start, stop, dtype=np.int64))
    found = []
    for idx in alive.tolist():
        c = check_spec(index_bits(strategy, idx))
        found.append([idx, int(c["plane"]), int(c["agree"] and c["direct"] and c["fg"])])
    return found, surv.tolist()


# -- checkpointing -----------------------------------------------------------------

def _checksum(state: dict) -> str:
    body = {k: v for k, v in state.items() if k != "checksum"}
    return hashlib.sha256(json.dumps(body, sort_keys=True).encode()).hexdigest()


def save_checkpoint(path, state: dict):
    state = dict(state)
    state["checksum"] = _checksum(state)
    atomic_write(path, json.dumps(state, sort_keys=True))


def load_checkpoint(path) -> dict:
    try:
        with open(path) as fh:
            state = json.load(fh)
    except (OSError, ValueError) as exc:
        raise CheckpointError(f"unreadable checkpoint {path}: {exc}") from None
    if not isinstance(state, dict) or state.get("checksum") != _checksum(state):
        raise CheckpointError(f"checkpoint {path} failed its checksum")
    return state


@dataclass
class SearchResult:
    report: CensusReport
    complete: bool


def total_candidates(strategy: str) -> int:
    return 1 << (NBITS if strategy == "full" else len(slice_basis()))


def linset_search(q: int = 2, strategy: str = "restricted-slice", workers: int = 1,
                  checkpoint: str | None = None, checkpoint_every: int = DEFAULT_CHECKPOINT_EVERY,
                  budget: int | None = None, allow_full: bool = False,
                  chunk: int = CHUNK) -> SearchResult:
    """Scan the candidate space in order; ``budget`` stops early after that many candidates."""
    if q != 2:
        raise BudgetExceeded("the linear-set search runs at q = 2 only")
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    if strategy == "full" and not allow_full:
        raise BudgetExceeded("the full 2^36 search needs allow_full")
    total = total_candidates(strategy)
    slice_id = SLICE_ID if strategy != "full" else "q2-full"
    header = {"q": q, "strategy": strategy, "slice": slice_id, "total": total, "chunk": chunk}
    state = {**header, "cursor": 0, "found": [], "survival": [0] * 63}
    if checkpoint and os.path.exists(checkpoint):
        old = load_checkpoint(checkpoint)
        if any(old.get(k) != v for k, v in header.items()):
            raise CheckpointError("checkpoint belongs to a different search")
        state = old
    cursor = state["cursor"]
    stop_at = total if budget is None else min(total, cursor + budget)
    last_saved = cursor
    while cursor < stop_at:
        tasks = []
        end = cursor
        while end < stop_at and len(tasks) < max(1, workers) * 4:
            nxt = min(stop_at, end + chunk)
            tasks.append((strategy, end, nxt))
            end = nxt
        for found, surv in parallel_map(_search_chunk, tasks, workers):
            state["found"] += found
            state["survival"] = [a + b for a, b in zip(state["survival"], surv)]
        cursor = state["cursor"] = end
        if checkpoint and (cursor - last_saved >= checkpoint_every or cursor == stop_at):
            save_checkpoint(checkpoint, state)
            last_saved = cursor
    return SearchResult(_report(state), cursor >= total)


def desarguesian_bits() -> int:
    from ..spread_kit import desarguesian_spread_set, spread_to_linset

    T = create_tower(2, [1, 2, 3])
    img = spread_to_linset(desarguesian_spread_set(T[2], T[1]), T[0], search_param())
    return bits_from_spec(img.spec)


def _report(state: dict) -> CensusReport:
    found = state["found"]
    strategy = state["strategy"]
    counts = {
        "candidates": state["cursor"],
        "disjoint": len(found),
        "planes": sum(f[1] for f in found),
        "non-planes": sum(1 - f[1] for f in found),
        "oracle-agree": sum(f[2] for f in found),
        "oracle-disagree": sum(1 - f[2] for f in found),
    }
    if strategy != "full":
        d = slice_index(desarguesian_bits())
        counts["desarguesian-in-slice"] = int(d is not None)
        counts["desarguesian-found"] = int(d is not None and any(f[0] == d for f in found))
    for k, s in enumerate(state["survival"]):
        counts[f"survivors-after-{k + 1:02d}"] = s
    witnesses = [{"index": f[0], "plane": bool(f[1]),
                  "spec": spec_from_bits(index_bits(strategy, f[0])).to_json()}
                 for f in found[:WITNESS_CAP]]
    witnesses.append({"kind": "digest", "of": "found-indices", "sha256": digest(found)})
    return CensusReport(
        command="search-linsets",
        params={"q": state["q"], "strategy": strategy, "slice": state["slice"],
                "slice_definition": SLICE_HEADER if strategy != "full" else None,
                "total": state["total"], "chunk": state["chunk"]},
        counts=counts,
        witnesses=witnesses,
        checkpoint={"cursor": state["cursor"], "complete": state["cursor"] >= state["total"]},
        data={"found": found},
    )
