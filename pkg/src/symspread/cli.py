"""Command-line front door: ``symspread <subcommand> [flags]``.

Exit status: 0 success, 1 a checked property failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, fields

from .errors import BudgetExceeded, CheckpointError, SymspreadError

SUBCOMMANDS = ("classify-planes", "disjoint-planes", "orbit-check", "search-linsets",
               "verify-spread", "derive-fg", "selftest")


@dataclass
class CommandConfig:
    subcommand: str
    order: int = 2
    q: int = 2
    seed: int = 0
    threads: int | None = None
    out: str | None = None
    csv: str | None = None
    checkpoint: str | None = None
    checkpoint_every: int = 10 ** 7
    budget: int | None = None
    strategy: str = "restricted-slice"
    input: str | None = None
    count: int = 100
    long_run: bool = False
    allow_full: bool = False
    timing: bool = False

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "CommandConfig":
        data = json.loads(text)
        names = {f.name for f in fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ValueError(f"unknown config keys {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_namespace(cls, ns: argparse.Namespace) -> "CommandConfig":
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in vars(ns).items() if k in names})


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=None,
                        help="worker processes (default: $SYMSPREAD_THREADS or 1)")
    common.add_argument("--out", help="report path (default: stdout)")
    common.add_argument("--csv", help="also write the counts as CSV")
    common.add_argument("--timing", action="store_true",
                        help="include elapsed_ms (makes reports run-dependent)")

    ap = argparse.ArgumentParser(prog="symspread", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("classify-planes", parents=[common], help="census of all planes of PG(5, Q)")
    p.add_argument("--order", type=int, default=2, help="Q in {2, 3, 4}")

    p = sub.add_parser("disjoint-planes", parents=[common], help="planes of PG(5, q^2) missing V1")
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--long-run", action="store_true", help="allow q > 2")

    p = sub.add_parser("orbit-check", parents=[common], help="constructive transitivity on disjoint planes")
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--count", type=int, default=100)

    p = sub.add_parser("search-linsets", parents=[common], help="rank-6 linear sets missing V1")
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--strategy", choices=("restricted-slice", "full"), default="restricted-slice")
    p.add_argument("--checkpoint", help="checkpoint file; resumed when present")
    p.add_argument("--checkpoint-every", type=int, default=10 ** 7)
    p.add_argument("--budget", type=int, default=None, help="stop after this many candidates")
    p.add_argument("--allow-full", action="store_true", help="permit the 2^36 full strategy")

    p = sub.add_parser("verify-spread", parents=[common], help="validate a spread set")
    p.add_argument("--input", help="SpreadSet JSON (default: Desarguesian over F_64/F_4)")

    p = sub.add_parser("derive-fg", parents=[common], help="the (f, g) system of a spec")
    p.add_argument("--spec", "--input", dest="input", required=True, help="spec JSON")
    p.add_argument("--q", type=int, default=2)

    sub.add_parser("selftest", parents=[common], help="quick built-in checks")
    return ap


# -- commands ---------------------------------------------------------------------

def _classify(cfg):
    from .census import classify_all_planes

    r = classify_all_planes(cfg.order, workers=cfg.threads)
    c = r.counts
    return r, c["unclassified"] == 0 and c["contained-solids"] == 0


def _disjoint(cfg):
    from .census.planes import census_ok, disjoint_plane_census

    r = disjoint_plane_census(cfg.q, workers=cfg.threads, long_run=cfg.long_run)
    return r, census_ok(r)


def _orbit(cfg):
    from .census.planes import disjoint_plane_census, orbit_transitivity_check

    census = disjoint_plane_census(cfg.q, workers=cfg.threads, long_run=cfg.q != 2)
    r = orbit_transitivity_check(cfg.q, cfg.count, cfg.seed, census)
    return r, r.counts["failures"] == 0 and r.counts["commute-failures"] == 0


def _search(cfg):
    from .census.linset_search import linset_search

    res = linset_search(cfg.q, cfg.strategy, cfg.threads, cfg.checkpoint,
                        cfg.checkpoint_every, cfg.budget, cfg.allow_full)
    c = res.report.counts
    ok = c["oracle-disagree"] == 0
    if res.complete and "desarguesian-found" in c:
        ok = ok and c["desarguesian-found"] == 1
    return res.report, ok


def _verify_spread(cfg):
    from .census.report import CensusReport
    from .field_tower import create_tower
    from .spread_kit import (
        desarguesian_spread_set, load_spread_set, presemifield_ops, spread_cover,
        validate_spread_set,
    )

    if cfg.input:
        C = load_spread_set(cfg.input)
    else:
        T = create_tower(2, [1, 2, 3])
        C = desarguesian_spread_set(T[2], T[1])
    flags = validate_spread_set(C)
    counts = {k: int(v) for k, v in flags.items()}
    counts["members"] = len(C)
    if flags["spread"]:
        cov = spread_cover(C)
        counts.update({"partition": int(cov.partition), "isotropic": int(cov.isotropic),
                       "elements": len(cov.elements)})
        if cov.plane_checked:
            counts["affine-plane"] = int(bool(cov.plane_ok))
        if flags["semifield"] and C.field.order ** C.n <= 1 << 12:
            ps = presemifield_ops(C)
            counts.update({"left-nucleus": len(ps.left_nucleus()), "center": len(ps.center()),
                           "distributive": int(ps.distributive()),
                           "no-zero-divisors": int(ps.zero_divisor_free())})
    params = {"input": cfg.input, "n": C.n, "field": C.field.tower.descriptor(),
              "field_index": C.field.index}
    ok = flags["spread"] and counts.get("partition", 0) == 1
    if flags["symplectic"] and flags["spread"]:
        ok = ok and counts["isotropic"] == 1
    return CensusReport("verify-spread", params, counts), ok


def _derive_fg(cfg):
    from .census.report import CensusReport
    from .linear_sets import base_field, derive_fg, displayed_fg_for, disjoint_from_secant, load_spec

    F = base_field(cfg.q)
    spec = load_spec(cfg.input, F)
    fg = derive_fg(spec)
    verdict = disjoint_from_secant(spec, fg)
    same = fg == displayed_fg_for(spec)
    counts = {"f-terms": len(fg.f.terms), "g-terms": len(fg.g.terms),
              "matches-display": int(same), "disjoint": int(verdict.disjoint),
              "fg-zeros": len(verdict.fg_params), "oracles-agree": int(verdict.oracles_agree)}
    return (CensusReport("derive-fg", {"q": cfg.q, "spec": spec.to_json()}, counts, [fg.to_json()]),
            same and verdict.oracles_agree)


def _selftest(cfg):
    from .census.report import CensusReport
    from .selftest import run_selftest

    results = run_selftest()
    failed = [name for name, ok in results if not ok]
    counts = {"checks": len(results), "passed": len(results) - len(failed), "failed": len(failed)}
    return CensusReport("selftest", {}, counts, [{"failed": failed}]), not failed


HANDLERS = {
    "classify-planes": _classify, "disjoint-planes": _disjoint, "orbit-check": _orbit,
    "search-linsets": _search, "verify-spread": _verify_spread, "derive-fg": _derive_fg,
    "selftest": _selftest,
}


def run(cfg: CommandConfig) -> int:
    from .census.report import atomic_write, resolve_workers

    if cfg.subcommand not in HANDLERS:
        print(f"unknown subcommand {cfg.subcommand!r}", file=sys.stderr)
        return 2
    t0 = time.perf_counter()
    try:
        cfg.threads = resolve_workers(cfg.threads)
        report, ok = HANDLERS[cfg.subcommand](cfg)
    except (BudgetExceeded, CheckpointError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SymspreadError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report.elapsed_ms = int((time.perf_counter() - t0) * 1000)
    text = report.to_json(cfg.timing)
    if cfg.out:
        atomic_write(cfg.out, text)
    else:
        sys.stdout.write(text)
    if cfg.csv:
        atomic_write(cfg.csv, report.to_csv())
    return 0 if ok else 1


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    return run(CommandConfig.from_namespace(ns))


if __name__ == "__main__":
    sys.exit(main())
