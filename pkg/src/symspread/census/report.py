"""CensusReport plus the ordered process-pool map used by every census."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import multiprocessing as mp
import os
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

THREADS_ENV = "SYMSPREAD_THREADS"


@dataclass
class CensusReport:
    command: str
    params: dict
    counts: dict[str, int]
    witnesses: list = field(default_factory=list)
    elapsed_ms: int | None = None
    checkpoint: dict | None = None
    # in-memory results (full plane lists, profiles); never serialised
    data: dict = field(default_factory=dict, repr=False, compare=False)

    def to_dict(self, timing: bool = False) -> dict:
        return {
            "command": self.command,
            "params": self.params,
            "counts": dict(sorted(self.counts.items())),
            "witnesses": self.witnesses,
            "elapsed_ms": self.elapsed_ms if timing else None,
            "checkpoint": self.checkpoint,
        }

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.to_dict(timing), sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["tag", "count"])
        for k, v in sorted(self.counts.items()):
            w.writerow([k, v])
        return buf.getvalue()

    @classmethod
    def from_json(cls, text: str) -> "CensusReport":
        d = json.loads(text)
        return cls(d["command"], d["params"], d["counts"], d.get("witnesses", []),
                   d.get("elapsed_ms"), d.get("checkpoint"))

    def write(self, path, timing: bool = False, csv_path=None):
        atomic_write(path, self.to_json(timing))
        if csv_path:
            atomic_write(csv_path, self.to_csv())


def atomic_write(path, text: str):
    path = os.fspath(path)
    tmp = f"{path}.tmp{os.getpid()}"
    with open(tmp, "w") as fh:
        fh.write(text)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


def digest(items: Sequence[Any]) -> str:
    return hashlib.sha256(json.dumps(list(items), separators=(",", ":")).encode()).hexdigest()


def resolve_workers(threads: int | None = None) -> int:
    """Flag wins; otherwise the environment variable; otherwise 1."""
    if threads is None:
        env = os.environ.get(THREADS_ENV)
        threads = int(env) if env else 1
    if threads < 1:
        raise ValueError("thread count must be positive")
    return threads


def parallel_map(fn: Callable, tasks: Sequence, workers: int = 1) -> list:
    """Ordered map; results come back in task order whatever the worker count."""
    tasks = list(tasks)
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    ctx = mp.get_context("fork")
    with ctx.Pool(min(workers, len(tasks))) as pool:
        return pool.map(fn, tasks, chunksize=1)
