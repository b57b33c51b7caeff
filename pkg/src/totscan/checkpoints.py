"""Checkpoint grids for the scan modules.

Scans over 10^8-scale ranges cannot emit a record per integer, so records are
produced on a configurable grid.  The default ("auto") is dense for small
limits — one record per prime — and switches to a geometric grid (ratio 1.1)
decorated with the powers of ten for large limits.  The scan limit itself is
always a checkpoint.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

KINDS = ("auto", "dense", "grid", "pow10")

# Auto policy: per-prime emission up to this limit, geometric grid above
# (keeping the dense head so small-k records always exist).
DENSE_LIMIT = 10_000
DENSE_HEAD = 1_000


def _dense_values(limit: int) -> np.ndarray:
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(limit ** 0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).astype(np.int64)


def _grid_values(limit: int, start: int, ratio: float) -> list[int]:
    vals = []
    x = float(start)
    while x <= limit:
        vals.append(int(round(x)))
        x *= ratio
    e = 1
    while 10 ** e <= limit:
        vals.append(10 ** e)
        e += 1
    return vals


@dataclass(frozen=True)
class CheckpointPolicy:
    kind: str = "auto"
    ratio: float = 1.1
    extra: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown checkpoint kind {self.kind!r}")
        if not self.ratio > 1.0:
            raise ValueError("checkpoint ratio must be > 1")

    def values(self, limit: int, start: int = 2) -> np.ndarray:
        """Sorted distinct checkpoints in [start, limit], always ending at limit."""
        if limit < start:
            return np.empty(0, dtype=np.int64)
        vals: set[int] = {int(limit)}
        vals.update(int(x) for x in self.extra if start <= x <= limit)
        kind = self.kind
        if kind == "auto":
            kind = "dense" if limit <= DENSE_LIMIT else "grid"
            if kind == "grid":
                vals.update(_dense_values(min(limit, DENSE_HEAD)).tolist())
        if kind == "dense":
            vals.update(_dense_values(limit).tolist())
        elif kind == "grid":
            vals.update(_grid_values(limit, start, self.ratio))
        elif kind == "pow10":
            e = 1
            while 10 ** e <= limit:
                vals.add(10 ** e)
                e += 1
        out = np.array(sorted(v for v in vals if start <= v <= limit), dtype=np.int64)
        return out


DEFAULT_POLICY = CheckpointPolicy()
