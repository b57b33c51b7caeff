"""Prime generation and totient/omega tables.

Primes come from a segmented Eratosthenes sieve: base primes to sqrt(limit),
then independent fixed-span segments, so memory stays O(sqrt(limit) +
segment) no matter the range.  Segments can be produced by worker threads;
they are always delivered in increasing order, so downstream reductions are
deterministic regardless of the thread count.

The totient table is a multiplicative sieve giving exact phi(n) (64-bit) and
omega(n) (number of distinct prime factors) for all n up to the limit.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

from . import _kernels

SIEVE_LIMIT_MAX = 1_000_000_000
TOTIENT_LIMIT_MAX = 100_000_000
DEFAULT_SEGMENT_SIZE = 1 << 22


class ConfigurationError(ValueError):
    """A limit or buffer size outside what this build supports."""


@dataclass(frozen=True)
class SieveConfig:
    limit: int
    segment_size: int = DEFAULT_SEGMENT_SIZE

    def __post_init__(self):
        if self.limit > SIEVE_LIMIT_MAX:
            raise ConfigurationError(
                f"sieve limit {self.limit} exceeds ceiling {SIEVE_LIMIT_MAX}"
            )
        if self.segment_size < 1024:
            raise ConfigurationError("segment_size must be >= 1024")


def _base_primes(limit: int) -> np.ndarray:
    """Simple sieve used for base primes (limit ~ sqrt of the real range)."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, int(limit ** 0.5) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return np.flatnonzero(mask).astype(np.int64)


def prime_segments(
    limit: int,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    threads: int = 1,
) -> Iterator[np.ndarray]:
    """Yield int64 arrays of primes covering [2, limit] in increasing order.

    The first array starts with 2; every array is nonempty except possibly
    when limit < 2 (empty stream).  Each segment is sieved independently,
    which is what makes threaded production safe.
    """
    cfg = SieveConfig(limit, segment_size)
    if limit < 2:
        return
    base = _base_primes(math.isqrt(limit))
    kern = _kernels.active()
    spans = []
    lo = 3
    while lo <= limit:
        hi = min(lo + segment_size, limit + 1)
        spans.append((lo, hi))
        lo = hi

    def job(span):
        return kern.sieve_segment(span[0], span[1], base)

    first = np.array([2], dtype=np.int64)
    if not spans:
        yield first
        return
    def emit(segments: Iterable[np.ndarray]) -> Iterator[np.ndarray]:
        head = first
        for seg in segments:
            if len(seg):
                yield np.concatenate([head, seg]) if head is not None else seg
                head = None
        if head is not None:
            yield head

    if threads <= 1:
        yield from emit(map(job, spans))
        return
    # bounded in-order prefetch: results are consumed in submission order,
    # so output is independent of scheduling
    with ThreadPoolExecutor(max_workers=threads) as pool:
        span_iter = iter(spans)
        pending = deque(pool.submit(job, s)
                        for s in itertools.islice(span_iter, threads + 2))

        def ordered() -> Iterator[np.ndarray]:
            while pending:
                seg = pending.popleft().result()
                nxt = next(span_iter, None)
                if nxt is not None:
                    pending.append(pool.submit(job, nxt))
                yield seg

        yield from emit(ordered())


def primes_up_to(config: SieveConfig | int) -> Iterator[int]:
    """Stream primes <= limit as Python ints (restartable: call again)."""
    if isinstance(config, SieveConfig):
        limit, seg = config.limit, config.segment_size
    else:
        limit, seg = int(config), DEFAULT_SEGMENT_SIZE
    for arr in prime_segments(limit, seg):
        yield from arr.tolist()


def prime_array(limit: int, segment_size: int = DEFAULT_SEGMENT_SIZE) -> np.ndarray:
    segs = list(prime_segments(limit, segment_size))
    if not segs:
        return np.empty(0, dtype=np.int64)
    return np.concatenate(segs)


def prime_count(limit: int) -> int:
    return sum(len(s) for s in prime_segments(limit))


def euler_phi(n: int) -> int:
    """phi(n) by trial division; for small moduli and spot checks."""
    if n < 1:
        raise ValueError("phi is defined for n >= 1")
    result = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1 if p == 2 else 2
    if m > 1:
        result -= result // m
    return result


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorization (small/medium n; test oracles, omega spot checks)."""
    if n < 1:
        raise ValueError("factorize requires n >= 1")
    out: dict[int, int] = {}
    m = n
    p = 2
    while p * p <= m:
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
        p += 1 if p == 2 else 2
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


@dataclass(frozen=True)
class TotientTable:
    """Exact phi and omega for 1 <= n <= limit (index = n)."""

    limit: int
    phi: np.ndarray = field(repr=False)
    omega: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, limit: int) -> "TotientTable":
        if limit < 1:
            raise ConfigurationError("totient table limit must be >= 1")
        if limit > TOTIENT_LIMIT_MAX:
            raise ConfigurationError(
                f"totient table limit {limit} exceeds ceiling {TOTIENT_LIMIT_MAX}"
            )
        phi, omega = _kernels.active().totient_omega(limit)
        phi.setflags(write=False)
        omega.setflags(write=False)
        return cls(limit, phi, omega)


_table_cache: dict[int, TotientTable] = {}


def totient_table(limit: int) -> TotientTable:
    """Build (or reuse) the exact totient/omega table up to limit."""
    table = _table_cache.get(limit)
    if table is None:
        table = TotientTable.build(limit)
        _table_cache.clear()
        _table_cache[limit] = table
    return table


# Prime segments are reused across CLI invocations in the same process; the
# cache never changes results, only who pays for the sieve.
_segment_cache: dict[tuple[int, int], list[np.ndarray]] = {}


def cached_segments(
    limit: int,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    threads: int = 1,
) -> list[np.ndarray]:
    key = (limit, segment_size)
    segs = _segment_cache.get(key)
    if segs is None:
        segs = list(prime_segments(limit, segment_size, threads))
        _segment_cache.clear()
        _segment_cache[key] = segs
    return segs


def clear_caches() -> None:
    _segment_cache.clear()
    _table_cache.clear()
