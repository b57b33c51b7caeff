"""Mertens sums: sum of 1/p at checkpoints, with certified residual bands.

The residual is R(x) = sum_{p<=x} 1/p - log log x - B1.  Three band checks
are attached to every record (HOLDS = |R(x)| certifiably inside the band):

* dusart_band      1/(10 log^2 x) + 4/(15 log^3 x)   (unconditional)
* rh_band          (3 log x + 4) / (8 pi sqrt(x))    (square-root strength)
* elementary_band  c / log x with configurable c (default 1)

The arithmetic-progression variant sums 1/p over p = a (mod q) and reports a
purely empirical estimate of the progression's Mertens constant: the
centered value sum - (1/phi(q)) log log x, together with its spread over the
trailing decade of checkpoints as a stability measure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from . import _kernels, sieve
from .checkpoints import DEFAULT_POLICY, CheckpointPolicy
from .constants import B1_ET
from .rigor import (
    RECIP_REL,
    U,
    ErrorTracked,
    RunningSum,
    Verdict,
    certified_compare,
    et_abs,
    et_add,
    et_div,
    et_log,
    et_mul,
    et_scale,
    et_sqrt,
    et_sub,
    exact,
)

_EIGHT_PI = ErrorTracked(8.0 * math.pi, 8.0 * math.pi * U)


class InvalidResidueError(ValueError):
    """gcd(a, q) != 1: the progression contains at most one prime."""


@dataclass(frozen=True)
class MertensRecord:
    x: int
    sum_recip: ErrorTracked
    residual: ErrorTracked
    dusart_band: float
    rh_band: float
    elementary_band: float
    within_dusart: Verdict
    within_rh: Verdict
    within_elementary: Verdict


@dataclass(frozen=True)
class MertensAPRecord:
    x: int
    q: int
    a: int
    sum_recip: ErrorTracked
    centered: ErrorTracked
    b_aq_estimate: float
    spread_last_decade: float


def dusart_band(x: int) -> ErrorTracked:
    lg = et_log(exact(x))
    l2 = et_mul(lg, lg)
    return et_add(
        et_div(exact(1.0), et_scale(l2, 10.0)),
        et_div(exact(4.0), et_scale(et_mul(l2, lg), 15.0)),
    )


def rh_band(x: int) -> ErrorTracked:
    xe = exact(x)
    num = et_add(et_scale(et_log(xe), 3.0), exact(4.0))
    return et_div(num, et_mul(_EIGHT_PI, et_sqrt(xe)))


def _record(x: int, acc: RunningSum, c_elementary: float) -> MertensRecord:
    s = acc.snapshot()
    loglog = et_log(et_log(exact(x)))
    residual = et_sub(et_sub(s, loglog), B1_ET)
    dus = dusart_band(x)
    rh = rh_band(x)
    elem = et_div(exact(c_elementary), et_log(exact(x)))
    absr = et_abs(residual)
    return MertensRecord(
        x, s, residual,
        dus.value, rh.value, elem.value,
        certified_compare(dus, absr),
        certified_compare(rh, absr),
        certified_compare(elem, absr),
    )


def mertens_scan(
    limit: int,
    policy: CheckpointPolicy = DEFAULT_POLICY,
    c_elementary: float = 1.0,
    segments: Iterable[np.ndarray] | None = None,
    threads: int = 1,
) -> Iterator[MertensRecord]:
    """Stream MertensRecords at the policy's checkpoints (x >= 3)."""
    if limit < 3:
        raise ValueError("mertens scan needs limit >= 3 (log log x)")
    cks = policy.values(limit, start=3)
    if segments is None:
        segments = sieve.prime_segments(limit, threads=threads)
    kern = _kernels.active()
    acc = RunningSum(term_rel=RECIP_REL)
    ci = 0
    for seg in segments:
        pos = 0
        while ci < len(cks) and cks[ci] <= seg[-1]:
            cut = int(np.searchsorted(seg, cks[ci], side="right"))
            if cut > pos:
                acc.merge_block(*kern.recip_block(seg[pos:cut]))
                pos = cut
            yield _record(int(cks[ci]), acc, c_elementary)
            ci += 1
        if pos < len(seg):
            acc.merge_block(*kern.recip_block(seg[pos:]))
    for c in cks[ci:]:
        yield _record(int(c), acc, c_elementary)


def mertens_ap_scan(
    q: int,
    a: int,
    limit: int,
    policy: CheckpointPolicy = DEFAULT_POLICY,
    segments: Iterable[np.ndarray] | None = None,
    threads: int = 1,
) -> Iterator[MertensAPRecord]:
    """Stream AP records for primes p = a (mod q), p <= x."""
    if q < 3:
        raise ValueError("modulus must be >= 3")
    a %= q
    if math.gcd(a, q) != 1:
        raise InvalidResidueError(
            f"gcd({a}, {q}) != 1: sum over p = {a} (mod {q}) is trivial"
        )
    if limit < q:
        raise ValueError("limit must be >= q")
    phi_q = sieve.euler_phi(q)
    cks = policy.values(limit, start=3)
    if segments is None:
        segments = sieve.prime_segments(limit, threads=threads)
    kern = _kernels.active()
    acc = RunningSum(term_rel=RECIP_REL)
    trail: list[tuple[int, float]] = []

    def record(x: int) -> MertensAPRecord:
        s = acc.snapshot()
        loglog = et_log(et_log(exact(x)))
        centered = et_sub(s, et_div(loglog, exact(phi_q)))
        trail.append((x, centered.value))
        while trail and trail[0][0] * 10 < x:
            trail.pop(0)
        vals = [v for _, v in trail]
        return MertensAPRecord(
            x, q, a, s, centered, centered.value, max(vals) - min(vals)
        )

    ci = 0
    for seg in segments:
        pos = 0
        while ci < len(cks) and cks[ci] <= seg[-1]:
            cut = int(np.searchsorted(seg, cks[ci], side="right"))
            if cut > pos:
                acc.merge_block(*kern.recip_mod_block(seg[pos:cut], q, a))
                pos = cut
            yield record(int(cks[ci]))
            ci += 1
        if pos < len(seg):
            acc.merge_block(*kern.recip_mod_block(seg[pos:], q, a))
    for c in cks[ci:]:
        yield record(int(c))
