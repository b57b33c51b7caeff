"""Primorial scan: running statistics of N_k = 2*3*5***p_k with certified
verdicts at every k.

For each prime p_k the scan maintains, in compensated floating point with
certified error bounds:

* log N_k        = sum log p          (theta at p_k)
* lhs_log        = sum -log(1 - 1/p)  = log(N_k / phi(N_k))
* mertens_partial= sum 1/p
* power sums     sum_{p<=p_k} p^-n for n = 2..64

and renders two verdicts per k:

* nicolas:  N_k/phi(N_k) > e^gamma log log N_k, compared in log scale
  (lhs_log vs gamma + log log log N_k) to keep certified margins tight;
* rosser_schoenfeld:  N_k/phi(N_k) < e^gamma log log N_k + 2.5/log log N_k,
  whose single desk-scale failure is the classical exception N = 2*3***23.

Verdicts are evaluated at *every* k inside the kernels; records are emitted
only at the checkpoint policy's k (dense for small scans).  Domain edges:
k = 1 falls back to the ratio-scale comparison (log log 2 < 0), and the
upper-bound check is reported INDETERMINATE there; the double-log diagnostic
needs k >= 3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

from . import _kernels, constants, sieve
from .checkpoints import DEFAULT_POLICY, CheckpointPolicy
from .constants import EXP_GAMMA_ET, GAMMA_ET
from .rigor import (
    NEGLOG1P_REL,
    RECIP_REL,
    TRANS_REL,
    U,
    ErrorTracked,
    INDETERMINATE_VERDICT,
    Outcome,
    RunningSum,
    Verdict,
    _up,
    certified_compare,
    et_abs,
    et_add,
    et_div,
    et_exp,
    et_log,
    et_mul,
    et_scale,
    et_sub,
    exact,
    gamma_n,
)

POW_N_MAX = 64


class DiagnosticDomainError(ValueError):
    """The requested diagnostic is undefined at this k (triple log <= 0)."""


@dataclass(frozen=True)
class PrimorialRecord:
    k: int
    p_k: int
    log_N: ErrorTracked
    loglog_N: ErrorTracked
    lhs_log: ErrorTracked
    mertens_partial: ErrorTracked
    nicolas: Verdict
    rosser_schoenfeld: Verdict
    prop6_diff: ErrorTracked | None
    prop6_ratio: ErrorTracked | None
    tail: ErrorTracked
    tail_times_log_n: ErrorTracked
    eq9_residual: ErrorTracked


@dataclass
class PrimorialSummary:
    """Aggregate of the per-k verdict checks done inside the kernels."""

    k_final: int = 0
    p_final: int = 0
    nicolas_failures: list[int] = field(default_factory=list)
    nicolas_indeterminate: list[int] = field(default_factory=list)
    rs_failures: list[int] = field(default_factory=list)
    rs_indeterminate: list[int] = field(default_factory=list)
    min_nicolas_ratio: float = math.inf
    min_nicolas_ratio_k: int = -1

    @property
    def nicolas_all_hold(self) -> bool:
        return not self.nicolas_failures and not self.nicolas_indeterminate


# ---------------------------------------------------------------------------
# verdicts on records (the scan uses the same formulas internally)

def nicolas_verdict(r: PrimorialRecord) -> Verdict:
    """HOLDS iff N_k/phi(N_k) > e^gamma log log N_k, certified."""
    return _nicolas_from_parts(r.k, r.lhs_log, r.loglog_N)


def _nicolas_from_parts(k: int, lhs_log: ErrorTracked,
                        loglog_n: ErrorTracked) -> Verdict:
    if k >= 2:
        rhs = et_add(GAMMA_ET, et_log(loglog_n))
        return certified_compare(lhs_log, rhs)
    # k = 1: log log 2 < 0, so compare in ratio scale where the rhs is
    # simply negative.
    return certified_compare(et_exp(lhs_log), et_mul(EXP_GAMMA_ET, loglog_n))


def rosser_schoenfeld_check(r: PrimorialRecord) -> Verdict:
    """HOLDS iff N_k/phi(N_k) < e^gamma log log N_k + 2.5/log log N_k.

    FAILS flags a certified violation of the upper bound (the k = 9
    exception).  At k = 1 the bound's domain (log log N > 0) is empty and the
    verdict is INDETERMINATE.
    """
    return _rosser_schoenfeld_from_parts(r.k, r.lhs_log, r.loglog_N)


def _rosser_schoenfeld_from_parts(k: int, lhs_log: ErrorTracked,
                                  loglog_n: ErrorTracked) -> Verdict:
    if k < 2:
        return INDETERMINATE_VERDICT
    bound = et_add(
        et_mul(EXP_GAMMA_ET, loglog_n),
        et_div(exact(2.5), loglog_n),
    )
    return certified_compare(bound, et_exp(lhs_log))


@dataclass(frozen=True)
class Prop6Diagnostic:
    diff: ErrorTracked
    ratio: ErrorTracked


def prop6_diagnostic(r: PrimorialRecord, b: float = 1.0) -> Prop6Diagnostic:
    """|log log p_k - log log log N_k| and that difference scaled by
    (log log N_k)^(b+1) — the quantity whose boundedness the double-log
    comparison asserts.  Needs k >= 3 for both triple logs to be positive.
    """
    if b <= 0:
        raise ValueError("exponent b must be > 0")
    if r.k < 3:
        raise DiagnosticDomainError(f"double-log diagnostic undefined at k={r.k}")
    return _prop6_from_parts(r.p_k, r.loglog_N, b)


def _prop6_from_parts(p_k: int, loglog_n: ErrorTracked, b: float) -> Prop6Diagnostic:
    loglog_p = et_log(et_log(exact(p_k)))
    diff = et_abs(et_sub(loglog_p, et_log(loglog_n)))
    power = et_exp(et_scale(et_log(loglog_n), b + 1.0))
    return Prop6Diagnostic(diff, et_mul(diff, power))


# ---------------------------------------------------------------------------
# prime-power tails

def _pow_sum_errors(S: np.ndarray, count: int) -> np.ndarray:
    """Per-n error bounds for the accumulated power sums.

    Each term p^-n is built as fl(1/p)^n by repeated multiplication: the
    base carries u relative error which the power amplifies n-fold, and the
    n-2 multiplies round once each, so the term error is (2n-1)u relative;
    the summation, in any order, stays within gamma_count of the (positive)
    sum.  Terms below the subnormal floor are dropped; their total mass is
    far below 1e-300, which is added flat.
    """
    n = np.arange(2, len(S) + 2, dtype=np.float64)
    g = gamma_n(count + 64)
    return ((2.0 * n + 2.0) * U + g) * S + 1e-300


def power_series_total(S: np.ndarray, count: int) -> ErrorTracked:
    """sum_n S_n / n for n = 2..n_max, with certified error."""
    n = np.arange(2, len(S) + 2, dtype=np.float64)
    terms = S / n
    val = float(np.sum(terms))
    err = float(np.sum(_pow_sum_errors(S, count) / n))
    err += (len(S) + 2) * U * float(np.sum(np.abs(terms)))
    return ErrorTracked(val, _up(err))


def eq9_truncation_bound(n_max: int) -> float:
    """Bound on sum_{p} sum_{n > n_max} 1/(n p^n), dominated by p = 2."""
    return 1.1 * 2.0 ** (1 - n_max) / (n_max + 1)


def _tail_n_bound(p_k: int, n_max: int) -> float:
    """Bound on sum_{p > p_k} sum_{n > n_max} 1/(n p^n)."""
    return 2.0 / (n_max + 1) * constants.prime_zeta_tail_bound(n_max + 1, max(p_k, 2))


def power_tail_from_sums(S: np.ndarray, count: int, p_k: int,
                         n_max: int = POW_N_MAX) -> ErrorTracked:
    """T(p_k) = sum_{n=2..n_max} (P(n) - sum_{p<=p_k} p^-n)/n plus tail bounds.

    P(n) values come from the constants registry.  When the registry's prime
    limit for some n falls below p_k, the whole n-th term is enclosed by the
    direct Chebyshev bound at p_k instead (midpoint +- half-width), which is
    tighter than subtracting two nearly-equal sums.
    """
    errs = _pow_sum_errors(S, count)
    val = 0.0
    err = _tail_n_bound(p_k, n_max)
    for n in range(2, n_max + 1):
        pv, pe, py = constants.scan_prime_zeta(n)
        if py >= p_k:
            term = (pv - S[n - 2]) / n
            val += term
            err += (pe + errs[n - 2]) / n + U * abs(term)
        else:
            half = 0.5 * constants.prime_zeta_tail_bound(n, p_k) / n
            val += half
            err += half
    err += (n_max + 2) * U * abs(val)
    return ErrorTracked(val, _up(err))


def prime_power_tail(p_k: int, n_max: int = POW_N_MAX) -> ErrorTracked:
    """Standalone T(p_k): the double sum over p > p_k, n >= 2 of 1/(n p^n)."""
    if p_k < 2:
        raise ValueError("p_k must be a prime >= 2")
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    S = np.zeros(n_max - 1)
    count = 0
    kern = _kernels.active()
    for seg in sieve.prime_segments(p_k):
        kern.pow_block(seg, S, n_max)
        count += len(seg)
    return power_tail_from_sums(S, count, p_k, n_max)


# ---------------------------------------------------------------------------
# the scan

def _k_max_prime_bound(k: int) -> int:
    if k < 6:
        return (2, 3, 5, 7, 11)[k - 1]
    lk = math.log(k)
    return int(k * (lk + math.log(lk)) + 10)


def primorial_scan(
    p_max: int | None = None,
    k_max: int | None = None,
    policy: CheckpointPolicy = DEFAULT_POLICY,
    prop6_b: float = 1.0,
    segments: Iterable[np.ndarray] | None = None,
    threads: int = 1,
    summary: PrimorialSummary | None = None,
) -> Iterator[PrimorialRecord]:
    """Stream PrimorialRecords; all-k verdict aggregates land in ``summary``.

    Exactly one of p_max / k_max selects the range.  Records appear at the
    checkpoint policy's positions (largest k whose p_k is <= each checkpoint,
    deduplicated) plus the final k.
    """
    if (p_max is None) == (k_max is None):
        raise ValueError("give exactly one of p_max or k_max")
    if k_max is not None:
        if k_max < 1:
            raise ValueError("k_max must be >= 1")
        limit = _k_max_prime_bound(k_max)
    else:
        if p_max < 2:
            raise ValueError("p_max must be >= 2")
        limit = p_max
    cks = policy.values(limit, start=2)
    if segments is None:
        segments = sieve.prime_segments(limit, threads=threads)
    kern = _kernels.active()

    acc_theta = RunningSum(term_rel=TRANS_REL)
    acc_lhs = RunningSum(term_rel=NEGLOG1P_REL)
    acc_mert = RunningSum(term_rel=RECIP_REL)
    S = np.zeros(POW_N_MAX - 1)
    k = 0
    last_p = 0
    last_emitted = 0

    def consume(chunk: np.ndarray) -> None:
        nonlocal k, last_p
        if len(chunk) == 0:
            return
        if k == 0:
            head = chunk[:1]
            acc_theta.merge_block(*kern.log_block(head))
            acc_lhs.merge_block(*kern.neglog1p_block(head))
            acc_mert.merge_block(*kern.recip_block(head))
            kern.pow_block(head, S, POW_N_MAX)
            k = 1
            last_p = int(head[0])
            if summary is not None:
                v = _nicolas_from_parts(
                    1, acc_lhs.snapshot(), et_log(acc_theta.snapshot())
                )
                if v.outcome is Outcome.FAILS:
                    summary.nicolas_failures.append(1)
                elif v.outcome is Outcome.INDETERMINATE:
                    summary.nicolas_indeterminate.append(1)
            chunk = chunk[1:]
            if len(chunk) == 0:
                return
        res = kern.primorial_block(
            chunk, k,
            acc_theta.value, acc_theta.error(), acc_theta.abs_sum,
            acc_lhs.value, acc_lhs.error(), acc_lhs.abs_sum,
            constants.GAMMA, GAMMA_ET.err,
            constants.EXP_GAMMA, EXP_GAMMA_ET.err,
        )
        (theta_blk, lhs_blk, mert_blk, nic_fail, nic_indet,
         rs_fail, rs_indet, min_ratio, min_ratio_k) = res
        acc_theta.merge_block(*theta_blk)
        acc_lhs.merge_block(*lhs_blk)
        acc_mert.merge_block(*mert_blk)
        kern.pow_block(chunk, S, POW_N_MAX)
        k += len(chunk)
        last_p = int(chunk[-1])
        if summary is not None:
            summary.nicolas_failures.extend(nic_fail)
            summary.nicolas_indeterminate.extend(nic_indet)
            summary.rs_failures.extend(rs_fail)
            summary.rs_indeterminate.extend(rs_indet)
            if min_ratio < summary.min_nicolas_ratio:
                summary.min_nicolas_ratio = min_ratio
                summary.min_nicolas_ratio_k = min_ratio_k

    def emit() -> PrimorialRecord:
        log_n = acc_theta.snapshot()
        loglog_n = et_log(log_n)
        lhs_log = acc_lhs.snapshot()
        mert = acc_mert.snapshot()
        nic = _nicolas_from_parts(k, lhs_log, loglog_n)
        rs = _rosser_schoenfeld_from_parts(k, lhs_log, loglog_n)
        if k >= 3:
            d = _prop6_from_parts(last_p, loglog_n, prop6_b)
            diff, ratio = d.diff, d.ratio
        else:
            diff = ratio = None
        tail = power_tail_from_sums(S, k, last_p)
        tail_logn = et_mul(tail, log_n)
        series = power_series_total(S, k)
        resid = et_sub(et_sub(lhs_log, mert), series)
        resid = ErrorTracked(resid.value, _up(resid.err + eq9_truncation_bound(POW_N_MAX)))
        return PrimorialRecord(
            k, last_p, log_n, loglog_n, lhs_log, mert, nic, rs,
            diff, ratio, tail, tail_logn, resid,
        )

    ci = 0
    remaining = k_max if k_max is not None else None
    for seg in segments:
        if remaining is not None and len(seg) > remaining:
            seg = seg[:remaining]
        pos = 0
        while ci < len(cks) and (len(seg) > 0) and cks[ci] <= seg[-1]:
            cut = int(np.searchsorted(seg, cks[ci], side="right"))
            consume(seg[pos:cut])
            pos = cut
            if k > last_emitted:
                yield emit()
                last_emitted = k
            ci += 1
        consume(seg[pos:])
        if remaining is not None:
            remaining = k_max - k
            if remaining <= 0:
                break
    if k > last_emitted and k >= 1:
        yield emit()
    if summary is not None:
        summary.k_final = k
        summary.p_final = last_p
