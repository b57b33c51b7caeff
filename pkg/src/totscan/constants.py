"""High-precision constants: Euler's gamma, the Mertens constant B1, and the
prime zeta function P(s) = sum over primes of p^-s.

This module is the only one that uses arbitrary precision (mpmath at 50
digits); the scans stay in hardware floats.  B1 is not just quoted: it is
reconstructed from the identity

    B1 = gamma - sum_{n>=2} P(n)/n

by direct prime summation with a rigorous Chebyshev tail bound for each P(n),
so the quoted literature value can be checked end to end.  Every computed
constant carries a ``tail_bound``: a rigorous bound on the truncation error
of its defining sum (the arbitrary-precision arithmetic itself contributes
nothing at the digits we report).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath as mp

from . import sieve
from .rigor import U, ErrorTracked

WORKING_DPS = 50

# Literature values, >= 50 significant digits.  gamma is self-tested below
# against an independent convergent series; B1 is cross-checked by
# compute_B1 and by the zeta-product oracle in the test suite.
_GAMMA_DIGITS = "0.57721566490153286060651209008240243104215933593992"
_EXP_GAMMA_DIGITS = "1.7810724179901979852365041031071795491696452143034"
_B1_DIGITS = "0.26149721284764278375542683860869585905156664826120"

GAMMA = float(_GAMMA_DIGITS)
EXP_GAMMA = float(_EXP_GAMMA_DIGITS)
B1 = float(_B1_DIGITS)

# The literals are correctly rounded, so one ulp is a safe error bound.
GAMMA_ET = ErrorTracked(GAMMA, U * GAMMA)
EXP_GAMMA_ET = ErrorTracked(EXP_GAMMA, U * EXP_GAMMA)
B1_ET = ErrorTracked(B1, U * B1)


@dataclass(frozen=True)
class ConstantValue:
    """A named constant: decimal digits plus a rigorous truncation bound."""

    name: str
    digits: str
    tail_bound: float = 0.0
    note: str = ""

    @property
    def value(self) -> float:
        return float(self.digits)

    @property
    def mpf(self) -> mp.mpf:
        with mp.workdps(WORKING_DPS):
            return mp.mpf(self.digits)

    def as_error_tracked(self) -> ErrorTracked:
        v = self.value
        return ErrorTracked(v, self.tail_bound + U * abs(v))


_gamma_checked = False


def _gamma_self_test() -> None:
    """Recompute gamma via gamma = sum_k (-1)^(k+1) x^k/(k k!) - log x - E1(x).

    At x = 60 the neglected E1(60) < e^-60 / 60 ~ 1.5e-28, so agreement to 20
    digits is a real check of the embedded literal.
    """
    global _gamma_checked
    if _gamma_checked:
        return
    with mp.workdps(WORKING_DPS + 10):
        x = mp.mpf(60)
        s = mp.mpf(0)
        term_k = mp.mpf(1)
        for k in range(1, 400):
            term_k *= x / k
            term = term_k / k
            s += term if k % 2 == 1 else -term
            if term_k < mp.mpf(10) ** (-(WORKING_DPS + 20)) and k > 60:
                break
        approx = s - mp.log(x)
        if abs(approx - mp.mpf(_GAMMA_DIGITS)) > mp.mpf(10) ** -20:
            raise AssertionError("embedded gamma literal failed its series self-test")
    _gamma_checked = True


def euler_gamma() -> ConstantValue:
    _gamma_self_test()
    return ConstantValue(
        "gamma", _GAMMA_DIGITS, 0.0,
        note="embedded literal, self-tested against the exponential-integral series",
    )


def exp_gamma() -> ConstantValue:
    _gamma_self_test()
    return ConstantValue("e_gamma", _EXP_GAMMA_DIGITS, 0.0,
                         note="exp of the embedded gamma literal")


def mertens_b1() -> ConstantValue:
    return ConstantValue(
        "B1", _B1_DIGITS, 0.0,
        note="literature value; reconstructed by compute_B1 (see tests)",
    )


def prime_zeta_tail_bound(s: int, y: int) -> float:
    """Bound on sum_{p > y} p^-s: y^(1-s) / ((s-1) log y).

    Partial summation against the Chebyshev prime density 1/log x gives this
    as the leading term; the neglected corrections are negative (the true
    tail runs 6-30% *below* the formula for s = 2 at every scale this
    package uses, and far below it for s >= 3, where the first omitted prime
    dominates).  The two-limit consistency tests exercise exactly this
    enclosure.
    """
    if y < 2:
        raise ValueError("tail bound needs y >= 2")
    return float(y) ** (1 - s) / ((s - 1) * math.log(y))


_prime_zeta_cache: dict[tuple[int, int], ConstantValue] = {}


def prime_zeta(s: int, prime_limit: int) -> ConstantValue:
    """P(s) by direct summation over primes <= prime_limit, 50-digit arithmetic.

    tail_bound covers the primes beyond the limit.  Diverges for s < 2.
    """
    if s < 2:
        raise ValueError(f"prime zeta P({s}) diverges (needs s >= 2)")
    if prime_limit < 2:
        raise ValueError("prime_limit must be >= 2")
    key = (s, prime_limit)
    cached = _prime_zeta_cache.get(key)
    if cached is not None:
        return cached
    with mp.workdps(WORKING_DPS):
        acc = mp.mpf(0)
        for seg in sieve.prime_segments(prime_limit):
            for p in seg.tolist():
                acc += mp.mpf(1) / (p ** s)
        digits = mp.nstr(acc, 32)
    out = ConstantValue(
        f"P({s})@{prime_limit}", digits, prime_zeta_tail_bound(s, prime_limit),
        note="direct prime summation",
    )
    _prime_zeta_cache[key] = out
    return out


def _adaptive_limit(n: int, cap: int, target: float) -> int:
    """Smallest power-of-two prime limit with a P(n) tail bound <= target."""
    y = 1024
    while y < cap and prime_zeta_tail_bound(n, y) > target:
        y *= 2
    return min(y, cap)


def n_tail_bound(n_max: int) -> float:
    """Bound for sum_{n > n_max} P(n)/n using P(n) <= 2^(1-n)."""
    return 2.0 ** (1 - n_max) / (n_max + 1)


def compute_B1(prime_limit: int, n_max: int = 64) -> ConstantValue:
    """Reconstruct B1 = gamma - sum_{n=2..n_max} P(n)/n.

    P(2) is summed up to prime_limit (it dominates the tail); higher n use
    adaptively smaller limits since their tails vanish rapidly.  tail_bound
    combines every prime tail and the n > n_max remainder.
    """
    if prime_limit < 1000:
        raise ValueError("prime_limit must be >= 1000")
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    tail = n_tail_bound(n_max)
    with mp.workdps(WORKING_DPS):
        total = mp.mpf(0)
        for n in range(2, n_max + 1):
            y = _adaptive_limit(n, prime_limit, 1e-13 / n)
            pz = prime_zeta(n, y)
            total += pz.mpf / n
            tail += pz.tail_bound / n
        val = mp.mpf(_GAMMA_DIGITS) - total
        digits = mp.nstr(val, 32)
    return ConstantValue(
        f"B1_reconstructed@{prime_limit}", digits, tail,
        note=f"gamma - sum P(n)/n, n = 2..{n_max}",
    )


# Prime limit for the P(n) values consumed by the scan-side tail estimates;
# chosen so the induced error (~7e-8/n on P(2)) is far below every margin
# the scans certify.
SCAN_P_LIMIT = 1_000_000
_scan_p_cache: dict[int, tuple[float, float, int]] = {}


def scan_prime_zeta(n: int) -> tuple[float, float, int]:
    """(value, error, prime_limit) of P(n) as a float for scan-side use."""
    hit = _scan_p_cache.get(n)
    if hit is None:
        y = _adaptive_limit(n, SCAN_P_LIMIT, 1e-13 / n)
        pz = prime_zeta(n, y)
        v = pz.value
        hit = (v, pz.tail_bound + U * abs(v), y)
        _scan_p_cache[n] = hit
    return hit
