"""Error-tracked floating-point arithmetic and certified comparisons.

Every scan in this package reduces millions of floating-point terms and then
asks whether one quantity exceeds another.  A plain float comparison cannot
distinguish "greater" from "greater by less than the rounding noise", so all
comparisons here go through :class:`ErrorTracked` values: a double paired
with a rigorous absolute error bound.  The guarantee maintained throughout is

    true quantity  in  [value - err, value + err]

under the standard model of IEEE-754 binary64 round-to-nearest arithmetic
(unit roundoff ``u = 2**-53``) and libm transcendentals accurate to <= 1 ulp.
Bounds are forward a-priori estimates, deliberately inflated by a few ulps so
that evaluating the bound itself in floating point cannot undercut it.  No
rounding-mode control is used.

A comparison returns a three-valued :class:`Verdict`: ``HOLDS`` / ``FAILS``
only when the sign of the margin is certain, ``INDETERMINATE`` otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

# Unit roundoff of binary64 (round to nearest).
U = 2.0 ** -53

# Multiplying a nonnegative bound by _INFLATE absorbs the handful of
# roundings committed while evaluating the bound formula itself.
_INFLATE = 1.0 + 16.0 * U

# Relative error allowance for one libm call (log, log1p, exp, sqrt are
# correctly rounded to <= 1 ulp on every platform we target; 2u is safe).
LIBM_REL = 2.0 * U

# Per-term relative generation errors charged by the scan kernels: vector
# math libraries are allowed a couple of ulps, so these are set generously.
TRANS_REL = 4.0 * U       # one vectorized/compiled log or exp
RECIP_REL = U             # one correctly-rounded division
NEGLOG1P_REL = 8.0 * U    # 1/p then log1p, including argument sensitivity


class RangeExhaustedError(ArithmeticError):
    """An operation left the finite range of the working format."""


class LogDomainError(ValueError):
    """The interval [value - err, value + err] touches the log/sqrt domain edge."""


def _up(x: float) -> float:
    """Round a nonnegative bound upward by a couple of ulps."""
    return x * _INFLATE


class Outcome(Enum):
    HOLDS = "Holds"
    FAILS = "Fails"
    INDETERMINATE = "Indeterminate"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, slots=True)
class ErrorTracked:
    """A float together with a rigorous absolute error bound.

    ``err`` is always >= 0 and finite whenever ``value`` is finite.
    """

    value: float
    err: float = 0.0

    def __post_init__(self):
        if self.err < 0.0 or (math.isnan(self.err)):
            raise ValueError(f"error bound must be >= 0, got {self.err}")
        if math.isfinite(self.value) and not math.isfinite(self.err):
            raise ValueError("error bound must be finite for a finite value")

    @property
    def lo(self) -> float:
        return self.value - self.err

    @property
    def hi(self) -> float:
        return self.value + self.err

    def __str__(self) -> str:
        return f"{self.value!r} ± {self.err:.3g}"


@dataclass(frozen=True, slots=True)
class Verdict:
    """Outcome of a certified comparison, with the signed margin behind it.

    Invariants: HOLDS implies margin > margin_err, FAILS implies
    margin < -margin_err, INDETERMINATE implies |margin| <= margin_err.
    """

    outcome: Outcome
    margin: float
    margin_err: float

    def __bool__(self) -> bool:
        return self.outcome is Outcome.HOLDS

    def __str__(self) -> str:
        return f"{self.outcome} (margin {self.margin:.6g} ± {self.margin_err:.3g})"


# Undefined comparisons at domain edges are reported, never invented.
INDETERMINATE_VERDICT = Verdict(Outcome.INDETERMINATE, 0.0, math.inf)


def exact(x: float) -> ErrorTracked:
    """Wrap an exactly-representable value with zero error."""
    return ErrorTracked(float(x), 0.0)


def _check_finite(v: float) -> None:
    if not math.isfinite(v):
        raise RangeExhaustedError(f"value left the finite range: {v!r}")


def et_add(a: ErrorTracked, b: ErrorTracked) -> ErrorTracked:
    """Sum with error bound a.err + b.err + u*|result|."""
    v = a.value + b.value
    _check_finite(v)
    return ErrorTracked(v, _up(a.err + b.err + U * abs(v)))


def et_sub(a: ErrorTracked, b: ErrorTracked) -> ErrorTracked:
    v = a.value - b.value
    _check_finite(v)
    return ErrorTracked(v, _up(a.err + b.err + U * abs(v)))


def et_neg(a: ErrorTracked) -> ErrorTracked:
    return ErrorTracked(-a.value, a.err)


def et_abs(a: ErrorTracked) -> ErrorTracked:
    return ErrorTracked(abs(a.value), a.err)


def et_mul(a: ErrorTracked, b: ErrorTracked) -> ErrorTracked:
    v = a.value * b.value
    _check_finite(v)
    # |a||b.err| + |b||a.err| + err*err cross term + one rounding.
    e = abs(a.value) * b.err + abs(b.value) * a.err + a.err * b.err + U * abs(v)
    return ErrorTracked(v, _up(e))


def et_div(a: ErrorTracked, b: ErrorTracked) -> ErrorTracked:
    if abs(b.value) <= b.err:
        raise ZeroDivisionError("divisor interval contains zero")
    v = a.value / b.value
    _check_finite(v)
    blo = abs(b.value) - b.err
    e = (a.err + abs(v) * b.err) / blo + U * abs(v)
    return ErrorTracked(v, _up(e))


def et_scale(a: ErrorTracked, c: float) -> ErrorTracked:
    """Multiply by an exactly-representable constant."""
    v = a.value * c
    _check_finite(v)
    return ErrorTracked(v, _up(abs(c) * a.err + U * abs(v)))


def et_log(a: ErrorTracked) -> ErrorTracked:
    """Natural log; requires the whole interval to stay positive.

    Error bound: a.err / (a.value - a.err) + 2u*|result| (mean value theorem
    with the worst-case abscissa, plus the libm rounding).
    """
    lo = a.value - a.err
    if not lo > 0.0:
        raise LogDomainError(
            f"log not certifiable: interval [{lo!r}, {a.hi!r}] touches 0"
        )
    v = math.log(a.value)
    e = a.err / lo + LIBM_REL * abs(v)
    return ErrorTracked(v, _up(e))


def et_exp(a: ErrorTracked) -> ErrorTracked:
    v = math.exp(a.value)
    _check_finite(v)
    # |exp(x±e) - exp(x)| <= exp(x)*(e^e - 1) <= exp(x)*e*(1+e) for e < 1/2.
    if a.err >= 0.5:
        e = v * math.expm1(a.err)
    else:
        e = v * a.err * (1.0 + a.err)
    return ErrorTracked(v, _up(e + LIBM_REL * v))


def et_sqrt(a: ErrorTracked) -> ErrorTracked:
    lo = a.value - a.err
    if not lo > 0.0:
        raise LogDomainError(
            f"sqrt not certifiable: interval [{lo!r}, {a.hi!r}] touches 0"
        )
    v = math.sqrt(a.value)
    e = a.err / (2.0 * math.sqrt(lo)) + U * v
    return ErrorTracked(v, _up(e))


def gamma_n(n: int) -> float:
    """Classical gamma_n = n*u / (1 - n*u), valid for n*u < 1."""
    t = n * U
    return t / (1.0 - t)


def neumaier_error(abs_sum: float, count: int) -> float:
    """Rigorous bound for a Neumaier (compensated) sum of ``count`` terms.

    The compensated result r of summing x_1..x_n satisfies
    |r - sum| <= u*|sum| + gamma_{n-1}^2 * sum|x_i|, hence the bound below
    with sum|x_i| itself known only up to a gamma_n factor.
    """
    if count <= 1:
        return 0.0
    g = gamma_n(count)
    a_hi = abs_sum * (1.0 + 2.0 * g)
    return _up((U + g * g) * a_hi)


class RunningSum:
    """Streaming Neumaier accumulator with a certified error bound.

    ``term_rel`` charges a per-term relative generation error (e.g. 2u for a
    libm log) on top of the summation error; pass 0 for exact terms.
    """

    __slots__ = ("s", "c", "abs_sum", "count", "term_rel", "extra_err", "blocks")

    def __init__(self, term_rel: float = 0.0):
        self.s = 0.0
        self.c = 0.0
        self.abs_sum = 0.0
        self.count = 0
        self.term_rel = term_rel
        self.extra_err = 0.0
        self.blocks = 0

    def add(self, x: float) -> None:
        s = self.s
        t = s + x
        if abs(s) >= abs(x):
            self.c += (s - t) + x
        else:
            self.c += (x - t) + s
        self.s = t
        self.abs_sum += abs(x)
        self.count += 1

    def merge_block(self, block_sum: float, block_abs: float, block_err: float,
                    block_count: int) -> None:
        """Fold in a pre-reduced block (used by the kernel backends)."""
        if block_count == 0:
            return
        self.add(block_sum)
        self.abs_sum += block_abs - abs(block_sum)
        self.extra_err += block_err
        self.count += block_count - 1
        self.blocks += 1

    @property
    def value(self) -> float:
        return self.s + self.c

    def error(self) -> float:
        e = neumaier_error(self.abs_sum, self.count)
        gen = self.term_rel * self.abs_sum * (1.0 + gamma_n(self.count + 1))
        # extra_err was itself accumulated in floating point, one add per block
        extra = self.extra_err * (1.0 + 2.0 * gamma_n(self.blocks + 1))
        return _up(e + gen + extra)

    def snapshot(self) -> ErrorTracked:
        v = self.value
        _check_finite(v)
        return ErrorTracked(v, self.error())


def compensated_sum(terms: Iterable[float]) -> ErrorTracked:
    """Compensated (Neumaier) sum of exactly-given terms with certified error.

    Empty input gives 0 ± 0 and a single term is exact; otherwise the bound
    is u*sum|terms| plus a u^2-order term.
    """
    acc = RunningSum()
    for x in terms:
        if not math.isfinite(x):
            raise RangeExhaustedError(f"non-finite term {x!r}")
        acc.add(x)
    return acc.snapshot()


def certified_compare(lhs: ErrorTracked, rhs: ErrorTracked) -> Verdict:
    """Compare two error-tracked values; HOLDS means lhs > rhs certainly."""
    margin = lhs.value - rhs.value
    margin_err = _up(lhs.err + rhs.err + U * abs(margin))
    if margin > margin_err:
        outcome = Outcome.HOLDS
    elif margin < -margin_err:
        outcome = Outcome.FAILS
    else:
        outcome = Outcome.INDETERMINATE
    return Verdict(outcome, margin, margin_err)
