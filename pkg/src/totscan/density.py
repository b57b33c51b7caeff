"""Distribution of n/phi(n): empirical densities, the asymptotic prediction,
and the almost-everywhere lower bound on phi(n)/n.

Counts are exact: the condition n/phi(n) >= t is evaluated by integer
cross-multiplication with t as an exact rational, so the empirical densities
are reproducible bit for bit.  The asymptotic density comes in two printed
forms that disagree with each other; both are implemented (``as_written``
and ``consistent``) and the choice is the caller's — see
:func:`weingartner_prediction`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
import numpy as np

from .constants import B1, GAMMA
from .rigor import TRANS_REL, U
from .sieve import TotientTable, totient_table

_CHUNK = 1 << 20


class PredictionFormula(Enum):
    AS_WRITTEN = "as_written"
    CONSISTENT = "consistent"


@dataclass(frozen=True)
class DensityRecord:
    t: float
    n_limit: int
    count: int
    density: float
    prediction_as_written: float
    prediction_consistent: float


def _as_fraction(t) -> Fraction:
    # float inputs are exact dyadic rationals; strings stay decimal-exact
    if isinstance(t, Fraction):
        return t
    if isinstance(t, int):
        return Fraction(t)
    if isinstance(t, str):
        return Fraction(t)
    if isinstance(t, float):
        return Fraction(t)
    raise TypeError(f"threshold of unsupported type {type(t)!r}")


def count_ratio_at_least(t, n_limit: int, table: TotientTable | None = None) -> int:
    """#{ 1 <= n <= n_limit : n/phi(n) >= t }, exact for rational t."""
    frac = _as_fraction(t)
    p, q = frac.numerator, frac.denominator
    if table is None or table.limit < n_limit:
        table = totient_table(n_limit)
    phi = table.phi
    total = 0
    # q*n and p*phi(n) must not overflow int64
    if max(p, 1) * int(phi[1 : n_limit + 1].max()) < 2 ** 62 and q * n_limit < 2 ** 62:
        for lo in range(1, n_limit + 1, _CHUNK):
            hi = min(lo + _CHUNK, n_limit + 1)
            n = np.arange(lo, hi, dtype=np.int64)
            total += int(np.count_nonzero(q * n >= p * phi[lo:hi]))
    else:
        for n in range(1, n_limit + 1):
            if q * n >= p * int(phi[n]):
                total += 1
    return total


def count_ratio_at_least_banded(
    t_value: float,
    t_err: float,
    n_limit: int,
    table: TotientTable | None = None,
) -> tuple[int, int]:
    """(certain, indeterminate) counts of n/phi(n) >= t for an uncertain t.

    For thresholds known only up to an error band (e.g. t = e^gamma *
    logloglog N built from tracked logs), n whose exact ratio lands inside
    [t - err, t + err] cannot be classified and are bucketed separately.
    """
    if t_err < 0:
        raise ValueError("t_err must be >= 0")
    certain = count_ratio_at_least(
        Fraction(t_value) + Fraction(t_err), n_limit, table
    )
    possible = count_ratio_at_least(
        Fraction(t_value) - Fraction(t_err), n_limit, table
    )
    return certain, possible - certain


def weingartner_prediction(t: float, formula: PredictionFormula | str) -> float:
    """Leading-term density prediction at threshold t.

    ``as_written`` evaluates exp(-e^(-gamma*t)) — the form as printed, which
    tends to 1 as t grows and therefore cannot decay.  ``consistent``
    evaluates exp(-e^(t*e^-gamma)), the form under which the threshold
    t = e^gamma * logloglog N reproduces the 1/log N density.  The
    (1 + O(1/t^2)) correction factor is not modelled in either.
    """
    if t <= 0:
        raise ValueError("threshold t must be > 0")
    if isinstance(formula, str):
        formula = PredictionFormula(formula)
    if formula is PredictionFormula.AS_WRITTEN:
        return math.exp(-math.exp(-GAMMA * t))
    return math.exp(-math.exp(t * math.exp(-GAMMA)))


def density_estimate(t, n_limit: int, table: TotientTable | None = None) -> DensityRecord:
    """Exact empirical density of n/phi(n) >= t for n <= n_limit."""
    if n_limit < 1:
        raise ValueError("n_limit must be >= 1")
    frac = _as_fraction(t)
    if frac < 1:
        raise ValueError("threshold t must be >= 1 (n/phi(n) >= 1 always)")
    count = count_ratio_at_least(frac, n_limit, table)
    tf = float(frac)
    return DensityRecord(
        tf, n_limit, count, count / n_limit,
        weingartner_prediction(tf, PredictionFormula.AS_WRITTEN),
        weingartner_prediction(tf, PredictionFormula.CONSISTENT),
    )


# ---------------------------------------------------------------------------
# almost-everywhere bound phi(n)/n > c0 / logloglog n

THRESHOLD_MODES = ("n_limit", "each_n")


@dataclass(frozen=True)
class Thm4Result:
    n_limit: int
    c0: float
    threshold_at: str
    count: int
    indeterminate: int
    first_exceptions: tuple[int, ...]
    first_indeterminate: tuple[int, ...]

    @property
    def fraction(self) -> float:
        return self.count / self.n_limit


def _triple_log_bounds(n: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Enclosures [lo, hi] of logloglog n for integer n >= 16, vectorized."""
    x = n.astype(np.float64)
    l1 = np.log(x)
    e1 = TRANS_REL * l1
    l2 = np.log(l1)
    e2 = (e1 / (l1 - e1) + TRANS_REL * np.abs(l2)) * (1.0 + 16 * U)
    l3 = np.log(l2)
    e3 = (e2 / (l2 - e2) + TRANS_REL * np.abs(l3)) * (1.0 + 16 * U)
    return l3 - e3, l3 + e3


def theorem4_exceptions(
    n_limit: int,
    c0: float = 0.1,
    threshold_at: str = "n_limit",
    table: TotientTable | None = None,
    max_listed: int = 32,
) -> Thm4Result:
    """Count n in [16, n_limit] with phi(n)/n <= c0 / logloglog(.).

    ``threshold_at="n_limit"`` freezes the triple log at the scan limit
    (one threshold for the whole range); ``"each_n"`` evaluates it at every
    n.  The comparison itself is exact-rational against a certified
    enclosure of the threshold; n whose ratio lands inside the enclosure are
    counted separately as indeterminate.
    """
    if n_limit < 16:
        raise ValueError("n_limit must be >= 16 (logloglog positive)")
    if c0 <= 0:
        raise ValueError("c0 must be > 0")
    if threshold_at not in THRESHOLD_MODES:
        raise ValueError(f"threshold_at must be one of {THRESHOLD_MODES}")
    if table is None or table.limit < n_limit:
        table = totient_table(n_limit)
    phi = table.phi
    count = 0
    indet = 0
    firsts: list[int] = []
    firsts_ind: list[int] = []
    pad = 1.0 + 4.0 * U
    for lo in range(16, n_limit + 1, _CHUNK):
        hi = min(lo + _CHUNK, n_limit + 1)
        n = np.arange(lo, hi, dtype=np.int64)
        nf = n.astype(np.float64)
        if threshold_at == "n_limit":
            l3lo, l3hi = _triple_log_bounds(np.array([n_limit], dtype=np.int64))
            thr_lo = (c0 / l3hi[0]) / pad
            thr_hi = (c0 / l3lo[0]) * pad
            bound_lo = thr_lo * nf / pad
            bound_hi = thr_hi * nf * pad
        else:
            l3lo, l3hi = _triple_log_bounds(n)
            bound_lo = (c0 / l3hi) * nf / (pad * pad)
            bound_hi = (c0 / l3lo) * nf * (pad * pad)
        phif = phi[lo:hi].astype(np.float64)  # phi < 2^53: exact
        certain = phif <= bound_lo
        possible = phif <= bound_hi
        amb = possible & ~certain
        count += int(np.count_nonzero(certain))
        indet += int(np.count_nonzero(amb))
        if len(firsts) < max_listed:
            firsts.extend(n[certain][: max_listed - len(firsts)].tolist())
        if len(firsts_ind) < max_listed:
            firsts_ind.extend(n[amb][: max_listed - len(firsts_ind)].tolist())
    return Thm4Result(
        n_limit, c0, threshold_at, count, indet, tuple(firsts), tuple(firsts_ind)
    )


# ---------------------------------------------------------------------------
# normal order of omega

@dataclass(frozen=True)
class OmegaStats:
    n_limit: int
    mean_omega: float
    loglog_plus_b1: float
    max_omega: int
    argmax: int


def omega_normal_order(n_limit: int, table: TotientTable | None = None) -> OmegaStats:
    """Mean of omega(n) over n <= n_limit against log log n_limit + B1."""
    if n_limit < 3:
        raise ValueError("n_limit must be >= 3")
    if table is None or table.limit < n_limit:
        table = totient_table(n_limit)
    om = table.omega[1 : n_limit + 1]
    total = int(om.sum(dtype=np.int64))
    mx = int(om.max())
    arg = 1 + int(np.argmax(om))
    return OmegaStats(
        n_limit,
        total / n_limit,
        math.log(math.log(n_limit)) + B1,
        mx,
        arg,
    )
