"""Pure NumPy implementations of the hot kernels.

Each scan kernel reduces one chunk of primes and reports, along with the
block sum, a rigorous bound on the floating-point error committed inside the
block: any summation order of m terms stays within (m+1)*u*sum|terms| of the
exact sum, and vector transcendentals are charged 4u relative error per term
(libm vector routines are at worst a couple of ulps).  Cross-block
compensation and error bookkeeping live in the drivers.
"""

from __future__ import annotations

import numpy as np

U = 2.0 ** -53
_INFL = 1.0 + 16.0 * U
TRANS_REL = 4.0 * U      # one vectorized log/exp/log1p
RECIP_REL = U            # one correctly-rounded division
NEGLOG1P_REL = 8.0 * U   # 1/p followed by log1p, including argument sensitivity


# ---------------------------------------------------------------------------
# sieving

def sieve_segment(low: int, high: int, base: np.ndarray) -> np.ndarray:
    """Primes in [low, high) for odd low >= 3, given base primes to sqrt(high)."""
    if low % 2 == 0:
        low += 1
    if high <= low:
        return np.empty(0, dtype=np.int64)
    count = (high - low + 1) // 2
    mask = np.ones(count, dtype=bool)
    for p in base:
        p = int(p)
        if p == 2:
            continue
        if p * p >= high:
            break
        start = ((low + p - 1) // p) * p
        if start < p * p:
            start = p * p
        if start % 2 == 0:
            start += p
        if start < high:
            mask[(start - low) >> 1 :: p] = False
    return (low + 2 * np.flatnonzero(mask)).astype(np.int64)


def totient_omega(limit: int) -> tuple[np.ndarray, np.ndarray]:
    """phi(n) and omega(n) for 0 <= n <= limit, exact integers.

    Multiplicative sieve: walking primes in increasing order, the running
    value phi[m] = m * prod_{q | m, q < p} (1 - 1/q) is always divisible by
    the next prime factor p of m, so the integer update phi -= phi // p is
    exact.
    """
    phi = np.arange(limit + 1, dtype=np.int64)
    omega = np.zeros(limit + 1, dtype=np.uint8)
    is_prime = np.ones(limit + 1, dtype=bool)
    if limit >= 0:
        is_prime[:2] = False
    for p in range(2, int(limit ** 0.5) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    for p in np.flatnonzero(is_prime).tolist():
        phi[p::p] -= phi[p::p] // p
        omega[p::p] += 1
    return phi, omega


# ---------------------------------------------------------------------------
# block reductions: each returns (sum, abs_sum, err, count)

def _reduce(terms: np.ndarray) -> tuple[float, float, float, int]:
    m = len(terms)
    if m == 0:
        return 0.0, 0.0, 0.0, 0
    s = float(np.sum(terms))
    a = float(np.sum(np.abs(terms)))
    return s, a, (m + 1) * U * a * _INFL, m


def log_block(ps: np.ndarray) -> tuple[float, float, float, int]:
    return _reduce(np.log(ps.astype(np.float64)))


def recip_block(ps: np.ndarray) -> tuple[float, float, float, int]:
    return _reduce(1.0 / ps.astype(np.float64))


def neglog1p_block(ps: np.ndarray) -> tuple[float, float, float, int]:
    return _reduce(-np.log1p(-1.0 / ps.astype(np.float64)))


def recip_mod_block(ps: np.ndarray, q: int, a: int) -> tuple[float, float, float, int]:
    return _reduce(1.0 / ps[ps % q == a].astype(np.float64))


def pow_block(ps: np.ndarray, S: np.ndarray, n_max: int) -> None:
    """Add sum_{p in ps} p^-n to S[n-2] for n = 2..n_max (in place)."""
    with np.errstate(under="ignore"):
        rp = 1.0 / ps.astype(np.float64)
        rpow = rp * rp
        S[0] += float(np.sum(rpow))
        for n in range(3, n_max + 1):
            rpow *= rp
            s = float(np.sum(rpow))
            if s == 0.0:
                break
            S[n - 2] += s


# ---------------------------------------------------------------------------
# primorial scan: per-prime certified verdicts, aggregated per block

def primorial_block(
    ps: np.ndarray,
    k0: int,
    th_v: float, th_e: float, th_abs: float,
    lhs_v: float, lhs_e: float, lhs_abs: float,
    gamma: float, gamma_err: float,
    egamma: float, egamma_err: float,
):
    """Check the Nicolas and Rosser-Schoenfeld comparisons at every k in the
    block (global indices k0+1 .. k0+m, requires k0 >= 1 so log log N > 0).

    Returns (theta_block, lhs_block, mert_block, nic_fail, nic_indet,
    rs_fail, rs_indet, min_ratio, min_ratio_k) where the *_block tuples are
    (sum, abs_sum, err, count) and min_ratio is min(margin/margin_err) of the
    Nicolas comparison over k >= 3.
    """
    m = len(ps)
    psf = ps.astype(np.float64)
    lp = np.log(psf)
    rp = 1.0 / psf
    l1p = -np.log1p(-rp)

    cab_t = np.cumsum(lp)
    cab_l = np.cumsum(l1p)
    idx = np.arange(1.0, m + 1.0)

    # running log N_k and its certified error
    cumT = th_v + cab_t
    absT = th_abs + cab_t
    errT = (th_e + (idx + 2.0) * U * absT + TRANS_REL * cab_t) * _INFL

    loglogN = np.log(cumT)
    e_ll = (errT / (cumT - errT) + TRANS_REL * np.abs(loglogN)) * _INFL
    logll = np.log(loglogN)
    e_lll = (e_ll / (loglogN - e_ll) + TRANS_REL * np.abs(logll)) * _INFL

    # running lhs_log = log(N_k / phi(N_k))
    cumL = lhs_v + cab_l
    absL = lhs_abs + cab_l
    errL = (lhs_e + (idx + 2.0) * U * absL + NEGLOG1P_REL * cab_l) * _INFL

    # Nicolas in log scale: lhs_log vs gamma + log(log log N)
    rhs = gamma + logll
    e_rhs = (gamma_err + e_lll + U * np.abs(rhs)) * _INFL
    margin = cumL - rhs
    merr = (errL + e_rhs + U * np.abs(margin)) * _INFL

    ks = k0 + np.arange(1, m + 1)
    holds = margin > merr
    fails = margin < -merr
    nic_fail = ks[fails].tolist()
    nic_indet = ks[~holds & ~fails].tolist()

    min_ratio = np.inf
    min_ratio_k = -1
    sel = ks >= 3
    if np.any(sel):
        ratios = margin[sel] / merr[sel]
        i = int(np.argmin(ratios))
        min_ratio = float(ratios[i])
        min_ratio_k = int(ks[sel][i])

    # Rosser-Schoenfeld upper bound in ratio scale
    NoP = np.exp(cumL)
    eN = (NoP * (errL * (1.0 + errL) + TRANS_REL)) * _INFL
    t1 = egamma * loglogN
    e1 = egamma * e_ll + np.abs(loglogN) * egamma_err + egamma_err * e_ll + U * np.abs(t1)
    t2 = 2.5 / loglogN
    e2 = 2.5 * e_ll / (loglogN * (loglogN - e_ll)) + U * np.abs(t2)
    rsr = t1 + t2
    ersr = (e1 + e2 + U * np.abs(rsr)) * _INFL
    rsm = rsr - NoP
    rse = (ersr + eN + U * np.abs(rsm)) * _INFL
    rs_fail = ks[rsm < -rse].tolist()
    rs_indet = ks[np.abs(rsm) <= rse].tolist()

    theta_blk = (float(cab_t[-1]), float(cab_t[-1]), (m + 1) * U * float(cab_t[-1]) * _INFL, m)
    lhs_blk = (float(cab_l[-1]), float(cab_l[-1]), (m + 1) * U * float(cab_l[-1]) * _INFL, m)
    mert_blk = _reduce(rp)
    return (theta_blk, lhs_blk, mert_blk, nic_fail, nic_indet,
            rs_fail, rs_indet, min_ratio, min_ratio_k)
