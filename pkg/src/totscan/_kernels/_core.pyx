# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Compiled kernels: segment sieving, linear totient sieve, and per-prime
scan reductions with certified error bookkeeping.

Mirrors _fallback's interface.  Summation inside a block is Neumaier
(compensated), so the block error bound is 2u*sum|terms| instead of the
fallback's (m+1)u; transcendentals are charged 4u relative per term, same as
the fallback, so either backend's bounds are valid for its own values.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, fabs, log, log1p

cnp.import_array()

cdef double U = 2.0 ** -53
cdef double INFL = 1.0 + 16.0 * U
cdef double TRANS_REL = 4.0 * U
cdef double NEGLOG1P_REL = 8.0 * U


# ---------------------------------------------------------------------------
# sieving

def sieve_segment(long long low, long long high, cnp.int64_t[::1] base):
    """Primes in [low, high) for low >= 3, given base primes to sqrt(high)."""
    if low % 2 == 0:
        low += 1
    if high <= low:
        return np.empty(0, dtype=np.int64)
    cdef Py_ssize_t count = (high - low + 1) // 2
    mask = np.ones(count, dtype=np.uint8)
    cdef cnp.uint8_t[::1] mv = mask
    cdef Py_ssize_t i, nbase = base.shape[0]
    cdef long long p, start, idx
    for i in range(nbase):
        p = base[i]
        if p == 2:
            continue
        if p * p >= high:
            break
        start = ((low + p - 1) // p) * p
        if start < p * p:
            start = p * p
        if start % 2 == 0:
            start += p
        if start >= high:
            continue
        idx = (start - low) >> 1
        while idx < count:
            mv[idx] = 0
            idx += p
    return (low + 2 * np.flatnonzero(mask)).astype(np.int64)


def totient_omega(long long limit):
    """Linear (smallest-prime-factor) sieve for exact phi and omega."""
    phi_arr = np.zeros(limit + 1, dtype=np.int64)
    omega_arr = np.zeros(limit + 1, dtype=np.uint8)
    comp_arr = np.zeros(limit + 1, dtype=np.uint8)
    # generous pi(x) upper bound for the prime buffer
    cdef Py_ssize_t cap = 100 if limit < 100 else <Py_ssize_t> (
        1.3 * limit / log(<double> limit)) + 100
    primes_arr = np.empty(cap, dtype=np.int64)
    cdef cnp.int64_t[::1] phi = phi_arr
    cdef cnp.uint8_t[::1] omega = omega_arr
    cdef cnp.uint8_t[::1] comp = comp_arr
    cdef cnp.int64_t[::1] primes = primes_arr
    cdef Py_ssize_t nprimes = 0, j
    cdef long long i, p, ip
    if limit >= 1:
        phi[1] = 1
    for i in range(2, limit + 1):
        if not comp[i]:
            primes[nprimes] = i
            nprimes += 1
            phi[i] = i - 1
            omega[i] = 1
        for j in range(nprimes):
            p = primes[j]
            ip = i * p
            if ip > limit:
                break
            comp[ip] = 1
            if i % p == 0:
                phi[ip] = phi[i] * p
                omega[ip] = omega[i]
                break
            phi[ip] = phi[i] * (p - 1)
            omega[ip] = omega[i] + 1
    return phi_arr, omega_arr


# ---------------------------------------------------------------------------
# compensated block reductions

cdef inline void _neum(double* s, double* c, double x) nogil:
    cdef double t = s[0] + x
    if fabs(s[0]) >= fabs(x):
        c[0] += (s[0] - t) + x
    else:
        c[0] += (x - t) + s[0]
    s[0] = t


def log_block(cnp.int64_t[::1] ps):
    cdef double s = 0.0, c = 0.0, a = 0.0, t
    cdef Py_ssize_t i, m = ps.shape[0]
    for i in range(m):
        t = log(<double> ps[i])
        _neum(&s, &c, t)
        a += t
    return s + c, a, 2.0 * U * a * INFL, m


def recip_block(cnp.int64_t[::1] ps):
    cdef double s = 0.0, c = 0.0, a = 0.0, t
    cdef Py_ssize_t i, m = ps.shape[0]
    for i in range(m):
        t = 1.0 / <double> ps[i]
        _neum(&s, &c, t)
        a += t
    return s + c, a, 2.0 * U * a * INFL, m


def neglog1p_block(cnp.int64_t[::1] ps):
    cdef double s = 0.0, c = 0.0, a = 0.0, t
    cdef Py_ssize_t i, m = ps.shape[0]
    for i in range(m):
        t = -log1p(-1.0 / <double> ps[i])
        _neum(&s, &c, t)
        a += t
    return s + c, a, 2.0 * U * a * INFL, m


def recip_mod_block(cnp.int64_t[::1] ps, long long q, long long a_res):
    cdef double s = 0.0, c = 0.0, a = 0.0, t
    cdef Py_ssize_t i, m = ps.shape[0], n = 0
    for i in range(m):
        if ps[i] % q == a_res:
            t = 1.0 / <double> ps[i]
            _neum(&s, &c, t)
            a += t
            n += 1
    return s + c, a, 2.0 * U * a * INFL, n


def pow_block(cnp.int64_t[::1] ps, double[::1] S, int n_max):
    """Add sum p^-n to S[n-2] for n = 2..n_max (in place)."""
    cdef double rp, term
    cdef Py_ssize_t i, m = ps.shape[0]
    cdef int n
    for i in range(m):
        rp = 1.0 / <double> ps[i]
        term = rp * rp
        S[0] += term
        for n in range(3, n_max + 1):
            term *= rp
            if term == 0.0:
                break
            S[n - 2] += term


# ---------------------------------------------------------------------------
# primorial scan block

def primorial_block(
    cnp.int64_t[::1] ps,
    long long k0,
    double th_v, double th_e, double th_abs,
    double lhs_v, double lhs_e, double lhs_abs,
    double gamma, double gamma_err,
    double egamma, double egamma_err,
):
    """Certified Nicolas / upper-bound verdicts at every k in the block.

    Same contract as the fallback version; the per-k error model here uses
    the compensated block residual (6u * block abs sum) plus the carried-in
    error, which is what keeps errors flat across 10^8-scale scans.
    """
    cdef Py_ssize_t i, m = ps.shape[0]
    cdef double ts = 0.0, tc = 0.0, tabs = 0.0
    cdef double ls = 0.0, lc = 0.0, labs = 0.0
    cdef double ms = 0.0, mc = 0.0, mabs = 0.0
    cdef double p, t, rp, lt
    cdef double cumT, errT, cumL, errL, loglogN, e_ll, logll, e_lll
    cdef double rhs, e_rhs, margin, merr, ratio
    cdef double NoP, eN, t1, e1, t2, e2, rsr, ersr, rsm, rse
    cdef double min_ratio = np.inf
    cdef long long k, min_ratio_k = -1
    nic_fail = []
    nic_indet = []
    rs_fail = []
    rs_indet = []
    for i in range(m):
        k = k0 + i + 1
        p = <double> ps[i]
        t = log(p)
        _neum(&ts, &tc, t)
        tabs += t
        rp = 1.0 / p
        _neum(&ms, &mc, rp)
        mabs += rp
        lt = -log1p(-rp)
        _neum(&ls, &lc, lt)
        labs += lt

        cumT = th_v + (ts + tc)
        errT = (th_e + (6.0 * U + TRANS_REL) * tabs + 2.0 * U * fabs(cumT)) * INFL
        cumL = lhs_v + (ls + lc)
        errL = (lhs_e + (6.0 * U + NEGLOG1P_REL) * labs + 2.0 * U * fabs(cumL)) * INFL

        loglogN = log(cumT)
        e_ll = (errT / (cumT - errT) + TRANS_REL * fabs(loglogN)) * INFL
        logll = log(loglogN)
        e_lll = (e_ll / (loglogN - e_ll) + TRANS_REL * fabs(logll)) * INFL

        rhs = gamma + logll
        e_rhs = (gamma_err + e_lll + U * fabs(rhs)) * INFL
        margin = cumL - rhs
        merr = (errL + e_rhs + U * fabs(margin)) * INFL
        if margin > merr:
            if k >= 3:
                ratio = margin / merr
                if ratio < min_ratio:
                    min_ratio = ratio
                    min_ratio_k = k
        elif margin < -merr:
            nic_fail.append(k)
        else:
            nic_indet.append(k)
            if k >= 3 and 0.0 < min_ratio:
                min_ratio = 0.0
                min_ratio_k = k

        NoP = exp(cumL)
        eN = (NoP * (errL * (1.0 + errL) + TRANS_REL)) * INFL
        t1 = egamma * loglogN
        e1 = egamma * e_ll + fabs(loglogN) * egamma_err + egamma_err * e_ll + U * fabs(t1)
        t2 = 2.5 / loglogN
        e2 = 2.5 * e_ll / (loglogN * (loglogN - e_ll)) + U * fabs(t2)
        rsr = t1 + t2
        ersr = (e1 + e2 + U * fabs(rsr)) * INFL
        rsm = rsr - NoP
        rse = (ersr + eN + U * fabs(rsm)) * INFL
        if rsm < -rse:
            rs_fail.append(k)
        elif rsm <= rse:
            rs_indet.append(k)

    theta_blk = (ts + tc, tabs, 2.0 * U * tabs * INFL, m)
    lhs_blk = (ls + lc, labs, 2.0 * U * labs * INFL, m)
    mert_blk = (ms + mc, mabs, 2.0 * U * mabs * INFL, m)
    return (theta_blk, lhs_blk, mert_blk, nic_fail, nic_indet,
            rs_fail, rs_indet, min_ratio, min_ratio_k)
