"""Cross-backend equivalence: exact outputs identical, float outputs within
each side's certified error, verdicts identical."""

import numpy as np
import pytest

import totscan._kernels as kernels
from totscan import mertens, primorial, sieve, theta

needs_both = pytest.mark.skipif(
    "cython" not in kernels.available_backends(),
    reason="compiled backend not built",
)


def _with_backend(name, fn):
    prev = kernels.active_name()
    kernels.set_backend(name)
    sieve.clear_caches()
    try:
        return fn()
    finally:
        kernels.set_backend(prev)
        sieve.clear_caches()


@needs_both
def test_primes_identical():
    a = _with_backend("cython", lambda: sieve.prime_array(10 ** 6))
    b = _with_backend("fallback", lambda: sieve.prime_array(10 ** 6))
    assert np.array_equal(a, b)


@needs_both
def test_primes_identical_odd_segment_sizes():
    for seg in (1024, 5000, 1 << 18):
        a = _with_backend("cython", lambda: sieve.prime_array(10 ** 5, seg))
        b = _with_backend("fallback", lambda: sieve.prime_array(10 ** 5, seg))
        assert np.array_equal(a, b)


@needs_both
def test_totient_tables_identical():
    a = _with_backend("cython", lambda: sieve.TotientTable.build(2 * 10 ** 5))
    b = _with_backend("fallback", lambda: sieve.TotientTable.build(2 * 10 ** 5))
    assert np.array_equal(a.phi, b.phi)
    assert np.array_equal(a.omega, b.omega)


@needs_both
def test_theta_records_agree_within_errors():
    a = _with_backend("cython", lambda: list(theta.theta_scan(10 ** 5)))
    b = _with_backend("fallback", lambda: list(theta.theta_scan(10 ** 5)))
    assert [r.x for r in a] == [r.x for r in b]
    for ra, rb in zip(a, b):
        assert abs(ra.theta.value - rb.theta.value) <= ra.theta.err + rb.theta.err
        assert ra.rh_band_ok.outcome == rb.rh_band_ok.outcome
        assert (ra.chebyshev_lo_ok, ra.chebyshev_hi_ok) == \
            (rb.chebyshev_lo_ok, rb.chebyshev_hi_ok)


@needs_both
def test_mertens_records_agree_within_errors():
    a = _with_backend("cython", lambda: list(mertens.mertens_scan(10 ** 5)))
    b = _with_backend("fallback", lambda: list(mertens.mertens_scan(10 ** 5)))
    for ra, rb in zip(a, b):
        assert abs(ra.sum_recip.value - rb.sum_recip.value) <= \
            ra.sum_recip.err + rb.sum_recip.err
        assert ra.within_dusart.outcome == rb.within_dusart.outcome
        assert ra.within_elementary.outcome == rb.within_elementary.outcome


@needs_both
def test_primorial_scan_agrees():
    def scan():
        s = primorial.PrimorialSummary()
        recs = list(primorial.primorial_scan(p_max=10 ** 5, summary=s))
        return recs, s

    (ra, sa) = _with_backend("cython", scan)
    (rb, sb) = _with_backend("fallback", scan)
    assert sa.rs_failures == sb.rs_failures == [9]
    assert sa.nicolas_all_hold and sb.nicolas_all_hold
    assert [r.k for r in ra] == [r.k for r in rb]
    for x, y in zip(ra, rb):
        assert abs(x.lhs_log.value - y.lhs_log.value) <= x.lhs_log.err + y.lhs_log.err
        assert abs(x.log_N.value - y.log_N.value) <= x.log_N.err + y.log_N.err
        assert abs(x.tail.value - y.tail.value) <= x.tail.err + y.tail.err
        assert x.nicolas.outcome == y.nicolas.outcome
        assert x.rosser_schoenfeld.outcome == y.rosser_schoenfeld.outcome


@needs_both
def test_pow_block_agrees():
    ps = sieve.prime_array(10 ** 4)
    S_a = np.zeros(63)
    S_b = np.zeros(63)
    kernels.set_backend("cython")
    kernels.active().pow_block(ps, S_a, 64)
    kernels.set_backend("fallback")
    kernels.active().pow_block(ps, S_b, 64)
    assert np.allclose(S_a, S_b, rtol=1e-13, atol=1e-300)


@needs_both
def test_requested_backend_env(monkeypatch):
    assert kernels.set_backend("cython").__name__.endswith("_core")
    assert kernels.set_backend("fallback").__name__.endswith("_fallback")
    with pytest.raises(ValueError):
        kernels.set_backend("fortran")
