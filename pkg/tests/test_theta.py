"""Theta scan records against exact log-product oracles."""

import math

import mpmath as mp
import pytest

from totscan import sieve, theta
from totscan.checkpoints import CheckpointPolicy
from totscan.rigor import Outcome

mp.mp.dps = 50


def _records(limit, **kw):
    return list(theta.theta_scan(limit, **kw))


def oracle_theta(x: int) -> mp.mpf:
    return mp.fsum(mp.log(p) for p in sieve.primes_up_to(x))


def test_theta_at_10(backend):
    rec = _records(10)[-1]
    assert rec.x == 10
    oracle = oracle_theta(10)  # log 2 + log 3 + log 5 + log 7
    assert abs(float(oracle) - rec.theta.value) <= rec.theta.err
    assert abs(rec.theta.value - 5.34710753071747) < 1e-12


def test_theta_at_100(backend):
    rec = _records(100)[-1]
    oracle = oracle_theta(100)
    assert abs(float(oracle) - rec.theta.value) <= rec.theta.err
    # 25-term oracle: log of the exact primorial 2305567963945518424753102147331756070
    assert abs(rec.theta.value - 83.7283903990639) < 1e-10
    assert rec.chebyshev_lo_ok and rec.chebyshev_hi_ok  # 80 < 83.73 < 120


def test_theta_at_2(backend):
    rec = _records(2)[0]
    assert rec.x == 2
    assert abs(rec.theta.value - math.log(2)) <= rec.theta.err + 1e-16
    assert rec.e_abs.value > 0
    assert abs(rec.e_abs.value - (2 - math.log(2))) < 1e-15


def test_exp_consistency_exact_product(backend):
    # theta(x) = log of the exact integer product of primes <= x
    recs = _records(100)
    for rec in recs:
        prod = 1
        for p in sieve.primes_up_to(rec.x):
            prod *= p
        assert abs(float(mp.log(prod)) - rec.theta.value) <= rec.theta.err


def test_rh_band_value_oracle():
    rec = _records(1000)[-1]
    want = math.sqrt(1000) * math.log(1000) ** 2 / (8 * math.pi)
    assert rec.rh_bound == pytest.approx(want, rel=1e-12)


def test_rh_band_fails_honestly_at_tiny_x(backend):
    # |2 - log 2| = 1.31 far exceeds the band 0.027: a certified violation
    rec = _records(2)[0]
    assert rec.rh_band_ok.outcome is Outcome.FAILS


def test_rh_band_holds_from_599(backend):
    for rec in _records(10 ** 6):
        if rec.x >= 599:
            assert rec.rh_band_ok.outcome is not Outcome.FAILS, rec.x


def test_chebyshev_flags_from_100(backend):
    for rec in _records(10 ** 6):
        if rec.x >= 100:
            assert rec.chebyshev_lo_ok and rec.chebyshev_hi_ok, rec.x


def test_theta_nondecreasing(backend):
    vals = [r.theta.value for r in _records(10 ** 5)]
    assert all(a <= b for a, b in zip(vals, vals[1:]))


def test_custom_chebyshev_constants(backend):
    # a = 0.999 is too tight somewhere above 100
    recs = _records(10 ** 4, a=0.999, b=1.2)
    assert any(not r.chebyshev_lo_ok for r in recs if r.x >= 100)


def test_wirsing_ratio_reported():
    rec = _records(1000)[-1]
    want = abs(rec.e_abs.value) * math.log(1000) ** 2 / 1000
    assert rec.wirsing_ratio(2.0) == pytest.approx(want, rel=1e-12)


def test_dense_policy_emits_per_prime(backend):
    recs = _records(50, policy=CheckpointPolicy(kind="dense"))
    xs = [r.x for r in recs]
    assert xs == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 50]


def test_scan_rejects_tiny_limit():
    with pytest.raises(ValueError):
        _records(1)
