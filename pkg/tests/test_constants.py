"""Constants module: gamma, B1 reconstruction, prime zeta with tail bounds.

mpmath's primezeta/zeta are the independent oracles; the implementation path
never uses them (it sums primes directly).
"""

import mpmath as mp
import pytest

from totscan import constants
from totscan.constants import (
    compute_B1,
    euler_gamma,
    exp_gamma,
    mertens_b1,
    n_tail_bound,
    prime_zeta,
    prime_zeta_tail_bound,
)

mp.mp.dps = 60


def test_gamma_leading_digits():
    g = euler_gamma()
    assert g.digits.startswith("0.5772156649")
    assert abs(g.mpf - mp.euler) < mp.mpf(10) ** -45


def test_gamma_independent_series_to_20_digits():
    # gamma = sum (-1)^(k+1) x^k/(k*k!) - log x - E1(x), E1(60) < 1.5e-28
    x = mp.mpf(60)
    s = mp.nsum(lambda k: (-1) ** (k + 1) * x ** k / (k * mp.factorial(k)),
                [1, 400])
    approx = s - mp.log(x)
    assert abs(approx - euler_gamma().mpf) < mp.mpf(10) ** -20


def test_exp_gamma_oracle():
    e = exp_gamma()
    assert e.digits.startswith("1.7810724")
    assert abs(e.mpf - mp.exp(mp.euler)) < mp.mpf(10) ** -45


def test_b1_quoted_against_zeta_product_oracle():
    # B1 = gamma - sum_{n>=2} P(n)/n with mpmath's Moebius-zeta primezeta
    oracle = mp.euler - mp.nsum(lambda n: mp.primezeta(n) / n, [2, mp.inf])
    assert abs(mertens_b1().mpf - oracle) < mp.mpf(10) ** -40


def test_prime_zeta_single_term():
    pz = prime_zeta(2, 2)
    assert pz.value == 0.25
    assert pz.tail_bound == prime_zeta_tail_bound(2, 2)
    # the tail bound must cover everything beyond p = 2
    assert float(mp.primezeta(2)) - 0.25 <= pz.tail_bound


def test_prime_zeta_against_primezeta_oracle():
    pz = prime_zeta(2, 10 ** 5)
    truth = mp.primezeta(2)
    diff = float(truth - pz.mpf)
    assert 0 < diff <= pz.tail_bound


def test_prime_zeta_two_limit_consistency():
    a = prime_zeta(2, 10 ** 4)
    b = prime_zeta(2, 10 ** 5)
    assert abs(float(a.mpf - b.mpf)) <= a.tail_bound + b.tail_bound
    assert b.tail_bound < a.tail_bound


def test_prime_zeta_large_s_dominated_by_first_term():
    pz = prime_zeta(40, 10 ** 4)
    assert pz.value - 2.0 ** -40 < 2 * 3.0 ** -40
    assert pz.value > 2.0 ** -40


def test_prime_zeta_decreasing_in_s():
    vals = [prime_zeta(s, 10 ** 4).value for s in range(2, 8)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_prime_zeta_rejects_divergent_s():
    with pytest.raises(ValueError):
        prime_zeta(1, 100)


def test_compute_b1_small_limit_four_decimals():
    b = compute_B1(1000, 64)
    assert abs(b.value - mertens_b1().value) < 1e-4
    # reported tail bound covers the actual deviation from the true value
    assert abs(float(b.mpf - mertens_b1().mpf)) <= b.tail_bound


def test_compute_b1_monotone_refinement():
    small = compute_B1(1000, 64)
    big = compute_B1(10 ** 4, 64)
    assert abs(float(big.mpf - small.mpf)) <= small.tail_bound + big.tail_bound
    assert big.tail_bound < small.tail_bound


def test_constant_identity_gamma_minus_b1():
    # gamma - B1 = sum_{n=2..64} P(n)/n within the combined tails
    with mp.workdps(50):
        total = mp.mpf(0)
        tails = n_tail_bound(64)
        for n in range(2, 65):
            pz = prime_zeta(n, constants._adaptive_limit(n, 10 ** 5, 1e-13 / n))
            total += pz.mpf / n
            tails += pz.tail_bound / n
        lhs = mp.euler - mertens_b1().mpf
        assert abs(float(lhs - total)) <= tails


def test_n_tail_below_1e20():
    assert n_tail_bound(64) < 1e-20


def test_scan_prime_zeta_cache_shape():
    v, e, y = constants.scan_prime_zeta(2)
    assert 0.4522 < v < 0.4523
    assert e > 0 and y >= 1000
    v3, e3, _ = constants.scan_prime_zeta(3)
    assert v3 < v
