"""Sieve and totient table against independent oracles.

The oracles here are deliberately different code paths: a one-shot boolean
sieve for primes, gcd-counting for phi, trial division for omega, and
Miller-Rabin for primality.
"""

import math

import numpy as np
import pytest

from totscan import sieve
from totscan.sieve import ConfigurationError, SieveConfig, TotientTable


def oracle_simple_sieve(limit: int) -> np.ndarray:
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, int(limit ** 0.5) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return np.flatnonzero(mask).astype(np.int64)


def miller_rabin(n: int) -> bool:
    """Deterministic for n < 3.3e24 with these bases."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def test_small_streams(backend):
    assert list(sieve.primes_up_to(10)) == [2, 3, 5, 7]
    assert list(sieve.primes_up_to(2)) == [2]
    assert list(sieve.primes_up_to(1)) == []
    assert list(sieve.primes_up_to(3)) == [2, 3]


def test_stream_is_restartable():
    cfg = SieveConfig(1000)
    assert list(sieve.primes_up_to(cfg)) == list(sieve.primes_up_to(cfg))


def test_against_oracle_sieve(backend):
    got = sieve.prime_array(10 ** 6)
    want = oracle_simple_sieve(10 ** 6)
    assert len(got) == 78498
    assert np.array_equal(got, want)


def test_strictly_increasing_and_prime(backend):
    ps = sieve.prime_array(2 * 10 ** 5)
    assert np.all(np.diff(ps) > 0)
    assert all(miller_rabin(int(p)) for p in ps)


def test_segment_size_invariance(backend):
    a = sieve.prime_array(10 ** 5, segment_size=4096)
    b = sieve.prime_array(10 ** 5)
    assert np.array_equal(a, b)


def test_threaded_production_identical(backend):
    a = np.concatenate(list(sieve.prime_segments(10 ** 6, threads=4)))
    b = sieve.prime_array(10 ** 6)
    assert np.array_equal(a, b)


def test_config_validation():
    with pytest.raises(ConfigurationError):
        SieveConfig(10 ** 9 + 1)
    with pytest.raises(ConfigurationError):
        SieveConfig(100, segment_size=512)
    with pytest.raises(ConfigurationError):
        TotientTable.build(10 ** 8 + 1)


def test_totient_small_values(backend):
    t = sieve.totient_table(3000)
    assert t.phi[1] == 1
    assert t.phi[2] == 1
    assert t.phi[12] == 4
    assert t.phi[2310] == 480  # 2310 = 2*3*5*7*11 -> 1*2*4*6*10
    assert t.omega[1] == 0
    assert t.omega[2310] == 5


def test_totient_brute_force_gcd_oracle(backend):
    # phi(n) = #{1 <= m <= n : gcd(m, n) = 1}; vectorized gcd grid
    limit = 10 ** 4
    t = sieve.totient_table(limit)
    n = np.arange(1, limit + 1, dtype=np.int64)
    counts = np.zeros(limit, dtype=np.int64)
    chunk = 512
    for lo in range(1, limit + 1, chunk):
        hi = min(lo + chunk, limit + 1)
        rows = np.arange(lo, hi, dtype=np.int64)
        g = np.gcd.outer(rows, n[: hi - 1])
        for i, r in enumerate(rows):
            counts[r - 1] = np.count_nonzero(g[i, : r] == 1)
    counts[0] = 1  # phi(1) = 1 by convention
    assert np.array_equal(counts, t.phi[1 : limit + 1])


def test_divisor_sum_identity(backend):
    # sum_{d|n} phi(d) = n for all n <= 10^4
    limit = 10 ** 4
    t = sieve.totient_table(limit)
    acc = np.zeros(limit + 1, dtype=np.int64)
    for d in range(1, limit + 1):
        acc[d::d] += t.phi[d]
    assert np.array_equal(acc[1:], np.arange(1, limit + 1, dtype=np.int64))


def test_multiplicativity_spot_checks(backend):
    t = sieve.totient_table(10 ** 4)
    for m, n in [(3, 8), (5, 7), (9, 16), (25, 11), (49, 4), (13, 77)]:
        assert math.gcd(m, n) == 1
        assert t.phi[m * n] == t.phi[m] * t.phi[n]


def test_omega_of_first_primorials():
    # omega(2*3*...*23) = 9 — beyond the table ceiling, via factorization
    assert len(sieve.factorize(223092870)) == 9
    assert sieve.factorize(223092870) == {2: 1, 3: 1, 5: 1, 7: 1, 11: 1,
                                          13: 1, 17: 1, 19: 1, 23: 1}
    t = sieve.totient_table(10 ** 5)
    assert t.omega[30030] == 6
    assert int(t.omega[2 : 10 ** 5].max()) == 6


def test_omega_against_trial_division(backend):
    t = sieve.totient_table(3000)
    for n in range(2, 3000, 37):
        assert t.omega[n] == len(sieve.factorize(n))


def test_prime_count_1e7_matches_published():
    assert sieve.prime_count(10 ** 7) == 664579


@pytest.mark.slow
def test_prime_count_1e9_ceiling():
    assert sieve.prime_count(10 ** 9) == 50847534


def test_totient_table_is_immutable():
    t = sieve.totient_table(100)
    with pytest.raises(ValueError):
        t.phi[10] = 0
    with pytest.raises(ValueError):
        t.omega[10] = 0


def test_euler_phi_helper():
    assert sieve.euler_phi(1) == 1
    assert sieve.euler_phi(4) == 2
    assert sieve.euler_phi(97) == 96
    t = sieve.totient_table(500)
    for n in range(1, 500):
        assert sieve.euler_phi(n) == t.phi[n]
