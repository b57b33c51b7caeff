"""Mertens scans against exact rational oracles."""

import math
from fractions import Fraction

import mpmath as mp
import pytest

from totscan import mertens, sieve
from totscan.mertens import InvalidResidueError
from totscan.rigor import Outcome

mp.mp.dps = 50


def _records(limit, **kw):
    return list(mertens.mertens_scan(limit, **kw))


def test_sum_at_10_exact_rational(backend):
    rec = _records(10)[-1]
    assert rec.x == 10
    oracle = Fraction(1, 2) + Fraction(1, 3) + Fraction(1, 5) + Fraction(1, 7)
    assert oracle == Fraction(247, 210)
    assert abs(float(mp.mpf(oracle.numerator) / oracle.denominator)
               - rec.sum_recip.value) <= rec.sum_recip.err


def test_residual_at_10_oracle(backend):
    rec = _records(10)[-1]
    oracle = (mp.mpf(247) / 210 - mp.log(mp.log(10))
              - mp.mpf("0.26149721284764278375542683860869585905"))
    assert abs(float(oracle) - rec.residual.value) <= rec.residual.err + 1e-15
    assert rec.residual.value == pytest.approx(0.0806605, abs=1e-6)


def test_sum_at_3_two_terms(backend):
    rec = _records(3)[0]
    assert rec.x == 3
    assert rec.sum_recip.value == pytest.approx(5.0 / 6.0, abs=1e-15)


def test_band_formulas_oracle():
    rec = _records(1000)[-1]
    lg = math.log(1000)
    assert rec.dusart_band == pytest.approx(1 / (10 * lg ** 2) + 4 / (15 * lg ** 3),
                                            rel=1e-12)
    assert rec.rh_band == pytest.approx((3 * lg + 4) / (8 * math.pi * math.sqrt(1000)),
                                        rel=1e-12)
    assert rec.elementary_band == pytest.approx(1 / lg, rel=1e-12)


def test_elementary_band_holds_from_10(backend):
    for rec in _records(10 ** 5):
        if rec.x >= 10:
            assert rec.within_elementary.outcome is Outcome.HOLDS, rec.x


def test_residual_at_1e6_full_precision_oracle(backend):
    rec = _records(10 ** 6)[-1]
    assert rec.x == 10 ** 6
    oracle_sum = mp.fsum(1 / mp.mpf(int(p)) for p in sieve.primes_up_to(10 ** 6))
    oracle_resid = (oracle_sum - mp.log(mp.log(10 ** 6))
                    - mp.mpf("0.26149721284764278375542683860869585905"))
    assert abs(float(oracle_resid) - rec.residual.value) <= rec.residual.err + 1e-15
    # |R(1e6)| sits inside the sharper band (~6.3e-4)
    assert rec.dusart_band == pytest.approx(6.25e-4, abs=5e-6)
    assert abs(rec.residual.value) < rec.dusart_band
    assert rec.within_dusart.outcome is Outcome.HOLDS


def test_configurable_elementary_constant(backend):
    recs = _records(1000, c_elementary=1e-9)
    assert any(r.within_elementary.outcome is Outcome.FAILS for r in recs)


def test_scan_rejects_tiny_limit():
    with pytest.raises(ValueError):
        _records(2)


# ---------------------------------------------------------------------------
# arithmetic progressions

def test_ap_q4_a1_exact_oracle(backend):
    recs = list(mertens.mertens_ap_scan(4, 1, 100))
    rec = recs[-1]
    primes = [5, 13, 17, 29, 37, 41, 53, 61, 73, 89, 97]
    oracle = sum((Fraction(1, p) for p in primes), Fraction(0))
    assert abs(float(mp.mpf(oracle.numerator) / oracle.denominator)
               - rec.sum_recip.value) <= rec.sum_recip.err
    # centered value: sum - (1/phi(4)) loglog x
    want = float(mp.mpf(oracle.numerator) / oracle.denominator
                 - mp.log(mp.log(100)) / 2)
    assert rec.centered.value == pytest.approx(want, abs=1e-13)
    assert rec.b_aq_estimate == rec.centered.value


def test_ap_single_term_below_5(backend):
    recs = list(mertens.mertens_ap_scan(3, 2, 4))
    assert recs[-1].sum_recip.value == 0.5  # only p = 2


def test_ap_invalid_residue():
    with pytest.raises(InvalidResidueError):
        list(mertens.mertens_ap_scan(6, 3, 100))
    with pytest.raises(InvalidResidueError):
        list(mertens.mertens_ap_scan(4, 2, 100))


def test_ap_partition_identity(backend):
    # sum over coprime residues a of AP sums = full sum - sum_{p | q} 1/p
    limit = 10 ** 6
    segs = list(sieve.prime_segments(limit))
    full = _records(limit, segments=iter(segs))[-1]
    for q in (3, 4, 5):
        parts = []
        for a in range(1, q):
            if math.gcd(a, q) == 1:
                recs = list(mertens.mertens_ap_scan(q, a, limit,
                                                    segments=iter(segs)))
                parts.append(recs[-1].sum_recip)
        total = sum(p.value for p in parts)
        err = sum(p.err for p in parts)
        missing = sum(1.0 / p for p in sieve.factorize(q))
        assert abs(total - (full.sum_recip.value - missing)) <= \
            err + full.sum_recip.err + 1e-14


def test_ap_two_scale_stability(backend):
    a = list(mertens.mertens_ap_scan(4, 1, 10 ** 5))[-1]
    b = list(mertens.mertens_ap_scan(4, 1, 10 ** 6))[-1]
    assert abs(a.b_aq_estimate - b.b_aq_estimate) <= \
        a.spread_last_decade + b.spread_last_decade


@pytest.mark.slow
def test_ap_stabilizes_two_decimals_at_scale():
    a = list(mertens.mertens_ap_scan(4, 1, 10 ** 7))[-1]
    b = list(mertens.mertens_ap_scan(4, 1, 10 ** 8))[-1]
    assert abs(a.b_aq_estimate - b.b_aq_estimate) < \
        a.spread_last_decade + b.spread_last_decade
    assert abs(a.b_aq_estimate - b.b_aq_estimate) < 5e-3
