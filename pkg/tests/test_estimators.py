import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from goldbach import (
    DomainError,
    EstimateBreakdown,
    chebyshev_scan,
    error_sums,
    estimate_breakdown,
    first_order_sum,
    goldbach_count,
    hardy_littlewood_constant,
    hl_estimate,
    li2_integral,
    prime_density,
    singular_series,
    strong_form_check,
)
from goldbach.estimators import (
    chebyshev_ratio,
    estimate_range,
    hardy_littlewood_tail_bound,
    li2_many,
    strong_form_scan,
)
from goldbach.numeric import KahanSum, adaptive_simpson, kahan_sum

from .oracles import composite_simpson, inv_log_sq, li2_closed, log_sums_mp, primes_td

# extended-precision values (mpmath, 30 digits)
LN3_INV_SQ = 0.828535449690222
LN3_INV_CUBE = 0.754165466958947


@pytest.fixture(scope="module")
def c_default():
    return hardy_littlewood_constant(10**6)


def test_prime_density():
    assert prime_density(8) == pytest.approx(0.249635126851253602, rel=1e-14)
    assert prime_density(3) == pytest.approx(0.081703776936614349, rel=1e-14)
    big = [prime_density(10.0**k) for k in range(1, 12)]
    assert all(v > 0 for v in big)
    assert all(a > b for a, b in zip(big, big[1:]))
    with pytest.raises(DomainError):
        prime_density(2)


def test_first_order_sum_examples():
    assert first_order_sum(6) == pytest.approx(LN3_INV_SQ, rel=1e-14)
    expected8 = 1 / (math.log(3) * math.log(5)) + 1 / math.log(4) ** 2
    assert first_order_sum(8) == pytest.approx(expected8, rel=1e-15)
    assert first_order_sum(8) == pytest.approx(1.085906, abs=5e-7)


def test_error_sums_examples():
    s1, s2 = error_sums(6)
    assert s1 == s2 == pytest.approx(LN3_INV_CUBE, rel=1e-14)
    s1, s2 = error_sums(8)
    assert s1 == pytest.approx(1 / (math.log(3) * math.log(5) ** 2) + 1 / math.log(4) ** 3, rel=1e-15)
    assert s1 == pytest.approx(0.726751905355448468, rel=1e-14)
    assert s2 == pytest.approx(1 / (math.log(3) ** 2 * math.log(5)) + 1 / math.log(4) ** 3, rel=1e-15)


@pytest.mark.parametrize("bad", [4, 7, 2, 6.5])
def test_sum_domain(bad):
    with pytest.raises(DomainError):
        first_order_sum(bad)
    with pytest.raises(DomainError):
        error_sums(bad)


@pytest.mark.parametrize("n", [6, 8, 10, 100, 1000, 10_000, 100_000])
def test_sums_against_extended_precision(n):
    got = estimate_breakdown_sums(n)
    ref = log_sums_mp(n)
    for g, r in zip(got, ref):
        assert g == pytest.approx(r, rel=1e-12)


def estimate_breakdown_sums(n):
    return (first_order_sum(n), *error_sums(n))


def test_error_sums_swap_roles_naive():
    # s2(n) is s1 with k and n-k exchanged, i.e. s1 summed over the upper half
    for n in range(6, 1001, 2):
        s1, s2 = error_sums(n)
        ks = range(3, n // 2 + 1)
        naive_s1 = math.fsum(1 / (math.log(k) * math.log(n - k) ** 2) for k in ks)
        upper = range(n - n // 2, n - 2)
        naive_s2 = math.fsum(1 / (math.log(n - j) ** 2 * math.log(j)) for j in upper)
        assert s1 == pytest.approx(naive_s1, rel=1e-13)
        assert s2 == pytest.approx(naive_s2, rel=1e-13)
        assert s1 > 0 and s2 > 0


def test_strong_form_check_examples():
    b6 = EstimateBreakdown(6, LN3_INV_SQ, LN3_INV_CUBE, LN3_INV_CUBE, 2.0, 0.0, 0.0,
                           LN3_INV_SQ - 2 * LN3_INV_CUBE)
    assert b6.strong_lower == pytest.approx(-0.679795, abs=1e-6)
    assert strong_form_check(1, b6)
    assert strong_form_check(0, b6)
    synthetic = EstimateBreakdown(10, 1.0, 0.25, 0.25, 1.0, 0.0, 0.0, 0.5)
    assert not strong_form_check(0, synthetic)


def test_hl_constant_small():
    assert hardy_littlewood_constant(3) == 0.75
    assert hardy_littlewood_constant(4) == 0.75
    assert hardy_littlewood_constant(5) == 0.703125
    with pytest.raises(DomainError):
        hardy_littlewood_constant(2)


def test_hl_constant_reference(c_default):
    assert c_default == pytest.approx(0.6601618158, abs=5e-7)
    assert 0 < c_default - 0.66016181584686957 < hardy_littlewood_tail_bound(10**6)


def test_hl_constant_strictly_decreasing():
    prev = 1.0
    for p in primes_td(3000)[1:]:
        c = hardy_littlewood_constant(p)
        assert c < prev, p
        prev = c


@pytest.mark.parametrize("n, expected", [(64, 1.0), (30, 8 / 3), (26, 12 / 11), (6, 2.0), (90, 8 / 3)])
def test_singular_series_examples(t10k, n, expected):
    assert singular_series(t10k, n) == pytest.approx(expected, rel=1e-15)


def test_singular_series_doubling(t10k):
    for n in range(6, 10_001, 2):
        assert singular_series(t10k, n) == singular_series(t10k, 2 * n)
        assert singular_series(t10k, n) >= 1.0


def test_singular_series_domain(t10k):
    with pytest.raises(DomainError):
        singular_series(t10k, 15)


def test_li2_examples():
    assert li2_integral(2) == 0.0
    fine = composite_simpson(inv_log_sq, 2.0, 10.0, 20_000)
    assert li2_integral(10) == pytest.approx(fine, abs=1e-9)
    assert li2_integral(100) > li2_integral(10)
    with pytest.raises(DomainError):
        li2_integral(1.5)


@pytest.mark.parametrize("n", [2.5, 3, 10, 100, 1234.5, 10**4, 10**5, 10**6, 10**7])
def test_li2_against_closed_form(n):
    ref = li2_closed(n)
    assert abs(li2_integral(n) - ref) <= 1e-9 * max(1.0, ref)


def test_li2_many_matches_pointwise():
    ns = [6, 10, 10, 50, 1000, 999, 10**5]
    batch = li2_many(ns)
    for n, v in zip(ns, batch):
        assert abs(v - li2_closed(n)) <= 1e-9 * max(1.0, v)


def test_hl_estimate(t10k, c_default):
    assert hl_estimate(t10k, c_default, 64) == pytest.approx(2 * c_default * li2_integral(64), rel=1e-15)
    r = hl_estimate(t10k, c_default, 30) / hl_estimate(t10k, c_default, 32)
    assert r == pytest.approx(8 / 3 * li2_integral(30) / li2_integral(32), rel=1e-13)
    assert r == pytest.approx(8 / 3, rel=0.1)


def test_hl_ratio_at_1e5(t100k, c_default):
    g = goldbach_count(t100k, 100_000)
    assert g == 810
    ratio = g / hl_estimate(t100k, c_default, 100_000)
    # recorded at first run; unordered counting puts the limit near 1/2
    assert ratio == pytest.approx(0.4865025, abs=1e-6)


def test_breakdown(t10k, c_default):
    b = estimate_breakdown(t10k, c_default, 6)
    assert b.s0 == pytest.approx(LN3_INV_SQ, rel=1e-14)
    assert b.s1 == b.s2 == pytest.approx(LN3_INV_CUBE, rel=1e-14)
    assert b.singular == 2.0
    assert b.strong_lower == b.s0 - b.s1 - b.s2
    assert estimate_breakdown(t10k, c_default, 64).singular == 1.0


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=3, max_value=10_000).map(lambda k: 2 * k))
def test_breakdown_invariants(t10k, c_default, n):
    b = estimate_breakdown(t10k, c_default, n)
    assert b.s0 > 0 and b.s1 > 0 and b.s2 > 0
    assert b.singular >= 1 and b.li2 > 0
    assert b.hl == pytest.approx(2 * c_default * b.li2 * b.singular, rel=4e-16)
    assert b.strong_lower == b.s0 - b.s1 - b.s2


def test_estimate_range_matches_pointwise(t10k, c_default):
    rows = estimate_range(t10k, c_default, 6, 3000, threads=3)
    assert [r.n for r in rows] == list(range(6, 3001, 2))
    for r in rows[::97]:
        single = estimate_breakdown(t10k, c_default, r.n)
        assert (r.s0, r.s1, r.s2, r.singular) == (single.s0, single.s1, single.s2, single.singular)
        assert r.li2 == pytest.approx(single.li2, abs=1e-9 * max(1, r.li2))
    assert estimate_range(t10k, c_default, 6, 3000, threads=1) == rows


def test_strong_form_scan_small(t10k):
    rows = strong_form_scan(t10k, 6, 10_000)
    assert all(r.passed for r in rows)
    assert rows[0].n == 6 and rows[0].g == 1
    assert rows[0].margin == pytest.approx(1 + 0.679795, abs=1e-6)


def test_chebyshev_examples(t1m):
    assert chebyshev_ratio(t1m, 113) == pytest.approx(30 * math.log(113) / 113, rel=1e-15)
    assert chebyshev_ratio(t1m, 113) == pytest.approx(1.25506, abs=1e-5)
    rep = chebyshev_scan(t1m, 2, 200)
    by_n = {v[0]: v for v in rep.violations}
    assert by_n[113][1] == 30 and by_n[113][3] == "upper"
    assert by_n[2][2] == pytest.approx(math.log(2) / 2, rel=1e-15) and by_n[2][3] == "lower"
    assert rep.argmin == 2
    assert chebyshev_scan(t1m, 100_000, 1_000_000).violations == []


def test_chebyshev_matches_pointwise(t10k):
    rep = chebyshev_scan(t10k, 2, 5000)
    bad = set(rep.violating_ns())
    for n in range(2, 5001):
        r = chebyshev_ratio(t10k, n)
        assert (n in bad) == (not 7 / 8 < r < 9 / 8)
    with pytest.raises(DomainError):
        chebyshev_scan(t10k, 1, 10)


def test_kahan_and_simpson():
    vals = [1.0] + [1e-16] * 10_000
    assert kahan_sum(vals) == pytest.approx(1.0 + 1e-12, rel=1e-15)
    acc = KahanSum(5.0)
    acc.add(1.5)
    assert acc.total == 6.5
    assert adaptive_simpson(lambda x: x**4, 0.0, 2.0, 1e-12) == pytest.approx(32 / 5, rel=1e-12)
    assert adaptive_simpson(math.sin, 0.0, math.pi, 1e-12) == pytest.approx(2.0, rel=1e-11)
    assert adaptive_simpson(math.exp, 1.0, 0.0, 1e-12) == pytest.approx(1 - math.e, rel=1e-11)
