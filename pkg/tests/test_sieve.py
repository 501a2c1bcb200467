import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from goldbach import (
    CapacityError,
    DomainError,
    OutOfRangeError,
    build_prime_table,
    is_prime,
    prime_count,
    smallest_prime_factor,
)
from goldbach.sieve import LIMIT_GUARD, SPF_DENSE_LIMIT

from .oracles import is_prime_td, primes_td, spf_td


def test_small_tables():
    assert build_prime_table(10).primes.tolist() == [2, 3, 5, 7]
    assert build_prime_table(2).primes.tolist() == [2]
    assert prime_count(build_prime_table(1000), 1000) == 168


@pytest.mark.parametrize("n, expected", [(97, True), (1, False), (91, False), (0, False), (2, True)])
def test_is_prime_examples(t10k, n, expected):
    assert is_prime(t10k, n) is expected


@pytest.mark.parametrize("n, expected", [(10, 4), (1, 0), (100, 25), (0, 0), (2, 1)])
def test_prime_count_examples(t10k, n, expected):
    assert prime_count(t10k, n) == expected


@pytest.mark.parametrize("n, expected", [(91, 7), (64, 2), (97, 97)])
def test_spf_examples(t10k, n, expected):
    assert smallest_prime_factor(t10k, n) == expected


def test_exhaustive_against_trial_division():
    t = build_prime_table(10_000)
    expected = primes_td(10_000)
    assert t.primes.tolist() == expected
    count = 0
    for n in range(0, 10_001):
        p = is_prime_td(n)
        count += p
        assert t.is_prime(n) is p, n
        assert t.prime_count(n) == count, n
        if n >= 2:
            assert t.smallest_prime_factor(n) == spf_td(n), n
            assert t.is_prime(n) == (t.smallest_prime_factor(n) == n)


def test_prime_count_steps(t100k):
    prev = 0
    for n in range(0, t100k.limit + 1, 7):
        pc = t100k.prime_count(n)
        assert pc >= prev
        prev = pc
    pcs = t100k.prime_counts(2, t100k.limit)
    steps = np.diff(pcs)
    assert set(np.unique(steps).tolist()) <= {0, 1}
    mask = t100k.mask()
    assert np.array_equal(steps == 1, mask[3:])
    assert pcs[-1] == t100k.primes.size == mask.sum()


@pytest.mark.parametrize("limit", [2, 3, 15, 16, 17, 1023, 1024, 1025, 65_537, 3 * 2**17 + 1])
def test_segmented_matches_single_pass(limit):
    a = build_prime_table(limit, segment_size=None)
    b = build_prime_table(limit, segment_size=256)
    assert np.array_equal(a.bits, b.bits)
    assert np.array_equal(a.primes, b.primes)


def test_block_index_crosses_blocks():
    # several 2**16-bit blocks of the count index
    t = build_prime_table(600_000)
    for n in [131_071, 131_072, 131_073, 262_143, 262_145, 599_999, 600_000]:
        assert t.prime_count(n) == int(np.searchsorted(t.primes, n, side="right"))
    assert t.prime_count(10**5) == 9592


def test_known_pi_values():
    t = build_prime_table(10**7)
    assert t.prime_count(10**6) == 78498
    assert t.prime_count(10**7) == 664579
    assert t.has_dense_spf


def test_sparse_spf_above_dense_limit():
    t = build_prime_table(SPF_DENSE_LIMIT + 1000)
    assert not t.has_dense_spf
    n = SPF_DENSE_LIMIT + 999
    assert t.smallest_prime_factor(n) == spf_td(n)
    assert t.factorize(9_999_991 * 1) == [9_999_991]


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=2, max_value=20_000))
def test_factorization_roundtrip(t10k, n):
    fs = t10k.factorize(n)
    assert np.prod(fs) == n
    assert all(is_prime_td(p) for p in fs)
    assert fs == sorted(fs)


def test_errors(t10k):
    with pytest.raises(OutOfRangeError):
        t10k.is_prime(t10k.limit + 1)
    with pytest.raises(OutOfRangeError):
        t10k.prime_count(t10k.limit + 1)
    with pytest.raises(DomainError):
        t10k.smallest_prime_factor(1)
    with pytest.raises(CapacityError, match="LIMIT_GUARD"):
        build_prime_table(1)
    with pytest.raises(CapacityError):
        build_prime_table(LIMIT_GUARD + 1)


def test_immutable(t10k):
    with pytest.raises(AttributeError):
        t10k.limit = 5
    with pytest.raises(ValueError):
        t10k.primes[0] = 4
    with pytest.raises(ValueError):
        t10k.bits[0] = 0
