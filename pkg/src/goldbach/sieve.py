"""Immutable prime table backed by an odd-only, bit-packed sieve.

Layout
------
Bit ``i`` of ``bits`` (little-endian within each byte) stands for the odd
number ``2*i + 1``; the prime 2 is special-cased. Tables above
``SEGMENT_THRESHOLD`` are sieved segment by segment (``SEGMENT_SIZE``
integers per segment) so the working set stays cache-resident.

Prime counting uses a cumulative popcount index over blocks of
``COUNT_BLOCK_BITS`` bits: a query costs one index lookup plus a popcount of
at most 8 KiB, i.e. O(1) with a small constant.

Smallest prime factors are stored densely when ``limit <= SPF_DENSE_LIMIT``;
above that they are found on demand by trial division with the sieved
primes up to ``sqrt(n)``.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import CapacityError, DomainError, OutOfRangeError

LIMIT_GUARD = 1_000_000_000
SEGMENT_SIZE = 1 << 20
SEGMENT_THRESHOLD = 1 << 20
SPF_DENSE_LIMIT = 10_000_000
COUNT_BLOCK_BITS = 1 << 16

_BLOCK_BYTES = COUNT_BLOCK_BITS // 8


def _odd_sieve(limit: int, segment_size: int | None) -> np.ndarray:
    """Packed odd-only primality bits for ``[1, limit]``.

    ``segment_size=None`` sieves the whole range in one pass.
    """
    n_odd = (limit + 1) // 2  # odd numbers 1, 3, ..., <= limit
    root = math.isqrt(limit)
    if root >= 3:
        base = _odd_sieve(root, None)
        base_idx = np.flatnonzero(np.unpackbits(base, count=(root + 1) // 2, bitorder="little"))
        base_primes = (2 * base_idx + 1).tolist()
    else:
        base_primes = []

    span = n_odd if segment_size is None else max(8, (segment_size // 2) // 8 * 8)
    chunks = []
    for lo_i in range(0, n_odd, span):
        hi_i = min(lo_i + span, n_odd)
        mask = np.ones(hi_i - lo_i, dtype=bool)
        lo = 2 * lo_i + 1
        hi = 2 * (hi_i - 1) + 1
        for p in base_primes:
            p2 = p * p
            if p2 > hi:
                break
            start = max(p2, -(-lo // p) * p)
            if start % 2 == 0:
                start += p
            mask[(start - lo) // 2 :: p] = False
        if lo_i == 0:
            mask[0] = False  # 1 is not prime
        chunks.append(np.packbits(mask, bitorder="little"))
    return np.concatenate(chunks) if len(chunks) > 1 else chunks[0]


def _dense_spf(limit: int, small_primes: np.ndarray) -> np.ndarray:
    spf = np.zeros(limit + 1, dtype=np.int32)
    spf[4::2] = 2
    for p in small_primes.tolist():
        if p == 2:
            continue
        if p * p > limit:
            break
        view = spf[p * p :: 2 * p]
        view[view == 0] = p
    idx = np.arange(limit + 1, dtype=np.int32)
    unset = spf == 0
    spf[unset] = idx[unset]
    spf[:2] = 0
    return spf


class PrimeTable:
    """Primality, prime counts and smallest prime factors on ``[0, limit]``.

    Instances are immutable once built; every array they hold is flagged
    read-only, so a table can be shared freely between threads.
    """

    __slots__ = ("limit", "bits", "primes", "_block_counts", "_spf")

    def __init__(self, limit: int, segment_size: int | None = None):
        limit = int(limit)
        if limit < 2 or limit > LIMIT_GUARD:
            raise CapacityError(
                f"prime table limit must lie in [2, {LIMIT_GUARD}] (LIMIT_GUARD), got {limit}"
            )
        if segment_size is None and limit > SEGMENT_THRESHOLD:
            segment_size = SEGMENT_SIZE
        bits = _odd_sieve(limit, segment_size)

        n_odd = (limit + 1) // 2
        odd_idx = np.flatnonzero(np.unpackbits(bits, count=n_odd, bitorder="little"))
        dtype = np.uint32 if limit < 2**32 else np.int64
        primes = np.empty(odd_idx.size + 1, dtype=dtype)
        primes[0] = 2
        primes[1:] = 2 * odd_idx + 1

        pops = np.bitwise_count(bits).astype(np.int64)
        n_blocks = -(-bits.size // _BLOCK_BYTES)
        per_block = np.add.reduceat(pops, np.arange(0, n_blocks * _BLOCK_BYTES, _BLOCK_BYTES)) if bits.size else pops
        block_counts = np.zeros(n_blocks + 1, dtype=np.int64)
        np.cumsum(per_block, out=block_counts[1:])

        spf = _dense_spf(limit, primes) if limit <= SPF_DENSE_LIMIT else None

        for arr in (bits, primes, block_counts, spf):
            if arr is not None:
                arr.flags.writeable = False
        object.__setattr__(self, "limit", limit)
        object.__setattr__(self, "bits", bits)
        object.__setattr__(self, "primes", primes)
        object.__setattr__(self, "_block_counts", block_counts)
        object.__setattr__(self, "_spf", spf)

    def __setattr__(self, name, value):
        raise AttributeError("PrimeTable is immutable")

    def __repr__(self) -> str:
        return f"PrimeTable(limit={self.limit}, primes={self.primes.size})"

    def _check(self, n: int, low: int = 0) -> int:
        n = int(n)
        if n > self.limit:
            raise OutOfRangeError(f"{n} exceeds prime table limit {self.limit}")
        if n < low:
            raise DomainError(f"argument must be >= {low}, got {n}")
        return n

    def is_prime(self, n: int) -> bool:
        n = self._check(n)
        if n == 2:
            return True
        if n < 2 or n % 2 == 0:
            return False
        i = n >> 1
        return bool((self.bits[i >> 3] >> (i & 7)) & 1)

    def prime_count(self, n: int) -> int:
        """pi(n), the number of primes ``<= n``."""
        n = self._check(n)
        if n < 2:
            return 0
        q = (n - 1) // 2 + 1  # odd-index bits [0, q) cover 1, 3, ..., <= n
        block = q // COUNT_BLOCK_BITS
        byte_end = q >> 3
        total = int(self._block_counts[block])
        total += int(np.bitwise_count(self.bits[block * _BLOCK_BYTES : byte_end]).sum())
        rem = q & 7
        if rem:
            total += int(self.bits[byte_end] & ((1 << rem) - 1)).bit_count()
        return total + 1

    def smallest_prime_factor(self, n: int) -> int:
        n = self._check(n)
        if n < 2:
            raise DomainError(f"smallest prime factor needs n >= 2, got {n}")
        if self._spf is not None:
            return int(self._spf[n])
        if n % 2 == 0:
            return 2
        root = math.isqrt(n)
        for p in self.primes[1:].tolist():
            if p > root:
                break
            if n % p == 0:
                return p
        return n

    def factorize(self, n: int) -> list[int]:
        """Prime factors of ``n`` with multiplicity, ascending."""
        n = self._check(n, low=2)
        out = []
        while n > 1:
            p = self.smallest_prime_factor(n)
            out.append(p)
            n //= p
        return out

    @property
    def has_dense_spf(self) -> bool:
        return self._spf is not None

    def mask(self, hi: int | None = None) -> np.ndarray:
        """Dense boolean primality array for ``[0, hi]`` (a fresh copy)."""
        hi = self.limit if hi is None else self._check(hi)
        out = np.zeros(hi + 1, dtype=bool)
        n_odd = (hi + 1) // 2
        out[1::2] = np.unpackbits(self.bits, count=n_odd, bitorder="little").astype(bool)
        if hi >= 2:
            out[2] = True
        return out

    def prime_counts(self, lo: int, hi: int) -> np.ndarray:
        """pi(n) for every n in ``[lo, hi]`` as an int64 array."""
        lo = self._check(lo)
        hi = self._check(hi)
        if lo > hi:
            raise DomainError(f"empty range [{lo}, {hi}]")
        base = self.prime_count(lo - 1) if lo >= 1 else 0
        m = self.mask(hi)[lo:]
        return base + np.cumsum(m, dtype=np.int64)

    def primes_upto(self, n: int) -> np.ndarray:
        n = self._check(n)
        return self.primes[: int(np.searchsorted(self.primes, n, side="right"))]


def build_prime_table(limit: int, segment_size: int | None = None) -> PrimeTable:
    """Sieve ``[0, limit]``; see :class:`PrimeTable` for the guard and layout."""
    return PrimeTable(limit, segment_size=segment_size)


def is_prime(t: PrimeTable, n: int) -> bool:
    return t.is_prime(n)


def prime_count(t: PrimeTable, n: int) -> int:
    return t.prime_count(n)


def smallest_prime_factor(t: PrimeTable, n: int) -> int:
    return t.smallest_prime_factor(n)
