"""Compiled inner loops. All kernels release the GIL so callers can fan out
over a thread pool; each writes only to the output slice it is handed."""

import numpy as np
from numba import njit


@njit(nogil=True, cache=True)
def accumulate_pairs(primes, start, end, stripe, n_stripes, out):
    """Add 1 to ``out[(p + q - start) // 2]`` for every prime pair p <= q with
    ``start <= p + q <= end``, restricted to primes p whose index is
    congruent to ``stripe`` modulo ``n_stripes``."""
    n_primes = primes.size
    half = end // 2
    for i in range(stripe, n_primes, n_stripes):
        p = np.int64(primes[i])
        if p > half:
            break
        if p == 2:
            # 2 + odd q is odd; only 2 + 2 lands on an even target
            if start <= 4 <= end:
                out[(4 - start) >> 1] += 1
            continue
        lo = max(p, start - p)
        hi = end - p
        j = np.searchsorted(primes, lo)
        while j < n_primes:
            q = np.int64(primes[j])
            if q > hi:
                break
            out[(p + q - start) >> 1] += 1
            j += 1


@njit(nogil=True, cache=True)
def count_pairs(primes, is_odd_prime_bits, n):
    """G(n) for a single even n by walking primes p <= n/2."""
    half = n // 2
    total = 0
    for i in range(primes.size):
        p = np.int64(primes[i])
        if p > half:
            break
        q = n - p
        if q == 2:
            total += 1
        elif q & 1:
            k = q >> 1
            if (is_odd_prime_bits[k >> 3] >> (k & 7)) & 1:
                total += 1
    return total


@njit(nogil=True, cache=True)
def log_sums(inv_log, ns, out):
    """Kahan-compensated sums over k = 3..n/2 for each n in ``ns``:

    out[i, 0] = sum 1/(ln k ln(n-k))
    out[i, 1] = sum 1/(ln k ln(n-k)^2)
    out[i, 2] = sum 1/(ln k^2 ln(n-k))

    ``inv_log[k]`` must hold ``1/ln k`` for k >= 2.
    """
    for i in range(ns.size):
        n = ns[i]
        s0 = 0.0
        c0 = 0.0
        s1 = 0.0
        c1 = 0.0
        s2 = 0.0
        c2 = 0.0
        for k in range(3, n // 2 + 1):
            a = inv_log[k]
            b = inv_log[n - k]
            ab = a * b

            y = ab - c0
            t = s0 + y
            c0 = (t - s0) - y
            s0 = t

            y = ab * b - c1
            t = s1 + y
            c1 = (t - s1) - y
            s1 = t

            y = ab * a - c2
            t = s2 + y
            c2 = (t - s2) - y
            s2 = t
        out[i, 0] = s0
        out[i, 1] = s1
        out[i, 2] = s2
