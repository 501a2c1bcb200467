"""Analytic estimates of G(n) and related prime statistics.

Conventions
-----------
* The log sums run over every integer k in ``[3, n/2]``, even k included,
  and the midpoint k = n/2 carries weight 1.
* The strong-form check takes both unknown big-O constants as 1:
  ``G(n) > s0 - s1 - s2``. The margin ``G(n) - (s0 - s1 - s2)`` is
  reported so other constants can be studied downstream.
* ``li2(n)`` denotes the integral of ``1/ln(x)^2`` over ``[2, n]``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import _kernels
from .errors import DomainError
from .numeric import KahanSum, adaptive_simpson, inv_log_sq
from .parallel import chunk_bounds, resolve_threads, run_ordered
from .partition import goldbach_scan
from .sieve import PrimeTable, build_prime_table

DEFAULT_PRIME_LIMIT = 1_000_000
LI2_REL_TOL = 1e-9
CHEBYSHEV_LOWER = 7 / 8
CHEBYSHEV_UPPER = 9 / 8


@dataclass(frozen=True)
class EstimateBreakdown:
    n: int
    s0: float
    s1: float
    s2: float
    singular: float
    li2: float
    hl: float
    strong_lower: float

    def margin(self, g: int) -> float:
        return g - self.strong_lower

    def as_dict(self) -> dict:
        return asdict(self)


def prime_density(n) -> float:
    """Heuristic probability that n is prime: ``1/ln n - 1/ln(n)^2``."""
    if n < 3:
        raise DomainError(f"prime_density needs n >= 3, got {n}")
    inv = 1.0 / math.log(n)
    return inv - inv * inv


def _check_even6(n) -> int:
    if int(n) != n or n % 2 or n < 6:
        raise DomainError(f"n must be an even integer >= 6, got {n}")
    return int(n)


def _inv_log_table(n_max: int) -> np.ndarray:
    out = np.zeros(n_max + 1)
    out[2:] = 1.0 / np.log(np.arange(2, n_max + 1, dtype=np.float64))
    return out


def _log_sums(ns: np.ndarray, threads: int = 1) -> np.ndarray:
    ns = np.ascontiguousarray(ns, dtype=np.int64)
    out = np.empty((ns.size, 3))
    if ns.size == 0:
        return out
    inv_log = _inv_log_table(int(ns.max()))

    def work(bounds):
        lo, hi = bounds
        _kernels.log_sums(inv_log, ns[lo:hi], out[lo:hi])

    # finer chunks than workers: cost per n grows linearly with n
    run_ordered(work, chunk_bounds(ns.size, 4 * threads), threads)
    return out


def first_order_sum(n: int) -> float:
    """Sum over k = 3..n/2 of ``1/(ln k ln(n-k))``, Kahan-compensated."""
    n = _check_even6(n)
    return float(_log_sums(np.array([n]))[0, 0])


def error_sums(n: int) -> tuple[float, float]:
    """``(s1, s2)``: the sums of ``1/(ln k ln(n-k)^2)`` and ``1/(ln(k)^2 ln(n-k))``."""
    n = _check_even6(n)
    row = _log_sums(np.array([n]))[0]
    return float(row[1]), float(row[2])


def strong_form_check(g: int, b: EstimateBreakdown) -> bool:
    """True iff ``g > s0 - s1 - s2`` (both big-O constants taken as 1)."""
    return g > b.strong_lower


def hardy_littlewood_constant(prime_limit: int = DEFAULT_PRIME_LIMIT, table: PrimeTable | None = None) -> float:
    """Partial product of ``p(p-2)/(p-1)^2`` over odd primes ``p <= prime_limit``.

    The product decreases towards C ~ 0.66016; truncating at L leaves a
    relative excess of about ``sum_{p > L} 1/p^2 ~ 1/(L ln L)``.
    """
    prime_limit = int(prime_limit)
    if prime_limit < 3:
        raise DomainError(f"prime_limit must be >= 3, got {prime_limit}")
    if table is None or table.limit < prime_limit:
        table = build_prime_table(prime_limit)
    p = table.primes_upto(prime_limit)[1:].astype(np.float64)
    factors = (p * (p - 2.0)) / ((p - 1.0) * (p - 1.0))
    prod = 1.0
    for f in factors.tolist():
        prod *= f
    return prod


def hardy_littlewood_tail_bound(prime_limit: int) -> float:
    """Rough bound on ``partial_product - C`` after truncation at prime_limit."""
    return 1.0 / (prime_limit * math.log(prime_limit))


def singular_series(t: PrimeTable, n: int) -> float:
    """Product of ``(p-1)/(p-2)`` over distinct odd primes p dividing n."""
    n = _check_even6(n)
    t._check(n)
    prod = 1.0
    m = n
    while m % 2 == 0:
        m //= 2
    while m > 1:
        p = t.smallest_prime_factor(m)
        prod *= (p - 1) / (p - 2)
        while m % p == 0:
            m //= p
    return prod


def _li2_rough(x: float) -> float:
    return adaptive_simpson(inv_log_sq, 2.0, x, 1e-6)


def li2_integral(n: float) -> float:
    """Integral of ``1/ln(x)^2`` from 2 to n by adaptive Simpson.

    Absolute tolerance is ``1e-9 * max(1, value)``; the request passed to
    the integrator is ten times tighter to leave headroom.
    """
    if n < 2:
        raise DomainError(f"li2_integral needs n >= 2, got {n}")
    n = float(n)
    if n == 2.0:
        return 0.0
    tol = 0.1 * LI2_REL_TOL * max(1.0, _li2_rough(n))
    return adaptive_simpson(inv_log_sq, 2.0, n, tol)


def li2_many(ns) -> np.ndarray:
    """``li2_integral`` for each value in ``ns`` by cumulative integration.

    The interval [2, max(ns)] is cut at the sorted points and each piece
    gets a share of the tolerance proportional to its width, so the total
    error stays within the single-point bound.
    """
    ns = np.asarray(ns, dtype=np.float64)
    if ns.size == 0:
        return np.empty(0)
    if ns.min() < 2:
        raise DomainError("li2 needs all n >= 2")
    pts = np.unique(ns)
    top = float(pts[-1])
    if top == 2.0:
        return np.zeros(ns.size)
    budget = 0.1 * LI2_REL_TOL * max(1.0, _li2_rough(top))
    acc = KahanSum()
    values = np.empty(pts.size)
    prev = 2.0
    for i, x in enumerate(pts.tolist()):
        if x > prev:
            acc.add(adaptive_simpson(inv_log_sq, prev, x, budget * (x - prev) / (top - 2.0)))
        values[i] = acc.total
        prev = x
    return values[np.searchsorted(pts, ns)]


def hl_estimate(t: PrimeTable, c: float, n: int) -> float:
    """Hardy-Littlewood estimate ``2 c li2(n) S(n)`` with S the singular series."""
    return 2.0 * c * li2_integral(n) * singular_series(t, n)


def _breakdown(n, sums, singular, li2, c) -> EstimateBreakdown:
    s0, s1, s2 = (float(v) for v in sums)
    return EstimateBreakdown(
        n=int(n),
        s0=s0,
        s1=s1,
        s2=s2,
        singular=singular,
        li2=float(li2),
        hl=2.0 * c * float(li2) * singular,
        strong_lower=s0 - s1 - s2,
    )


def estimate_breakdown(t: PrimeTable, c: float, n: int) -> EstimateBreakdown:
    n = _check_even6(n)
    t._check(n)
    sums = _log_sums(np.array([n]))[0]
    return _breakdown(n, sums, singular_series(t, n), li2_integral(n), c)


def estimate_range(
    t: PrimeTable, c: float, start: int, end: int, threads: int | None = None
) -> list[EstimateBreakdown]:
    """Breakdowns for every even n in ``[start, end]``, ascending."""
    start, end = _check_even6(start), _check_even6(end)
    t._check(end)
    if start > end:
        raise DomainError(f"start {start} exceeds end {end}")
    threads = resolve_threads(threads)
    ns = np.arange(start, end + 1, 2, dtype=np.int64)
    sums = _log_sums(ns, threads)
    li2 = li2_many(ns)
    return [
        _breakdown(n, sums[i], singular_series(t, n), li2[i], c)
        for i, n in enumerate(ns.tolist())
    ]


@dataclass(frozen=True)
class StrongFormRow:
    n: int
    g: int
    s0: float
    s1: float
    s2: float
    margin: float
    passed: bool


def strong_form_scan(t: PrimeTable, start: int, end: int, threads: int | None = None) -> list[StrongFormRow]:
    """Exact G(n) against ``s0 - s1 - s2`` for every even n in ``[start, end]``."""
    start, end = _check_even6(start), _check_even6(end)
    t._check(end)
    if start > end:
        raise DomainError(f"start {start} exceeds end {end}")
    threads = resolve_threads(threads)
    series = goldbach_scan(t, start, end, threads=threads)
    sums = _log_sums(series.ns, threads)
    rows = []
    for n, g, (s0, s1, s2) in zip(series.ns.tolist(), series.counts.tolist(), sums.tolist()):
        lower = s0 - s1 - s2
        rows.append(StrongFormRow(n, g, s0, s1, s2, g - lower, g > lower))
    return rows


@dataclass(frozen=True)
class ChebyshevReport:
    """Measured range of ``pi(n) ln(n) / n`` over a scan."""

    start: int
    end: int
    min_ratio: float
    max_ratio: float
    argmin: int
    argmax: int
    violations: list  # (n, pi(n), ratio, "lower" | "upper")

    def violating_ns(self) -> list[int]:
        return [v[0] for v in self.violations]


def chebyshev_ratio(t: PrimeTable, n: int) -> float:
    if n < 2:
        raise DomainError(f"Chebyshev ratio needs n >= 2, got {n}")
    return t.prime_count(n) * math.log(n) / n


def chebyshev_scan(t: PrimeTable, start: int, end: int) -> ChebyshevReport:
    """Measure ``pi(n) ln n / n`` on ``[start, end]`` against (7/8, 9/8).

    The bounds only hold asymptotically, so small n show up as violations;
    this is a measurement and never raises on them.
    """
    start, end = int(start), int(end)
    if start < 2 or start > end:
        raise DomainError(f"need 2 <= start <= end, got [{start}, {end}]")
    t._check(end)
    pis = t.prime_counts(start, end)
    ns = np.arange(start, end + 1, dtype=np.float64)
    ratio = pis * np.log(ns) / ns
    lo = np.flatnonzero(ratio <= CHEBYSHEV_LOWER)
    hi = np.flatnonzero(ratio >= CHEBYSHEV_UPPER)
    bad = np.union1d(lo, hi)
    is_low = ratio[bad] <= CHEBYSHEV_LOWER
    violations = [
        (start + int(i), int(pis[i]), float(ratio[i]), "lower" if low else "upper")
        for i, low in zip(bad.tolist(), is_low.tolist())
    ]
    imin = int(np.argmin(ratio))
    imax = int(np.argmax(ratio))
    return ChebyshevReport(
        start=start,
        end=end,
        min_ratio=float(ratio[imin]),
        max_ratio=float(ratio[imax]),
        argmin=start + imin,
        argmax=start + imax,
        violations=violations,
    )
