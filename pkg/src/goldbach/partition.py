"""Exact Goldbach partition counts G(n).

G(n) counts unordered prime pairs ``p <= q`` with ``p + q = n``; a pair
``p == q`` counts once, so G(4) = 1 (2 + 2).
"""

from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import CapacityError, DomainError, GoldbachError, OutOfRangeError
from .parallel import resolve_threads, run_ordered
from .sieve import PrimeTable

log = logging.getLogger(__name__)

# Max number of integers a single scan may span; counts are stored as
# uint32, one per even n, so this caps the series at ~400 MB.
SERIES_CAPACITY = 200_000_000


@dataclass(frozen=True, eq=False)
class PartitionSeries:
    """G(n) for every even n in ``[range_start, range_end]``, ascending."""

    range_start: int
    range_end: int
    counts: np.ndarray

    def __post_init__(self):
        if self.range_start % 2 or self.range_end % 2 or self.range_start > self.range_end:
            raise DomainError(f"bad series range [{self.range_start}, {self.range_end}]")
        expected = (self.range_end - self.range_start) // 2 + 1
        if self.counts.shape != (expected,):
            raise DomainError(f"series needs {expected} counts, got shape {self.counts.shape}")
        self.counts.flags.writeable = False

    @property
    def ns(self) -> np.ndarray:
        return np.arange(self.range_start, self.range_end + 1, 2, dtype=np.int64)

    @property
    def entries(self) -> list[tuple[int, int]]:
        return list(zip(self.ns.tolist(), self.counts.tolist()))

    def __len__(self) -> int:
        return self.counts.size

    def __eq__(self, other):
        if not isinstance(other, PartitionSeries):
            return NotImplemented
        return (
            self.range_start == other.range_start
            and self.range_end == other.range_end
            and np.array_equal(self.counts, other.counts)
        )

    def g(self, n: int) -> int:
        if n % 2 or not self.range_start <= n <= self.range_end:
            raise OutOfRangeError(f"{n} is not an even member of [{self.range_start}, {self.range_end}]")
        return int(self.counts[(n - self.range_start) // 2])

    def slice(self, start: int, end: int) -> PartitionSeries:
        self.g(start), self.g(end)
        lo = (start - self.range_start) // 2
        hi = (end - self.range_start) // 2 + 1
        return PartitionSeries(start, end, self.counts[lo:hi].copy())

    @classmethod
    def from_entries(cls, entries) -> PartitionSeries:
        """Build from ``(n, g)`` pairs; they must cover consecutive even n."""
        entries = list(entries)
        if not entries:
            raise DomainError("empty series")
        ns = np.array([int(n) for n, _ in entries], dtype=np.int64)
        gs = np.array([int(g) for _, g in entries], dtype=np.int64)
        if np.any(gs < 0) or np.any(gs >= 2**32):
            raise DomainError("series counts must lie in [0, 2**32)")
        if ns.size > 1 and np.any(np.diff(ns) != 2):
            raise DomainError("series entries must be consecutive even integers, ascending")
        return cls(int(ns[0]), int(ns[-1]), gs.astype(np.uint32))


def _check_even(t: PrimeTable, n: int) -> int:
    n = int(n)
    if n % 2 or n < 4:
        raise DomainError(f"n must be an even integer >= 4, got {n}")
    if n > t.limit:
        raise OutOfRangeError(f"{n} exceeds prime table limit {t.limit}")
    return n


def goldbach_count(t: PrimeTable, n: int) -> int:
    n = _check_even(t, n)
    return int(_kernels.count_pairs(t.primes, t.bits, n))


def goldbach_scan(t: PrimeTable, start: int, end: int, threads: int | None = None) -> PartitionSeries:
    """Compute G(n) for every even n in ``[start, end]``.

    Each prime pair ``p <= q`` with ``start <= p + q <= end`` is enumerated
    once and tallied into a count array. Work is split into interleaved
    stripes over the index of ``p``; every stripe owns a private array and
    the arrays are summed in stripe order, so the result does not depend on
    ``threads``.
    """
    start = _check_even(t, start)
    end = _check_even(t, end)
    if start > end:
        raise DomainError(f"start {start} exceeds end {end}")
    if end - start > SERIES_CAPACITY:
        raise CapacityError(
            f"scan span {end - start} exceeds SERIES_CAPACITY={SERIES_CAPACITY}"
        )
    n_stripes = resolve_threads(threads)
    size = (end - start) // 2 + 1
    primes = t.primes_upto(end)

    def work(stripe):
        out = np.zeros(size, dtype=np.uint32)
        _kernels.accumulate_pairs(primes, start, end, stripe, n_stripes, out)
        return out

    parts = run_ordered(work, range(n_stripes), n_stripes)
    counts = parts[0]
    for part in parts[1:]:
        counts += part
    return PartitionSeries(start, end, counts)


def goldbach_witness(t: PrimeTable, n: int) -> tuple[int, int] | None:
    """Smallest-p pair ``(p, q)`` with ``p + q = n``.

    Returns ``None`` if no pair exists. That would be a counterexample to
    Goldbach's conjecture, so it is also logged at ERROR level.
    """
    n = _check_even(t, n)
    for p in t.primes.tolist():
        if p > n // 2:
            break
        if t.is_prime(n - p):
            return p, n - p
    log.error("no Goldbach partition found for n=%d", n)
    return None


def verify_positive(series: PartitionSeries) -> list[int]:
    """Even n in the series with G(n) = 0; empty unless Goldbach fails."""
    zero = np.flatnonzero(series.counts == 0)
    return (series.range_start + 2 * zero).tolist()


class CounterexampleFound(GoldbachError):
    category = "counterexample"

    def __init__(self, ns):
        self.ns = list(ns)
        super().__init__(f"G(n) = 0 for n in {self.ns[:20]}")


# -- flat-file formats ------------------------------------------------------


def series_to_csv(series: PartitionSeries) -> str:
    buf = io.StringIO()
    buf.write("n,G\n")
    for n, g in zip(series.ns.tolist(), series.counts.tolist()):
        buf.write(f"{n},{g}\n")
    return buf.getvalue()


def series_to_json(series: PartitionSeries) -> str:
    doc = {
        "range_start": series.range_start,
        "range_end": series.range_end,
        "entries": [[n, g] for n, g in zip(series.ns.tolist(), series.counts.tolist())],
    }
    return json.dumps(doc, separators=(",", ":")) + "\n"


def series_from_text(text: str) -> PartitionSeries:
    """Parse a series written by :func:`series_to_csv` or :func:`series_to_json`."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        doc = json.loads(stripped)
        return PartitionSeries.from_entries(doc["entries"])
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header != ["n", "G"]:
        raise DomainError(f"expected CSV header 'n,G', got {header!r}")
    return PartitionSeries.from_entries((row[0], row[1]) for row in reader if row)
