"""Worker-count resolution and deterministic fan-out helpers."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

THREADS_ENV = "GOLDBACH_MAX_THREADS"


def resolve_threads(threads: int | None = None) -> int:
    """Return the worker count to use.

    ``None`` means all available CPUs. The result is capped by the
    ``GOLDBACH_MAX_THREADS`` environment variable when it is set.
    """
    if threads is None:
        threads = os.cpu_count() or 1
    threads = int(threads)
    if threads < 1:
        raise ValueError(f"threads must be >= 1, got {threads}")
    cap = os.environ.get(THREADS_ENV)
    if cap:
        threads = min(threads, max(1, int(cap)))
    return threads


def run_ordered(fn, jobs, threads: int) -> list:
    """Apply ``fn`` to each job and return results in job order."""
    jobs = list(jobs)
    if threads == 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, jobs))


def chunk_bounds(n_items: int, n_chunks: int) -> list[tuple[int, int]]:
    """Split ``range(n_items)`` into at most ``n_chunks`` contiguous pieces."""
    n_chunks = max(1, min(n_chunks, n_items))
    step, extra = divmod(n_items, n_chunks)
    out = []
    lo = 0
    for i in range(n_chunks):
        hi = lo + step + (1 if i < extra else 0)
        out.append((lo, hi))
        lo = hi
    return out
