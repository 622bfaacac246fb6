"""Deterministic process-parallel map.

Work items are computed independently and merged in input order, so results
are byte-identical for every worker count; parallelism only changes wall
time.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor

__all__ = ["pmap", "resolve_workers"]

# the one environment override the tools honor (worker count only)
WORKERS_ENV = "SLICEMAX_WORKERS"


def resolve_workers(requested: int | None) -> int:
    env = os.environ.get(WORKERS_ENV)
    if env is not None:
        return max(1, int(env))
    if requested is None:
        return 1
    return max(1, int(requested))


def pmap(fn, items, workers: int = 1):
    """map(fn, items) preserving order, optionally across processes."""
    items = list(items)
    if workers <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    chunksize = max(1, len(items) // (workers * 4))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=chunksize))
