"""Exhaustive 2-coloring scans over bitmasks.

A coloring of ``n`` vertices is an integer whose bit ``i`` is set when vertex
``i`` takes the "one" color.  A scan looks for the smallest mask under which
no edge of ``all_one`` is entirely set and no edge of ``all_zero`` is
entirely clear.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor

import numpy as np

CHUNK_BITS = 20
MAX_EXHAUSTIVE_VERTICES = 30


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("COVER_SPLIT_JOBS", "1")))
    except ValueError:
        return 1


def _scan_range(args):
    start, stop, all_one, all_zero = args
    masks = np.arange(start, stop, dtype=np.uint64)
    ok = np.ones(masks.shape, dtype=bool)
    for em in all_one:
        e = np.uint64(em)
        ok &= (masks & e) != e
    for em in all_zero:
        ok &= (masks & np.uint64(em)) != 0
    hits = np.flatnonzero(ok)
    if hits.size:
        return int(masks[hits[0]])
    return None


def first_valid_mask(n, all_one, all_zero, jobs=None):
    """Smallest valid mask, or None when every coloring violates some edge."""
    if n > MAX_EXHAUSTIVE_VERTICES:
        raise ValueError(f"exhaustive scan limited to {MAX_EXHAUSTIVE_VERTICES} vertices, got {n}")
    all_one = [int(e) for e in all_one]
    all_zero = [int(e) for e in all_zero]
    if not all_zero and not all_one:
        return 0
    total = 1 << n
    step = 1 << CHUNK_BITS
    ranges = [(s, min(s + step, total), all_one, all_zero) for s in range(0, total, step)]
    jobs = default_jobs() if jobs is None else max(1, jobs)
    if jobs == 1 or len(ranges) == 1:
        for r in ranges:
            hit = _scan_range(r)
            if hit is not None:
                return hit
        return None
    # chunks are merged in order, so the answer does not depend on scheduling
    pool = ProcessPoolExecutor(max_workers=jobs)
    try:
        for hit in pool.map(_scan_range, ranges):
            if hit is not None:
                return hit
    finally:
        pool.shutdown(wait=True, cancel_futures=True)
    return None
