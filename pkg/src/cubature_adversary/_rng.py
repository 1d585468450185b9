"""Seed derivation helpers.

Every random draw in the package comes from a generator built here, keyed by
(master seed, purpose tag, index) so results never depend on scheduling.
"""
import hashlib
import os

import numpy as np

_MASK64 = (1 << 64) - 1

# purpose tags keep streams for different jobs disjoint
TAG_POINT = 1
TAG_PAIR = 2
TAG_OUTER = 3
TAG_MEASURE = 4
TAG_RULE = 5
TAG_CHECK = 6


def check_seed(seed):
    seed = int(seed)
    if seed < 0 or seed > _MASK64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def _digest(*arrays):
    h = hashlib.blake2b(digest_size=16)
    for a in arrays:
        h.update(np.ascontiguousarray(a, dtype=np.float64).tobytes())
    return int.from_bytes(h.digest(), "little")


def generator(seed, tag, *index):
    return np.random.default_rng(np.random.SeedSequence([check_seed(seed), tag, *index]))


def point_generator(seed, x):
    """Stream keyed by the bit pattern of ``x``."""
    return generator(seed, TAG_POINT, _digest(x))


def pair_generator(seed, x, y):
    return generator(seed, TAG_PAIR, _digest(x, y))


def thread_cap():
    raw = os.environ.get("CUBATURE_ADVERSARY_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return max(1, os.cpu_count() or 1)


def map_batches(fn, n_batches):
    """Run ``fn(b)`` for every batch index, returning results in batch order."""
    workers = min(thread_cap(), n_batches)
    if workers <= 1:
        return [fn(b) for b in range(n_batches)]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(n_batches)))
