"""Cached synthetic samples shared by several test modules."""
from functools import lru_cache

from netprep.synthetic import nslkdd_like


@lru_cache(maxsize=None)
def small_nslkdd(n: int, seed: int = 0):
    return nslkdd_like(n, seed=seed)
