"""Shared tables and encodings used by both kernel backends."""

from __future__ import annotations

from itertools import combinations
from math import comb

import numpy as np

# Shape codes for the three consecutive deltas (d1, d2, d3) of a sorted
# 4-tuple.  d1 != d2 and d2 != d3 always hold, and in a valley d1 != d3.
SHAPE_INC = 0          # d1 < d2 < d3
SHAPE_DEC = 1          # d1 > d2 > d3
SHAPE_VALLEY_UP = 2    # d1 > d2 < d3, d1 < d3
SHAPE_VALLEY_DOWN = 3  # d1 > d2 < d3, d1 > d3
SHAPE_PEAK = 4         # d1 < d2 > d3
N_SHAPES = 5

RED = 1
BLUE = 0

# splitmix64 constants, reused as odd strides for counter-based sampling
SM_GAMMA = np.uint64(0x9E3779B97F4A7C15)
SM_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
SM_MIX2 = np.uint64(0x94D049BB133111EB)


def binomial_table(n_max: int, k_max: int) -> np.ndarray:
    """C(n, k) for 0 <= n <= n_max, 0 <= k <= k_max, as int64."""
    t = np.zeros((n_max + 1, k_max + 1), dtype=np.int64)
    for n in range(n_max + 1):
        for k in range(min(n, k_max) + 1):
            t[n, k] = comb(n, k)
    return t


def colex_rank4(a: int, b: int, c: int, d: int, binom: np.ndarray) -> int:
    """Colex rank of a sorted 4-subset a < b < c < d."""
    return int(binom[a, 1] + binom[b, 2] + binom[c, 3] + binom[d, 4])


def quad_patterns(s: int) -> np.ndarray:
    """All 4-subsets of positions [0, s), ordered so that subsets whose
    maximum position is smaller come first.  Supports incremental pruning
    when vertices are placed one position at a time."""
    pats = sorted(combinations(range(s), 4), key=lambda q: (q[3], q))
    return np.array(pats, dtype=np.int64)


def all_combinations(n: int, k: int) -> np.ndarray:
    """All sorted k-subsets of [0, n) in lexicographic order, as an
    (C(n,k), k) int64 array."""
    if comb(n, k) == 0:
        return np.empty((0, k), dtype=np.int64)
    return np.array(list(combinations(range(n), k)), dtype=np.int64)
