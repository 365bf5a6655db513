"""Equal-frequency discretization of numeric columns."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_BINS = 20


@dataclass(frozen=True)
class DiscretizationModel:
    feature: str
    cut_points: tuple[float, ...]
    k: int

    @property
    def n_bins(self) -> int:
        return len(self.cut_points) + 1

    def apply(self, column) -> np.ndarray:
        return apply(self, column)


def _midpoint(a: float, b: float) -> float:
    mid = 0.5 * a + 0.5 * b
    # adjacent doubles: the midpoint can round up onto b, which would pull b left
    return mid if a <= mid < b else a


def fit_equal_frequency(column, k: int = DEFAULT_BINS, feature: str = "") -> DiscretizationModel:
    """Choose up to ``k - 1`` cut points giving bins of near-equal occupancy.

    Ideal boundaries sit after ``i*M//k`` sorted values. A boundary that would
    split a run of equal values moves to the nearest position between two
    distinct values (the left one on a tie), so equal values share a bin.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    xs = np.sort(np.asarray(column, dtype=np.float64))
    m = xs.shape[0]
    if m == 0:
        raise ValueError("cannot discretize an empty column")
    # legal[q] means a cut between xs[q-1] and xs[q] keeps ties together
    legal = np.flatnonzero(xs[1:] != xs[:-1]) + 1
    if legal.size == 0 or k == 1:
        return DiscretizationModel(feature, (), k)
    chosen = []
    for i in range(1, k):
        p = i * m // k
        if p <= 0 or p >= m:
            continue
        j = int(np.searchsorted(legal, p))
        candidates = []
        if j < legal.size:
            candidates.append(int(legal[j]))
        if j > 0:
            candidates.append(int(legal[j - 1]))
        q = min(candidates, key=lambda c: (abs(c - p), c))
        if not chosen or q > chosen[-1]:
            chosen.append(q)
    cuts = tuple(_midpoint(float(xs[q - 1]), float(xs[q])) for q in chosen)
    return DiscretizationModel(feature, cuts, k)


def apply(model: DiscretizationModel, column) -> np.ndarray:
    """Bin index = number of cut points strictly below the value."""
    values = np.asarray(column, dtype=np.float64)
    return np.searchsorted(np.asarray(model.cut_points), values, side="left").astype(np.int32)
