"""Label entropy, information gain and feature ranking."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from netprep import kernels
from netprep.dataset import Dataset
from netprep.discretize import DEFAULT_BINS, apply, fit_equal_frequency


def entropy(counts: Iterable[int]) -> float:
    """Shannon entropy in bits of a histogram; empty cells contribute 0."""
    counts = [int(c) for c in counts]
    if any(c < 0 for c in counts):
        raise ValueError("histogram counts must be nonnegative")
    total = sum(counts)
    if total == 0:
        raise ValueError("entropy of an all-zero histogram is undefined")
    h = 0.0
    for c in counts:
        if c:
            p = c / total
            h -= p * math.log2(p)
    return h


def feature_codes(dataset: Dataset, feature: str, k: int = DEFAULT_BINS) -> tuple[np.ndarray, int]:
    """Discrete value codes of a feature: symbols as-is, numerics binned into k."""
    d = dataset.feature(feature)
    col = dataset.column(feature)
    if d.is_nominal:
        return np.ascontiguousarray(col, dtype=np.int32), len(d.domain)
    model = fit_equal_frequency(col, k, feature=feature)
    return np.ascontiguousarray(apply(model, col)), model.n_bins


def info_gain(dataset: Dataset, feature: str, k: int = DEFAULT_BINS) -> float:
    if dataset.n_instances == 0:
        raise ValueError("information gain of an empty dataset is undefined")
    codes, n_codes = feature_codes(dataset, feature, k)
    labels = np.ascontiguousarray(dataset.labels)
    table = kernels.contingency(codes, labels, n_codes)
    m = dataset.n_instances
    h_d = entropy(table.sum(axis=0))
    conditional = 0.0
    for row in table:
        n_attr = int(row.sum())
        if n_attr:
            conditional += n_attr / m * entropy(row)
    return max(h_d - conditional, 0.0)


@dataclass(frozen=True)
class IgRanking:
    entries: tuple[tuple[str, float], ...]
    bins_used: int

    @property
    def order(self) -> list[str]:
        return [name for name, _ in self.entries]

    def to_dict(self) -> dict:
        return {
            "bins_used": self.bins_used,
            "entries": [{"feature": n, "ig": ig} for n, ig in self.entries],
        }


def rank(dataset: Dataset, features: Iterable[str] | None = None, k: int = DEFAULT_BINS) -> IgRanking:
    """Rank features by information gain, descending; ties by name."""
    names = list(dataset.names if features is None else features)
    scored = [(n, info_gain(dataset, n, k)) for n in names]
    scored.sort(key=lambda e: (-e[1], e[0]))
    return IgRanking(tuple(scored), k)
