"""Decimal, min-max and statistical normalization, plus the hybrid pipeline.

The hybrid pipeline maps nominal features with :mod:`netprep.pmf`, normalizes
numeric features with one of the three methods, and rejoins the two parts in
the original column order.
"""
from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from netprep import pmf
from netprep.dataset import Dataset, FeatureDescriptor, FeatureKind, rejoin, split_by_kind


class Method(enum.Enum):
    DECIMAL = "DN"
    MINMAX = "MN"
    STATISTICAL = "SN"

    @property
    def key(self) -> str:
        return self.name.lower()

    @classmethod
    def parse(cls, text: str) -> "Method":
        t = text.strip().lower()
        for m in cls:
            if t in (m.key, m.value.lower()):
                return m
        raise ValueError(f"unknown normalization method {text!r}")


@dataclass(frozen=True)
class NormalizerParams:
    feature: str
    method: Method
    values: dict = field(default_factory=dict)

    def __getattr__(self, name):
        try:
            return self.__dict__["values"][name]
        except KeyError:
            raise AttributeError(name) from None

    def apply(self, column) -> np.ndarray:
        return apply(self, column)


def mean_std(values) -> tuple[float, float]:
    """Mean and N-1 standard deviation (two-pass, compensated sums)."""
    xs = np.asarray(values, dtype=np.float64).ravel()
    n = xs.size
    if n == 0:
        raise ValueError("mean of an empty vector is undefined")
    lo, hi = float(xs.min()), float(xs.max())
    if lo == hi:
        return lo, 0.0
    # fsum/n can land an ulp outside [lo, hi]; keep the mean inside the data range
    mu = min(max(math.fsum(xs.tolist()) / n, lo), hi)
    dev = xs - mu
    var = math.fsum((dev * dev).tolist()) / (n - 1)
    return mu, math.sqrt(var)


def _nonempty(column) -> np.ndarray:
    xs = np.asarray(column, dtype=np.float64)
    if xs.size == 0:
        raise ValueError("cannot fit normalization on an empty column")
    return xs


def fit_decimal(column, feature: str = "") -> NormalizerParams:
    xs = _nonempty(column)
    biggest = float(np.abs(xs).max())
    e = 0
    while biggest / 10.0**e > 1.0:
        e += 1
    return NormalizerParams(feature, Method.DECIMAL, {"e": e})


def fit_minmax(column, feature: str = "") -> NormalizerParams:
    xs = _nonempty(column)
    return NormalizerParams(feature, Method.MINMAX, {"min": float(xs.min()), "max": float(xs.max())})


def fit_statistical(column, feature: str = "") -> NormalizerParams:
    mu, sigma = mean_std(_nonempty(column))
    return NormalizerParams(feature, Method.STATISTICAL, {"mu": mu, "sigma": sigma})


FITTERS = {
    Method.DECIMAL: fit_decimal,
    Method.MINMAX: fit_minmax,
    Method.STATISTICAL: fit_statistical,
}


def fit(method: Method, column, feature: str = "") -> NormalizerParams:
    return FITTERS[method](column, feature)


def apply(params: NormalizerParams, column) -> np.ndarray:
    xs = np.asarray(column, dtype=np.float64)
    v = params.values
    if params.method is Method.DECIMAL:
        return xs / 10.0 ** v["e"]
    if params.method is Method.MINMAX:
        lo, hi = v["min"], v["max"]
        if hi == lo:
            return np.zeros_like(xs)
        return np.clip((xs - lo) / (hi - lo), 0.0, 1.0)
    sigma = v["sigma"]
    if sigma == 0:
        return np.zeros_like(xs)
    return (xs - v["mu"]) / sigma


def _numeric(name: str) -> FeatureDescriptor:
    return FeatureDescriptor(name, 0, FeatureKind.NUMERIC)


def normalize_numeric(dataset: Dataset, method: Method) -> tuple[Dataset, list[NormalizerParams]]:
    """Fit and apply ``method`` to every numeric column; nominal ones pass through."""
    params = []
    out = dataset
    for name in dataset.numeric_names():
        p = fit(method, dataset.column(name), name)
        params.append(p)
        out = out.with_column(name, _numeric(name), apply(p, dataset.column(name)))
    return out, params


def hybrid_normalize(
    dataset: Dataset, numeric_method: Method | None
) -> tuple[Dataset, list[pmf.PmfTable], list[NormalizerParams]]:
    """PMF-map nominal columns, normalize numeric ones, rejoin.

    ``numeric_method=None`` leaves numeric columns as they are.
    """
    nominal, numeric, order = split_by_kind(dataset)
    mapped, tables = pmf.fit_transform_dataset(nominal)
    params: list[NormalizerParams] = []
    if numeric_method is not None:
        numeric, params = normalize_numeric(numeric, numeric_method)
    return rejoin(mapped, numeric, order), tables, params


def apply_fitted(
    tables: Sequence[pmf.PmfTable],
    params: Sequence[NormalizerParams],
    dataset: Dataset,
    normalize_numeric_columns: bool = True,
) -> Dataset:
    """Apply training-fitted tables and params to another dataset (e.g. a test split)."""
    out = pmf.transform_dataset(dataset, tables)
    if not normalize_numeric_columns:
        return out
    by_name = {p.feature: p for p in params}
    nominal = set(dataset.nominal_names())
    for name in dataset.names:
        if name in nominal:
            continue
        if name not in by_name:
            raise KeyError(f"no normalization parameters fitted for {name!r}")
        out = out.with_column(name, _numeric(name), apply(by_name[name], out.column(name)))
    return out


def _format_value(v) -> str:
    return str(v) if isinstance(v, int) else repr(float(v))


def write_params(params: Sequence[NormalizerParams], path: str | os.PathLike) -> None:
    """Lines of ``feature\\tmethod\\tkey=value,...``; floats use repr (exact)."""
    lines = []
    for p in params:
        kv = ",".join(f"{k}={_format_value(v)}" for k, v in p.values.items())
        lines.append(f"{p.feature}\t{p.method.key}\t{kv}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + ("\n" if lines else ""))


def read_params(path: str | os.PathLike) -> list[NormalizerParams]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            try:
                feature, method, kv = line.split("\t")
                m = Method.parse(method)
                values = {}
                for item in kv.split(","):
                    k, v = item.split("=", 1)
                    values[k] = int(v) if k == "e" else float(v)
            except ValueError as exc:
                raise ValueError(f"{path}: line {lineno}: {exc}") from None
            out.append(NormalizerParams(feature, m, values))
    return out
