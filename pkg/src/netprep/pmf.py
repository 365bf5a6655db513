"""Map nominal symbols to their relative frequency of occurrence.

Each symbol is replaced by ``count / M`` over the fitting sample. Symbols not
seen while fitting map to 0.0.
"""
from __future__ import annotations

import os
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import islice
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from netprep.dataset import Dataset, FeatureDescriptor, FeatureKind, rejoin, split_by_kind


@dataclass(frozen=True)
class PmfTable:
    feature: str
    counts: Mapping[str, int]
    sample_size: int

    def __post_init__(self):
        if self.sample_size <= 0:
            raise ValueError("sample size must be positive")
        if sum(self.counts.values()) != self.sample_size:
            raise ValueError("symbol counts must sum to the sample size")
        if any(c <= 0 for c in self.counts.values()):
            raise ValueError("fitted symbols must occur at least once")

    @property
    def entries(self) -> dict[str, float]:
        return {s: c / self.sample_size for s, c in self.counts.items()}

    def exact(self, symbol: str) -> Fraction:
        return Fraction(self.counts.get(symbol, 0), self.sample_size)

    def __getitem__(self, symbol: str) -> float:
        return self.counts.get(symbol, 0) / self.sample_size

    def transform(self, column: Iterable[str]) -> np.ndarray:
        return transform(self, column)


def fit(column: Iterable[str], feature: str = "") -> PmfTable:
    column = list(column)
    if not column:
        raise ValueError("cannot fit a PMF table on an empty column")
    return PmfTable(feature, dict(Counter(column)), len(column))


def transform(table: PmfTable, column: Iterable[str]) -> np.ndarray:
    entries = table.entries
    return np.array([entries.get(s, 0.0) for s in column], dtype=np.float64)


def _nominal_frequencies(table: PmfTable, descriptor: FeatureDescriptor, codes) -> np.ndarray:
    # vectorized transform for a coded column
    per_code = np.array([table[s] for s in descriptor.domain], dtype=np.float64)
    return per_code[codes] if per_code.size else np.zeros(len(codes))


def _fit_coded(descriptor: FeatureDescriptor, codes: np.ndarray) -> PmfTable:
    if codes.size == 0:
        raise ValueError(f"cannot fit a PMF table for {descriptor.name!r} on zero rows")
    counts = np.bincount(codes, minlength=len(descriptor.domain))
    return PmfTable(
        descriptor.name,
        {s: int(c) for s, c in zip(descriptor.domain, counts) if c},
        int(codes.size),
    )


def transform_dataset(dataset: Dataset, tables: Sequence[PmfTable]) -> Dataset:
    """Replace each nominal column by its frequencies under ``tables``."""
    by_name = {t.feature: t for t in tables}
    out = dataset
    for d in dataset.descriptors:
        if not d.is_nominal:
            continue
        if d.name not in by_name:
            raise KeyError(f"no PMF table fitted for nominal feature {d.name!r}")
        values = _nominal_frequencies(by_name[d.name], d, dataset.column(d.name))
        out = out.with_column(d.name, FeatureDescriptor(d.name, d.index, FeatureKind.NUMERIC), values)
    return out


def fit_transform_dataset(dataset: Dataset) -> tuple[Dataset, list[PmfTable]]:
    nominal, numeric, order = split_by_kind(dataset)
    tables = [_fit_coded(d, nominal.column(d.name)) for d in nominal.descriptors]
    mapped = transform_dataset(nominal, tables)
    return rejoin(mapped, numeric, order), tables


def stream_map(
    records: Iterable[Sequence],
    window_length: int,
    nominal_fields: Iterable[int] | None = None,
) -> Iterator[list[float]]:
    """Map nominal fields of a record stream window by window.

    Records are grouped into consecutive, non-overlapping windows of
    ``window_length`` records (the last one may be shorter). Each window gets
    its own tables, fitted on that window alone. ``nominal_fields`` defaults to
    the positions holding strings in the first record of each window.
    """
    if window_length < 1:
        raise ValueError("window_length must be >= 1")
    fixed = None if nominal_fields is None else sorted(set(nominal_fields))
    it = iter(records)
    while True:
        window = [list(r) for r in islice(it, window_length)]
        if not window:
            return
        fields = fixed
        if fields is None:
            fields = [j for j, v in enumerate(window[0]) if isinstance(v, str)]
        for j in fields:
            table = fit([r[j] for r in window])
            entries = table.entries
            for r in window:
                r[j] = entries[r[j]]
        for r in window:
            yield [float(v) for v in r]


def write_tables(tables: Sequence[PmfTable], path: str | os.PathLike) -> None:
    """One block per table: ``# M=<size>`` then ``feature\\tsymbol\\tcount\\tfrequency``."""
    lines = []
    for t in tables:
        lines.append(f"# M={t.sample_size}")
        for sym, c in t.counts.items():
            if "\t" in sym or "\n" in sym or "\t" in t.feature:
                raise ValueError("symbols and feature names cannot contain tabs or newlines")
            lines.append(f"{t.feature}\t{sym}\t{c}\t{c / t.sample_size!r}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + ("\n" if lines else ""))


def read_tables(path: str | os.PathLike) -> list[PmfTable]:
    tables: list[PmfTable] = []
    size = None
    feature = None
    counts: dict[str, int] = {}

    def flush():
        if feature is not None:
            tables.append(PmfTable(feature, dict(counts), size))

    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("# M="):
                flush()
                size = int(line[4:])
                feature, counts = None, {}
                continue
            parts = line.split("\t")
            if len(parts) != 4 or size is None:
                raise ValueError(f"{path}: line {lineno}: malformed PMF entry")
            if feature is None:
                feature = parts[0]
            elif parts[0] != feature:
                raise ValueError(f"{path}: line {lineno}: feature changed inside a block")
            counts[parts[1]] = int(parts[2])
    flush()
    return tables
