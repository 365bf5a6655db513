"""Columnar feature-vector datasets with a binary normal/anomaly label.

Numeric columns are stored as read-only float64 arrays. Nominal columns are
stored as int32 codes indexing into the descriptor's ``domain``; use
:meth:`Dataset.symbols` to get the strings back.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np


class FeatureKind(enum.Enum):
    NOMINAL = "nominal"
    NUMERIC = "numeric"


class Label(enum.IntEnum):
    NORMAL = 0
    ANOMALY = 1

    @classmethod
    def from_symbol(cls, symbol: str) -> "Label":
        # every non-"normal" class symbol is some attack type
        return cls.NORMAL if symbol.strip().lower() == "normal" else cls.ANOMALY

    @property
    def symbol(self) -> str:
        return self.name.lower()


BOOLEAN_SYMBOLS = frozenset({"0", "1"})


def is_boolean_domain(domain: Iterable[str]) -> bool:
    """True for non-empty domains drawn from {"0", "1"}; those load as numeric."""
    domain = set(domain)
    return bool(domain) and domain <= BOOLEAN_SYMBOLS


@dataclass(frozen=True)
class FeatureDescriptor:
    name: str
    index: int
    kind: FeatureKind
    domain: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.kind is FeatureKind.NOMINAL:
            if self.domain is None:
                raise ValueError(f"nominal feature {self.name!r} needs a domain")
            if len(set(self.domain)) != len(self.domain):
                raise ValueError(f"duplicate symbols in domain of {self.name!r}")
        elif self.domain is not None:
            raise ValueError(f"numeric feature {self.name!r} cannot have a domain")

    @property
    def is_nominal(self) -> bool:
        return self.kind is FeatureKind.NOMINAL


class DatasetError(ValueError):
    pass


class Dataset:
    """An immutable table of feature columns plus a label vector."""

    def __init__(
        self,
        descriptors: Sequence[FeatureDescriptor],
        columns: Sequence[np.ndarray],
        labels,
        name: str = "dataset",
    ):
        if len(descriptors) != len(columns):
            raise DatasetError("descriptor/column count mismatch")
        labels = np.asarray(labels, dtype=np.int8)
        if labels.ndim != 1:
            raise DatasetError("labels must be one-dimensional")
        if labels.size and not np.isin(labels, (0, 1)).all():
            raise DatasetError("labels must be Normal (0) or Anomaly (1)")
        m = labels.shape[0]
        seen = set()
        descs = []
        cols = []
        for i, (d, col) in enumerate(zip(descriptors, columns)):
            if d.name in seen:
                raise DatasetError(f"duplicate feature name {d.name!r}")
            seen.add(d.name)
            if d.index != i:
                d = replace(d, index=i)
            if d.is_nominal:
                if is_boolean_domain(d.domain):
                    raise DatasetError(
                        f"feature {d.name!r} has a 0/1 domain; store it as numeric"
                    )
                col = np.asarray(col, dtype=np.int32)
                if col.size and (col.min() < 0 or col.max() >= len(d.domain)):
                    raise DatasetError(f"code outside domain in {d.name!r}")
            else:
                col = np.asarray(col, dtype=np.float64)
                if not np.isfinite(col).all():
                    raise DatasetError(f"non-finite value in {d.name!r}")
            if col.shape != (m,):
                raise DatasetError(
                    f"column {d.name!r} has shape {col.shape}, expected ({m},)"
                )
            col = col.copy() if col.flags.writeable else col
            col.flags.writeable = False
            descs.append(d)
            cols.append(col)
        labels = labels.copy()
        labels.flags.writeable = False
        self._descriptors = tuple(descs)
        self._columns = tuple(cols)
        self._labels = labels
        self._index = {d.name: d.index for d in descs}
        self.name = name

    @classmethod
    def from_dict(
        cls,
        data: Mapping[str, Sequence],
        labels: Sequence,
        name: str = "dataset",
    ) -> "Dataset":
        """Build from ``{feature: values}``; string columns become nominal.

        Labels may be :class:`Label` members, 0/1 or class symbols.
        """
        descs, cols = [], []
        for i, (fname, values) in enumerate(data.items()):
            values = list(values)
            if values and all(isinstance(v, str) for v in values):
                domain = tuple(dict.fromkeys(values))
                if is_boolean_domain(domain):
                    descs.append(FeatureDescriptor(fname, i, FeatureKind.NUMERIC))
                    cols.append(np.array([float(v) for v in values]))
                    continue
                lookup = {s: k for k, s in enumerate(domain)}
                descs.append(FeatureDescriptor(fname, i, FeatureKind.NOMINAL, domain))
                cols.append(np.array([lookup[v] for v in values], dtype=np.int32))
            else:
                descs.append(FeatureDescriptor(fname, i, FeatureKind.NUMERIC))
                cols.append(np.asarray(values, dtype=np.float64))
        return cls(descs, cols, coerce_labels(labels), name=name)

    @property
    def descriptors(self) -> tuple[FeatureDescriptor, ...]:
        return self._descriptors

    @property
    def columns(self) -> tuple[np.ndarray, ...]:
        return self._columns

    @property
    def labels(self) -> np.ndarray:
        return self._labels

    @property
    def names(self) -> list[str]:
        return [d.name for d in self._descriptors]

    @property
    def n_instances(self) -> int:
        return self._labels.shape[0]

    @property
    def n_features(self) -> int:
        return len(self._descriptors)

    def __len__(self) -> int:
        return self.n_instances

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def feature(self, name: str) -> FeatureDescriptor:
        try:
            return self._descriptors[self._index[name]]
        except KeyError:
            raise KeyError(f"unknown feature {name!r}") from None

    def column(self, name: str) -> np.ndarray:
        return self._columns[self.feature(name).index]

    def symbols(self, name: str) -> list[str]:
        d = self.feature(name)
        if not d.is_nominal:
            raise TypeError(f"feature {name!r} is numeric")
        return [d.domain[c] for c in self._columns[d.index]]

    def nominal_names(self) -> list[str]:
        return [d.name for d in self._descriptors if d.is_nominal]

    def numeric_names(self) -> list[str]:
        return [d.name for d in self._descriptors if not d.is_nominal]

    def renamed(self, name: str) -> "Dataset":
        return Dataset(self._descriptors, self._columns, self._labels, name=name)

    def select(self, names: Sequence[str], name: str | None = None) -> "Dataset":
        missing = [n for n in names if n not in self._index]
        if missing:
            raise KeyError(f"unknown feature(s): {', '.join(missing)}")
        descs = [self.feature(n) for n in names]
        cols = [self._columns[d.index] for d in descs]
        return Dataset(descs, cols, self._labels, name=name or self.name)

    def drop(self, names: Iterable[str]) -> "Dataset":
        names = set(names)
        return self.select([n for n in self.names if n not in names])

    def take(self, rows) -> "Dataset":
        """Row subset (index array or boolean mask)."""
        rows = np.asarray(rows)
        return Dataset(
            self._descriptors,
            [c[rows] for c in self._columns],
            self._labels[rows],
            name=self.name,
        )

    def with_column(self, name: str, descriptor: FeatureDescriptor, values) -> "Dataset":
        """Replace the column ``name`` by ``values`` described by ``descriptor``."""
        i = self.feature(name).index
        descs = list(self._descriptors)
        cols = list(self._columns)
        descs[i] = replace(descriptor, index=i)
        cols[i] = values
        return Dataset(descs, cols, self._labels, name=self.name)

    def numeric_matrix(self) -> np.ndarray:
        """(M, n) float matrix; only valid when every feature is numeric."""
        if self.nominal_names():
            raise TypeError("dataset still has nominal features")
        if not self._columns:
            return np.empty((self.n_instances, 0))
        return np.column_stack(self._columns)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.name == other.name
            and self._descriptors == other._descriptors
            and np.array_equal(self._labels, other._labels)
            and all(np.array_equal(a, b) for a, b in zip(self._columns, other._columns))
        )

    def __repr__(self) -> str:
        return (
            f"Dataset(name={self.name!r}, instances={self.n_instances}, "
            f"features={self.n_features}, nominal={self.nominal_names()})"
        )


def coerce_labels(labels) -> np.ndarray:
    out = []
    for v in labels:
        if isinstance(v, str):
            out.append(Label.from_symbol(v))
        else:
            out.append(Label(int(v)))
    return np.array(out, dtype=np.int8)


NSL_KDD_FEATURES = (
    "duration", "protocol_type", "service", "flag", "src_bytes", "dst_bytes",
    "land", "wrong_fragment", "urgent", "hot", "num_failed_logins", "logged_in",
    "num_compromised", "root_shell", "su_attempted", "num_root",
    "num_file_creations", "num_shells", "num_access_files", "num_outbound_cmds",
    "is_host_login", "is_guest_login", "count", "srv_count", "serror_rate",
    "srv_serror_rate", "rerror_rate", "srv_rerror_rate", "same_srv_rate",
    "diff_srv_rate", "srv_diff_host_rate", "dst_host_count",
    "dst_host_srv_count", "dst_host_same_srv_rate", "dst_host_diff_srv_rate",
    "dst_host_same_src_port_rate", "dst_host_srv_diff_host_rate",
    "dst_host_serror_rate", "dst_host_srv_serror_rate", "dst_host_rerror_rate",
    "dst_host_srv_rerror_rate",
)
NSL_KDD_NOMINAL = ("protocol_type", "service", "flag")


@dataclass(frozen=True)
class FeatureSet:
    name: str
    members: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.members)) != len(self.members):
            raise ValueError(f"duplicate members in feature set {self.name!r}")

    @classmethod
    def custom(cls, members: Iterable[str]) -> "FeatureSet":
        return cls("Custom", tuple(members))

    def renamed(self, mapping: Mapping[str, str]) -> "FeatureSet":
        """Substitute member names, e.g. ``{"error_rate": "serror_rate"}``."""
        return FeatureSet(self.name, tuple(mapping.get(m, m) for m in self.members))

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)


# "error_rate" is kept as published; it matches none of the 41 NSL-KDD names,
# so callers project with FeatureSet.renamed({"error_rate": ...}).
MVF = FeatureSet(
    "MVF",
    (
        "service", "src_bytes", "dst_host_serror_rate", "error_rate",
        "dst_host_srv_diff_host_rate", "protocol_type", "rerror_rate",
        "srv_rerror_rate", "wrong_fragment", "num_compromised", "num_access_files",
    ),
)
MVRF = FeatureSet(
    "MVRF",
    (
        "service", "src_bytes", "diff_srv_rate", "same_srv_rate",
        "dst_host_srv_count", "logged_in", "dst_host_serror_rate", "error_rate",
        "srv_serror_rate", "dst_host_srv_diff_host_rate", "protocol_type",
        "rerror_rate", "srv_rerror_rate", "hot", "wrong_fragment",
        "num_compromised", "num_access_files", "root_shell", "num_failed_logins",
    ),
)
PRESETS = {"MVF": MVF, "MVRF": MVRF}


def project(dataset: Dataset, feature_set: FeatureSet | Sequence[str]) -> Dataset:
    """Keep exactly the members of ``feature_set`` (in its order) plus labels."""
    members = list(feature_set)
    missing = [m for m in members if m not in dataset]
    if missing:
        hint = ""
        if "error_rate" in missing:
            hint = " (supply a rename mapping, e.g. error_rate=serror_rate)"
        raise KeyError(f"unknown feature(s): {', '.join(missing)}{hint}")
    return dataset.select(members)


class KindSplit(NamedTuple):
    nominal: Dataset
    numeric: Dataset
    order: tuple[str, ...]


def split_by_kind(dataset: Dataset) -> KindSplit:
    return KindSplit(
        dataset.select(dataset.nominal_names()),
        dataset.select(dataset.numeric_names()),
        tuple(dataset.names),
    )


def rejoin(nominal: Dataset, numeric: Dataset, order: Sequence[str]) -> Dataset:
    """Inverse of :func:`split_by_kind`; either part may have been transformed."""
    if not np.array_equal(nominal.labels, numeric.labels):
        raise DatasetError("cannot rejoin parts with different labels")
    descs, cols = [], []
    for n in order:
        part = nominal if n in nominal else numeric
        descs.append(part.feature(n))
        cols.append(part.column(n))
    return Dataset(descs, cols, numeric.labels, name=numeric.name)
