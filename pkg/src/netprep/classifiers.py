"""Small built-in classifiers and the detection-rate / false-positive harness.

Anomaly is the positive class throughout.
"""
from __future__ import annotations

import enum
import json
import math
import time
from dataclasses import asdict, dataclass
from typing import Mapping, Sequence

import numpy as np

from netprep import kernels
from netprep.dataset import Dataset, FeatureDescriptor, FeatureKind, Label
from netprep.info_gain import entropy

SIGMA_FLOOR = 1e-9
TIE_EPS = 1e-12


class Algorithm(enum.Enum):
    NAIVE_BAYES = "nb"
    DECISION_TREE = "dt"
    KNN = "knn"

    @classmethod
    def parse(cls, text: str) -> "Algorithm":
        t = text.strip().lower()
        aliases = {"naivebayes": "nb", "decisiontree": "dt", "tree": "dt", "id3": "dt"}
        t = aliases.get(t.replace("_", ""), t)
        for a in cls:
            if a.value == t:
                return a
        raise ValueError(f"unknown classifier {text!r}")


class SchemaError(ValueError):
    pass


class ClassifierModel:
    """Base class: remembers the training schema and recodes test symbols."""

    algorithm: Algorithm

    def __init__(self, dataset: Dataset):
        self.schema = tuple((d.name, d.kind, d.domain) for d in dataset.descriptors)

    def _check(self, dataset: Dataset):
        got = tuple((d.name, d.kind) for d in dataset.descriptors)
        want = tuple((n, k) for n, k, _ in self.schema)
        if got != want:
            raise SchemaError("test schema does not match the training schema")

    def _codes(self, dataset: Dataset, j: int) -> np.ndarray:
        """Nominal column ``j`` of ``dataset`` in training codes; unseen -> -1."""
        train_domain = self.schema[j][2]
        lookup = {s: k for k, s in enumerate(train_domain)}
        d = dataset.descriptors[j]
        remap = np.array([lookup.get(s, -1) for s in d.domain] or [-1], dtype=np.int64)
        return remap[dataset.columns[j]]

    def predict_dataset(self, dataset: Dataset) -> np.ndarray:
        self._check(dataset)
        return self._predict(dataset)

    def _predict(self, dataset: Dataset) -> np.ndarray:
        raise NotImplementedError

    def instance_dataset(self, instance) -> Dataset:
        """Wrap one feature vector (sequence or mapping) as a 1-row dataset."""
        if isinstance(instance, Mapping):
            values = [instance[n] for n, _, _ in self.schema]
        else:
            values = list(instance)
        if len(values) != len(self.schema):
            raise SchemaError(f"expected {len(self.schema)} values, got {len(values)}")
        descs, cols = [], []
        for j, ((name, kind, domain), v) in enumerate(zip(self.schema, values)):
            if kind is FeatureKind.NOMINAL:
                if not isinstance(v, str):
                    raise SchemaError(f"feature {name!r} expects a symbol")
                descs.append(FeatureDescriptor(name, j, kind, (v,)))
                cols.append([0])
            else:
                if isinstance(v, str):
                    raise SchemaError(f"feature {name!r} expects a number")
                descs.append(FeatureDescriptor(name, j, kind))
                cols.append([float(v)])
        return Dataset(descs, cols, [0])


# --------------------------------------------------------------------------
# Naive Bayes


def _gaussian_fit(xs: np.ndarray) -> tuple[float, float]:
    # maximum-likelihood sigma with exact sums: duplicating the data changes nothing
    n = xs.size
    mu = math.fsum(xs.tolist()) / n
    dev = xs - mu
    sd = math.sqrt(math.fsum((dev * dev).tolist()) / n)
    return mu, max(sd, SIGMA_FLOOR)


class NaiveBayesModel(ClassifierModel):
    algorithm = Algorithm.NAIVE_BAYES

    def __init__(self, dataset: Dataset):
        super().__init__(dataset)
        y = dataset.labels
        m = y.size
        counts = np.bincount(y, minlength=2)
        with np.errstate(divide="ignore"):
            self.log_prior = np.log(counts / m)
        self.gaussians: dict[int, np.ndarray] = {}  # j -> [[mu, sigma] per class]
        self.log_freq: dict[int, np.ndarray] = {}  # j -> (n_symbols + 1, 2); last row unseen
        for j, d in enumerate(dataset.descriptors):
            col = dataset.columns[j]
            if d.is_nominal:
                k = len(d.domain)
                if k == 0:
                    raise ValueError(f"nominal feature {d.name!r} has an empty domain")
                table = np.zeros((k + 1, 2))
                for c in (0, 1):
                    hist = np.bincount(col[y == c], minlength=k).astype(np.float64)
                    table[:k, c] = np.log((hist + 1.0) / (counts[c] + k))
                    table[k, c] = np.log(1.0 / (counts[c] + k))
                self.log_freq[j] = table
            else:
                stats = np.zeros((2, 2))
                for c in (0, 1):
                    xs = col[y == c]
                    if xs.size == 0:
                        stats[c] = (0.0, 1.0)
                        continue
                    stats[c] = _gaussian_fit(xs)
                self.gaussians[j] = stats

    def log_posteriors(self, dataset: Dataset) -> np.ndarray:
        """Unnormalized log posterior, shape (M, 2)."""
        m = dataset.n_instances
        score = np.tile(self.log_prior, (m, 1))
        for j in range(len(self.schema)):
            if j in self.log_freq:
                codes = self._codes(dataset, j)
                table = self.log_freq[j]
                score += table[np.where(codes < 0, table.shape[0] - 1, codes)]
            else:
                x = dataset.columns[j][:, None]
                mu, sd = self.gaussians[j][:, 0], self.gaussians[j][:, 1]
                score += -0.5 * ((x - mu) / sd) ** 2 - np.log(sd) - 0.5 * math.log(2 * math.pi)
        return score

    def _predict(self, dataset: Dataset) -> np.ndarray:
        s = self.log_posteriors(dataset)
        # ties (and -inf vs -inf) resolve to Normal
        return (s[:, 1] > s[:, 0]).astype(np.int8)


# --------------------------------------------------------------------------
# Decision tree (ID3 with binary midpoint splits on numeric features)


@dataclass
class _Node:
    label: int
    feature: int = -1
    threshold: float = 0.0
    children: list | None = None  # numeric: [left, right]; nominal: per training code

    @property
    def is_leaf(self) -> bool:
        return self.feature < 0


def _majority(y: np.ndarray) -> int:
    pos = int(y.sum())
    return 1 if 2 * pos > y.size else 0


class DecisionTreeModel(ClassifierModel):
    algorithm = Algorithm.DECISION_TREE

    def __init__(self, dataset: Dataset):
        super().__init__(dataset)
        if dataset.n_instances == 0:
            raise ValueError("cannot train on an empty dataset")
        self.kinds = [d.kind for d in dataset.descriptors]
        self.n_codes = [len(d.domain) if d.is_nominal else 0 for d in dataset.descriptors]
        cols = [np.ascontiguousarray(c) for c in dataset.columns]
        y = np.ascontiguousarray(dataset.labels)
        self.root = _Node(_majority(y))
        self.n_nodes = 1
        stack = [(self.root, np.arange(y.size))]
        while stack:
            node, rows = stack.pop()
            ys = y[rows]
            pos = int(ys.sum())
            if pos == 0 or pos == ys.size:
                continue
            split = self._best_split(cols, ys, rows)
            if split is None:
                continue
            j, threshold, parts = split
            node.feature, node.threshold = j, threshold
            node.children = []
            for part in parts:
                if part is None:
                    node.children.append(None)
                    continue
                child = _Node(_majority(y[part]))
                node.children.append(child)
                self.n_nodes += 1
                stack.append((child, part))

    def _best_split(self, cols, ys, rows):
        """Highest-gain split; gains within TIE_EPS go to the earlier feature."""
        best = None
        best_gain = -1.0
        for j, col in enumerate(cols):
            x = col[rows]
            if self.kinds[j] is FeatureKind.NOMINAL:
                table = kernels.contingency(np.ascontiguousarray(x), ys, self.n_codes[j])
                present = table.sum(axis=1) > 0
                if present.sum() < 2:
                    continue
                n = ys.size
                cond = sum(row.sum() / n * entropy(row) for row in table[present])
                gain = entropy(table.sum(axis=0)) - cond
                if best is None or gain > best_gain + TIE_EPS:
                    parts = [rows[x == c] if present[c] else None for c in range(self.n_codes[j])]
                    best, best_gain = (j, 0.0, parts), gain
            else:
                order = np.argsort(x, kind="stable")
                xs = np.ascontiguousarray(x[order])
                gain, pos = kernels.best_numeric_split(xs, np.ascontiguousarray(ys[order]))
                if pos < 0:
                    continue
                if best is None or gain > best_gain + TIE_EPS:
                    a, b = float(xs[pos - 1]), float(xs[pos])
                    mid = 0.5 * a + 0.5 * b
                    if not a <= mid < b:
                        mid = a
                    left = x <= mid
                    best, best_gain = (j, mid, [rows[left], rows[~left]]), gain
        return best

    def _predict(self, dataset: Dataset) -> np.ndarray:
        m = dataset.n_instances
        cols = []
        for j, kind in enumerate(self.kinds):
            cols.append(self._codes(dataset, j) if kind is FeatureKind.NOMINAL else dataset.columns[j])
        out = np.empty(m, dtype=np.int8)
        stack = [(self.root, np.arange(m))]
        while stack:
            node, rows = stack.pop()
            if rows.size == 0:
                continue
            if node.is_leaf:
                out[rows] = node.label
                continue
            x = cols[node.feature][rows]
            if self.kinds[node.feature] is FeatureKind.NOMINAL:
                routed = np.zeros(rows.size, dtype=bool)
                for c, child in enumerate(node.children):
                    if child is None:
                        continue
                    hit = x == c
                    routed |= hit
                    stack.append((child, rows[hit]))
                # unseen symbols stop here
                out[rows[~routed]] = node.label
            else:
                left = x <= node.threshold
                stack.append((node.children[0], rows[left]))
                stack.append((node.children[1], rows[~left]))
        return out


# --------------------------------------------------------------------------
# k nearest neighbours

_NOMINAL_SCALE = 1.0 / math.sqrt(2.0)


class KnnModel(ClassifierModel):
    """Euclidean k-NN. Nominal features contribute 1 to the squared distance on mismatch."""

    algorithm = Algorithm.KNN

    def __init__(self, dataset: Dataset, k_neighbors: int = 5):
        super().__init__(dataset)
        if k_neighbors < 1:
            raise ValueError("k_neighbors must be >= 1")
        self.k_neighbors = k_neighbors
        self.matrix = self._matrix(dataset, train=True)
        self.labels = np.ascontiguousarray(dataset.labels)

    def _matrix(self, dataset: Dataset, train: bool = False) -> np.ndarray:
        blocks = []
        for j, (name, kind, domain) in enumerate(self.schema):
            if kind is FeatureKind.NOMINAL:
                codes = dataset.columns[j] if train else self._codes(dataset, j)
                onehot = np.zeros((dataset.n_instances, len(domain)))
                seen = codes >= 0
                onehot[np.flatnonzero(seen), codes[seen]] = _NOMINAL_SCALE
                blocks.append(onehot)
            else:
                blocks.append(dataset.columns[j][:, None])
        if not blocks:
            return np.zeros((dataset.n_instances, 0))
        return np.ascontiguousarray(np.hstack(blocks), dtype=np.float64)

    def _predict(self, dataset: Dataset) -> np.ndarray:
        return kernels.knn_predict(self.matrix, self.labels, self._matrix(dataset), self.k_neighbors)


# --------------------------------------------------------------------------


def train(algorithm: Algorithm | str, dataset: Dataset, config: Mapping | None = None) -> ClassifierModel:
    if isinstance(algorithm, str):
        algorithm = Algorithm.parse(algorithm)
    if dataset.n_instances == 0:
        raise ValueError("cannot train on an empty dataset")
    config = dict(config or {})
    if algorithm is Algorithm.NAIVE_BAYES:
        return NaiveBayesModel(dataset)
    if algorithm is Algorithm.DECISION_TREE:
        return DecisionTreeModel(dataset)
    return KnnModel(dataset, k_neighbors=int(config.get("k_neighbors", 5)))


def predict(model: ClassifierModel, instance) -> Label:
    return Label(int(model.predict_dataset(model.instance_dataset(instance))[0]))


@dataclass
class EvaluationReport:
    classifier: str
    dataset: str
    tp: int
    fp: int
    tn: int
    fn: int
    detection_rate: float
    false_positive_rate: float
    test_time: float
    detection_rate_undefined: bool = False
    false_positive_rate_undefined: bool = False

    @classmethod
    def from_counts(cls, classifier, dataset, tp, fp, tn, fn, test_time=0.0) -> "EvaluationReport":
        dr_undef = tp + fn == 0
        fpr_undef = fp + tn == 0
        return cls(
            classifier, dataset, tp, fp, tn, fn,
            0.0 if dr_undef else tp / (tp + fn),
            0.0 if fpr_undef else fp / (fp + tn),
            test_time, dr_undef, fpr_undef,
        )

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=False)

    @classmethod
    def from_json(cls, text: str) -> "EvaluationReport":
        return cls(**json.loads(text))


def confusion_counts(truth: np.ndarray, predicted: np.ndarray) -> tuple[int, int, int, int]:
    truth = np.asarray(truth).astype(bool)
    predicted = np.asarray(predicted).astype(bool)
    tp = int(np.sum(truth & predicted))
    fp = int(np.sum(~truth & predicted))
    tn = int(np.sum(~truth & ~predicted))
    fn = int(np.sum(truth & ~predicted))
    return tp, fp, tn, fn


def evaluate(model: ClassifierModel, test: Dataset) -> EvaluationReport:
    model._check(test)
    start = time.perf_counter()
    predicted = model._predict(test)
    elapsed = time.perf_counter() - start
    tp, fp, tn, fn = confusion_counts(test.labels, predicted)
    return EvaluationReport.from_counts(model.algorithm.value, test.name, tp, fp, tn, fn, elapsed)


def write_reports(reports: Sequence[EvaluationReport], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for r in reports:
            fh.write(r.to_json() + "\n")


def read_reports(path) -> list[EvaluationReport]:
    with open(path, encoding="utf-8") as fh:
        return [EvaluationReport.from_json(line) for line in fh if line.strip()]
