"""Modified sequential backward search.

Every candidate feature is removed in turn (from the full feature set, not
cumulatively). Each configured classifier is trained on the reduced training
data and evaluated on the reduced test data. Per classifier and metric, the N
removal results define a margin ``[mu - sigma, mu + sigma]``. A feature whose
removal pushes the results outside the margin for every classifier is kept
(``f_plus``); the rest are discarded (``f_minus``). The kept features are then
ranked by information gain.
"""
from __future__ import annotations

import enum
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Mapping, Sequence

from netprep import classifiers as clf
from netprep.dataset import Dataset
from netprep.discretize import DEFAULT_BINS
from netprep.info_gain import IgRanking, rank
from netprep.normalize import Method, apply_fitted, hybrid_normalize, mean_std

BOUNDARY_RTOL = 1e-6
BOUNDARY_ATOL = 1e-12


class Mode(enum.Enum):
    STRICT = "strict"
    WITH_BOUNDARY = "boundary"


class MetricRule(enum.Enum):
    EITHER = "either"
    BOTH = "both"


METRICS = ("detection_rate", "false_positive_rate")


@dataclass(frozen=True)
class RunRecord:
    feature: str
    classifier: str
    detection_rate: float
    false_positive_rate: float


@dataclass(frozen=True)
class ThresholdMargin:
    classifier: str
    metric: str
    mu: float
    sigma: float

    @property
    def lower(self) -> float:
        return self.mu - self.sigma

    @property
    def upper(self) -> float:
        return self.mu + self.sigma

    def on_boundary(self, value: float) -> bool:
        return any(
            math.isclose(value, end, rel_tol=BOUNDARY_RTOL, abs_tol=BOUNDARY_ATOL)
            for end in (self.lower, self.upper)
        )

    def strictly_outside(self, value: float) -> bool:
        return (value < self.lower or value > self.upper) and not self.on_boundary(value)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["lower"], d["upper"] = self.lower, self.upper
        return d


@dataclass
class FeatureSelectionResult:
    f_plus: list[str]
    f_minus: list[str]
    runs: list[RunRecord]
    margins: list[ThresholdMargin]
    ranking: IgRanking
    mode: Mode = Mode.STRICT
    metric_rule: MetricRule = MetricRule.EITHER
    classifiers: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode.value,
            "metric_rule": self.metric_rule.value,
            "classifiers": list(self.classifiers),
            "f_plus": list(self.f_plus),
            "f_minus": list(self.f_minus),
            "runs": [asdict(r) for r in self.runs],
            "margins": [m.to_dict() for m in self.margins],
            "ranking": self.ranking.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def report(self) -> str:
        """Plain-text table of removal runs and the resulting partition."""
        lines = []
        head = f"{'removed feature':<32}" + "".join(
            f"{c + ' DR':>12}{c + ' FPR':>12}" for c in self.classifiers
        )
        lines.append(head)
        by_feature: dict[str, dict[str, RunRecord]] = {}
        for r in self.runs:
            by_feature.setdefault(r.feature, {})[r.classifier] = r
        plus = set(self.f_plus)
        for feat, per in by_feature.items():
            row = f"{feat:<32}" + "".join(
                f"{per[c].detection_rate:>12.4f}{per[c].false_positive_rate:>12.4f}"
                for c in self.classifiers
            )
            lines.append(row + ("  +" if feat in plus else "  -"))
        lines.append("")
        for m in self.margins:
            lines.append(f"margin {m.classifier:<4} {m.metric:<20} [{m.lower:.4f}, {m.upper:.4f}]")
        lines.append("")
        lines.append("f_plus ranked by information gain:")
        for name, ig in self.ranking.entries:
            lines.append(f"  {name:<32} {ig:.6f}")
        return "\n".join(lines) + "\n"


def compute_threshold_margin(values: Sequence[float]) -> tuple[float, float, tuple[float, float]]:
    """Mean, N-1 standard deviation and the interval ``[mu - sigma, mu + sigma]``."""
    if len(values) < 2:
        raise ValueError("a threshold margin needs at least two values")
    mu, sigma = mean_std(values)
    return mu, sigma, (mu - sigma, mu + sigma)


def _check_schema(train: Dataset, test: Dataset):
    a = [(d.name, d.kind) for d in train.descriptors]
    b = [(d.name, d.kind) for d in test.descriptors]
    if a != b:
        raise clf.SchemaError("train and test datasets have different schemas")


def _prepared(train: Dataset, test: Dataset) -> tuple[Dataset, Dataset]:
    # every per-column transform is independent, so normalizing once and then
    # dropping a column equals normalizing each reduced dataset separately
    norm_train, tables, params = hybrid_normalize(train, Method.MINMAX)
    return norm_train, apply_fitted(tables, params, test)


def leave_one_out_runs(
    train: Dataset,
    test: Dataset,
    classifiers: Sequence[clf.Algorithm | str],
    workers: int = 1,
    config: Mapping[str, Mapping] | None = None,
) -> list[RunRecord]:
    """Train/evaluate every classifier once per removed feature.

    Results are ordered by feature position, then classifier order, whatever
    the worker count.
    """
    _check_schema(train, test)
    algos = [a if isinstance(a, clf.Algorithm) else clf.Algorithm.parse(a) for a in classifiers]
    if not algos:
        raise ValueError("at least one classifier is required")
    if train.n_features < 2:
        raise ValueError("leave-one-out needs at least two features")
    config = config or {}
    norm_train, norm_test = _prepared(train, test)

    def one(feature: str) -> list[RunRecord]:
        tr = norm_train.drop([feature])
        te = norm_test.drop([feature])
        out = []
        for a in algos:
            model = clf.train(a, tr, config.get(a.value))
            rep = clf.evaluate(model, te)
            out.append(RunRecord(feature, a.value, rep.detection_rate, rep.false_positive_rate))
        return out

    features = train.names
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, features))
    else:
        results = [one(f) for f in features]
    return [r for per in results for r in per]


def margins_from_runs(runs: Sequence[RunRecord]) -> list[ThresholdMargin]:
    order: list[str] = []
    for r in runs:
        if r.classifier not in order:
            order.append(r.classifier)
    margins = []
    for c in order:
        rows = [r for r in runs if r.classifier == c]
        for metric in METRICS:
            mu, sigma, _ = compute_threshold_margin([getattr(r, metric) for r in rows])
            margins.append(ThresholdMargin(c, metric, mu, sigma))
    return margins


def partition(
    runs: Sequence[RunRecord],
    margins: Sequence[ThresholdMargin],
    mode: Mode = Mode.STRICT,
    metric_rule: MetricRule = MetricRule.EITHER,
) -> tuple[list[str], list[str]]:
    margin = {(m.classifier, m.metric): m for m in margins}
    classifiers = sorted({m.classifier for m in margins}, key=[m.classifier for m in margins].index)
    features: list[str] = []
    table: dict[tuple[str, str], RunRecord] = {}
    for r in runs:
        if r.feature not in features:
            features.append(r.feature)
        table[(r.feature, r.classifier)] = r

    def outside(m: ThresholdMargin, v: float) -> bool:
        if mode is Mode.STRICT:
            return m.strictly_outside(v)
        return m.strictly_outside(v) or m.on_boundary(v)

    for f in features:
        for c in classifiers:
            if (f, c) not in table:
                raise KeyError(f"missing run record for feature {f!r}, classifier {c!r}")

    combine = any if metric_rule is MetricRule.EITHER else all
    f_plus, f_minus = [], []
    for f in features:
        keep = True
        for c in classifiers:
            r = table[(f, c)]
            if not combine(outside(margin[(c, metric)], getattr(r, metric)) for metric in METRICS):
                keep = False
                break
        (f_plus if keep else f_minus).append(f)
    return f_plus, f_minus


def run_modified_sbs(
    train: Dataset,
    test: Dataset,
    classifiers: Sequence[clf.Algorithm | str],
    mode: Mode = Mode.STRICT,
    k_bins: int = DEFAULT_BINS,
    metric_rule: MetricRule = MetricRule.EITHER,
    workers: int = 1,
    config: Mapping[str, Mapping] | None = None,
) -> FeatureSelectionResult:
    runs = leave_one_out_runs(train, test, classifiers, workers=workers, config=config)
    margins = margins_from_runs(runs)
    f_plus, f_minus = partition(runs, margins, mode, metric_rule)
    ranking = rank(train, f_plus, k_bins)
    names = [m.classifier for m in margins[::2]]
    return FeatureSelectionResult(f_plus, f_minus, runs, margins, ranking, mode, metric_rule, names)
