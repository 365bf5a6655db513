import json

import numpy as np
import pytest

from netprep import classifiers as clf
from netprep.classifiers import Algorithm, EvaluationReport
from netprep.dataset import Dataset, Label


def _two_points():
    return Dataset.from_dict({"x": [0.0] * 5 + [10.0] * 5}, labels=[0] * 5 + [1] * 5)


def test_nb_gaussian_example():
    model = clf.train("nb", _two_points())
    assert clf.predict(model, [1.0]) is Label.NORMAL
    assert clf.predict(model, [9.0]) is Label.ANOMALY


def test_nb_tie_goes_to_normal():
    ds = Dataset.from_dict({"x": [1.0, 3.0, 1.0, 3.0]}, labels=[0, 0, 1, 1])
    model = clf.train(Algorithm.NAIVE_BAYES, ds)
    assert clf.predict(model, [2.0]) is Label.NORMAL
    s = model.log_posteriors(model.instance_dataset([2.0]))
    assert s[0, 0] == s[0, 1]


def test_nb_nominal_add_one():
    ds = Dataset.from_dict({"p": ["tcp", "tcp", "udp"]}, labels=[0, 0, 1])
    model = clf.train("nb", ds)
    assert clf.predict(model, ["tcp"]) is Label.NORMAL
    assert clf.predict(model, ["udp"]) is Label.ANOMALY
    # unseen symbols get the add-one mass of an empty cell and fall back on priors
    assert clf.predict(model, {"p": "icmp"}) is Label.NORMAL


def test_nb_duplication_invariance():
    rng = np.random.default_rng(11)
    x = rng.normal(0, 1, (40, 3))
    y = (x[:, 0] + 0.5 * rng.normal(size=40) > 0).astype(int)
    ds = Dataset.from_dict({f"f{j}": x[:, j] for j in range(3)}, labels=y)
    doubled = ds.take(np.concatenate([np.arange(40), np.arange(40)]))
    probe = Dataset.from_dict({f"f{j}": rng.normal(0, 1, 200) for j in range(3)}, labels=np.zeros(200, int))
    a = clf.train("nb", ds).predict_dataset(probe)
    b = clf.train("nb", doubled).predict_dataset(probe)
    assert a.tolist() == b.tolist()


def test_dt_single_split_on_perfect_feature():
    ds = Dataset.from_dict(
        {"noise": [3.0, 1.0, 2.0, 5.0, 4.0, 0.0], "same": [0.0, 0.0, 0.0, 1.0, 1.0, 1.0]},
        labels=[0, 0, 0, 1, 1, 1],
    )
    model = clf.train("dt", ds)
    assert model.n_nodes == 3
    assert model.root.feature == 1 and model.root.threshold == 0.5
    assert model.predict_dataset(ds).tolist() == ds.labels.tolist()


def test_dt_nominal_multiway_and_unseen():
    ds = Dataset.from_dict({"p": ["a", "b", "c", "a", "b", "c"]}, labels=[0, 1, 1, 0, 1, 1])
    model = clf.train("dt", ds)
    assert len(model.root.children) == 3
    assert model.predict_dataset(ds).tolist() == ds.labels.tolist()
    # majority at the root is Anomaly (4 of 6)
    assert clf.predict(model, ["zzz"]) is Label.ANOMALY


def test_dt_tie_prefers_earlier_feature():
    ds = Dataset.from_dict({"a": [0.0, 1.0], "b": [0.0, 1.0]}, labels=[0, 1])
    assert clf.train("dt", ds).root.feature == 0


def test_dt_fits_training_data():
    rng = np.random.default_rng(5)
    x = rng.integers(0, 50, (60, 2)).astype(float)
    ds = Dataset.from_dict({"u": x[:, 0], "v": x[:, 1]}, labels=rng.integers(0, 2, 60))
    ds = ds.take(np.unique(x, axis=0, return_index=True)[1])
    model = clf.train("dt", ds)
    assert model.predict_dataset(ds).tolist() == ds.labels.tolist()


def test_knn_one_neighbour_reproduces_training():
    rng = np.random.default_rng(2)
    ds = Dataset.from_dict(
        {"x": rng.normal(size=30), "p": [str(v) for v in rng.choice(["a", "b", "c"], 30)]},
        labels=rng.integers(0, 2, 30),
    )
    model = clf.train("knn", ds, {"k_neighbors": 1})
    assert model.predict_dataset(ds).tolist() == ds.labels.tolist()


def test_knn_majority_and_ties():
    ds = Dataset.from_dict({"x": [0.0, 0.1, 0.2, 5.0]}, labels=[1, 1, 0, 0])
    assert clf.predict(clf.train("knn", ds, {"k_neighbors": 3}), [0.05]) is Label.ANOMALY
    even = Dataset.from_dict({"x": [0.0, 1.0]}, labels=[1, 0])
    assert clf.predict(clf.train("knn", even, {"k_neighbors": 2}), [0.5]) is Label.NORMAL
    # equal distances resolve to the lower training index
    assert clf.predict(clf.train("knn", even, {"k_neighbors": 1}), [0.5]) is Label.ANOMALY


def test_knn_nominal_mismatch_costs_one():
    ds = Dataset.from_dict({"p": ["a", "b"], "x": [0.0, 0.9]}, labels=[0, 1])
    model = clf.train("knn", ds, {"k_neighbors": 1})
    # probe "b": row 0 costs 1 (mismatch) + x^2, row 1 costs (x - 0.9)^2
    assert clf.predict(model, ["b", 0.0]) is Label.ANOMALY  # 1.0 vs 0.81
    assert clf.predict(model, ["b", -0.5]) is Label.NORMAL  # 1.25 vs 1.96


def test_schema_errors():
    model = clf.train("nb", _two_points())
    other = Dataset.from_dict({"y": [1.0]}, labels=[0])
    with pytest.raises(clf.SchemaError):
        model.predict_dataset(other)
    with pytest.raises(clf.SchemaError):
        clf.predict(model, [1.0, 2.0])
    with pytest.raises(clf.SchemaError):
        clf.predict(model, ["x"])
    with pytest.raises(ValueError):
        clf.train("svm", _two_points())
    with pytest.raises(ValueError):
        clf.train("dt", Dataset.from_dict({"x": []}, labels=[]))


# 20-row fixture tallied by hand: truth / predicted
_TRUTH = "AAAAAAAANNNNNNNNNNNN"
_PRED = "AAAAAANNANNNNNNNNNAA"


def test_confusion_counts_hand_tally():
    truth = np.array([c == "A" for c in _TRUTH])
    pred = np.array([c == "A" for c in _PRED])
    assert clf.confusion_counts(truth, pred) == (6, 3, 9, 2)
    r = EvaluationReport.from_counts("x", "d", 6, 3, 9, 2)
    assert r.detection_rate == 0.75 and r.false_positive_rate == 0.25


class _Constant(clf.ClassifierModel):
    algorithm = Algorithm.NAIVE_BAYES

    def __init__(self, ds, label):
        super().__init__(ds)
        self.label = label

    def _predict(self, ds):
        return np.full(ds.n_instances, self.label, dtype=np.int8)


def test_degenerate_evaluations():
    anomalies = Dataset.from_dict({"x": [1.0, 2.0]}, labels=[1, 1], name="all_anomaly")
    r = clf.evaluate(_Constant(anomalies, 1), anomalies)
    assert r.detection_rate == 1.0
    assert r.false_positive_rate == 0.0 and r.false_positive_rate_undefined
    assert not r.detection_rate_undefined
    mixed = _two_points()
    r = clf.evaluate(clf.train("dt", mixed), mixed)
    assert (r.detection_rate, r.false_positive_rate) == (1.0, 0.0)
    assert (r.tp, r.fp, r.tn, r.fn) == (5, 0, 5, 0)


def test_report_json_round_trip(tmp_path):
    r = clf.evaluate(clf.train("knn", _two_points()), _two_points())
    fields = json.loads(r.to_json())
    assert list(fields) == [
        "classifier", "dataset", "tp", "fp", "tn", "fn", "detection_rate",
        "false_positive_rate", "test_time", "detection_rate_undefined",
        "false_positive_rate_undefined",
    ]
    assert fields["classifier"] == "knn" and r.test_time >= 0
    clf.write_reports([r, r], tmp_path / "r.jsonl")
    assert clf.read_reports(tmp_path / "r.jsonl") == [r, r]


@pytest.mark.parametrize("text, algo", [("NB", "nb"), ("id3", "dt"), ("decision_tree", "dt"), ("KNN", "knn")])
def test_algorithm_parse(text, algo):
    assert Algorithm.parse(text).value == algo
