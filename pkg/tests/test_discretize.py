import numpy as np
import pytest
from hypothesis import given, strategies as st

from netprep.discretize import DEFAULT_BINS, apply, fit_equal_frequency
from oracles import bin_counts


def test_default_bins():
    assert DEFAULT_BINS == 20


def test_one_to_ten_in_five_bins():
    model = fit_equal_frequency(np.arange(1, 11), k=5)
    assert model.cut_points == (2.5, 4.5, 6.5, 8.5)
    assert bin_counts(model.apply(np.arange(1, 11))) == {b: 2 for b in range(5)}


@pytest.mark.parametrize("k", [1, 2, 7, 50])
def test_constant_column_has_one_bin(k):
    model = fit_equal_frequency([3.0] * 9, k=k)
    assert model.cut_points == ()
    assert model.n_bins == 1
    assert (model.apply([-1e9, 3.0, 1e9]) == 0).all()


def test_below_training_range_is_bin_zero():
    model = fit_equal_frequency(np.arange(100.0), k=4)
    assert model.apply([-5.0])[0] == 0
    assert model.apply([1e6])[0] == model.n_bins - 1


def test_fewer_distinct_values_than_bins():
    model = fit_equal_frequency([1, 1, 2, 2, 3], k=20)
    assert model.n_bins == 3
    assert model.apply([1, 2, 3]).tolist() == [0, 1, 2]


def test_errors():
    with pytest.raises(ValueError):
        fit_equal_frequency([], k=3)
    with pytest.raises(ValueError):
        fit_equal_frequency([1.0, 2.0], k=0)


def test_adjacent_doubles_stay_in_separate_bins():
    a = 1.0
    b = np.nextafter(a, 2.0)
    model = fit_equal_frequency([a, b], k=2)
    assert model.apply([a, b]).tolist() == [0, 1]


@pytest.mark.parametrize("seed", range(20))
def test_balance_when_k_divides_m(seed):
    rng = np.random.default_rng(seed)
    k = int(rng.integers(1, 12))
    m = k * int(rng.integers(1, 30))
    col = rng.permutation(rng.choice(10**6, size=m, replace=False)).astype(float)
    counts = bin_counts(fit_equal_frequency(col, k).apply(col))
    assert counts == {b: m // k for b in range(k)}


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=60), st.integers(1, 25))
def test_ties_never_split(values, k):
    col = np.array(values, dtype=float)
    bins = fit_equal_frequency(col, k).apply(col)
    for v in set(values):
        assert len(set(bins[col == v].tolist())) == 1


@given(
    st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=1, max_size=40),
    st.integers(1, 25),
    st.lists(st.floats(-2e6, 2e6, allow_nan=False), min_size=2, max_size=20),
)
def test_monotone(values, k, probes):
    model = fit_equal_frequency(values, k)
    probes = np.sort(np.array(probes))
    bins = apply(model, probes)
    assert (np.diff(bins) >= 0).all()
    assert bins.min() >= 0 and bins.max() < model.n_bins
