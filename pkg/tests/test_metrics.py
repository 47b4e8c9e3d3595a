"""Accuracy, ECE, the true-log-odds oracle, and the variance bound."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from efda import (
    Exponential,
    WeibullKnownShape,
    accuracy,
    cr_bound_log_odds,
    ece,
    estimator_stats,
    fit_binary,
    top_label,
    true_log_odds,
)


class TestAccuracy:
    def test_all_correct(self):
        assert accuracy([1, 0, 2], [1, 0, 2]) == 1.0

    def test_all_wrong(self):
        assert accuracy([1, 1, 1], [0, 0, 0]) == 0.0

    def test_three_of_four(self):
        assert accuracy([1, 0, 1, 1], [1, 0, 1, 0]) == 0.75

    def test_empty_records_error(self):
        with pytest.raises(ValueError):
            accuracy([], [])


class TestEce:
    def test_perfectly_calibrated_and_confident(self):
        conf = np.ones(10)
        pred = np.zeros(10, dtype=int)
        assert ece(conf, pred, pred, bins=10) == 0.0

    def test_two_records_one_bin(self):
        conf = np.array([0.9, 0.9])
        pred = np.array([1, 1])
        actual = np.array([1, 0])
        assert ece(conf, pred, actual, bins=10) == pytest.approx(0.4, abs=1e-15)

    def test_single_bin_hand_value(self):
        n = 1000
        conf = np.full(n, 0.8)
        pred = np.ones(n, dtype=int)
        actual = np.concatenate([np.ones(600, dtype=int), np.zeros(400, dtype=int)])
        assert ece(conf, pred, actual, bins=10) == pytest.approx(0.2, abs=1e-15)

    def test_zero_confidence_goes_to_first_bin(self):
        # One record at conf 0 (wrong) and one at conf 0.05 (wrong) share bin 1.
        conf = np.array([0.0, 0.05])
        pred = np.array([1, 1])
        actual = np.array([0, 0])
        assert ece(conf, pred, actual, bins=10) == pytest.approx(0.025, abs=1e-15)

    def test_right_closed_edges(self):
        # conf exactly 0.1 belongs to bin 1, 0.1000001 to bin 2.
        conf = np.array([0.1, 0.10001])
        pred = np.array([1, 1])
        actual = np.array([1, 0])
        # bin1: conf .1 acc 1 -> gap .9 weight .5 ; bin2: conf .10001 acc 0 -> gap .10001 weight .5
        expected = 0.5 * 0.9 + 0.5 * 0.10001
        assert ece(conf, pred, actual, bins=10) == pytest.approx(expected, abs=1e-12)

    def test_bins_one_collapses_to_global_gap(self):
        rng = np.random.default_rng(0)
        conf = rng.uniform(0.5, 1.0, 200)
        pred = rng.integers(0, 2, 200)
        actual = rng.integers(0, 2, 200)
        expected = abs(conf.mean() - np.mean(pred == actual))
        assert ece(conf, pred, actual, bins=1) == pytest.approx(expected, abs=1e-12)

    def test_errors(self):
        with pytest.raises(ValueError):
            ece([], [], [], bins=10)
        with pytest.raises(ValueError):
            ece([0.5], [1], [1], bins=0)
        with pytest.raises(ValueError):
            ece([1.5], [1], [1], bins=10)

    def test_top_label_tie_goes_low(self):
        conf, pred = top_label(np.array([[0.5, 0.5], [0.1, 0.9]]))
        assert pred.tolist() == [0, 1]
        assert conf == pytest.approx([0.5, 0.9])


@given(
    conf=st.lists(st.floats(0.0, 1.0), min_size=1, max_size=200),
    bins=st.integers(1, 30),
    seed=st.integers(0, 2**32 - 1),
)
@settings(max_examples=100, deadline=None)
def test_ece_bounds_and_order_invariance(conf, bins, seed):
    conf = np.array(conf)
    rng = np.random.default_rng(seed)
    pred = rng.integers(0, 3, conf.size)
    actual = rng.integers(0, 3, conf.size)
    value = ece(conf, pred, actual, bins=bins)
    assert 0.0 <= value <= 1.0
    perm = rng.permutation(conf.size)
    assert ece(conf[perm], pred[perm], actual[perm], bins=bins) == pytest.approx(
        value, abs=1e-12
    )


class TestTrueLogOdds:
    def test_symmetric_zero(self):
        fam = Exponential()
        assert true_log_odds(fam, -1.0, -1.0, 0.5, 2.0) == 0.0

    def test_exponential_closed_form(self):
        # theta0=2, theta1=1: the class densities cross at x = 2 log 2.
        fam = Exponential()
        assert true_log_odds(fam, -0.5, -1.0, 0.5, 2.0 * math.log(2.0)) == pytest.approx(
            0.0, abs=1e-12
        )
        # At general x the value is log(theta0/theta1) + x (1/theta0 - 1/theta1).
        for x in [0.3, 1.0, 4.0]:
            expected = math.log(2.0) + x * (0.5 - 1.0)
            assert true_log_odds(fam, -0.5, -1.0, 0.5, x) == pytest.approx(expected, rel=1e-12)

    def test_matches_fitted_model_at_same_parameters(self):
        fam = WeibullKnownShape(3.0)
        x = np.array([4.0, 4.0, 2.0, 2.0])
        y = np.array([0, 0, 1, 1])
        model = fit_binary(fam, x, y)
        for v in [1.0, 2.5, 4.0]:
            assert true_log_odds(fam, model.eta0, model.eta1, model.alpha, v) == pytest.approx(
                model.log_odds(v), abs=1e-12
            )


class TestCrBound:
    def test_zero_when_point_hits_both_means(self):
        fam = Exponential()
        assert cr_bound_log_odds(fam, -0.5, -0.5, 100, 100, 2.0) == pytest.approx(0.0, abs=1e-15)

    def test_weibull_hand_value(self):
        fam = WeibullKnownShape(3.0)
        # lambda1 = 2 makes T(2) = 8 = A'(eta1): the class-1 term vanishes.
        value = cr_bound_log_odds(fam, -1.0 / 64.0, -0.125, 300, 700, 2.0)
        expected = (1.0 / 64.0**2) * (8.0 - 64.0) ** 2 / 300.0
        assert expected == pytest.approx(0.0025520833333, rel=1e-9)
        assert value == pytest.approx(expected, rel=1e-12)

    def test_doubling_counts_halves_bound(self):
        fam = WeibullKnownShape(3.0)
        one = cr_bound_log_odds(fam, -1.0 / 64.0, -0.125, 300, 700, 3.1)
        two = cr_bound_log_odds(fam, -1.0 / 64.0, -0.125, 600, 1400, 3.1)
        assert two == pytest.approx(one / 2.0, rel=1e-12)

    def test_per_class_terms_add(self):
        fam = Exponential()
        eta0, eta1, x0 = -0.25, -1.0, 1.7
        t = x0
        term0 = (4.0 - t) ** 2 / (50 * 16.0)
        term1 = (t - 1.0) ** 2 / (150 * 1.0)
        assert cr_bound_log_odds(fam, eta0, eta1, 50, 150, x0) == pytest.approx(
            term0 + term1, rel=1e-12
        )


class TestEstimatorStats:
    def test_constant_equal_to_truth(self):
        s = estimator_stats([2.0, 2.0, 2.0], 2.0)
        assert (s.variance, s.mse, s.bias) == (0.0, 0.0, 0.0)

    def test_constant_off_truth(self):
        s = estimator_stats([3.0, 3.0], 2.0)
        assert s.variance == 0.0
        assert s.mse == pytest.approx(1.0)
        assert s.bias == pytest.approx(1.0)

    def test_two_point_hand_values(self):
        s = estimator_stats([1.0, 3.0], 1.0)
        assert s.variance == pytest.approx(1.0)
        assert s.mse == pytest.approx(2.0)
        assert s.bias == pytest.approx(1.0)

    def test_needs_two_estimates(self):
        with pytest.raises(ValueError):
            estimator_stats([1.0], 1.0)


@given(
    values=st.lists(st.floats(-50.0, 50.0), min_size=2, max_size=100),
    truth=st.floats(-50.0, 50.0),
)
@settings(max_examples=100, deadline=None)
def test_mse_decomposition_property(values, truth):
    s = estimator_stats(values, truth)
    assert s.mse == pytest.approx(s.variance + s.bias**2, rel=1e-12, abs=1e-12)
