"""Accuracy, calibration error, and estimator-quality metrics.

ECE uses equal-width right-closed bins on [0, 1] (a confidence of exactly
zero lands in the first bin); each nonempty bin contributes its share of
samples times |mean confidence - mean accuracy|.  Confidence is always
the top-label predicted probability, for binary and multiclass alike.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .families import Family, logit


def accuracy(predicted, actual) -> float:
    predicted = np.asarray(predicted)
    actual = np.asarray(actual)
    if predicted.size == 0:
        raise ValueError("no prediction records")
    return float(np.mean(predicted == actual))


def ece(confidence, predicted, actual, bins: int = 10) -> float:
    """Expected calibration error over equal-width confidence bins."""
    conf = np.asarray(confidence, dtype=float)
    predicted = np.asarray(predicted)
    actual = np.asarray(actual)
    if conf.size == 0:
        raise ValueError("no prediction records")
    if bins < 1:
        raise ValueError("bins must be >= 1")
    if conf.min() < 0.0 or conf.max() > 1.0:
        raise ValueError("confidences must lie in [0, 1]")
    edges = np.linspace(0.0, 1.0, bins + 1)
    idx = np.clip(np.digitize(conf, edges, right=True) - 1, 0, bins - 1)
    correct = (predicted == actual).astype(float)
    total = 0.0
    for b in range(bins):
        mask = idx == b
        count = int(mask.sum())
        if count == 0:
            continue
        gap = abs(float(conf[mask].mean()) - float(correct[mask].mean()))
        total += (count / conf.size) * gap
    return total


def top_label(posteriors: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(confidence, predicted class) rows from a posterior matrix.

    Ties go to the lowest class index, matching the MAP rule.
    """
    posteriors = np.atleast_2d(np.asarray(posteriors, dtype=float))
    pred = np.argmax(posteriors, axis=1)
    conf = posteriors[np.arange(len(pred)), pred]
    return conf, pred


def true_log_odds(family: Family, eta0, eta1, alpha: float, x):
    """Binary log-odds evaluated at supplied (true) parameters."""
    e0 = family.require_eta(eta0)
    e1 = family.require_eta(eta1)
    t = family.suff_stat(x)
    intercept = logit(alpha) + family.log_partition(e0) - family.log_partition(e1)
    out = intercept + t @ (e1 - e0)
    return float(out) if np.ndim(out) == 0 else out


def cr_bound_log_odds(family: Family, eta0, eta1, n0: int, n1: int, x0) -> float:
    """Asymptotic variance floor for the plug-in log-odds at x0.

    Each class contributes [T(x0) - A'(eta_k)]^2 / (N_k A''(eta_k)); the
    two terms add because the class samples are independent.
    """
    if n0 < 1 or n1 < 1:
        raise ValueError("class counts must be positive")
    e0 = family.require_eta(eta0)
    e1 = family.require_eta(eta1)
    t = float(family.suff_stat(x0)[0])
    a1 = float(family.mean_suffstat(e1)[0])
    a0 = float(family.mean_suffstat(e0)[0])
    return (t - a1) ** 2 / (n1 * family.var_suffstat(e1)) + (a0 - t) ** 2 / (
        n0 * family.var_suffstat(e0)
    )


@dataclass(frozen=True)
class EstimatorStats:
    variance: float
    mse: float
    bias: float


def estimator_stats(estimates, truth: float) -> EstimatorStats:
    """Population variance, MSE against truth, and bias over trials.

    mse = variance + bias^2 holds exactly for these definitions.
    """
    est = np.asarray(estimates, dtype=float)
    if est.size < 2:
        raise ValueError("need at least two estimates")
    mean = float(est.mean())
    variance = float(((est - mean) ** 2).mean())
    mse = float(((est - truth) ** 2).mean())
    return EstimatorStats(variance, mse, mean - truth)
