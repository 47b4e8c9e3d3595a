"""Reference classifiers on scalar features: LDA, QDA, logistic regression.

LDA pools one variance across classes (MLE, divide by n); QDA keeps a
per-class variance (divide by N_k).  Logistic regression is unregularized
Newton/IRLS with step-halving on the features (1, x); for K > 2 it is
multinomial softmax regression with class 0 as the reference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .classifiers import _split_by_class, softmax

_LOG_2PI = math.log(2.0 * math.pi)

GRAD_TOL = 1e-8
MAX_ITER = 100


@dataclass(frozen=True)
class GaussianClassModel:
    """Gaussian class-conditionals; pooled=True means LDA, False means QDA."""

    priors: np.ndarray
    means: np.ndarray
    variances: np.ndarray
    pooled: bool
    floored: tuple[bool, ...] = ()

    @property
    def n_classes(self) -> int:
        return len(self.priors)

    def log_joint(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        z = (x[:, None] - self.means[None, :]) ** 2 / self.variances[None, :]
        return (
            np.log(self.priors)[None, :]
            - 0.5 * (_LOG_2PI + np.log(self.variances))[None, :]
            - 0.5 * z
        )

    def posteriors(self, x):
        out = softmax(self.log_joint(x))
        return out[0] if np.ndim(x) == 0 else out

    def predict_map(self, x):
        lj = self.log_joint(x)
        pred = np.argmax(lj, axis=-1)
        return int(pred[0]) if np.ndim(x) == 0 else pred

    def log_odds(self, x):
        if self.n_classes != 2:
            raise ValueError("log_odds is defined for two-class models only")
        lj = self.log_joint(x)
        out = lj[:, 1] - lj[:, 0]
        return float(out[0]) if np.ndim(x) == 0 else out


def _variance_floor(x: np.ndarray) -> float:
    rng = float(x.max() - x.min())
    return 1e-12 * rng**2 if rng > 0.0 else 1e-12


def fit_lda(x, y, n_classes: int) -> GaussianClassModel:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y)
    groups = _split_by_class(y, n_classes)
    priors = np.array([g.size / y.size for g in groups])
    means = np.array([x[g].mean() for g in groups])
    within = sum(float(((x[g] - means[k]) ** 2).sum()) for k, g in enumerate(groups))
    pooled_var = within / y.size
    floor = _variance_floor(x)
    floored = pooled_var < floor
    if floored:
        pooled_var = floor
    return GaussianClassModel(
        priors, means, np.full(n_classes, pooled_var), True, (floored,) * n_classes
    )


def fit_qda(x, y, n_classes: int) -> GaussianClassModel:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y)
    groups = _split_by_class(y, n_classes)
    priors = np.array([g.size / y.size for g in groups])
    means = np.array([x[g].mean() for g in groups])
    floor = _variance_floor(x)
    variances, floored = [], []
    for k, g in enumerate(groups):
        v = float(((x[g] - means[k]) ** 2).mean())
        floored.append(v < floor)
        variances.append(max(v, floor))
    return GaussianClassModel(priors, means, np.array(variances), False, tuple(floored))


def gaussian_posteriors(model: GaussianClassModel, x):
    return model.posteriors(x)


@dataclass(frozen=True)
class LogisticModel:
    """Softmax-linear model on (1, x); row k of coef holds class k's (b0, b1)."""

    coef: np.ndarray  # (K, 2); row 0 is the all-zero reference
    converged: bool
    n_iter: int
    loglik_trace: tuple[float, ...] = ()

    @property
    def n_classes(self) -> int:
        return len(self.coef)

    @property
    def intercept(self) -> float:
        if self.n_classes != 2:
            raise ValueError("intercept/slope are binary-only accessors")
        return float(self.coef[1, 0])

    @property
    def slope(self) -> float:
        if self.n_classes != 2:
            raise ValueError("intercept/slope are binary-only accessors")
        return float(self.coef[1, 1])

    def scores(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        design = np.column_stack([np.ones_like(x), x])
        return design @ self.coef.T

    def posteriors(self, x):
        out = softmax(self.scores(x))
        return out[0] if np.ndim(x) == 0 else out

    def predict_map(self, x):
        s = self.scores(x)
        pred = np.argmax(s, axis=-1)
        return int(pred[0]) if np.ndim(x) == 0 else pred

    def log_odds(self, x):
        if self.n_classes != 2:
            raise ValueError("log_odds is defined for two-class models only")
        x = np.asarray(x, dtype=float)
        out = self.coef[1, 0] - self.coef[0, 0] + (self.coef[1, 1] - self.coef[0, 1]) * x
        return float(out) if out.ndim == 0 else out


def _loglik(scores: np.ndarray, y: np.ndarray) -> float:
    shifted = scores - scores.max(axis=1, keepdims=True)
    lse = np.log(np.exp(shifted).sum(axis=1)) + scores.max(axis=1)
    return float(scores[np.arange(len(y)), y].sum() - lse.sum())


def fit_logistic(x, y, n_classes: int) -> LogisticModel:
    """Newton ascent with step-halving; converged means grad max-norm <= 1e-8.

    Under complete separation the likelihood has no maximizer; the
    iteration cap trips, converged is False, and the (finite)
    coefficients remain usable for prediction.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y)
    _split_by_class(y, n_classes)  # empty-class check
    n = y.size
    design = np.column_stack([np.ones_like(x), x])
    onehot = np.zeros((n, n_classes))
    onehot[np.arange(n), y] = 1.0

    free = n_classes - 1  # class 0 pinned at zero
    beta = np.zeros((free, 2))
    trace = []
    converged = False
    it = 0
    scores = np.zeros((n, n_classes))
    for it in range(1, MAX_ITER + 1):
        scores[:, 1:] = design @ beta.T
        p = softmax(scores)
        current = _loglik(scores, y)
        trace.append(current)
        grad = design.T @ (onehot[:, 1:] - p[:, 1:])  # (2, free)
        if np.abs(grad).max() <= GRAD_TOL:
            # A vanishing gradient with every sample fit almost perfectly is
            # complete separation: the likelihood has no finite maximizer, so
            # keep stepping until the cap instead of declaring convergence.
            if p[np.arange(n), y].min() < 1.0 - 1e-8:
                converged = True
                break
        hess = np.zeros((2 * free, 2 * free))
        for a in range(free):
            for b in range(a, free):
                w = p[:, a + 1] * ((a == b) - p[:, b + 1])
                block = design.T @ (w[:, None] * design)
                hess[2 * a : 2 * a + 2, 2 * b : 2 * b + 2] = block
                hess[2 * b : 2 * b + 2, 2 * a : 2 * a + 2] = block
        g = grad.T.reshape(-1)
        try:
            step = np.linalg.solve(hess, g)
        except np.linalg.LinAlgError:
            step, *_ = np.linalg.lstsq(hess, g, rcond=None)
        step = step.reshape(free, 2)
        scale = 1.0
        for _ in range(50):
            cand = beta + scale * step
            scores[:, 1:] = design @ cand.T
            if _loglik(scores, y) >= current:
                break
            scale *= 0.5
        beta = beta + scale * step

    coef = np.vstack([np.zeros((1, 2)), beta])
    return LogisticModel(coef, converged, it, tuple(trace))


def logistic_posteriors(model: LogisticModel, x):
    return model.posteriors(x)
