"""Generative classifiers with closed-form fits.

Three model shapes share the same recipe: class priors are label
frequencies and each class's natural parameter is the moment-equation
solution at that class's sufficient-statistic mean.  Scores are

    log prior_k + eta_k . T(x) - A(eta_k),

so pairwise log-odds are linear in T(x) and the base measure never has
to be evaluated.  Fitted models are immutable; prediction is pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateDataError, EmptyClassError
from .families import Family, SuffStatMean, logit, sigmoid


def _class_eta(family: Family, t: np.ndarray, n_obs: int) -> tuple[np.ndarray, bool]:
    """MLE for one class from its suff-stat rows; shrinks boundary means."""
    mean = SuffStatMean(t.mean(axis=0), n_obs)
    try:
        return family.mle_from_mean(mean), False
    except DegenerateDataError:
        return family.mle_from_mean(family.shrink_boundary_mean(mean)), True


def _split_by_class(y: np.ndarray, n_classes: int) -> list[np.ndarray]:
    groups = []
    for k in range(n_classes):
        idx = np.nonzero(y == k)[0]
        if idx.size == 0:
            raise EmptyClassError(f"class {k} has no observations")
        groups.append(idx)
    return groups


def softmax(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


@dataclass(frozen=True)
class BinaryModel:
    """Two-class model: P(Y=1) = alpha, class-conditionals at eta0 / eta1."""

    family: Family
    alpha: float
    eta0: np.ndarray
    eta1: np.ndarray
    degenerate: tuple[bool, bool] = (False, False)

    def log_odds(self, x):
        """log P(Y=1|x) - log P(Y=0|x); the base measure h cancels."""
        t = self.family.suff_stat(x)
        intercept = (
            logit(self.alpha)
            + self.family.log_partition(self.eta0)
            - self.family.log_partition(self.eta1)
        )
        out = intercept + t @ (self.eta1 - self.eta0)
        return float(out) if np.ndim(out) == 0 else out

    def posterior(self, x):
        """P(Y=1|x), saturating smoothly for large |log-odds|."""
        return sigmoid(self.log_odds(x))

    def predict(self, x):
        ell = np.asarray(self.log_odds(x))
        return (ell > 0.0).astype(int) if ell.ndim else int(ell > 0.0)


def fit_binary(family: Family, x, y) -> BinaryModel:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y)
    family.require_support(x)
    groups = _split_by_class(y, 2)
    t = family._suff_stat_batch(np.atleast_1d(x))
    eta0, d0 = _class_eta(family, t[groups[0]], groups[0].size)
    eta1, d1 = _class_eta(family, t[groups[1]], groups[1].size)
    alpha = groups[1].size / y.size
    return BinaryModel(family, alpha, eta0, eta1, (d0, d1))


@dataclass(frozen=True)
class MulticlassModel:
    """K-class model: per-class priors and natural parameters."""

    family: Family
    priors: np.ndarray
    etas: np.ndarray  # (K, suff_dim)
    degenerate: tuple[bool, ...] = ()

    @property
    def n_classes(self) -> int:
        return len(self.priors)

    def score(self, x):
        """Per-class MAP scores log prior_k + eta_k . T(x) - A(eta_k)."""
        t = self.family.suff_stat(x)
        offsets = np.log(self.priors) - np.array(
            [self.family.log_partition(e) for e in self.etas]
        )
        return t @ self.etas.T + offsets

    def predict_map(self, x):
        """argmax of score; ties go to the lowest class index."""
        s = self.score(x)
        return np.argmax(s, axis=-1) if s.ndim == 2 else int(np.argmax(s))

    def posteriors(self, x):
        """Stable softmax of the MAP scores; rows sum to one."""
        return softmax(self.score(x))


def fit_multiclass(family: Family, x, y, n_classes: int) -> MulticlassModel:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y)
    family.require_support(x)
    groups = _split_by_class(y, n_classes)
    t = family._suff_stat_batch(np.atleast_1d(x))
    etas, flags, priors = [], [], []
    for idx in groups:
        eta, flag = _class_eta(family, t[idx], idx.size)
        etas.append(eta)
        flags.append(flag)
        priors.append(idx.size / y.size)
    return MulticlassModel(family, np.array(priors), np.array(etas), tuple(flags))


@dataclass(frozen=True)
class ProductModel:
    """Conditionally independent features, one family per feature.

    Score component k is log prior_k plus the sum over features of
    eta_kj . T_j(x_j) - A_j(eta_kj): exponential-family Naive Bayes.
    """

    families: tuple[Family, ...]
    priors: np.ndarray
    etas: tuple[np.ndarray, ...]  # per feature, shape (K, suff_dim_j)
    degenerate: tuple[tuple[bool, ...], ...] = ()

    @property
    def n_features(self) -> int:
        return len(self.families)

    def score(self, x):
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 1
        rows = x.reshape(1, -1) if scalar else x
        if rows.shape[1] != self.n_features:
            raise ValueError(f"expected {self.n_features} features, got {rows.shape[1]}")
        total = np.broadcast_to(np.log(self.priors), (rows.shape[0], len(self.priors))).copy()
        for j, fam in enumerate(self.families):
            t = fam._suff_stat_batch(rows[:, j])
            a = np.array([fam.log_partition(e) for e in self.etas[j]])
            total += t @ self.etas[j].T - a
        return total[0] if scalar else total

    def predict_map(self, x):
        s = self.score(x)
        return np.argmax(s, axis=-1) if s.ndim == 2 else int(np.argmax(s))

    def posteriors(self, x):
        return softmax(self.score(x))

    def log_odds(self, x):
        if len(self.priors) != 2:
            raise ValueError("log_odds is defined for two-class models only")
        s = self.score(x)
        out = s[..., 1] - s[..., 0]
        return float(out) if np.ndim(out) == 0 else out


def fit_product(families, x, y, n_classes: int) -> ProductModel:
    fams = tuple(families)
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x.reshape(-1, 1)
    if x.shape[1] != len(fams):
        raise ValueError(f"expected {len(fams)} feature columns, got {x.shape[1]}")
    y = np.asarray(y)
    groups = _split_by_class(y, n_classes)
    priors = np.array([idx.size / y.size for idx in groups])
    etas, flags = [], []
    for j, fam in enumerate(fams):
        fam.require_support(x[:, j])
        t = fam._suff_stat_batch(x[:, j])
        per_class = [_class_eta(fam, t[idx], idx.size) for idx in groups]
        etas.append(np.array([e for e, _ in per_class]))
        flags.append(tuple(f for _, f in per_class))
    return ProductModel(fams, priors, tuple(etas), tuple(flags))
