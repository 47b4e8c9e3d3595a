"""Seeded Monte-Carlo experiment drivers.

Each trial derives its generator from (master seed, stream, index)
through numpy's SeedSequence spawn keys, so results are bit-identical
across runs and across worker counts; aggregation is a sequential
reduction over trial index.  Failed trials (degenerate fits, empty
classes) are excluded from aggregates and counted, never dropped
silently.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .baselines import fit_lda, fit_logistic, fit_qda
from .classifiers import fit_binary, fit_multiclass
from .errors import DataFormatError, EfdaError
from .families import Family, WeibullKnownShape, fit_weibull_shape_shared
from .metrics import accuracy, cr_bound_log_odds, ece, top_label, true_log_odds
from .results import BenchmarkTable, fmt

METHODS = ("efda", "lda", "qda", "lr")
ABLATION_METHODS = ("efda", "efda_khat", "lda", "lr")

# Stream tags for SeedSequence spawn keys.
_STREAM_TRIAL = 0
_STREAM_GRID = 1
_STREAM_EFF = 2

BENCH_COLUMNS = (
    "experiment",
    "family",
    "n_classes",
    "n_train",
    "n_test",
    "alpha",
    "method",
    "trials",
    "failed",
    "acc_mean",
    "acc_sd",
    "ece_mean",
    "ece_sd",
)
TRIAL_COLUMNS = (
    "family",
    "n_classes",
    "n_train",
    "n_test",
    "alpha",
    "trial",
    "method",
    "accuracy",
    "ece",
)
EFFICIENCY_COLUMNS = ("n", "method", "trials", "failed", "variance", "mse", "cr_bound")
EFFICIENCY_TRIAL_COLUMNS = ("n", "trial", "method", "grid_index", "x0", "log_odds")


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: the generator's truth plus run sizes and seeds."""

    family: Family
    class_params: tuple            # conventional parameter per class
    n_train: int = 1000
    n_test: int = 2000
    alpha: float = 0.7             # P(Y = 1) for binary runs
    priors: tuple = ()             # optional explicit priors (multiclass)
    trials: int = 100
    seed: int = 0
    methods: tuple = METHODS
    ece_bins: int = 10
    fixed_counts: bool = False     # exact class counts instead of i.i.d. labels
    n_grid: tuple = ()
    alpha_grid: tuple = ()
    eval_grid_size: int = 100
    threads: int = 1
    store_trials: bool = False

    @property
    def n_classes(self) -> int:
        return len(self.class_params)

    def validate(self) -> None:
        if self.n_classes < 2:
            raise DataFormatError("need at least two class parameters")
        if self.trials < 1:
            raise DataFormatError("trials must be >= 1")
        if self.n_train < 2 * self.n_classes:
            raise DataFormatError("n_train must be at least twice the class count")
        if self.n_classes == 2 and not 0.0 < self.alpha < 1.0:
            raise DataFormatError("alpha must lie in (0, 1)")
        if self.priors and (
            len(self.priors) != self.n_classes
            or abs(sum(self.priors) - 1.0) > 1e-12
            or min(self.priors) <= 0.0
        ):
            raise DataFormatError("priors must be positive and sum to one")
        if self.ece_bins < 1:
            raise DataFormatError("ece_bins must be >= 1")
        unknown = set(self.methods) - set(METHODS) - set(ABLATION_METHODS)
        if unknown:
            raise DataFormatError(f"unknown methods: {sorted(unknown)}")

    def class_etas(self) -> np.ndarray:
        return np.array([self.family.eta_from_param(p) for p in self.class_params])

    def class_priors(self) -> np.ndarray:
        if self.priors:
            return np.array(self.priors, dtype=float)
        if self.n_classes == 2:
            return np.array([1.0 - self.alpha, self.alpha])
        return np.full(self.n_classes, 1.0 / self.n_classes)


def trial_rng(seed: int, stream: int, *index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(stream, *index))
    return np.random.Generator(np.random.PCG64(ss))


def _draw_labels(rng, priors: np.ndarray, n: int) -> np.ndarray:
    edges = np.cumsum(priors)
    return np.searchsorted(edges, rng.random(n), side="right").astype(int)


def _draw_features(rng, family: Family, etas: np.ndarray, y: np.ndarray) -> np.ndarray:
    x = np.empty(y.size, dtype=float)
    for k in range(len(etas)):
        idx = y == k
        x[idx] = family.sample(etas[k], rng, int(idx.sum()))
    return x


def generate_binary(config: ExperimentConfig, trial: int):
    """Train and test draws for one binary trial.

    Benchmark mode draws labels i.i.d.; fixed-count mode pins
    N1 = floor(n * alpha) and N0 = n - N1 per split.
    """
    rng = trial_rng(config.seed, _STREAM_TRIAL, trial)
    etas = config.class_etas()
    out = []
    for n in (config.n_train, config.n_test):
        if config.fixed_counts:
            n1 = int(math.floor(n * config.alpha))
            y = np.repeat([0, 1], [n - n1, n1])
        else:
            y = _draw_labels(rng, config.class_priors(), n)
        out.append((_draw_features(rng, config.family, etas, y), y))
    return out[0], out[1]


def generate_multiclass(config: ExperimentConfig, trial: int):
    rng = trial_rng(config.seed, _STREAM_TRIAL, trial)
    etas = config.class_etas()
    out = []
    for n in (config.n_train, config.n_test):
        y = _draw_labels(rng, config.class_priors(), n)
        out.append((_draw_features(rng, config.family, etas, y), y))
    return out[0], out[1]


def _posterior_matrix(method: str, family: Family, x_tr, y_tr, x_te, k: int):
    if method == "efda":
        model = fit_multiclass(family, x_tr, y_tr, k)
        return model.posteriors(x_te)
    if method == "efda_khat":
        k_hat = fit_weibull_shape_shared([x_tr[y_tr == c] for c in range(k)])
        model = fit_multiclass(WeibullKnownShape(k_hat), x_tr, y_tr, k)
        return model.posteriors(x_te)
    if method == "lda":
        return fit_lda(x_tr, y_tr, k).posteriors(x_te)
    if method == "qda":
        return fit_qda(x_tr, y_tr, k).posteriors(x_te)
    if method == "lr":
        return fit_logistic(x_tr, y_tr, k).posteriors(x_te)
    raise DataFormatError(f"unknown method {method!r}")


def _map_trials(config: ExperimentConfig, worker, n_trials: int) -> list:
    if config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            return list(pool.map(worker, range(n_trials)))
    return [worker(t) for t in range(n_trials)]


def _run_benchmark(config: ExperimentConfig, experiment: str, generate, methods):
    config.validate()
    k = config.n_classes

    def worker(trial: int):
        try:
            (x_tr, y_tr), (x_te, y_te) = generate(config, trial)
            per_method = {}
            for method in methods:
                post = _posterior_matrix(method, config.family, x_tr, y_tr, x_te, k)
                _, pred = top_label(post)
                if k == 2:
                    # Binary calibration scores the class-1 probability
                    # against the class-1 indicator; multiclass scores the
                    # top-label confidence against correctness.
                    cal = ece(post[:, 1], np.ones_like(y_te), y_te, bins=config.ece_bins)
                else:
                    conf = post[np.arange(len(pred)), pred]
                    cal = ece(conf, pred, y_te, bins=config.ece_bins)
                per_method[method] = (accuracy(pred, y_te), cal)
            return per_method
        except EfdaError as exc:
            return exc

    outcomes = _map_trials(config, worker, config.trials)

    alpha_cell = fmt(config.alpha) if k == 2 else "uniform"
    summary = BenchmarkTable(BENCH_COLUMNS)
    per_trial = BenchmarkTable(TRIAL_COLUMNS) if config.store_trials else None
    failed = sum(1 for o in outcomes if isinstance(o, EfdaError))
    if per_trial is not None:
        for trial, o in enumerate(outcomes):
            if isinstance(o, EfdaError):
                per_trial.append(
                    config.family.token(), k, config.n_train, config.n_test,
                    alpha_cell, trial, f"error:{type(o).__name__}", "", "",
                )
            else:
                for method in methods:
                    acc, cal = o[method]
                    per_trial.append(
                        config.family.token(), k, config.n_train, config.n_test,
                        alpha_cell, trial, method, acc, cal,
                    )
    for method in methods:
        acc = np.array([o[method][0] for o in outcomes if not isinstance(o, EfdaError)])
        cal = np.array([o[method][1] for o in outcomes if not isinstance(o, EfdaError)])
        acc_sd = float(acc.std(ddof=1)) if acc.size > 1 else 0.0
        ece_sd = float(cal.std(ddof=1)) if cal.size > 1 else 0.0
        summary.append(
            experiment, config.family.token(), k, config.n_train, config.n_test,
            alpha_cell, method, config.trials, failed,
            float(acc.mean()), acc_sd, float(cal.mean()), ece_sd,
        )
    return summary, per_trial


def run_binary_benchmark(config: ExperimentConfig):
    """Accuracy and ECE over M trials for the two-class setting."""
    if config.n_classes != 2:
        raise DataFormatError("binary benchmark needs exactly two class parameters")
    return _run_benchmark(config, "bench-binary", generate_binary, config.methods)


def run_multiclass_benchmark(config: ExperimentConfig):
    """MAP accuracy and top-label ECE for K >= 2 classes, uniform priors."""
    return _run_benchmark(config, "bench-multiclass", generate_multiclass, config.methods)


def _concat_tables(parts):
    out = BenchmarkTable(parts[0].columns)
    for part in parts:
        out.rows.extend(part.rows)
    return out


def _run_sweep(config: ExperimentConfig, experiment: str, points, override):
    summaries, trial_parts = [], []
    for point in points:
        sub = replace(config, n_grid=(), alpha_grid=(), **override(point))
        summary, per_trial = run_binary_benchmark(sub)
        summary = BenchmarkTable(
            summary.columns,
            [(experiment,) + row[1:] for row in summary.rows],
        )
        summaries.append(summary)
        if per_trial is not None:
            trial_parts.append(per_trial)
    return (
        _concat_tables(summaries),
        _concat_tables(trial_parts) if trial_parts else None,
    )


def run_sample_size_sweep(config: ExperimentConfig):
    """Binary benchmark repeated over the n_grid; rows carry n_train."""
    if not config.n_grid:
        raise DataFormatError("sweep needs a nonempty n_grid")
    return _run_sweep(config, "sweep-n", config.n_grid, lambda n: {"n_train": int(n)})


def run_imbalance_sweep(config: ExperimentConfig):
    """Binary benchmark repeated over the alpha grid."""
    if not config.alpha_grid:
        raise DataFormatError("sweep needs a nonempty alpha_grid")
    return _run_sweep(
        config, "sweep-alpha", config.alpha_grid, lambda a: {"alpha": float(a)}
    )


def _binary_log_odds_model(method: str, family: Family, x, y):
    if method == "efda":
        return fit_binary(family, x, y)
    if method == "efda_khat":
        k_hat = fit_weibull_shape_shared([x[y == 0], x[y == 1]])
        return fit_binary(WeibullKnownShape(k_hat), x, y)
    if method == "lda":
        return fit_lda(x, y, 2)
    if method == "qda":
        return fit_qda(x, y, 2)
    if method == "lr":
        return fit_logistic(x, y, 2)
    raise DataFormatError(f"unknown method {method!r}")


def run_efficiency(config: ExperimentConfig):
    """Variance and MSE of the log-odds estimate over a fixed x0 grid.

    Class counts are pinned per trial (N1 = floor(n alpha)); the grid is
    drawn once per run, half from each class-conditional, and shared by
    every n in the sweep.  Each (n, method) row reports the grid-averaged
    trial variance, grid-averaged MSE against the true log-odds, and the
    grid-averaged asymptotic variance bound.
    """
    config.validate()
    if config.n_classes != 2:
        raise DataFormatError("efficiency run needs exactly two class parameters")
    ns = tuple(int(n) for n in config.n_grid) or (100, 1000, 10000)
    etas = config.class_etas()
    half = config.eval_grid_size // 2
    grid_rng = trial_rng(config.seed, _STREAM_GRID, 0)
    x0 = np.concatenate(
        [
            config.family.sample(etas[0], grid_rng, half),
            config.family.sample(etas[1], grid_rng, config.eval_grid_size - half),
        ]
    )
    ell_star = true_log_odds(config.family, etas[0], etas[1], config.alpha, x0)

    summary = BenchmarkTable(EFFICIENCY_COLUMNS)
    per_trial = BenchmarkTable(EFFICIENCY_TRIAL_COLUMNS) if config.store_trials else None

    for n_idx, n in enumerate(ns):
        n1 = int(math.floor(n * config.alpha))
        n0 = n - n1
        y = np.repeat([0, 1], [n0, n1])

        def worker(trial: int):
            rng = trial_rng(config.seed, _STREAM_EFF, n_idx, trial)
            x = np.concatenate(
                [
                    config.family.sample(etas[0], rng, n0),
                    config.family.sample(etas[1], rng, n1),
                ]
            )
            try:
                return {
                    method: np.asarray(
                        _binary_log_odds_model(method, config.family, x, y).log_odds(x0)
                    )
                    for method in config.methods
                }
            except EfdaError as exc:
                return exc

        outcomes = _map_trials(config, worker, config.trials)
        failed = sum(1 for o in outcomes if isinstance(o, EfdaError))
        cr = float(
            np.mean(
                [
                    cr_bound_log_odds(config.family, etas[0], etas[1], n0, n1, point)
                    for point in x0
                ]
            )
        )
        if per_trial is not None:
            for trial, o in enumerate(outcomes):
                if isinstance(o, EfdaError):
                    per_trial.append(n, trial, f"error:{type(o).__name__}", "", "", "")
                    continue
                for method in config.methods:
                    for g, point in enumerate(x0):
                        per_trial.append(n, trial, method, g, point, o[method][g])
        for method in config.methods:
            ell = np.array([o[method] for o in outcomes if not isinstance(o, EfdaError)])
            variance = float(ell.var(axis=0).mean())
            mse = float(((ell - ell_star[None, :]) ** 2).mean(axis=0).mean())
            summary.append(n, method, config.trials, failed, variance, mse, cr)
    return summary, per_trial


def run_unknown_k_ablation(config: ExperimentConfig):
    """Known-shape EFDA vs shape-estimated EFDA (plus LDA/LR) across n.

    The shape is re-estimated each trial as the joint profile MLE over
    the per-class training features (shared shape, per-class scales) and
    plugged in as if known.
    """
    if not isinstance(config.family, WeibullKnownShape):
        raise DataFormatError("shape ablation requires a weibull family")
    if not config.n_grid:
        raise DataFormatError("shape ablation needs a nonempty n_grid")
    sub = replace(config, methods=ABLATION_METHODS)
    summary, per_trial = _run_sweep(
        sub, "ablate-shape", config.n_grid, lambda n: {"n_train": int(n)}
    )
    return summary, per_trial
