"""Command-line front end.

Subcommands: fit, predict, bench-binary, bench-multiclass, efficiency,
sweep-n, sweep-alpha, ablate-shape, plot.  Exit codes: 0 success, 1
usage error, 2 runtime/data error.  Every experiment is reproducible:
the config plus --seed fully determine all output bytes, regardless of
--threads.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .classifiers import fit_binary, fit_multiclass, fit_product
from .config import load_experiment, read_config_value, read_data_file
from .errors import DataFormatError, EfdaError
from .families import parse_family
from .plots import PLOT_KINDS, emit_svg, render
from .results import BenchmarkTable, fmt
from .serialize import load_model, save_model
from .simulate import (
    run_binary_benchmark,
    run_efficiency,
    run_imbalance_sweep,
    run_multiclass_benchmark,
    run_sample_size_sweep,
    run_unknown_k_ablation,
)

_EXPERIMENTS = {
    "bench-binary": run_binary_benchmark,
    "bench-multiclass": run_multiclass_benchmark,
    "efficiency": run_efficiency,
    "sweep-n": run_sample_size_sweep,
    "sweep-alpha": run_imbalance_sweep,
    "ablate-shape": run_unknown_k_ablation,
}


class _Parser(argparse.ArgumentParser):
    """argparse defaults to exit code 2 on usage errors; the contract is 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(1)


def _add_common(parser):
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--seed", type=int, default=None, help="seed override (u64)")
    parser.add_argument("--bins", type=int, default=None, help="ECE bin count override")
    parser.add_argument("--threads", type=int, default=1, help="parallel trial workers")
    parser.add_argument(
        "--per-trial", action="store_true", help="also dump per-trial rows"
    )


def build_parser() -> _Parser:
    parser = _Parser(prog="efda", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_fit = sub.add_parser("fit", help="fit a model from a delimited data file")
    p_fit.add_argument("data", help="feature column(s) then a label column")
    p_fit.add_argument(
        "--family",
        help="family token(s), e.g. 'weibull:3' or 'poisson,weibull:3,bernoulli'",
    )
    p_fit.add_argument("--config", help="config file with a [fit] section")
    p_fit.add_argument("--out", default=".", help="output directory")
    p_fit.add_argument("--name", default="model.txt", help="model file name")

    p_pred = sub.add_parser("predict", help="posteriors for a feature file")
    p_pred.add_argument("model", help="serialized model file")
    p_pred.add_argument("data", help="feature column(s), no label column")
    p_pred.add_argument("--out", default=".", help="output directory")
    p_pred.add_argument("--name", default="posteriors.csv", help="output file name")

    for name in _EXPERIMENTS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", required=True, help="experiment config file")
        _add_common(p)

    p_plot = sub.add_parser("plot", help="render a result CSV as an SVG chart")
    p_plot.add_argument("csv", help="result CSV produced by an experiment subcommand")
    p_plot.add_argument(
        "--kind", default="auto", choices=("auto",) + PLOT_KINDS, help="chart type"
    )
    p_plot.add_argument("--out", default=".", help="output directory")
    return parser


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _cmd_fit(args) -> int:
    token = args.family
    if token is None and args.config:
        token = read_config_value(args.config, "fit", "family")
    if not token:
        raise DataFormatError("fit needs --family or a [fit] family entry in --config")
    families = [parse_family(tok) for tok in token.split(",")]
    x, y = read_data_file(args.data)
    n_classes = int(y.max()) + 1
    if n_classes < 2:
        raise DataFormatError("data must contain at least two classes")
    d = 1 if x.ndim == 1 else x.shape[1]
    if len(families) != d:
        raise DataFormatError(f"data has {d} feature column(s), got {len(families)} families")
    if d > 1:
        model = fit_product(families, x, y, n_classes)
    elif n_classes == 2:
        model = fit_binary(families[0], x, y)
    else:
        model = fit_multiclass(families[0], x, y, n_classes)
    path = _out_dir(args) / args.name
    save_model(model, path)
    print(f"wrote {path}")
    return 0


def _cmd_predict(args) -> int:
    model = load_model(args.model)
    x = read_data_file(args.data, expect_labels=False)
    if hasattr(model, "posteriors"):
        post = np.atleast_2d(model.posteriors(x))
    else:  # BinaryModel
        p1 = np.atleast_1d(model.posterior(x))
        post = np.column_stack([1.0 - p1, p1])
    features = np.atleast_2d(x.T).T if x.ndim == 1 else x
    if features.ndim == 1:
        features = features.reshape(-1, 1)
    k = post.shape[1]
    table = BenchmarkTable(
        tuple(f"x{j}" for j in range(features.shape[1])) + tuple(f"p{c}" for c in range(k))
    )
    for row_x, row_p in zip(features, post):
        table.append(*row_x, *row_p)
    path = _out_dir(args) / args.name
    table.write_csv(path)
    print(f"wrote {path}")
    return 0


def _cmd_experiment(args) -> int:
    config = load_experiment(args.config, args.command)
    overrides = {"threads": args.threads, "store_trials": args.per_trial or config.store_trials}
    if args.seed is not None:
        if not 0 <= args.seed < 2**64:
            raise DataFormatError("--seed must be an unsigned 64-bit integer")
        overrides["seed"] = args.seed
    if args.bins is not None:
        overrides["ece_bins"] = args.bins
    config = replace(config, **overrides)
    summary, per_trial = _EXPERIMENTS[args.command](config)
    out = _out_dir(args)
    path = out / f"{args.command}.csv"
    summary.write_csv(path)
    print(f"wrote {path}")
    if per_trial is not None:
        trial_path = out / f"{args.command}_trials.csv"
        per_trial.write_csv(trial_path)
        print(f"wrote {trial_path}")
    return 0


def _cmd_plot(args) -> int:
    table = BenchmarkTable.read_csv(args.csv)
    path = _out_dir(args) / (Path(args.csv).stem + ".svg")
    emit_svg(table, args.kind, path)
    print(f"wrote {path}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "fit":
            return _cmd_fit(args)
        if args.command == "predict":
            return _cmd_predict(args)
        if args.command == "plot":
            return _cmd_plot(args)
        return _cmd_experiment(args)
    except EfdaError as exc:
        print(f"efda {args.command}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"efda {args.command}: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
