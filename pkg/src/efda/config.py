"""Declarative experiment configs and delimited data files.

Config files are INI-style: one ``[section]`` per experiment with
``key = value`` pairs.  Data files are delimiter-separated numeric
columns (comma or whitespace), ``#`` starts a comment, and an optional
header line is skipped automatically.
"""

from __future__ import annotations

import configparser
from dataclasses import fields

import numpy as np

from .errors import DataFormatError
from .families import parse_family
from .simulate import ExperimentConfig

_INT_KEYS = {"n_train", "n_test", "trials", "ece_bins", "eval_grid_size", "threads"}
_FLOAT_KEYS = {"alpha"}
_BOOL_KEYS = {"fixed_counts", "store_trials"}


def _parse_param(token: str):
    """One class parameter: a float, or mean:variance for the full Normal."""
    parts = token.split(":")
    if len(parts) == 1:
        return float(parts[0])
    if len(parts) == 2:
        return (float(parts[0]), float(parts[1]))
    raise DataFormatError(f"cannot parse class parameter {token!r}")


def _split_list(value: str) -> list[str]:
    return [tok.strip() for tok in value.split(",") if tok.strip()]


def parse_experiment(items: dict[str, str], section: str) -> ExperimentConfig:
    known = {f.name for f in fields(ExperimentConfig)}
    kwargs = {}
    for key, raw in items.items():
        if key not in known:
            raise DataFormatError(f"[{section}] unknown key {key!r}")
        try:
            if key == "family":
                kwargs[key] = parse_family(raw)
            elif key == "class_params":
                kwargs[key] = tuple(_parse_param(tok) for tok in _split_list(raw))
            elif key == "priors":
                kwargs[key] = tuple(float(tok) for tok in _split_list(raw))
            elif key == "methods":
                kwargs[key] = tuple(tok.lower() for tok in _split_list(raw))
            elif key == "n_grid":
                kwargs[key] = tuple(int(tok) for tok in _split_list(raw))
            elif key == "alpha_grid":
                kwargs[key] = tuple(float(tok) for tok in _split_list(raw))
            elif key == "seed":
                kwargs[key] = int(raw)
                if not 0 <= kwargs[key] < 2**64:
                    raise ValueError("seed out of range")
            elif key in _INT_KEYS:
                kwargs[key] = int(raw)
            elif key in _FLOAT_KEYS:
                kwargs[key] = float(raw)
            elif key in _BOOL_KEYS:
                if raw.lower() not in ("true", "false"):
                    raise ValueError("expected true/false")
                kwargs[key] = raw.lower() == "true"
            else:
                kwargs[key] = raw
        except (ValueError, DataFormatError) as exc:
            raise DataFormatError(f"[{section}] {key} = {raw!r}: {exc}") from exc
    if "family" not in kwargs or "class_params" not in kwargs:
        raise DataFormatError(f"[{section}] needs at least 'family' and 'class_params'")
    config = ExperimentConfig(**kwargs)
    config.validate()
    return config


def load_experiment(path, section: str) -> ExperimentConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh, source=str(path))
    except OSError as exc:
        raise DataFormatError(f"cannot read config {path}: {exc}") from exc
    except configparser.Error as exc:
        # configparser reports the offending line number itself.
        raise DataFormatError(f"malformed config: {exc}") from exc
    if not parser.has_section(section):
        raise DataFormatError(
            f"{path}: no [{section}] section (found {parser.sections()})"
        )
    return parse_experiment(dict(parser.items(section)), section)


def read_config_value(path, section: str, key: str) -> str | None:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh, source=str(path))
    except (OSError, configparser.Error) as exc:
        raise DataFormatError(f"malformed config: {exc}") from exc
    return parser.get(section, key, fallback=None)


def read_data_file(path, expect_labels: bool = True):
    """Numeric matrix from a delimited text file.

    Returns (features, labels) when expect_labels is set (labels are the
    last column), else the feature matrix alone.  Features come back as
    a 1-D array for single-feature files.
    """
    rows: list[list[float]] = []
    width = None
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise DataFormatError(f"cannot read data file {path}: {exc}") from exc
    with fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            tokens = line.replace(",", " ").split()
            try:
                values = [float(tok) for tok in tokens]
            except ValueError:
                if not rows and width is None:
                    continue  # header line
                raise DataFormatError(
                    f"{path}:{lineno}: non-numeric value in {line!r}"
                ) from None
            if width is None:
                width = len(values)
            elif len(values) != width:
                raise DataFormatError(
                    f"{path}:{lineno}: expected {width} columns, got {len(values)}"
                )
            rows.append(values)
    if not rows:
        raise DataFormatError(f"{path}: no data rows")
    data = np.array(rows)
    if not expect_labels:
        return data[:, 0] if data.shape[1] == 1 else data
    if data.shape[1] < 2:
        raise DataFormatError(f"{path}: need feature column(s) plus a label column")
    x = data[:, :-1]
    if x.shape[1] == 1:
        x = x[:, 0]
    labels = data[:, -1]
    if np.any(labels != np.floor(labels)) or labels.min() < 0:
        raise DataFormatError(f"{path}: labels must be nonnegative integers")
    return x, labels.astype(int)
