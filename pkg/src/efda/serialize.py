"""Plain-text model files.

One ``key = value`` pair per line, floats written in shortest
round-trip decimal form so that save -> load reproduces every
coefficient bit for bit.  Vectors are space-separated on one line.
"""

from __future__ import annotations

import numpy as np

from .baselines import GaussianClassModel, LogisticModel
from .classifiers import BinaryModel, MulticlassModel, ProductModel
from .errors import DataFormatError
from .families import parse_family


def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _vec(values) -> str:
    return " ".join(fmt(float(v)) for v in np.atleast_1d(values))


def _parse_vec(text: str) -> np.ndarray:
    return np.array([float(tok) for tok in text.split()])


def _parse_bools(text: str) -> tuple[bool, ...]:
    return tuple(tok == "true" for tok in text.split())


def dumps(model) -> str:
    lines = []

    def put(key, value):
        lines.append(f"{key} = {value}")

    if isinstance(model, BinaryModel):
        put("type", "efda_binary")
        put("family", model.family.token())
        put("alpha", fmt(model.alpha))
        put("eta0", _vec(model.eta0))
        put("eta1", _vec(model.eta1))
        put("degenerate", " ".join(fmt(b) for b in model.degenerate))
    elif isinstance(model, MulticlassModel):
        put("type", "efda_multiclass")
        put("family", model.family.token())
        put("n_classes", model.n_classes)
        put("priors", _vec(model.priors))
        for k, eta in enumerate(model.etas):
            put(f"eta{k}", _vec(eta))
        put("degenerate", " ".join(fmt(b) for b in model.degenerate))
    elif isinstance(model, ProductModel):
        put("type", "efda_product")
        put("n_features", model.n_features)
        put("n_classes", len(model.priors))
        put("families", ",".join(f.token() for f in model.families))
        put("priors", _vec(model.priors))
        for j in range(model.n_features):
            for k in range(len(model.priors)):
                put(f"eta{k}_{j}", _vec(model.etas[j][k]))
        for j, flags in enumerate(model.degenerate):
            put(f"degenerate_{j}", " ".join(fmt(b) for b in flags))
    elif isinstance(model, GaussianClassModel):
        put("type", "gaussian")
        put("pooled", fmt(model.pooled))
        put("n_classes", model.n_classes)
        put("priors", _vec(model.priors))
        put("means", _vec(model.means))
        put("variances", _vec(model.variances))
        put("floored", " ".join(fmt(b) for b in model.floored))
    elif isinstance(model, LogisticModel):
        put("type", "logistic")
        put("n_classes", model.n_classes)
        put("converged", fmt(model.converged))
        put("n_iter", model.n_iter)
        for k in range(model.n_classes):
            put(f"coef{k}", _vec(model.coef[k]))
    else:
        raise TypeError(f"cannot serialize {type(model).__name__}")
    return "\n".join(lines) + "\n"


def loads(text: str):
    fields: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise DataFormatError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        fields[key.strip()] = value.strip()
    try:
        kind = fields["type"]
        if kind == "efda_binary":
            return BinaryModel(
                family=parse_family(fields["family"]),
                alpha=float(fields["alpha"]),
                eta0=_parse_vec(fields["eta0"]),
                eta1=_parse_vec(fields["eta1"]),
                degenerate=_parse_bools(fields["degenerate"]),
            )
        if kind == "efda_multiclass":
            n = int(fields["n_classes"])
            return MulticlassModel(
                family=parse_family(fields["family"]),
                priors=_parse_vec(fields["priors"]),
                etas=np.array([_parse_vec(fields[f"eta{k}"]) for k in range(n)]),
                degenerate=_parse_bools(fields["degenerate"]),
            )
        if kind == "efda_product":
            d = int(fields["n_features"])
            n = int(fields["n_classes"])
            fams = tuple(parse_family(tok) for tok in fields["families"].split(","))
            etas = tuple(
                np.array([_parse_vec(fields[f"eta{k}_{j}"]) for k in range(n)])
                for j in range(d)
            )
            flags = tuple(_parse_bools(fields[f"degenerate_{j}"]) for j in range(d))
            return ProductModel(fams, _parse_vec(fields["priors"]), etas, flags)
        if kind == "gaussian":
            return GaussianClassModel(
                priors=_parse_vec(fields["priors"]),
                means=_parse_vec(fields["means"]),
                variances=_parse_vec(fields["variances"]),
                pooled=fields["pooled"] == "true",
                floored=_parse_bools(fields["floored"]),
            )
        if kind == "logistic":
            n = int(fields["n_classes"])
            return LogisticModel(
                coef=np.array([_parse_vec(fields[f"coef{k}"]) for k in range(n)]),
                converged=fields["converged"] == "true",
                n_iter=int(fields["n_iter"]),
            )
    except KeyError as exc:
        raise DataFormatError(f"model file is missing field {exc}") from exc
    raise DataFormatError(f"unknown model type {kind!r}")


def save_model(model, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(model))


def load_model(path):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())
