import numpy as np
import pytest

from efda import (
    Bernoulli,
    Exponential,
    GammaKnownShape,
    LaplaceKnownLoc,
    NegBinomialKnownR,
    NormalFull,
    NormalKnownVar,
    Poisson,
    WeibullKnownShape,
)

# One representative instance per family, plus >= 20 valid natural
# parameters each, kept comfortably inside the open parameter space so
# finite-difference probes stay in-domain.
NEG_GRID = [-(10.0**t) for t in np.linspace(-1.0, 1.0, 21)]

FAMILY_GRIDS = [
    (NormalKnownVar(1.5), [np.array([v]) for v in np.linspace(-3.0, 3.0, 21)]),
    (
        NormalFull(),
        [
            np.array([e1, e2])
            for e1 in np.linspace(-2.0, 2.0, 5)
            for e2 in (-0.25, -0.5, -1.0, -2.0)
        ],
    ),
    (LaplaceKnownLoc(0.5), [np.array([v]) for v in NEG_GRID]),
    (Exponential(), [np.array([v]) for v in NEG_GRID]),
    (GammaKnownShape(2.5), [np.array([v]) for v in NEG_GRID]),
    (WeibullKnownShape(3.0), [np.array([v]) for v in NEG_GRID]),
    (Poisson(), [np.array([v]) for v in np.linspace(-2.0, 2.5, 21)]),
    (Bernoulli(), [np.array([v]) for v in np.linspace(-4.0, 4.0, 21)]),
    (NegBinomialKnownR(2.5), [np.array([v]) for v in np.linspace(-4.0, -0.05, 21)]),
]

ALL_FAMILIES = [fam for fam, _ in FAMILY_GRIDS]


def family_ids(entry):
    if isinstance(entry, tuple):
        return entry[0].name
    return entry.name


@pytest.fixture(params=FAMILY_GRIDS, ids=[f.name for f, _ in FAMILY_GRIDS])
def family_grid(request):
    return request.param
