"""Closed-form generative classification over exponential families."""

from .baselines import (
    GaussianClassModel,
    LogisticModel,
    fit_lda,
    fit_logistic,
    fit_qda,
    gaussian_posteriors,
    logistic_posteriors,
)
from .classifiers import (
    BinaryModel,
    MulticlassModel,
    ProductModel,
    fit_binary,
    fit_multiclass,
    fit_product,
)
from .errors import (
    DataFormatError,
    DegenerateDataError,
    DomainError,
    EfdaError,
    EmptyClassError,
    NonConvergenceError,
    SupportError,
    UnsupportedFamilyError,
)
from .families import (
    FAMILY_KINDS,
    Bernoulli,
    Exponential,
    Family,
    GammaKnownShape,
    LaplaceKnownLoc,
    NegBinomialKnownR,
    NormalFull,
    NormalKnownVar,
    Poisson,
    SuffStatMean,
    WeibullKnownShape,
    fit_weibull_shape,
    fit_weibull_shape_shared,
    parse_family,
)
from .metrics import (
    EstimatorStats,
    accuracy,
    cr_bound_log_odds,
    ece,
    estimator_stats,
    top_label,
    true_log_odds,
)
from .serialize import load_model, save_model

__version__ = "0.1.0"
