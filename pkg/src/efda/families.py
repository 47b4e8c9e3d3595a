"""Nine exponential families in natural-parameter form.

Each family encodes the canonical density

    f(x | eta) = h(x) * exp(eta . T(x) - A(eta))

through its log-partition ``A``, sufficient statistic ``T``, log base
measure ``log h``, analytic moments ``A'`` / ``A''``, the closed-form
maximum-likelihood map from a sufficient-statistic mean back to ``eta``,
and a seeded sampler.  Natural parameters are 1-vectors for the eight
scalar families and 2-vectors for the full Normal.

All objects are immutable and safe to share across threads.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import ClassVar

import numpy as np
from scipy.special import gammaln

from .errors import (
    DegenerateDataError,
    DomainError,
    NonConvergenceError,
    SupportError,
    UnsupportedFamilyError,
)

_LOG_2PI = math.log(2.0 * math.pi)


def softplus(t):
    """log(1 + e^t), stable for large |t|."""
    return np.logaddexp(0.0, t)


def sigmoid(t):
    """Logistic function, stable for large |t|."""
    return np.exp(t - np.logaddexp(0.0, t))


def logit(p: float) -> float:
    return math.log(p) - math.log1p(-p)


@dataclass(frozen=True)
class SuffStatMean:
    """Average sufficient statistic of ``count`` observations."""

    value: np.ndarray
    count: int

    def __post_init__(self):
        v = np.atleast_1d(np.asarray(self.value, dtype=float))
        object.__setattr__(self, "value", v)
        if not np.all(np.isfinite(v)):
            raise ValueError("sufficient-statistic mean must be finite")
        if self.count < 1:
            raise ValueError("count must be a positive integer")


def _as_batch(x):
    """Return (1-D float array view of x, was_scalar flag)."""
    arr = np.asarray(x, dtype=float)
    return np.atleast_1d(arr), arr.ndim == 0


class Family(ABC):
    """Interface shared by the nine families.

    ``eta`` arguments accept a plain float (scalar families) or a length-
    ``suff_dim`` vector; they are validated against the open natural-
    parameter space before use.  ``x`` arguments accept scalars or 1-D
    arrays and are validated against the support.
    """

    suff_dim: ClassVar[int] = 1
    name: ClassVar[str] = ""
    # Human-readable meaning of the per-class parameter accepted by
    # eta_from_param (used by config files and the CLI).
    param_label: ClassVar[str] = ""

    # -- natural-parameter space ------------------------------------

    def require_eta(self, eta) -> np.ndarray:
        v = np.atleast_1d(np.asarray(eta, dtype=float))
        if v.shape != (self.suff_dim,):
            raise DomainError(
                f"{self.name}: natural parameter must have length {self.suff_dim}"
            )
        if not np.all(np.isfinite(v)) or not self._eta_ok(v):
            raise DomainError(f"{self.name}: eta={v!r} outside the natural-parameter space")
        return v

    def in_domain(self, eta) -> bool:
        try:
            self.require_eta(eta)
        except DomainError:
            return False
        return True

    @abstractmethod
    def _eta_ok(self, eta: np.ndarray) -> bool: ...

    # -- support ------------------------------------------------------

    def require_support(self, x) -> None:
        arr, _ = _as_batch(x)
        if not np.all(np.isfinite(arr)) or not self._support_ok(arr):
            raise SupportError(f"{self.name}: value outside support")

    def in_support(self, x) -> bool:
        try:
            self.require_support(x)
        except SupportError:
            return False
        return True

    @abstractmethod
    def _support_ok(self, x: np.ndarray) -> bool: ...

    # -- canonical pieces ---------------------------------------------

    @abstractmethod
    def log_partition(self, eta) -> float:
        """A(eta)."""

    @abstractmethod
    def mean_suffstat(self, eta) -> np.ndarray:
        """gradient of A at eta, i.e. E[T(X)]."""

    def var_suffstat(self, eta) -> float:
        """A''(eta) = Var[T(X)] = Fisher information (scalar families)."""
        raise UnsupportedFamilyError(f"{self.name}: var_suffstat is scalar-only")

    @abstractmethod
    def suff_stat(self, x):
        """T(x); shape (suff_dim,) for scalars, (n, suff_dim) for arrays."""

    @abstractmethod
    def log_base_measure(self, x):
        """log h(x); matches the shape of x."""

    def log_density(self, eta, x):
        ev = self.require_eta(eta)
        self.require_support(x)
        arr, scalar = _as_batch(x)
        t = self._suff_stat_batch(arr)
        out = self._log_base_batch(arr) + t @ ev - self.log_partition(ev)
        return float(out[0]) if scalar else out

    # -- estimation ----------------------------------------------------

    @abstractmethod
    def mle_from_mean(self, mean: SuffStatMean) -> np.ndarray:
        """Unique eta solving mean = A'(eta); DegenerateDataError on the boundary."""

    def shrink_boundary_mean(self, mean: SuffStatMean) -> SuffStatMean:
        """Minimal-shrinkage fallback for boundary means.

        Only families whose samples can realistically hit the moment
        boundary (all-equal Bernoulli draws, all-zero counts, constant
        Normal data) define a rule; everything else re-raises.
        """
        raise DegenerateDataError(f"{self.name}: no shrinkage rule for boundary mean")

    # -- sampling -------------------------------------------------------

    @abstractmethod
    def sample(self, eta, rng: np.random.Generator, n: int) -> np.ndarray:
        """n i.i.d. draws from the density at eta."""

    # -- classical-parameter bridge --------------------------------------

    @abstractmethod
    def eta_from_param(self, theta) -> np.ndarray:
        """Natural parameter from the family's conventional parameter."""

    # -- aux serialization ------------------------------------------------

    def token(self) -> str:
        """Config/CLI token, e.g. 'weibull:3.0'."""
        aux = self._aux_value()
        return self.name if aux is None else f"{self.name}:{aux!r}"

    def _aux_value(self):
        return None

    # -- internals ---------------------------------------------------------

    def _suff_stat_batch(self, x: np.ndarray) -> np.ndarray:
        t = self.suff_stat(x)
        return t if t.ndim == 2 else t.reshape(-1, self.suff_dim)

    def _log_base_batch(self, x: np.ndarray) -> np.ndarray:
        return np.atleast_1d(np.asarray(self.log_base_measure(x), dtype=float))


class _ScalarFamily(Family):
    """Families with a 1-dimensional sufficient statistic."""

    def suff_stat(self, x):
        self.require_support(x)
        arr, scalar = _as_batch(x)
        t = self._t(arr)
        return np.array([t[0]]) if scalar else t.reshape(-1, 1)

    def _t(self, x: np.ndarray) -> np.ndarray:
        return x

    def mean_suffstat(self, eta) -> np.ndarray:
        ev = self.require_eta(eta)
        return np.array([self._a_prime(ev[0])])

    def var_suffstat(self, eta) -> float:
        ev = self.require_eta(eta)
        return self._a_dprime(ev[0])

    @abstractmethod
    def _a_prime(self, e: float) -> float: ...

    @abstractmethod
    def _a_dprime(self, e: float) -> float: ...


# ---------------------------------------------------------------------------
# Continuous families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NormalKnownVar(_ScalarFamily):
    """Normal with known variance: eta = mu/sigma, T(x) = x/sigma, A = eta^2/2."""

    sigma: float = 1.0
    name: ClassVar[str] = "normal_known_var"
    param_label: ClassVar[str] = "mean"

    def __post_init__(self):
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise ValueError("sigma must be a positive finite real")

    def _eta_ok(self, eta):
        return True

    def _support_ok(self, x):
        return True

    def log_partition(self, eta) -> float:
        ev = self.require_eta(eta)
        return 0.5 * ev[0] ** 2

    def _a_prime(self, e):
        return e

    def _a_dprime(self, e):
        return 1.0

    def _t(self, x):
        return x / self.sigma

    def log_base_measure(self, x):
        self.require_support(x)
        arr, scalar = _as_batch(x)
        out = -0.5 * _LOG_2PI - math.log(self.sigma) - arr**2 / (2.0 * self.sigma**2)
        return float(out[0]) if scalar else out

    def mle_from_mean(self, mean: SuffStatMean) -> np.ndarray:
        return np.array([float(mean.value[0])])

    def sample(self, eta, rng, n):
        ev = self.require_eta(eta)
        return rng.normal(self.sigma * ev[0], self.sigma, size=n)

    def eta_from_param(self, theta) -> np.ndarray:
        return np.array([float(theta) / self.sigma])

    def _aux_value(self):
        return self.sigma


@dataclass(frozen=True)
class NormalFull(Family):
    """Normal with unknown mean and variance: eta = (mu/s2, -1/(2 s2)), T = (x, x^2)."""

    suff_dim: ClassVar[int] = 2
    name: ClassVar[str] = "normal"
    param_label: ClassVar[str] = "mean:variance"

    def _eta_ok(self, eta):
        return eta[1] < 0.0

    def _support_ok(self, x):
        return True

    def log_partition(self, eta) -> float:
        ev = self.require_eta(eta)
        return -(ev[0] ** 2) / (4.0 * ev[1]) - 0.5 * math.log(-2.0 * ev[1])

    def mean_suffstat(self, eta) -> np.ndarray:
        ev = self.require_eta(eta)
        mu = -ev[0] / (2.0 * ev[1])
        s2 = -1.0 / (2.0 * ev[1])
        return np.array([mu, mu**2 + s2])

    def suff_stat(self, x):
        self.require_support(x)
        arr, scalar = _as_batch(x)
        t = np.stack([arr, arr**2], axis=-1)
        return t[0] if scalar else t

    def log_base_measure(self, x):
        self.require_support(x)
        arr, scalar = _as_batch(x)
        out = np.full(arr.shape, -0.5 * _LOG_2PI)
        return float(out[0]) if scalar else out

    def mle_from_mean(self, mean: SuffStatMean) -> np.ndarray:
        m1, m2 = float(mean.value[0]), float(mean.value[1])
        s2 = m2 - m1**2
        if s2 <= 0.0:
            raise DegenerateDataError("normal: zero sample variance")
        return np.array([m1 / s2, -1.0 / (2.0 * s2)])

    def shrink_boundary_mean(self, mean: SuffStatMean) -> SuffStatMean:
        m1, m2 = float(mean.value[0]), float(mean.value[1])
        floor = 1e-12 * max(1.0, abs(m2))
        return SuffStatMean(np.array([m1, m1**2 + floor]), mean.count)

    def sample(self, eta, rng, n):
        ev = self.require_eta(eta)
        s2 = -1.0 / (2.0 * ev[1])
        return rng.normal(ev[0] * s2, math.sqrt(s2), size=n)

    def eta_from_param(self, theta) -> np.ndarray:
        mu, s2 = (float(v) for v in theta)
        if s2 <= 0:
            raise ValueError("variance must be positive")
        return np.array([mu / s2, -1.0 / (2.0 * s2)])


@dataclass(frozen=True)
class LaplaceKnownLoc(_ScalarFamily):
    """Laplace with known location: eta = -1/b, T(x) = |x - mu|, A = log(-2/eta)."""

    mu: float = 0.0
    name: ClassVar[str] = "laplace"
    param_label: ClassVar[str] = "scale"

    def __post_init__(self):
        if not math.isfinite(self.mu):
            raise ValueError("mu must be finite")

    def _eta_ok(self, eta):
        return eta[0] < 0.0

    def _support_ok(self, x):
        return True

    def log_partition(self, eta) -> float:
        ev = self.require_eta(eta)
        return math.log(-2.0 / ev[0])

    def _a_prime(self, e):
        return -1.0 / e

    def _a_dprime(self, e):
        return 1.0 / e**2

    def _t(self, x):
        return np.abs(x - self.mu)

    def log_base_measure(self, x):
        self.require_support(x)
        arr, scalar = _as_batch(x)
        out = np.zeros(arr.shape)
        return 0.0 if scalar else out

    def mle_from_mean(self, mean: SuffStatMean) -> np.ndarray:
        m = float(mean.value[0])
        if m <= 0.0:
            raise DegenerateDataError("laplace: mean |x - mu| must be positive")
        return np.array([-1.0 / m])

    def sample(self, eta, rng, n):
        ev = self.require_eta(eta)
        return rng.laplace(self.mu, -1.0 / ev[0], size=n)

    def eta_from_param(self, theta) -> np.ndarray:
        b = float(theta)
        if b <= 0:
            raise ValueError("scale must be positive")
        return np.array([-1.0 / b])

    def _aux_value(self):
        return self.mu


@dataclass(frozen=True)
class Exponential(_ScalarFamily):
    """Exponential: eta = -1/theta, T(x) = x, A = -log(-eta)."""

    name: ClassVar[str] = "exponential"
    param_label: ClassVar[str] = "scale"

    def _eta_ok(self, eta):
        return eta[0] < 0.0

    def _support_ok(self, x):
        return bool(np.all(x > 0.0))

    def log_partition(self, eta) -> float:
        ev = self.require_eta(eta)
        return -math.log(-ev[0])

    def _a_prime(self, e):
        return -1.0 / e

    def _a_dprime(self, e):
        return 1.0 / e**2

    def log_base_measure(self, x):
        self.require_support(x)
        arr, scalar = _as_batch(x)
        return 0.0 if scalar else np.zeros(arr.shape)

    def mle_from_mean(self, mean: SuffStatMean) -> np.ndarray:
        m = float(mean.value[0])
        if m <= 0.0:
            raise DegenerateDataError("exponential: mean must be positive")
        return np.array([-1.0 / m])

    def sample(self, eta, rng, n):
        ev = self.require_eta(eta)
        return rng.exponential(-1.0 / ev[0], size=n)

    def eta_from_param(self, theta) -> np.ndarray:
        th = float(theta)
        if th <= 0:
            raise ValueError("scale must be positive")
        return np.array([-1.0 / th])


@dataclass(frozen=True)
class GammaKnownShape(_ScalarFamily):
    """Gamma with known shape a: eta = -1/theta, T(x) = x, A = -a log(-eta)."""

    a: float = 1.0
    name: ClassVar[str] = "gamma"
    param_label: ClassVar[str] = "scale"

    def __post_init__(self):
        if not (math.isfinite(self.a) and self.a > 0):
            raise ValueError("shape a must be a positive finite real")

    def _eta_ok(self, eta):
        return eta[0] < 0.0

    def _support_ok(self, x):
        return bool(np.all(x > 0.0))

    def log_partition(self, eta) -> float:
        ev = self.require_eta(eta)
        return -self.a * math.log(-ev[0])

    def _a_prime(self, e):
        return -self.a / e

    def _a_dprime(self, e):
        return self.a / e**2

    def log_base_measure(self, x):
        self.require_support(x)
        arr, scalar = _as_batch(x)
        out = (self.a - 1.0) * np.log(arr) - gammaln(self.a)
        return float(out[0]) if scalar else out

    def mle_from_mean(self, mean: SuffStatMean) -> np.ndarray:
        m = float(mean.value[0])
        if m <= 0.0:
            raise DegenerateDataError("gamma: mean must be positive")
        return np.array([-self.a / m])

    def sample(self, eta, rng, n):
        ev = self.require_eta(eta)
        return rng.gamma(self.a, -1.0 / ev[0], size=n)

    def eta_from_param(self, theta) -> np.ndarray:
        th = float(theta)
        if th <= 0:
            raise ValueError("scale must be positive")
        return np.array([-1.0 / th])

    def _aux_value(self):
        return self.a


@dataclass(frozen=True)
class WeibullKnownShape(_ScalarFamily):
    """Weibull with known shape k: eta = -1/lambda^k, T(x) = x^k.

    A(eta) = log(-1/(eta k)); the matching base measure is
    log h(x) = (k - 1) log x, so that the density integrates to one.
    """

    k: float = 1.0
    name: ClassVar[str] = "weibull"
    param_label: ClassVar[str] = "scale"

    def __post_init__(self):
        if not (math.isfinite(self.k) and self.k > 0):
            raise ValueError("shape k must be a positive finite real")

    def _eta_ok(self, eta):
        return eta[0] < 0.0

    def _support_ok(self, x):
        return bool(np.all(x > 0.0))

    def log_partition(self, eta) -> float:
        ev = self.require_eta(eta)
        return math.log(-1.0 / (ev[0] * self.k))

    def _a_prime(self, e):
        return -1.0 / e

    def _a_dprime(self, e):
        return 1.0 / e**2

    def _t(self, x):
        return x**self.k

    def log_base_measure(self, x):
        self.require_support(x)
        arr, scalar = _as_batch(x)
        out = (self.k - 1.0) * np.log(arr)
        return float(out[0]) if scalar else out

    def mle_from_mean(self, mean: SuffStatMean) -> np.ndarray:
        m = float(mean.value[0])
        if m <= 0.0:
            raise DegenerateDataError("weibull: mean of x^k must be positive")
        return np.array([-1.0 / m])

    def sample(self, eta, rng, n):
        ev = self.require_eta(eta)
        lam = (-1.0 / ev[0]) ** (1.0 / self.k)
        return lam * rng.weibull(self.k, size=n)

    def eta_from_param(self, theta) -> np.ndarray:
        lam = float(theta)
        if lam <= 0:
            raise ValueError("scale must be positive")
        return np.array([-(lam**-self.k)])

    def _aux_value(self):
        return self.k


# ---------------------------------------------------------------------------
# Discrete families
# ---------------------------------------------------------------------------


def _counts_ok(x: np.ndarray) -> bool:
    return bool(np.all((x >= 0) & (x == np.floor(x))))


@dataclass(frozen=True)
class Poisson(_ScalarFamily):
    """Poisson: eta = log lambda, T(x) = x, A = e^eta."""

    name: ClassVar[str] = "poisson"
    param_label: ClassVar[str] = "rate"

    def _eta_ok(self, eta):
        return True

    def _support_ok(self, x):
        return _counts_ok(x)

    def log_partition(self, eta) -> float:
        ev = self.require_eta(eta)
        return math.exp(ev[0])

    def _a_prime(self, e):
        return math.exp(e)

    def _a_dprime(self, e):
        return math.exp(e)

    def log_base_measure(self, x):
        self.require_support(x)
        arr, scalar = _as_batch(x)
        out = -gammaln(arr + 1.0)
        return float(out[0]) if scalar else out

    def mle_from_mean(self, mean: SuffStatMean) -> np.ndarray:
        m = float(mean.value[0])
        if m <= 0.0:
            raise DegenerateDataError("poisson: all counts are zero")
        return np.array([math.log(m)])

    def shrink_boundary_mean(self, mean: SuffStatMean) -> SuffStatMean:
        # Half a pseudo-count spread over the class.
        return SuffStatMean(mean.value + 0.5 / mean.count, mean.count)

    def sample(self, eta, rng, n):
        ev = self.require_eta(eta)
        return rng.poisson(math.exp(ev[0]), size=n).astype(float)

    def eta_from_param(self, theta) -> np.ndarray:
        lam = float(theta)
        if lam <= 0:
            raise ValueError("rate must be positive")
        return np.array([math.log(lam)])


@dataclass(frozen=True)
class Bernoulli(_ScalarFamily):
    """Bernoulli: eta = logit p, T(x) = x, A = log(1 + e^eta)."""

    name: ClassVar[str] = "bernoulli"
    param_label: ClassVar[str] = "success probability"

    def _eta_ok(self, eta):
        return True

    def _support_ok(self, x):
        return bool(np.all((x == 0.0) | (x == 1.0)))

    def log_partition(self, eta) -> float:
        ev = self.require_eta(eta)
        return float(softplus(ev[0]))

    def _a_prime(self, e):
        return float(sigmoid(e))

    def _a_dprime(self, e):
        p = float(sigmoid(e))
        return p * (1.0 - p)

    def log_base_measure(self, x):
        self.require_support(x)
        arr, scalar = _as_batch(x)
        return 0.0 if scalar else np.zeros(arr.shape)

    def mle_from_mean(self, mean: SuffStatMean) -> np.ndarray:
        m = float(mean.value[0])
        if not 0.0 < m < 1.0:
            raise DegenerateDataError("bernoulli: class mean on {0, 1} boundary")
        return np.array([logit(m)])

    def shrink_boundary_mean(self, mean: SuffStatMean) -> SuffStatMean:
        # Add half a success and half a failure.
        n = mean.count
        return SuffStatMean((mean.value * n + 0.5) / (n + 1.0), n)

    def sample(self, eta, rng, n):
        ev = self.require_eta(eta)
        return (rng.random(n) < sigmoid(ev[0])).astype(float)

    def eta_from_param(self, theta) -> np.ndarray:
        p = float(theta)
        if not 0.0 < p < 1.0:
            raise ValueError("success probability must lie in (0, 1)")
        return np.array([logit(p)])


@dataclass(frozen=True)
class NegBinomialKnownR(_ScalarFamily):
    """Negative binomial with known r: eta = log p, T(x) = x, A = -r log(1 - e^eta).

    x counts successes before the r-th failure; p = e^eta is the success
    probability, so the mean is r p / (1 - p).
    """

    r: float = 1.0
    name: ClassVar[str] = "negbinomial"
    param_label: ClassVar[str] = "mean"

    def __post_init__(self):
        if not (math.isfinite(self.r) and self.r > 0):
            raise ValueError("r must be a positive finite real")

    def _eta_ok(self, eta):
        return eta[0] < 0.0

    def _support_ok(self, x):
        return _counts_ok(x)

    def log_partition(self, eta) -> float:
        ev = self.require_eta(eta)
        # 1 - e^eta = -expm1(eta), computed without cancellation.
        return -self.r * math.log(-math.expm1(ev[0]))

    def _a_prime(self, e):
        return self.r / math.expm1(-e)

    def _a_dprime(self, e):
        q = math.expm1(-e)
        return self.r * (1.0 + q) / q**2

    def log_base_measure(self, x):
        self.require_support(x)
        arr, scalar = _as_batch(x)
        out = gammaln(arr + self.r) - gammaln(self.r) - gammaln(arr + 1.0)
        return float(out[0]) if scalar else out

    def mle_from_mean(self, mean: SuffStatMean) -> np.ndarray:
        m = float(mean.value[0])
        if m <= 0.0:
            raise DegenerateDataError("negbinomial: all counts are zero")
        return np.array([math.log(m / (self.r + m))])

    def shrink_boundary_mean(self, mean: SuffStatMean) -> SuffStatMean:
        return SuffStatMean(mean.value + 0.5 / mean.count, mean.count)

    def sample(self, eta, rng, n):
        ev = self.require_eta(eta)
        # numpy's parameterization counts failures before the r-th success,
        # which matches ours after swapping the roles of p and 1 - p.
        p = math.exp(ev[0])
        return rng.negative_binomial(self.r, 1.0 - p, size=n).astype(float)

    def eta_from_param(self, theta) -> np.ndarray:
        m = float(theta)
        if m <= 0:
            raise ValueError("mean must be positive")
        return np.array([math.log(m / (self.r + m))])

    def _aux_value(self):
        return self.r


# ---------------------------------------------------------------------------
# Registry and shape estimation
# ---------------------------------------------------------------------------

FAMILY_KINDS = {
    "normal_known_var": NormalKnownVar,
    "normal": NormalFull,
    "laplace": LaplaceKnownLoc,
    "exponential": Exponential,
    "gamma": GammaKnownShape,
    "weibull": WeibullKnownShape,
    "poisson": Poisson,
    "bernoulli": Bernoulli,
    "negbinomial": NegBinomialKnownR,
}

_AUX_REQUIRED = {"normal_known_var", "laplace", "gamma", "weibull", "negbinomial"}


def parse_family(token: str) -> Family:
    """Build a family from a config token such as 'weibull:3.0' or 'poisson'."""
    kind, _, aux = token.strip().partition(":")
    kind = kind.strip().lower()
    if kind not in FAMILY_KINDS:
        raise ValueError(f"unknown family {kind!r}; known: {sorted(FAMILY_KINDS)}")
    cls = FAMILY_KINDS[kind]
    if kind in _AUX_REQUIRED:
        if not aux:
            raise ValueError(f"family {kind!r} needs an auxiliary parameter, e.g. '{kind}:2.0'")
        return cls(float(aux))
    if aux:
        raise ValueError(f"family {kind!r} takes no auxiliary parameter")
    return cls()


def _solve_weibull_shape(groups: list[np.ndarray], tol: float, max_iter: int) -> float:
    """Root of the grouped profile score for a common Weibull shape.

    With per-group scales profiled out, the score is

        (1/n) sum_g N_g * (sum_g x^k log x / sum_g x^k) - 1/k - mean(log x),

    which is strictly increasing in k, so damped Newton steps confined to
    a bisection bracket always converge.  The single-group case reduces to
    the standard shape score equation.
    """
    logs = [np.log(g) for g in groups]
    n = sum(g.size for g in groups)
    mean_log = sum(float(lg.sum()) for lg in logs) / n
    within_var = sum(float(((lg - lg.mean()) ** 2).sum()) for lg in logs) / n
    if within_var == 0.0:
        raise DegenerateDataError("weibull shape fit: no spread within any group")

    def score_and_slope(k: float) -> tuple[float, float]:
        g_total = 0.0
        gp_total = 0.0
        for lg in logs:
            # Weights normalized by the largest exponent to avoid overflow.
            w = np.exp(k * (lg - lg.max()))
            sw = w.sum()
            m1 = float((w * lg).sum() / sw)
            m2 = float((w * lg**2).sum() / sw)
            g_total += lg.size * m1
            gp_total += lg.size * (m2 - m1**2)
        g = g_total / n - 1.0 / k - mean_log
        gp = gp_total / n + 1.0 / k**2
        return g, gp

    k = (math.pi / math.sqrt(6.0)) / math.sqrt(within_var)
    lo, hi = k, k
    g, _ = score_and_slope(k)
    for _ in range(200):
        if g < 0.0:
            lo = k
            if score_and_slope(hi)[0] > 0.0:
                break
            hi *= 2.0
            k = hi
        else:
            hi = k
            if score_and_slope(lo)[0] < 0.0:
                break
            lo /= 2.0
            k = lo
        g, _ = score_and_slope(k)
    else:
        raise NonConvergenceError("weibull shape fit: could not bracket the root")

    k = min(max(0.5 * (lo + hi), lo), hi)
    for _ in range(max_iter):
        g, gp = score_and_slope(k)
        if abs(g) <= tol:
            return k
        if g < 0.0:
            lo = k
        else:
            hi = k
        step = g / gp
        k_new = k - step
        if not (lo < k_new < hi):
            k_new = 0.5 * (lo + hi)
        k = k_new
    raise NonConvergenceError(f"weibull shape fit: no convergence in {max_iter} iterations")


def _shape_fit_group(data) -> np.ndarray:
    x = np.asarray(data, dtype=float)
    if x.ndim != 1 or x.size < 1:
        raise ValueError("need a nonempty 1-D sample")
    if not np.all(np.isfinite(x)) or np.any(x <= 0.0):
        raise SupportError("weibull shape fit needs strictly positive data")
    return x


def fit_weibull_shape(data, tol: float = 1e-10, max_iter: int = 100) -> float:
    """Profile-MLE Weibull shape from one positive sample.

    Solves sum(x^k log x) / sum(x^k) - 1/k - mean(log x) = 0, starting
    from the log-moment estimate k0 = (pi / sqrt(6)) / sd(log x).
    """
    x = _shape_fit_group(data)
    if x.size < 2:
        raise ValueError("need at least two observations")
    return _solve_weibull_shape([x], tol, max_iter)


def fit_weibull_shape_shared(samples, tol: float = 1e-10, max_iter: int = 100) -> float:
    """Common Weibull shape across groups with separate scales.

    This is the joint profile MLE for the shared-shape model: each
    group's scale is profiled out at its own sufficient-statistic mean.
    Pooling heterogeneous groups into one sample would instead fit a
    scale mixture and bias the shape low.
    """
    groups = [_shape_fit_group(s) for s in samples]
    if sum(g.size for g in groups) < 2:
        raise ValueError("need at least two observations")
    return _solve_weibull_shape(groups, tol, max_iter)
