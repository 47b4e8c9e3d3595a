"""Closed-form checks for the nine families.

Every analytic quantity is validated against an independent route:
finite differences for the moment identities, quadrature/summation for
normalization, and brute-force likelihood scans for the MLE.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from efda import (
    Bernoulli,
    DegenerateDataError,
    DomainError,
    Exponential,
    GammaKnownShape,
    LaplaceKnownLoc,
    NegBinomialKnownR,
    NormalFull,
    NormalKnownVar,
    Poisson,
    SuffStatMean,
    SupportError,
    UnsupportedFamilyError,
    WeibullKnownShape,
    fit_weibull_shape,
    parse_family,
)

from conftest import FAMILY_GRIDS


class TestPointValues:
    """Hand-checkable values of the canonical pieces."""

    def test_log_partition(self):
        assert Poisson().log_partition(0.0) == pytest.approx(1.0, abs=1e-15)
        assert Exponential().log_partition(-1.0) == pytest.approx(0.0, abs=1e-15)
        assert WeibullKnownShape(3.0).log_partition(-1.0) == pytest.approx(
            math.log(1.0 / 3.0), rel=1e-12
        )
        assert NormalFull().log_partition([1.0, -0.5]) == pytest.approx(0.5, rel=1e-12)

    def test_mean_suffstat(self):
        assert Poisson().mean_suffstat(math.log(2.0))[0] == pytest.approx(2.0, rel=1e-12)
        assert Exponential().mean_suffstat(-0.5)[0] == pytest.approx(2.0, rel=1e-12)
        assert Bernoulli().mean_suffstat(0.0)[0] == pytest.approx(0.5, abs=1e-15)

    def test_var_suffstat(self):
        assert Poisson().var_suffstat(0.0) == pytest.approx(1.0, abs=1e-15)
        assert WeibullKnownShape(3.0).var_suffstat(-0.25) == pytest.approx(16.0, rel=1e-12)
        assert Exponential().var_suffstat(-2.0) == pytest.approx(0.25, rel=1e-12)

    def test_var_suffstat_rejects_normal_full(self):
        with pytest.raises(UnsupportedFamilyError):
            NormalFull().var_suffstat([0.0, -0.5])

    def test_suff_stat(self):
        assert WeibullKnownShape(3.0).suff_stat(2.0) == pytest.approx([8.0])
        assert NormalFull().suff_stat(3.0) == pytest.approx([3.0, 9.0])
        assert LaplaceKnownLoc(1.0).suff_stat(-2.0) == pytest.approx([3.0])
        assert NormalKnownVar(2.0).suff_stat(3.0) == pytest.approx([1.5])

    def test_log_density(self):
        assert Exponential().log_density(-1.0, 1.0) == pytest.approx(-1.0, rel=1e-12)
        assert Poisson().log_density(0.0, 0.0) == pytest.approx(-1.0, rel=1e-12)
        assert Bernoulli().log_density(0.0, 1.0) == pytest.approx(math.log(0.5), rel=1e-12)

    def test_mle_from_mean(self):
        poisson_eta = Poisson().mle_from_mean(SuffStatMean(2.0, 10))
        assert poisson_eta[0] == pytest.approx(math.log(2.0), rel=1e-12)
        assert Bernoulli().mle_from_mean(SuffStatMean(0.5, 10))[0] == pytest.approx(0.0, abs=1e-15)
        weib_eta = WeibullKnownShape(3.0).mle_from_mean(SuffStatMean(8.0, 10))
        assert weib_eta[0] == pytest.approx(-0.125, rel=1e-12)
        nb_eta = NegBinomialKnownR(2.0).mle_from_mean(SuffStatMean(2.0, 10))
        assert nb_eta[0] == pytest.approx(math.log(0.5), rel=1e-12)


class TestDomainAndSupport:
    def test_domain_errors(self):
        with pytest.raises(DomainError):
            Exponential().log_partition(0.0)
        with pytest.raises(DomainError):
            Exponential().log_partition(0.5)
        with pytest.raises(DomainError):
            WeibullKnownShape(2.0).mean_suffstat(1.0)
        with pytest.raises(DomainError):
            NormalFull().log_partition([0.0, 0.5])
        with pytest.raises(DomainError):
            NegBinomialKnownR(2.0).log_partition(0.1)
        with pytest.raises(DomainError):
            Poisson().log_partition([0.0, 0.0])

    def test_support_errors(self):
        with pytest.raises(SupportError):
            Exponential().suff_stat(-1.0)
        with pytest.raises(SupportError):
            WeibullKnownShape(2.0).log_density(-1.0, 0.0)
        with pytest.raises(SupportError):
            Poisson().suff_stat(2.5)
        with pytest.raises(SupportError):
            Bernoulli().suff_stat(2.0)
        with pytest.raises(SupportError):
            NegBinomialKnownR(1.5).suff_stat(-1.0)

    def test_aux_validation(self):
        with pytest.raises(ValueError):
            WeibullKnownShape(0.0)
        with pytest.raises(ValueError):
            GammaKnownShape(-1.0)
        with pytest.raises(ValueError):
            NormalKnownVar(0.0)

    def test_parse_family_round_trip(self):
        for token in ["poisson", "weibull:3.0", "gamma:2.5", "normal", "negbinomial:4.0"]:
            assert parse_family(token).token() == parse_family(token).token()
        with pytest.raises(ValueError):
            parse_family("weibull")
        with pytest.raises(ValueError):
            parse_family("poisson:2")
        with pytest.raises(ValueError):
            parse_family("cauchy")


# Components whose natural-parameter space is bounded by zero; finite
# difference steps there must shrink with the distance to the boundary.
_ZERO_BOUNDED = {
    "laplace": (0,),
    "exponential": (0,),
    "gamma": (0,),
    "weibull": (0,),
    "negbinomial": (0,),
    "normal": (1,),
}


def _fd_step(fam, eta, d, eps):
    if d in _ZERO_BOUNDED.get(fam.name, ()):
        return eps * abs(eta[d])
    return eps * max(1.0, abs(eta[d]))


class TestMomentIdentity:
    """Central finite differences of A recover A' and A''."""

    def test_gradient_matches_mean(self, family_grid):
        fam, grid = family_grid
        for eta in grid:
            mean = fam.mean_suffstat(eta)
            for d in range(fam.suff_dim):
                h = _fd_step(fam, eta, d, 1e-5)
                up, dn = eta.copy(), eta.copy()
                up[d] += h
                dn[d] -= h
                fd = (fam.log_partition(up) - fam.log_partition(dn)) / (2.0 * h)
                assert fd == pytest.approx(mean[d], rel=1e-6, abs=1e-8)

    def test_curvature_matches_variance(self, family_grid):
        fam, grid = family_grid
        if fam.suff_dim != 1:
            pytest.skip("variance identity is checked for scalar families")
        for eta in grid:
            h = _fd_step(fam, eta, 0, 1e-4)
            up = np.array([eta[0] + h])
            dn = np.array([eta[0] - h])
            fd = (
                fam.log_partition(up) - 2.0 * fam.log_partition(eta) + fam.log_partition(dn)
            ) / h**2
            assert fd == pytest.approx(fam.var_suffstat(eta), rel=1e-6, abs=1e-8)
            assert fam.var_suffstat(eta) > 0.0


class TestNormalization:
    """exp(log_density) integrates (sums) to one."""

    def test_continuous(self, family_grid):
        fam, grid = family_grid
        if fam.name in ("poisson", "bernoulli", "negbinomial"):
            pytest.skip("discrete family")
        lo, hi = (0.0, np.inf) if fam.name in ("exponential", "gamma", "weibull") else (-np.inf, np.inf)
        for eta in grid[::4]:
            total, err = quad(
                lambda t: math.exp(fam.log_density(eta, t)), lo, hi, limit=200
            )
            assert total == pytest.approx(1.0, abs=1e-6)

    def test_discrete(self, family_grid):
        fam, grid = family_grid
        if fam.name not in ("poisson", "bernoulli", "negbinomial"):
            pytest.skip("continuous family")
        for eta in grid:
            if fam.name == "bernoulli":
                xs = np.array([0.0, 1.0])
            else:
                mean = fam.mean_suffstat(eta)[0]
                sd = math.sqrt(fam.var_suffstat(eta))
                hi = int(mean + 40.0 * sd + 60.0)
                xs = np.arange(0, hi + 1, dtype=float)
            pmf = np.exp(fam.log_density(eta, xs))
            if fam.name != "bernoulli":
                assert pmf[-1] < 1e-12  # truncation leaves negligible tail mass
            assert pmf.sum() == pytest.approx(1.0, abs=1e-9)


class TestMLE:
    def test_round_trip(self, family_grid):
        fam, grid = family_grid
        for eta in grid:
            mean = SuffStatMean(fam.mean_suffstat(eta), 100)
            back = fam.mle_from_mean(mean)
            assert back == pytest.approx(eta, rel=1e-10)

    def test_boundary_means_raise(self):
        with pytest.raises(DegenerateDataError):
            Poisson().mle_from_mean(SuffStatMean(0.0, 10))
        with pytest.raises(DegenerateDataError):
            Bernoulli().mle_from_mean(SuffStatMean(1.0, 10))
        with pytest.raises(DegenerateDataError):
            Bernoulli().mle_from_mean(SuffStatMean(0.0, 10))
        with pytest.raises(DegenerateDataError):
            NormalFull().mle_from_mean(SuffStatMean([2.0, 4.0], 10))
        with pytest.raises(DegenerateDataError):
            NegBinomialKnownR(2.0).mle_from_mean(SuffStatMean(0.0, 10))

    def test_shrinkage_moves_off_boundary(self):
        eta = Poisson().mle_from_mean(Poisson().shrink_boundary_mean(SuffStatMean(0.0, 10)))
        assert eta[0] == pytest.approx(math.log(0.05), rel=1e-12)
        bern = Bernoulli().shrink_boundary_mean(SuffStatMean(1.0, 9))
        assert bern.value[0] == pytest.approx(9.5 / 10.0, rel=1e-12)
        shrunk = NormalFull().shrink_boundary_mean(SuffStatMean([2.0, 4.0], 10))
        eta2 = NormalFull().mle_from_mean(shrunk)
        assert eta2[1] < 0.0
        with pytest.raises(DegenerateDataError):
            Exponential().shrink_boundary_mean(SuffStatMean(0.0, 10))

    def test_argmax_on_small_samples(self, family_grid):
        """eta-hat beats a dense grid of perturbations in log-likelihood."""
        fam, grid = family_grid
        rng = np.random.default_rng(42)
        for eta_star in (grid[3], grid[-3]):
            x = fam.sample(eta_star, rng, 25)
            t_mean = fam._suff_stat_batch(x).mean(axis=0)
            try:
                eta_hat = fam.mle_from_mean(SuffStatMean(t_mean, 25))
            except DegenerateDataError:
                continue  # boundary draw; covered by shrinkage tests
            best = float(np.sum(fam.log_density(eta_hat, x)))
            for d in range(fam.suff_dim):
                for rel in np.linspace(-0.2, 0.2, 41):
                    if rel == 0.0:
                        continue
                    cand = eta_hat.copy()
                    cand[d] = eta_hat[d] * (1.0 + rel) + (0.0 if eta_hat[d] != 0.0 else rel)
                    if not fam.in_domain(cand):
                        continue
                    ll = float(np.sum(fam.log_density(cand, x)))
                    assert ll <= best + 1e-9


class TestSampler:
    def test_zero_draws(self):
        rng = np.random.default_rng(0)
        assert Exponential().sample(-1.0, rng, 0).size == 0

    def test_exponential_mean(self):
        rng = np.random.default_rng(20260810)
        x = Exponential().sample(-0.5, rng, 10**6)
        se = math.sqrt(4.0 / 10**6)
        assert abs(x.mean() - 2.0) < 3.0 * se

    def test_poisson_variance(self):
        rng = np.random.default_rng(20260810)
        x = Poisson().sample(math.log(3.0), rng, 10**6)
        # Var(s^2) ~ (mu4 - sigma^4)/n with Poisson mu4 = lam(1 + 3 lam).
        se = math.sqrt((3.0 * (1.0 + 9.0) - 9.0) / 10**6)
        assert abs(x.var() - 3.0) < 3.0 * se

    def test_suffstat_moments_all_families(self, family_grid):
        """Empirical mean/variance of T(X) track A' and A'' within 4 SE."""
        fam, grid = family_grid
        eta = grid[len(grid) // 2]
        rng = np.random.default_rng(7)
        n = 10**6
        t = fam._suff_stat_batch(fam.sample(eta, rng, n))
        mean = fam.mean_suffstat(eta)
        for d in range(fam.suff_dim):
            sd = float(t[:, d].std())
            assert abs(float(t[:, d].mean()) - mean[d]) < 4.0 * sd / math.sqrt(n)
        if fam.suff_dim == 1:
            v = fam.var_suffstat(eta)
            emp = t[:, 0] - float(t[:, 0].mean())
            m4 = float((emp**4).mean())
            se_var = math.sqrt(max(m4 - v**2, 0.0) / n)
            assert abs(float(emp.var()) - v) < 4.0 * se_var

    def test_determinism(self, family_grid):
        fam, grid = family_grid
        eta = grid[len(grid) // 2]
        a = fam.sample(eta, np.random.default_rng(123), 50)
        b = fam.sample(eta, np.random.default_rng(123), 50)
        assert np.array_equal(a, b)


class TestWeibullShapeFit:
    def test_recovers_shape(self):
        rng = np.random.default_rng(314)
        x = 2.0 * rng.weibull(3.0, 5000)
        assert abs(fit_weibull_shape(x) - 3.0) < 0.15

    def test_exponential_collapses_to_one(self):
        rng = np.random.default_rng(217)
        x = rng.exponential(1.7, 20000)
        assert abs(fit_weibull_shape(x) - 1.0) < 0.05

    def test_score_at_root_is_zero(self):
        rng = np.random.default_rng(11)
        x = 0.5 * rng.weibull(1.8, 400)
        k = fit_weibull_shape(x)
        logs = np.log(x)
        w = x**k
        score = float((w * logs).sum() / w.sum() - 1.0 / k - logs.mean())
        assert abs(score) <= 1e-10

    def test_degenerate_data(self):
        with pytest.raises(DegenerateDataError):
            fit_weibull_shape([1.0, 1.0, 1.0])

    def test_rejects_nonpositive(self):
        with pytest.raises(SupportError):
            fit_weibull_shape([1.0, -2.0, 3.0])


@st.composite
def scalar_family_and_eta(draw):
    fam = draw(
        st.sampled_from(
            [
                NormalKnownVar(1.5),
                LaplaceKnownLoc(0.5),
                Exponential(),
                GammaKnownShape(2.5),
                WeibullKnownShape(3.0),
                Poisson(),
                Bernoulli(),
                NegBinomialKnownR(2.5),
            ]
        )
    )
    if fam.name in ("normal_known_var", "bernoulli"):
        eta = draw(st.floats(-5.0, 5.0))
    elif fam.name == "poisson":
        eta = draw(st.floats(-3.0, 3.0))
    else:
        eta = -draw(st.floats(0.05, 20.0))
    return fam, np.array([eta])


@given(scalar_family_and_eta())
@settings(max_examples=80, deadline=None)
def test_mle_inverts_mean_property(fam_eta):
    fam, eta = fam_eta
    mean = SuffStatMean(fam.mean_suffstat(eta), 50)
    assert fam.mle_from_mean(mean) == pytest.approx(eta, rel=1e-9, abs=1e-12)


@given(scalar_family_and_eta())
@settings(max_examples=80, deadline=None)
def test_variance_positive_property(fam_eta):
    fam, eta = fam_eta
    assert fam.var_suffstat(eta) > 0.0
