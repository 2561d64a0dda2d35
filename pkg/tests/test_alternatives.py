import dataclasses
import math

import numpy as np
import pytest
from scipy import stats
from scipy.integrate import quad

from edfnorm.alternatives import (
    TABLE_FAMILIES,
    builtin_family,
    contamination,
    g_star,
    local_derivatives,
    lrt_slope_coefficient,
    parse_family,
    sample,
)
from edfnorm.numerics import integrate_gauss, norm_cdf, norm_pdf

FAMILIES = {name: parse_family(name) for name in TABLE_FAMILIES}
GRID = np.linspace(-6, 6, 49)


@pytest.fixture(params=TABLE_FAMILIES)
def family(request):
    return FAMILIES[request.param]


class TestFamilyInvariants:
    def test_null_member(self, family):
        x = np.linspace(-8, 8, 101)
        assert np.allclose(family.density(x, 0.0), norm_pdf(x), rtol=1e-14, atol=0)

    @pytest.mark.parametrize("theta", [0.0, 0.05, 0.1])
    def test_normalized(self, family, theta):
        assert integrate_gauss(lambda x: family.density(x, theta)) == pytest.approx(1.0, abs=1e-8)

    @pytest.mark.parametrize("theta", [0.05, 0.1, 0.3])
    def test_cdf_is_integral_of_density(self, family, theta):
        for x in (-2.0, 0.0, 1.5):
            integral = quad(lambda t: family.density(t, theta), -12, x, epsabs=1e-13)[0]
            assert family.cdf(x, theta) == pytest.approx(integral, abs=1e-9)

    def test_derivative_integrates_to_zero(self, family):
        assert abs(integrate_gauss(family.density_theta_deriv_at_0)) <= 1e-8

    def test_cdf_derivative_by_quadrature(self, family):
        for x in GRID:
            integral = quad(family.density_theta_deriv_at_0, -10, x, epsabs=1e-13, limit=200)[0]
            assert family.cdf_theta_deriv_at_0(x) == pytest.approx(integral, abs=1e-8)

    def test_density_derivative_by_finite_difference(self, family):
        h = 1e-5
        x = GRID
        lo, _ = family.theta_range
        if lo >= 0:
            # one-sided, second order
            fd = (-3 * family.density(x, 0.0) + 4 * family.density(x, h) - family.density(x, 2 * h)) / (2 * h)
        else:
            fd = (family.density(x, h) - family.density(x, -h)) / (2 * h)
        assert np.max(np.abs(fd - family.density_theta_deriv_at_0(x))) <= 1e-6


class TestClosedForms:
    def test_lp1_at_zero(self):
        assert FAMILIES["lp1"].cdf_theta_deriv_at_0(0.0) == pytest.approx(-0.25, abs=1e-15)

    def test_lp2_at_zero(self):
        assert FAMILIES["lp2"].cdf_theta_deriv_at_0(0.0) == pytest.approx(-1.0, abs=1e-15)

    def test_lehmann_at_zero(self):
        assert FAMILIES["lehmann"].cdf_theta_deriv_at_0(0.0) == pytest.approx(0.5 * math.log(0.5), abs=1e-15)
        assert 0.5 * math.log(0.5) == pytest.approx(-0.3465736, abs=1e-7)


class TestLocalDerivatives:
    def test_contamination_shift(self):
        d = local_derivatives(contamination(1.0, 1.0))
        assert d.mu_prime == pytest.approx(1.0, abs=1e-8)
        assert d.sigma2_prime == pytest.approx(1.0, abs=1e-8)
        assert d.sigma_prime == pytest.approx(0.5, abs=1e-8)

    def test_contamination_scale(self):
        d = local_derivatives(contamination(0.0, 0.5))
        assert abs(d.mu_prime) <= 1e-8
        assert d.sigma2_prime == pytest.approx(-0.5, abs=1e-8)

    def test_lp2_against_quadrature(self):
        d = local_derivatives(FAMILIES["lp2"])
        oracle = quad(lambda x: -math.pi * x * norm_pdf(x) * math.cos(math.pi * norm_cdf(x)), -12, 12, epsabs=1e-13)[0]
        assert d.mu_prime == pytest.approx(oracle, abs=1e-10)

    def test_sigma_prime_identity(self, family):
        d = local_derivatives(family)
        assert d.sigma_prime == d.sigma2_prime / (2 * family.null_sigma)


class TestGStar:
    def test_contamination_closed_form(self):
        s = g_star(contamination(1.0, 1.0))
        x = np.linspace(-5, 5, 41)
        closed = norm_cdf(x - 1) - norm_cdf(x) + norm_pdf(x) * (1 + x / 2)
        assert np.max(np.abs(s(x) - closed)) <= 1e-8
        assert s(0.0) == pytest.approx(0.0575975, abs=1e-7)

    def test_vanishes_at_window_edges(self, family):
        s = g_star(family)
        assert abs(s(-10.0)) <= 1e-8
        assert abs(s(10.0)) <= 1e-8

    def test_finite_difference_of_population_drift(self, family):
        h = 1e-4
        mu = integrate_gauss(lambda x: x * family.density(x, h))
        sd = math.sqrt(integrate_gauss(lambda x: (x - mu) ** 2 * family.density(x, h)))
        x = np.linspace(-4, 4, 33)
        fd = (family.cdf(mu + sd * x, h) - norm_cdf(x)) / h
        assert np.max(np.abs(fd - g_star(family)(x))) <= 1e-3


class TestLRT:
    def test_contamination_shift(self):
        assert lrt_slope_coefficient(contamination(1.0, 1.0)) == pytest.approx(math.e - 2.5, abs=1e-8)

    def test_contamination_scale(self):
        assert lrt_slope_coefficient(contamination(0.0, 0.5)) == pytest.approx(2 / math.sqrt(3) - 1.125, abs=1e-8)

    def test_positive(self, family):
        assert lrt_slope_coefficient(family) > 0

    @pytest.mark.parametrize("c", [0.5, 2.0, 3.0])
    def test_reparametrization(self, family, c):
        scaled = dataclasses.replace(
            family,
            name=f"{family.name}*{c}",
            density=lambda x, t: family.density(x, c * t),
            density_theta_deriv_at_0=lambda x: c * family.density_theta_deriv_at_0(x),
            cdf_theta_deriv_at_0=lambda x: c * family.cdf_theta_deriv_at_0(x),
        )
        assert lrt_slope_coefficient(scaled) == pytest.approx(c * c * lrt_slope_coefficient(family), rel=1e-12)

    def test_vanishing_null_density_is_reported(self):
        # a very narrow null density underflows to 0 inside the window
        broken = dataclasses.replace(contamination(1.0, 1.0), null_sigma2=1e-4)
        with pytest.raises(FloatingPointError, match="node x="):
            lrt_slope_coefficient(broken)


class TestSampling:
    def test_null_member(self, family):
        x = sample(family, 0.0, 100_000, seed=5)
        d = stats.kstest(x, "norm").statistic
        assert d < stats.kstwo.ppf(0.99, 100_000)

    def test_lehmann_theta_one(self):
        x = sample(FAMILIES["lehmann"], 1.0, 100_000, seed=6)
        for t in (-1.0, 0.0, 1.0):
            p = norm_cdf(t) ** 2
            se = math.sqrt(p * (1 - p) / x.size)
            assert abs(np.mean(x <= t) - p) <= 3 * se

    def test_contamination_mean(self):
        x = sample(contamination(1.0, 1.0), 0.3, 100_000, seed=7)
        se = x.std() / math.sqrt(x.size)
        assert abs(x.mean() - 0.3) <= 3 * se

    @pytest.mark.parametrize("name, theta", [("lp1", 2.0), ("lp2", 0.3), ("lp2", -0.3), ("contam:0:0.5", 0.5)])
    def test_rejection_samplers_match_cdf(self, name, theta):
        fam = FAMILIES[name]
        x = sample(fam, theta, 100_000, seed=8)
        for t in (-1.5, -0.5, 0.0, 0.7, 1.5):
            p = float(fam.cdf(t, theta))
            se = math.sqrt(p * (1 - p) / x.size)
            assert abs(np.mean(x <= t) - p) <= 3.5 * se

    def test_deterministic(self, family):
        assert np.array_equal(sample(family, 0.1, 1000, seed=3), sample(family, 0.1, 1000, seed=3))

    @pytest.mark.parametrize(
        "name, theta", [("lehmann", -1.0), ("lp1", -0.1), ("lp2", 0.4), ("contam:1:1", 1.5), ("contam:1:1", -0.1)]
    )
    def test_out_of_range(self, name, theta):
        with pytest.raises(ValueError, match="outside the valid range"):
            sample(FAMILIES[name], theta, 10, seed=0)


class TestLookup:
    def test_aliases(self):
        assert builtin_family("lp1").name == "ley_paindaveine_1"
        assert builtin_family("ley_paindaveine_2").name == "ley_paindaveine_2"
        assert builtin_family("contamination", 0.5, 1.0).name == "contamination:0.5:1"

    @pytest.mark.parametrize("bad", ["nope", "contam:1", "contam:a:b", "lehmann:1", "contam:0:-1"])
    def test_bad_names(self, bad):
        with pytest.raises(ValueError):
            parse_family(bad)
