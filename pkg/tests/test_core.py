import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.optimize import brentq, minimize_scalar
from scipy.special import gamma as gamma_fn

from bfw import (
    BFWParams,
    DomainError,
    FWParams,
    NoInteriorModeError,
    SaturationError,
    bfw_cdf,
    bfw_cumulative_hazard,
    bfw_hazard,
    bfw_log_pdf,
    bfw_mode,
    bfw_pdf,
    bfw_quantile,
    bfw_reversed_hazard,
    bfw_sample,
    bfw_survival,
    fw_cdf,
    fw_pdf,
    fw_quantile,
    ks_statistic,
    mode_equation,
    raw_moment_quadrature,
)
from bfw.inference import Dataset


def naive_pdf(x, params):
    # plain-arithmetic density, usable away from the extreme tails
    a, b, p, q = params.alpha, params.beta, params.p, params.q
    w = a * x - b / x
    const = gamma_fn(p + q) / (gamma_fn(p) * gamma_fn(q))
    return const * (a + b / x**2) * math.exp(w) * math.exp(-q * math.exp(w)) * (
        1.0 - math.exp(-math.exp(w))
    ) ** (p - 1.0)


def beta_cdf_finite_sum(y, p, q):
    """Finite-sum form of the Beta(p, q) CDF, valid for integer q only."""
    total = 0.0
    for i in range(int(q)):
        total += (-1.0) ** i * y ** (p + i) / (
            math.factorial(i) * gamma_fn(q - i) * (p + i)
        )
    return gamma_fn(p + q) / gamma_fn(p) * total


def quad_cdf(x, params):
    return quad(lambda t: naive_pdf(t, params), 0.0, x, limit=500)[0]


class TestParams:
    @pytest.mark.parametrize(
        "bad",
        [(0.0, 1, 1, 1), (1, -1, 1, 1), (1, 1, 0, 1), (1, 1, 1, math.inf)],
    )
    def test_validation(self, bad):
        with pytest.raises(DomainError):
            BFWParams(*bad)


class TestCdf:
    def test_reduces_to_base_for_unit_shapes(self):
        params = BFWParams(0.5, 0.8, 1.0, 1.0)
        xs = np.geomspace(0.01, 20.0, 50)
        assert np.allclose(bfw_cdf(xs, params), fw_cdf(xs, params.base), atol=1e-12, rtol=0)

    def test_against_quadrature(self, published_params):
        assert bfw_cdf(1.0, published_params) == pytest.approx(quad_cdf(1.0, published_params), abs=1e-9)

    def test_integer_q_finite_sum(self, rng):
        cases = [(2.0, 3)] + [(rng.uniform(0.5, 8.0), q) for q in range(1, 7)]
        for p, q in cases:
            params = BFWParams(0.4, 0.7, p, float(q))
            for x in (0.5, 1.0, 2.0):
                y = fw_cdf(x, params.base)
                assert bfw_cdf(x, params) == pytest.approx(
                    beta_cdf_finite_sum(y, p, q), abs=1e-10
                )

    def test_monotone_limits(self, published_params):
        xs = np.geomspace(1e-3, 50.0, 200)
        vals = bfw_cdf(xs, published_params)
        assert np.all(np.diff(vals) >= 0.0)
        assert bfw_cdf(1e-6, published_params) == pytest.approx(0.0, abs=1e-12)
        assert bfw_cdf(1e3, published_params) == pytest.approx(1.0, abs=1e-12)

    def test_domain(self, published_params):
        with pytest.raises(DomainError):
            bfw_cdf(-2.0, published_params)


class TestPdf:
    def test_reduces_to_base(self):
        params = BFWParams(0.5, 0.8, 1.0, 1.0)
        xs = np.geomspace(0.01, 20.0, 50)
        assert np.allclose(bfw_pdf(xs, params), fw_pdf(xs, params.base), atol=1e-12, rtol=1e-12)

    def test_integrates_to_one_at_paper_estimates(self, published_params):
        total = quad(
            lambda s: float(bfw_pdf(s / (1 - s), published_params)) / (1 - s) ** 2,
            0.0, 1.0, limit=1000,
        )[0]
        assert total == pytest.approx(1.0, abs=1e-7)

    def test_matches_cdf_derivative(self, published_params):
        x, h = 1.5, 1e-5
        fd = (bfw_cdf(x + h, published_params) - bfw_cdf(x - h, published_params)) / (2.0 * h)
        assert bfw_pdf(x, published_params) == pytest.approx(fd, rel=1e-5)

    def test_normalization_randomized(self, rng):
        for _ in range(20):
            params = BFWParams(
                rng.uniform(0.05, 5.0), rng.uniform(0.05, 5.0),
                rng.uniform(0.5, 40.0), rng.uniform(0.5, 40.0),
            )
            total = quad(
                lambda s: math.exp(bfw_log_pdf(s / (1 - s), params)) / (1 - s) ** 2,
                0.0, 1.0, limit=2000,
            )[0]
            assert total == pytest.approx(1.0, abs=1e-7)


class TestLogPdf:
    def test_exp_consistency(self, published_params, rng):
        xs = rng.uniform(0.05, 8.0, size=100)
        lp = bfw_log_pdf(xs, published_params)
        assert np.allclose(np.exp(lp), bfw_pdf(xs, published_params), rtol=1e-12)

    def test_reduction(self):
        params = BFWParams(0.5, 0.8, 1.0, 1.0)
        for x in (0.2, 1.0, 4.0):
            assert bfw_log_pdf(x, params) == pytest.approx(
                math.log(fw_pdf(x, params.base)), rel=1e-12
            )

    def test_finite_at_smallest_observation(self, published_params):
        value = bfw_log_pdf(0.101, published_params)
        assert math.isfinite(value)
        # cross-check against plain arithmetic, which still works here
        assert value == pytest.approx(math.log(naive_pdf(0.101, published_params)), rel=1e-10)

    def test_finite_deep_in_left_tail(self, published_params):
        # naive arithmetic underflows here; the log form must survive
        assert math.isfinite(bfw_log_pdf(1e-3, published_params))


class TestSurvivalHazards:
    def test_complement_exact(self, published_params):
        for x in (0.1, 0.75, 2.16, 6.0):
            assert bfw_survival(x, published_params) == 1.0 - bfw_cdf(x, published_params)

    def test_survival_limit(self, published_params):
        assert bfw_survival(1e-8, published_params) == pytest.approx(1.0, abs=1e-14)

    def test_survival_at_observation(self, published_params):
        expected = 1.0 - quad_cdf(2.160, published_params)
        assert bfw_survival(2.160, published_params) == pytest.approx(expected, abs=1e-9)

    def test_hazard_identity(self, published_params, rng):
        xs = rng.uniform(0.05, 5.0, size=100)
        h = bfw_hazard(xs, published_params)
        s = bfw_survival(xs, published_params)
        f = bfw_pdf(xs, published_params)
        assert np.allclose(h * s, f, rtol=1e-10)

    def test_hazard_reduces_to_base(self):
        params = BFWParams(0.5, 0.8, 1.0, 1.0)
        for x in (0.3, 1.0, 3.0):
            w = params.alpha * x - params.beta / x
            expected = (params.alpha + params.beta / x**2) * math.exp(w)
            assert bfw_hazard(x, params) == pytest.approx(expected, rel=1e-12)

    def test_hazard_against_quadrature(self, published_params):
        num = naive_pdf(1.0, published_params)
        den = 1.0 - quad_cdf(1.0, published_params)
        assert bfw_hazard(1.0, published_params) == pytest.approx(num / den, rel=1e-8)

    def test_hazard_saturation(self, published_params):
        with pytest.raises(SaturationError):
            bfw_hazard(1e4, published_params)

    def test_reversed_hazard_identity(self, published_params, rng):
        xs = rng.uniform(0.2, 5.0, size=50)
        r = bfw_reversed_hazard(xs, published_params)
        assert np.allclose(r * bfw_cdf(xs, published_params), bfw_pdf(xs, published_params), rtol=1e-10)

    def test_hazards_cross_at_median(self, published_params):
        median = bfw_quantile(0.5, published_params)
        assert bfw_reversed_hazard(median, published_params) == pytest.approx(
            bfw_hazard(median, published_params), rel=1e-8
        )

    def test_reversed_hazard_value(self, published_params):
        expected = naive_pdf(0.5, published_params) / quad_cdf(0.5, published_params)
        assert bfw_reversed_hazard(0.5, published_params) == pytest.approx(expected, rel=1e-8)

    def test_cumulative_hazard_identity(self, published_params):
        for x in (0.5, 1.0, 3.0):
            integral = quad(lambda t: float(bfw_hazard(t, published_params)), 1e-12, x,
                            limit=500)[0]
            assert bfw_cumulative_hazard(x, published_params) == pytest.approx(integral, abs=1e-6)

    def test_cumulative_hazard_limit_and_monotone(self, published_params):
        assert bfw_cumulative_hazard(1e-8, published_params) == pytest.approx(0.0, abs=1e-12)
        xs = np.geomspace(0.01, 20.0, 100)
        vals = bfw_cumulative_hazard(xs, published_params)
        assert np.all(np.diff(vals) >= 0.0)

    def test_matches_minus_log_survival(self, published_params):
        for x in (0.5, 2.0, 5.0):
            assert bfw_cumulative_hazard(x, published_params) == pytest.approx(
                -math.log(bfw_survival(x, published_params)), abs=1e-10
            )


class TestQuantile:
    def test_reduces_to_base(self):
        params = BFWParams(0.5, 0.8, 1.0, 1.0)
        for u in (0.1, 0.5, 0.9):
            assert bfw_quantile(u, params) == pytest.approx(
                fw_quantile(u, params.base), rel=1e-12
            )

    def test_roundtrip_at_paper_estimates(self, published_params):
        for u in (0.1, 0.5, 0.9):
            x = bfw_quantile(u, published_params)
            assert bfw_cdf(x, published_params) == pytest.approx(u, abs=1e-8)

    def test_roundtrip_tails(self, published_params):
        for u in (1e-4, 1e-2, 0.5, 1.0 - 1e-2, 1.0 - 1e-4):
            assert bfw_cdf(bfw_quantile(u, published_params), published_params) == pytest.approx(
                u, abs=1e-8
            )

    def test_median_against_bisection(self, published_params):
        root = brentq(lambda x: bfw_cdf(x, published_params) - 0.5, 1e-6, 1e3, xtol=1e-13)
        assert bfw_quantile(0.5, published_params) == pytest.approx(root, rel=1e-9)

    @pytest.mark.parametrize("bad", [0.0, 1.0, -0.5])
    def test_domain(self, bad, published_params):
        with pytest.raises(DomainError):
            bfw_quantile(bad, published_params)


class TestSample:
    def test_deterministic(self, published_params):
        a = bfw_sample(100, published_params, seed=7)
        b = bfw_sample(100, published_params, seed=7)
        assert np.array_equal(a, b)
        assert np.all(a > 0.0)

    def test_empty(self, published_params):
        assert bfw_sample(0, published_params, seed=1).size == 0

    def test_ks_against_model(self, published_params):
        n = 50_000
        draws = bfw_sample(n, published_params, seed=20240811)
        data = Dataset(times=draws, label="synthetic")
        stat = ks_statistic(data, lambda x: bfw_cdf(x, published_params))
        assert stat < 1.63 / math.sqrt(n)

    def test_mean_against_quadrature(self):
        params = BFWParams(0.5, 0.5, 2.0, 2.0)
        n = 100_000
        draws = bfw_sample(n, params, seed=99)
        se = draws.std(ddof=1) / math.sqrt(n)
        assert draws.mean() == pytest.approx(raw_moment_quadrature(1, params), abs=3.0 * se)


class TestMode:
    def test_stationarity_by_finite_difference(self, published_params):
        x_star = bfw_mode(published_params)
        h = 1e-5 * x_star
        fd = (bfw_pdf(x_star + h, published_params) - bfw_pdf(x_star - h, published_params)) / (2 * h)
        scale = bfw_pdf(x_star, published_params) / x_star
        assert abs(fd) / scale < 1e-6

    def test_equation_residual_and_local_max(self, published_params):
        x_star = bfw_mode(published_params)
        assert abs(mode_equation(x_star, published_params)) <= 1e-10
        delta = 1e-4 * x_star
        peak = bfw_pdf(x_star, published_params)
        assert peak >= bfw_pdf(x_star - delta, published_params)
        assert peak >= bfw_pdf(x_star + delta, published_params)

    def test_matches_golden_section_for_unit_shapes(self):
        params = BFWParams(0.5, 0.5, 1.0, 1.0)
        res = minimize_scalar(
            lambda x: -fw_pdf(x, FWParams(0.5, 0.5)),
            bracket=(0.05, 0.5, 5.0),
            method="golden",
            options=dict(xtol=1e-12),
        )
        # golden section locates a flat maximum only to about sqrt(eps)
        assert bfw_mode(params) == pytest.approx(res.x, rel=1e-6)

    def test_single_sign_change_at_paper_estimates(self, published_params):
        xs = np.geomspace(1e-6, 1e4, 400)
        signs = np.sign(mode_equation(xs, published_params))
        changes = np.sum(signs[:-1] != signs[1:])
        assert changes == 1

    def test_no_interior_mode_error(self):
        # within [1, 2] the density of this configuration has no stationary point
        params = BFWParams(0.5, 0.5, 1.0, 1.0)
        with pytest.raises(NoInteriorModeError):
            bfw_mode(params, bracket=(5.0, 10.0), grid_points=50)
