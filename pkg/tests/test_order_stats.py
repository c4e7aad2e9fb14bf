import math

import numpy as np
import pytest
from scipy.integrate import quad

from bfw import (
    DomainError,
    ExpansionStabilityError,
    OrderIndex,
    bfw_cdf,
    bfw_pdf,
    order_stat_pdf,
    order_stat_pdf_expansion,
)


class TestOrderIndex:
    @pytest.mark.parametrize("r,n", [(0, 3), (4, 3), (-1, 5), (2.5, 5)])
    def test_validation(self, r, n):
        with pytest.raises(DomainError):
            OrderIndex(r, n)


class TestDirectForm:
    def test_single_observation_is_plain_density(self, published_params):
        idx = OrderIndex(1, 1)
        for x in (0.2, 1.0, 3.0):
            assert order_stat_pdf(x, idx, published_params) == pytest.approx(
                bfw_pdf(x, published_params), rel=1e-12
            )

    def test_integrates_to_one(self, published_params):
        idx = OrderIndex(2, 5)
        total = quad(
            lambda s: float(order_stat_pdf(s / (1 - s), idx, published_params)) / (1 - s) ** 2,
            0.0, 1.0, limit=1000,
        )[0]
        assert total == pytest.approx(1.0, abs=1e-6)

    def test_maximum_closed_form(self, published_params):
        n = 6
        idx = OrderIndex(n, n)
        x = 1.0
        expected = n * bfw_cdf(x, published_params) ** (n - 1) * bfw_pdf(x, published_params)
        assert order_stat_pdf(x, idx, published_params) == pytest.approx(expected, rel=1e-12)

    def test_minimum_closed_form(self, published_params):
        n = 6
        idx = OrderIndex(1, n)
        x = 1.0
        expected = n * (1.0 - bfw_cdf(x, published_params)) ** (n - 1) * bfw_pdf(x, published_params)
        assert order_stat_pdf(x, idx, published_params) == pytest.approx(expected, rel=1e-12)

    def test_sum_over_ranks_identity(self, published_params, rng):
        # sum_r f_{r:n}(x) = n f(x)
        xs = rng.uniform(0.05, 6.0, size=20)
        for n in (2, 3, 5):
            total = np.zeros_like(xs)
            for r in range(1, n + 1):
                total = total + np.asarray(order_stat_pdf(xs, OrderIndex(r, n), published_params))
            assert np.allclose(total, n * np.asarray(bfw_pdf(xs, published_params)), rtol=1e-10)

    def test_each_rank_integrates_to_one(self, published_params):
        n = 5
        for r in range(1, n + 1):
            idx = OrderIndex(r, n)
            total = quad(
                lambda s: float(order_stat_pdf(s / (1 - s), idx, published_params)) / (1 - s) ** 2,
                0.0, 1.0, limit=1000,
            )[0]
            assert total == pytest.approx(1.0, abs=1e-6)


class TestExpansionForm:
    def test_equivalence_at_paper_estimates(self, published_params):
        idx = OrderIndex(3, 7)
        for x in (0.3, 1.0, 4.0):
            direct = order_stat_pdf(x, idx, published_params)
            expansion = order_stat_pdf_expansion(x, idx, published_params)
            assert expansion == pytest.approx(direct, rel=1e-8)

    def test_maximum_collapses_to_single_term(self, published_params):
        n = 4
        idx = OrderIndex(n, n)
        x = 0.8
        expected = (
            math.factorial(n) / math.factorial(n - 1)
            * bfw_cdf(x, published_params) ** (n - 1)
            * bfw_pdf(x, published_params)
        )
        assert order_stat_pdf_expansion(x, idx, published_params) == pytest.approx(
            expected, rel=1e-12
        )

    def test_two_term_minimum(self, published_params):
        idx = OrderIndex(1, 2)
        x = 1.4
        expected = 2.0 * (1.0 - bfw_cdf(x, published_params)) * bfw_pdf(x, published_params)
        assert order_stat_pdf_expansion(x, idx, published_params) == pytest.approx(
            expected, rel=1e-12
        )

    def test_equivalence_randomized(self, published_params, rng):
        # wherever the expansion agrees to evaluate, it must match the
        # direct form; badly conditioned points refuse instead of lying
        evaluated = 0
        for _ in range(40):
            n = int(rng.integers(1, 31))
            r = int(rng.integers(1, n + 1))
            x = float(rng.uniform(0.05, 5.0))
            direct = order_stat_pdf(x, OrderIndex(r, n), published_params)
            try:
                expansion = order_stat_pdf_expansion(x, OrderIndex(r, n), published_params)
            except ExpansionStabilityError:
                continue
            evaluated += 1
            if direct > 1e-300:
                assert expansion == pytest.approx(direct, rel=1e-8)
        assert evaluated >= 20

    def test_stability_bound(self, published_params):
        with pytest.raises(ExpansionStabilityError):
            order_stat_pdf_expansion(1.0, OrderIndex(2, 31), published_params)

    def test_cancellation_refused(self, published_params):
        # F(3.27) ~ 0.82 with n - r = 17 cancels far past double precision
        with pytest.raises(ExpansionStabilityError):
            order_stat_pdf_expansion(3.27, OrderIndex(4, 21), published_params)
