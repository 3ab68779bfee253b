"""Tests for the exponential, EE and Hypoexponential building blocks."""

from __future__ import annotations

import math
from functools import partial

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose
from scipy import integrate

from ehypofit.distributions import (
    ExponentiatedDistribution,
    ee_cdf,
    ee_hazard,
    ee_pdf,
    ee_survival,
    exp_cdf,
    exponentiate_cdf,
    exponentiate_hazard,
    exponentiate_pdf,
    exponentiate_survival,
    hypo_cdf,
    hypo_coefficients,
    hypo_hazard,
    hypo_pdf,
    hypo_survival,
)
from ehypofit.ehypo import ehypo_cdf, ehypo_pdf, ehypo_survival
from ehypofit.exceptions import (
    CoefficientSingularityError,
    DomainError,
    TailSaturationWarning,
    UnboundedDensityWarning,
)
from ehypofit.models import EEParams, EHypoParams, RateVector
from tests.constants import EXAMPLE_COEFFICIENTS, EXAMPLE_RATES
from tests.strategies import distinct_rates

GRID = np.linspace(0.05, 6.0, 40)
FD_STEP = 1e-5


class TestExpCdf:
    """Tests for exp_cdf."""

    def test_values(self):
        """Test exp_cdf against 1 - exp(-rate t)."""
        assert exp_cdf(2.0, 1.5) == pytest.approx(1 - math.exp(-3.0), rel=1e-15)

    def test_outside_support(self):
        """Test exp_cdf is 0 at and below 0."""
        assert_allclose(exp_cdf(1.0, np.array([-1.0, 0.0])), [0.0, 0.0])

    def test_small_time_precision(self):
        """Test exp_cdf keeps relative accuracy for tiny arguments."""
        assert exp_cdf(1.0, 1e-12) == pytest.approx(1e-12, rel=1e-9)

    def test_invalid_rate(self):
        """Test non-positive rates are rejected."""
        with pytest.raises(DomainError):
            exp_cdf(0.0, 1.0)

    def test_non_finite_time(self):
        """Test NaN times are rejected."""
        with pytest.raises(DomainError):
            exp_cdf(1.0, np.array([1.0, np.nan]))


class TestExponentiatedExponential:
    """Tests for the EE family."""

    def test_cdf_closed_form(self):
        """Test ee_cdf equals (1 - exp(-rate t)) ** exponent."""
        p = EEParams(rate=0.7, exponent=2.5)
        assert_allclose(ee_cdf(p, GRID), (1 - np.exp(-0.7 * GRID)) ** 2.5, rtol=1e-12)

    def test_exponent_one_is_exponential(self):
        """Test EE with exponent 1 reduces to the exponential."""
        p = EEParams(rate=1.3, exponent=1.0)
        assert_allclose(ee_cdf(p, GRID), exp_cdf(1.3, GRID), rtol=1e-12)
        assert_allclose(ee_hazard(p, GRID), np.full_like(GRID, 1.3), rtol=1e-9)

    @pytest.mark.parametrize("exponent", [0.4, 1.0, 3.0])
    def test_pdf_is_cdf_derivative(self, exponent):
        """Test central differences of ee_cdf match ee_pdf."""
        p = EEParams(rate=1.2, exponent=exponent)
        fd = (ee_cdf(p, GRID + FD_STEP) - ee_cdf(p, GRID - FD_STEP)) / (2 * FD_STEP)
        assert_allclose(fd, ee_pdf(p, GRID), atol=1e-6)

    @pytest.mark.parametrize("exponent", [0.6, 2.0])
    def test_pdf_integrates_to_one(self, exponent):
        """Test the EE density integrates to 1."""
        p = EEParams(rate=0.9, exponent=exponent)
        head, _ = integrate.quad(lambda t: ee_pdf(p, t), 0, 1, limit=200)
        tail, _ = integrate.quad(lambda t: ee_pdf(p, t), 1, np.inf, limit=200)
        assert head + tail == pytest.approx(1.0, abs=1e-7)

    def test_pdf_at_zero(self):
        """Test the density at 0 for exponents below, at and above 1."""
        assert ee_pdf(EEParams(rate=2.0, exponent=1.0), 0.0) == 2.0
        assert ee_pdf(EEParams(rate=2.0, exponent=2.0), 0.0) == 0.0
        with pytest.warns(UnboundedDensityWarning):
            assert ee_pdf(EEParams(rate=2.0, exponent=0.5), 0.0) == np.inf

    def test_survival_upper_tail(self):
        """Test survival keeps relative accuracy where the CDF rounds to 1."""
        p = EEParams(rate=1.0, exponent=2.0)
        t = 40.0
        expected = 2 * math.exp(-t) - math.exp(-2 * t)
        assert ee_survival(p, t) == pytest.approx(expected, rel=1e-9)

    def test_hazard_is_ratio(self):
        """Test ee_hazard equals pdf / survival."""
        p = EEParams(rate=0.5, exponent=1.7)
        assert_allclose(ee_hazard(p, GRID), ee_pdf(p, GRID) / ee_survival(p, GRID), rtol=1e-12)

    def test_invalid_params(self):
        """Test non-positive parameters are rejected."""
        with pytest.raises(DomainError):
            EEParams(rate=-1.0, exponent=1.0)
        with pytest.raises(DomainError):
            EEParams(rate=1.0, exponent=0.0)


class TestHypoCoefficients:
    """Tests for hypo_coefficients."""

    def test_three_stage_example(self):
        """Test rates (5, 4, 3) give the integer coefficients (6, -15, 10)."""
        coeffs = hypo_coefficients(EXAMPLE_RATES)
        assert_allclose(coeffs.a, EXAMPLE_COEFFICIENTS, rtol=0, atol=1e-12)

    def test_single_stage(self):
        """Test one stage has the single coefficient 1."""
        assert hypo_coefficients([2.5]).a == (1.0,)

    def test_accepts_rate_vector(self):
        """Test a RateVector and a plain list give the same coefficients."""
        assert hypo_coefficients(RateVector(rates=(1.0, 3.0))).a == hypo_coefficients([1.0, 3.0]).a

    @settings(max_examples=200, derandomize=True, deadline=None)
    @given(distinct_rates())
    def test_coefficients_sum_to_one(self, rates):
        """Test the coefficients sum to 1 for random distinct rates."""
        a = np.asarray(hypo_coefficients(rates).a)
        assert a.sum() == pytest.approx(1.0, abs=1e-8 * max(1.0, np.abs(a).max()))

    @settings(max_examples=200, derandomize=True, deadline=None)
    @given(distinct_rates(max_size=8, min_ratio=1.5))
    def test_coefficients_sum_to_one_up_to_eight_stages(self, rates):
        """Test the coefficients of up to eight separated stages sum to 1 within 1e-10."""
        assert abs(math.fsum(hypo_coefficients(rates).a) - 1.0) <= 1e-10

    def test_coalescent_rates(self):
        """Test rates closer than the distinctness tolerance are rejected."""
        with pytest.raises(CoefficientSingularityError):
            hypo_coefficients([1.0, 1.0 + 1e-12])

    def test_empty_rates(self):
        """Test an empty rate list is rejected."""
        with pytest.raises(DomainError):
            hypo_coefficients([])

    def test_nonpositive_rate(self):
        """Test a non-positive rate is rejected."""
        with pytest.raises(DomainError):
            hypo_coefficients([1.0, -2.0])

    def test_revalidates_unchecked_rate_vector(self):
        """Test a RateVector built without validation is still checked."""
        unchecked = RateVector.model_construct(rates=(2.0, 2.0))
        with pytest.raises(CoefficientSingularityError):
            hypo_coefficients(unchecked)


class TestHypoexponential:
    """Tests for the Hypoexponential evaluators."""

    def test_single_stage_is_exponential(self):
        """Test one stage reduces to the exponential distribution."""
        assert_allclose(hypo_cdf([0.8], GRID), exp_cdf(0.8, GRID), rtol=1e-12)
        assert_allclose(hypo_hazard([0.8], GRID), np.full_like(GRID, 0.8), rtol=1e-9)

    def test_two_stage_density(self):
        """Test the two-stage density against the convolution formula."""
        a, b = 1.0, 2.5
        expected = a * b / (b - a) * (np.exp(-a * GRID) - np.exp(-b * GRID))
        assert_allclose(hypo_pdf([a, b], GRID), expected, rtol=1e-10)

    def test_order_invariance(self):
        """Test the distribution does not depend on the order of the rates."""
        assert_allclose(hypo_cdf([3.0, 1.0, 2.0], GRID), hypo_cdf([1.0, 2.0, 3.0], GRID), rtol=1e-10)

    def test_small_time_cdf(self):
        """Test the CDF near 0 matches its Taylor series t^2 - t^3 + 7 t^4 / 12."""
        t = 1e-4
        assert hypo_cdf([1.0, 2.0], t) == pytest.approx(t**2 - t**3 + 7 * t**4 / 12, rel=1e-6)

    def test_upper_tail_survival(self):
        """Test survival keeps relative accuracy far in the tail."""
        t = 60.0
        assert hypo_survival([1.0, 2.0], t) == pytest.approx(2 * math.exp(-t) - math.exp(-2 * t), rel=1e-9)

    def test_support(self):
        """Test values at and below 0."""
        t = np.array([-1.0, 0.0])
        assert_allclose(hypo_cdf(EXAMPLE_RATES, t), [0.0, 0.0])
        assert_allclose(hypo_survival(EXAMPLE_RATES, t), [1.0, 1.0])
        assert_allclose(hypo_pdf(EXAMPLE_RATES, t), [0.0, 0.0], atol=1e-12)

    def test_scalar_in_scalar_out(self):
        """Test a scalar time gives a Python float."""
        assert isinstance(hypo_cdf(EXAMPLE_RATES, 1.0), float)

    def test_pdf_is_cdf_derivative(self):
        """Test central differences of hypo_cdf match hypo_pdf."""
        fd = (hypo_cdf(EXAMPLE_RATES, GRID + FD_STEP) - hypo_cdf(EXAMPLE_RATES, GRID - FD_STEP)) / (2 * FD_STEP)
        assert_allclose(fd, hypo_pdf(EXAMPLE_RATES, GRID), atol=1e-6)

    @pytest.mark.parametrize("rates", [(0.7,), (0.5, 2.0), (5.0, 4.0, 3.0)])
    def test_pdf_integrates_to_one(self, rates):
        """Test the density integrates to 1."""
        total, _ = integrate.quad(lambda t: hypo_pdf(rates, t), 0, np.inf, limit=200)
        assert total == pytest.approx(1.0, abs=1e-7)

    @settings(max_examples=50, derandomize=True, deadline=None)
    @given(distinct_rates(min_ratio=1.5))
    def test_cdf_nondecreasing_to_one(self, rates):
        """Test the CDF starts at 0, never decreases and reaches 1 by t = 50 / min(rates)."""
        t = np.linspace(0.0, 50.0 / min(rates), 2001)
        cdf = hypo_cdf(rates, t)
        assert cdf[0] == 0.0
        assert np.all(np.diff(cdf) >= -1e-14)
        assert cdf[-1] == pytest.approx(1.0, abs=1e-12)

    def test_hazard_saturates(self):
        """Test the hazard is +inf with a warning once survival underflows."""
        with pytest.warns(TailSaturationWarning):
            assert hypo_hazard([1.0, 2.0], 800.0) == np.inf

    def test_hazard_tends_to_smallest_rate(self):
        """Test the hazard approaches the smallest rate in the tail."""
        assert hypo_hazard([1.0, 2.0, 4.0], 30.0) == pytest.approx(1.0, rel=1e-6)


class TestExponentiation:
    """Tests for the generic exponentiation of a base distribution."""

    def test_exponentiated_exponential(self):
        """Test exponentiating the exponential gives the EE family."""
        p = EEParams(rate=1.4, exponent=2.2)
        cdf = lambda t: exp_cdf(1.4, t)  # noqa: E731
        pdf = lambda t: 1.4 * np.exp(-1.4 * np.asarray(t))  # noqa: E731
        assert_allclose(exponentiate_cdf(cdf, 2.2, GRID), ee_cdf(p, GRID), rtol=1e-12)
        assert_allclose(exponentiate_pdf(cdf, pdf, 2.2, GRID), ee_pdf(p, GRID), rtol=1e-10)
        assert_allclose(exponentiate_survival(cdf, 2.2, GRID), ee_survival(p, GRID), rtol=1e-9)
        assert_allclose(exponentiate_hazard(cdf, pdf, 2.2, GRID), ee_hazard(p, GRID), rtol=1e-9)

    def test_distribution_matches_ehypo(self, example_params):
        """Test exponentiating the Hypoexponential gives the EHypo family."""
        dist = ExponentiatedDistribution(
            cdf_fn=lambda t: hypo_cdf(EXAMPLE_RATES, t),
            pdf_fn=lambda t: hypo_pdf(EXAMPLE_RATES, t),
            exponent=3.0,
            survival_fn=lambda t: hypo_survival(EXAMPLE_RATES, t),
        )
        assert_allclose(dist.cdf(GRID), ehypo_cdf(example_params, GRID), rtol=1e-10)
        assert_allclose(dist.pdf(GRID), ehypo_pdf(example_params, GRID), rtol=1e-9)
        assert_allclose(dist.survival(GRID), ehypo_survival(example_params, GRID), rtol=1e-9)

    def test_survival_function_improves_tail(self):
        """Test a supplied survival function keeps the tail accurate."""
        dist = ExponentiatedDistribution(
            cdf_fn=lambda t: hypo_cdf([1.0, 2.0], t),
            pdf_fn=lambda t: hypo_pdf([1.0, 2.0], t),
            exponent=0.5,
            survival_fn=lambda t: hypo_survival([1.0, 2.0], t),
        )
        params = EHypoParams(rates=(1.0, 2.0), k=0.5)
        assert dist.survival(45.0) == pytest.approx(ehypo_survival(params, 45.0), rel=1e-9)
        assert dist.hazard(5.0) == pytest.approx(dist.pdf(5.0) / dist.survival(5.0), rel=1e-12)

    def test_zero_base_cdf(self):
        """Test the density where the base CDF is 0."""
        cdf = lambda t: exp_cdf(1.0, t)  # noqa: E731
        pdf = lambda t: np.exp(-np.asarray(t, dtype=float))  # noqa: E731
        assert exponentiate_pdf(cdf, pdf, 1.0, 0.0) == 1.0
        assert exponentiate_pdf(cdf, pdf, 2.0, 0.0) == 0.0
        with pytest.warns(UnboundedDensityWarning):
            assert exponentiate_pdf(cdf, pdf, 0.5, 0.0) == np.inf

    @settings(max_examples=50, derandomize=True, deadline=None)
    @given(distinct_rates(min_ratio=1.5), st.floats(0.2, 5.0))
    def test_exponentiated_hypo_cdf_monotone_and_bounded(self, rates, k):
        """Test a Hypoexponential CDF raised to k stays in [0, 1] and never decreases."""
        t = np.linspace(0.0, 50.0 / min(rates), 2001)
        cdf = np.asarray(exponentiate_cdf(partial(hypo_cdf, rates), k, t))
        assert np.all((cdf >= 0.0) & (cdf <= 1.0))
        assert np.all(np.diff(cdf) >= -1e-14)

    def test_invalid_exponent(self):
        """Test a non-positive exponent is rejected."""
        with pytest.raises(DomainError):
            exponentiate_cdf(lambda t: exp_cdf(1.0, t), 0.0, 1.0)
