"""Tests for information criteria, EDF statistics and model comparison."""

from __future__ import annotations

import numpy as np
import pytest
from numpy.testing import assert_allclose

from ehypofit.estimate import fit
from ehypofit.exceptions import DomainError, TailDegeneracyWarning
from ehypofit.gof import CRITERIA, CandidateModel, compare, edf_statistics, gof_report, information_criteria, model_from_fit
from ehypofit.models import FitOptions, Sample
from tests.constants import (
    BLADDER_EHYPO_A_STAR,
    BLADDER_EHYPO_NEG2LL,
    BLADDER_EHYPO_W_STAR,
    BLADDER_HYPO_A_STAR,
    BLADDER_HYPO_W_STAR,
)


def _exp_cdf(rate: float):
    return lambda t: -np.expm1(-rate * np.asarray(t))


def _identity(t):
    return np.asarray(t, dtype=float)


class TestInformationCriteria:
    """Tests for AIC, AICC and BIC."""

    def test_zero(self):
        """Test a zero log-likelihood with no parameters."""
        assert information_criteria(0.0, 0, 10) == (0.0, 0.0, 0.0)

    def test_bladder_values(self):
        """Test the criteria of a three-parameter model on 128 observations."""
        aic, aicc, bic = information_criteria(-BLADDER_EHYPO_NEG2LL / 2, 3, 128)
        assert aic == pytest.approx(829.33)
        assert aicc == pytest.approx(829.33 + 24 / 124)
        assert bic == pytest.approx(837.886, abs=1e-3)

    @pytest.mark.parametrize(("c", "v"), [(3, 4), (3, 3), (1, 2)])
    def test_aicc_undefined(self, c, v):
        """Test v <= c + 1 is rejected."""
        with pytest.raises(DomainError):
            information_criteria(-10.0, c, v)


class TestEdfStatistics:
    """Tests for the Anderson-Darling and Cramer-von Mises statistics."""

    def test_cvm_at_uniform_quantiles(self):
        """Test W* reaches its minimum 1 / (12 N) at the uniform plotting positions."""
        n = 25
        s = Sample(values=(2 * np.arange(1, n + 1) - 1) / (2 * n))
        _, w_star = edf_statistics(_identity, s)
        assert w_star == pytest.approx(1 / (12 * n), rel=1e-10)

    def test_cvm_drops_for_quantile_matching_cdf(self, small_sample):
        """Test W* falls when the model CDF is replaced by one matching the empirical quantiles."""
        ordered = np.sort(small_sample.array)
        n = ordered.size
        positions = (2 * np.arange(1, n + 1) - 1) / (2 * n)
        _, w_model = edf_statistics(_exp_cdf(0.5), small_sample)
        _, w_matched = edf_statistics(lambda t: np.interp(t, ordered, positions), small_sample)
        assert w_matched < w_model
        assert w_matched == pytest.approx(1 / (12 * n), rel=1e-10)

    def test_anderson_darling_sum(self):
        """Test A* against a direct evaluation of its defining sum."""
        s = Sample(values=[0.2, 0.9, 1.4, 2.5, 3.1, 0.05])
        a_star, _ = edf_statistics(_exp_cdf(0.8), s)
        u = -np.expm1(-0.8 * np.sort(s.array))
        n = u.size
        total = sum((2 * i + 1) * (np.log(u[i]) + np.log(1 - u[n - 1 - i])) for i in range(n))
        assert a_star == pytest.approx(-n - total / n, rel=1e-12)

    def test_scale_invariant(self, small_sample):
        """Test rescaling the data together with the CDF leaves both statistics unchanged."""
        scaled = Sample(values=3.0 * small_sample.array)
        base = edf_statistics(_exp_cdf(0.5), small_sample)
        stretched = edf_statistics(_exp_cdf(0.5 / 3.0), scaled)
        assert_allclose(stretched, base, rtol=1e-10)

    def test_tail_degeneracy(self):
        """Test a CDF reaching 1 at an order statistic warns and stays finite."""
        s = Sample(values=[0.2, 0.5, 2.0])
        with pytest.warns(TailDegeneracyWarning):
            a_star, w_star = edf_statistics(lambda t: np.minimum(t, 1.0), s)
        assert np.isfinite(a_star)
        assert np.isfinite(w_star)

    def test_bladder_ehypo(self, bladder, bladder_ehypo_fit):
        """Test the statistics of the EHypo fit to the bladder cancer data."""
        a_star, w_star = edf_statistics(model_from_fit("ehypo", bladder_ehypo_fit).cdf, bladder)
        assert a_star == pytest.approx(BLADDER_EHYPO_A_STAR, rel=0.02)
        assert w_star == pytest.approx(BLADDER_EHYPO_W_STAR, rel=0.02)

    def test_bladder_hypo(self, bladder, bladder_hypo_fit):
        """Test the statistics of the Hypoexponential fit to the bladder cancer data."""
        a_star, w_star = edf_statistics(model_from_fit("hypo", bladder_hypo_fit).cdf, bladder)
        assert a_star == pytest.approx(BLADDER_HYPO_A_STAR, rel=0.02)
        assert w_star == pytest.approx(BLADDER_HYPO_W_STAR, rel=0.02)


class TestGofReport:
    """Tests for gof_report."""

    def test_fields(self, small_sample):
        """Test the report carries the criteria, statistics and counts."""
        report = gof_report(-80.0, 2, _exp_cdf(0.5), small_sample)
        aic, aicc, bic = information_criteria(-80.0, 2, small_sample.size)
        assert report.neg2loglik == 160.0
        assert (report.aic, report.aicc, report.bic) == (aic, aicc, bic)
        assert (report.a_star, report.w_star) == edf_statistics(_exp_cdf(0.5), small_sample)
        assert (report.c, report.v) == (2, small_sample.size)


class TestCompare:
    """Tests for compare."""

    def test_ranking(self, small_sample):
        """Test rows are ordered by AIC and every criterion is ranked."""
        good = CandidateModel(name="good", cdf=_exp_cdf(0.5), loglik=-80.0, c=1)
        bad = CandidateModel(name="bad", cdf=_exp_cdf(3.0), loglik=-150.0, c=1)
        table = compare([bad, good], small_sample)
        assert [row.name for row in table.rows] == ["good", "bad"]
        assert set(table.ranking) == set(CRITERIA)
        assert table.ranking["aic"] == ("good", "bad")
        assert table.rows[0].ranks["bic"] == 1
        assert table.rows[1].ranks["bic"] == 2

    def test_identical_models(self, small_sample):
        """Test the same model twice gives identical reports, ranked by name."""
        models = [
            CandidateModel(name=name, cdf=_exp_cdf(0.5), loglik=-80.0, c=1) for name in ("second", "first")
        ]
        table = compare(models, small_sample)
        assert table.rows[0].report == table.rows[1].report
        assert table.ranking["aic"] == ("first", "second")

    def test_needs_two_models(self, small_sample):
        """Test a single model cannot be compared."""
        with pytest.raises(DomainError):
            compare([CandidateModel(name="only", cdf=_exp_cdf(0.5), loglik=-80.0, c=1)], small_sample)

    def test_failed_models_listed_last(self, small_sample):
        """Test failed fits appear after the reports with their error."""
        model = CandidateModel(name="ok", cdf=_exp_cdf(0.5), loglik=-80.0, c=1)
        table = compare([model], small_sample, failures={"broken": "no finite likelihood"})
        assert [row.name for row in table.rows] == ["ok", "broken"]
        assert table.rows[1].report is None
        assert table.rows[1].error == "no finite likelihood"
        assert table.ranking["aic"] == ("ok",)

    def test_model_without_report_becomes_failed_row(self):
        """Test a model with too many parameters for the sample fails alone."""
        s = Sample(values=[1.0, 2.0, 3.5])
        small = CandidateModel(name="small", cdf=_exp_cdf(0.5), loglik=-5.0, c=1)
        large = CandidateModel(name="large", cdf=_exp_cdf(0.5), loglik=-4.0, c=2)
        table = compare([large, small], s, failures={"broken": "no finite likelihood"})
        assert [row.name for row in table.rows] == ["small", "broken", "large"]
        assert table.rows[0].report is not None
        assert table.rows[2].report is None
        assert "AICC" in table.rows[2].error
        assert table.ranking["aic"] == ("small",)
        assert table.rows[0].ranks["aic"] == 1

    def test_bladder_ehypo_wins(self, bladder, bladder_ehypo_fit, bladder_hypo_fit):
        """Test EHypo beats the Hypoexponential on -2 log L, A* and W*."""
        table = compare(
            [model_from_fit("hypoexp:2", bladder_hypo_fit), model_from_fit("ehypoexp:2", bladder_ehypo_fit)],
            bladder,
        )
        for criterion in ("neg2loglik", "a_star", "w_star"):
            assert table.ranking[criterion][0] == "ehypoexp:2"
        reports = {row.name: row.report for row in table.rows}
        assert reports["ehypoexp:2"].c == 3
        assert reports["hypoexp:2"].c == 2

    @pytest.mark.slow
    def test_bic_prefers_exponential_for_exponential_data(self):
        """Test BIC picks the one-parameter model on exponential data."""
        s = Sample(values=np.random.default_rng(8).exponential(1.5, size=500))
        models = [
            model_from_fit("exp", fit(s, FitOptions(n=1, fix_k=1.0))),
            model_from_fit("ehypoexp:2", fit(s, FitOptions(n=2))),
        ]
        assert compare(models, s).ranking["bic"][0] == "exp"
