"""Information criteria, EDF statistics and model comparison."""

from __future__ import annotations

import logging
import math
import warnings
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from functools import partial

import numpy as np
from scipy import stats

from ehypofit.distributions import Evaluator
from ehypofit.ehypo import ehypo_cdf
from ehypofit.exceptions import DomainError, EHypoError, TailDegeneracyWarning
from ehypofit.models import ComparisonRow, ComparisonTable, FitResult, GofReport, Sample

logger = logging.getLogger(__name__)

PIT_CLAMP = 1e-15
CRITERIA = ("neg2loglik", "aic", "aicc", "bic", "a_star", "w_star")


def information_criteria(loglik: float, c: int, v: int) -> tuple[float, float, float]:
    """Return ``(AIC, AICC, BIC)`` for a log-likelihood with c parameters and v observations.

    Raises:
        DomainError: If v <= c + 1, where AICC is undefined.
    """
    if v <= c + 1:
        msg = f"AICC is undefined for v={v} observations and c={c} parameters"
        raise DomainError(msg)
    neg2 = -2.0 * loglik
    aic = neg2 + 2 * c
    aicc = aic + 2 * c * (c + 1) / (v - c - 1)
    bic = neg2 + c * math.log(v)
    return aic, aicc, bic


def edf_statistics(cdf: Evaluator, s: Sample) -> tuple[float, float]:
    """Anderson-Darling ``A*`` and Cramer-von Mises ``W*`` of a sample against a CDF.

    Both use the unmodified single-sample definitions on the probability integral
    transform ``u_(i) = cdf(x_(i))``, clamped into ``[1e-15, 1 - 1e-15]``.
    """
    ordered = np.sort(s.array)
    raw = np.asarray(cdf(ordered), dtype=float)
    if np.any(raw <= 0) or np.any(raw >= 1):
        warnings.warn("fitted CDF reaches 0 or 1 at an order statistic", TailDegeneracyWarning, stacklevel=2)
    u = np.clip(raw, PIT_CLAMP, 1.0 - PIT_CLAMP)
    n = u.size
    weights = 2.0 * np.arange(1, n + 1) - 1.0
    a_star = -n - float(np.sum(weights * (np.log(u) + np.log1p(-u[::-1])))) / n
    w_star = float(stats.cramervonmises(u, "uniform").statistic)
    return a_star, w_star


def gof_report(loglik: float, c: int, cdf: Evaluator, s: Sample) -> GofReport:
    """Build the full report for one model on one sample."""
    aic, aicc, bic = information_criteria(loglik, c, s.size)
    a_star, w_star = edf_statistics(cdf, s)
    return GofReport(
        neg2loglik=-2.0 * loglik,
        aic=aic,
        aicc=aicc,
        bic=bic,
        a_star=a_star,
        w_star=w_star,
        c=c,
        v=s.size,
    )


@dataclass(frozen=True)
class CandidateModel:
    """A fitted model as seen by ``compare``: its CDF, log-likelihood and parameter count."""

    name: str
    cdf: Evaluator
    loglik: float
    c: int


def model_from_fit(name: str, result: FitResult) -> CandidateModel:
    """Wrap an EHypo fit as a comparison candidate."""
    return CandidateModel(name=name, cdf=partial(ehypo_cdf, result.params), loglik=result.loglik, c=result.n_params)


def compare(
    models: Sequence[CandidateModel],
    s: Sample,
    failures: Mapping[str, str] | None = None,
) -> ComparisonTable:
    """Compare fitted models on one sample.

    Args:
        models: Successfully fitted candidates.
        s: The sample they were fitted to.
        failures: Names of models whose fit failed, with the error text.

    Returns:
        ComparisonTable with rows ordered by AIC (name breaks ties), failed rows last,
        and for every criterion the model names from best (lowest) to worst. A model
        whose report cannot be built (AICC undefined for its c) becomes a failed row.

    Raises:
        DomainError: If fewer than two models are given.
    """
    failures = dict(failures or {})
    if len(models) + len(failures) < 2:  # noqa: PLR2004
        msg = "comparison needs at least two models"
        raise DomainError(msg)

    reports: list[tuple[str, GofReport]] = []
    for model in models:
        try:
            reports.append((model.name, gof_report(model.loglik, model.c, model.cdf, s)))
        except EHypoError as e:
            logger.debug("no report for %s: %s", model.name, e)
            failures[model.name] = str(e)
    ranking: dict[str, tuple[str, ...]] = {}
    ranks: list[dict[str, int]] = [{} for _ in reports]
    for criterion in CRITERIA:
        order = sorted(range(len(reports)), key=lambda i, c=criterion: (getattr(reports[i][1], c), reports[i][0]))
        ranking[criterion] = tuple(reports[i][0] for i in order)
        for position, i in enumerate(order, start=1):
            ranks[i][criterion] = position

    rows = [
        ComparisonRow(name=name, report=report, ranks=rank)
        for (name, report), rank in zip(reports, ranks)
    ]
    rows.sort(key=lambda row: (row.report.aic, row.name))
    rows.extend(ComparisonRow(name=name, error=error) for name, error in failures.items())
    logger.debug("compared %d models, best by AIC: %s", len(reports), rows[0].name if reports else None)
    return ComparisonTable(rows=tuple(rows), ranking=ranking)
