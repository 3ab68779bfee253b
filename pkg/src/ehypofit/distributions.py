"""Exponential, Exponentiated-Exponential and Hypoexponential building blocks.

Every evaluator accepts a scalar or an array of times and returns a float or an
array of the same shape. Times at or below zero lie outside the support.
"""

from __future__ import annotations

import logging
import warnings
from collections.abc import Callable, Iterable
from dataclasses import dataclass
from typing import Any, NamedTuple

import numpy as np

from ehypofit.exceptions import (
    ConditioningWarning,
    DomainError,
    TailSaturationWarning,
    UnboundedDensityWarning,
)
from ehypofit.models import EEParams, HypoCoefficients, RateVector, check_rates

logger = logging.getLogger(__name__)

CANCELLATION_TOL = 1e-8
"""How far a signed sum may leave [0, 1] before a ConditioningWarning is raised."""

Evaluator = Callable[[Any], Any]


def as_times(t: Any) -> np.ndarray:
    """Convert ``t`` to a float array, rejecting NaN and infinities.

    Raises:
        DomainError: If any time is not finite.
    """
    times = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(times)):
        msg = "times must be finite"
        raise DomainError(msg)
    return times


def shaped(values: np.ndarray, t: Any) -> Any:
    """Return a float for scalar ``t`` and an array otherwise."""
    if np.ndim(t) == 0:
        return float(np.asarray(values).reshape(()))
    return values


def hazard_ratio(pdf: np.ndarray, survival: np.ndarray) -> np.ndarray:
    """Divide density by survival, mapping an underflowed survival to +inf."""
    saturated = survival <= 0
    if np.any(saturated):
        warnings.warn("survival underflowed to 0, hazard reported as +inf", TailSaturationWarning, stacklevel=3)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(saturated, np.inf, pdf / np.where(saturated, 1.0, survival))


def warn_unbounded(where: str) -> None:
    """Emit an UnboundedDensityWarning naming the evaluator."""
    warnings.warn(f"{where} density is unbounded at t=0", UnboundedDensityWarning, stacklevel=3)


def _check_rate(rate: float) -> float:
    if not np.isfinite(rate) or rate <= 0:
        msg = f"rate must be finite and > 0, got {rate}"
        raise DomainError(msg)
    return float(rate)


def exp_cdf(rate: float, t: Any) -> Any:
    """Exponential CDF ``1 - exp(-rate*t)`` for t > 0, else 0.

    Args:
        rate: Exponential rate.
        t: Time or array of times.

    Returns:
        Probability for each time.

    Raises:
        DomainError: If the rate or a time is not finite, or the rate is not positive.
    """
    rate = _check_rate(rate)
    times = as_times(t)
    return shaped(np.where(times > 0, -np.expm1(-rate * np.maximum(times, 0.0)), 0.0), t)


def _ee_log_cdf(p: EEParams, times: np.ndarray) -> np.ndarray:
    # log(1 - e^{-x}) via log1p for large x and log(-expm1) for small x
    x = p.rate * np.maximum(times, 0.0)
    with np.errstate(divide="ignore"):
        return np.where(x > np.log(2), np.log1p(-np.exp(-x)), np.log(-np.expm1(-x)))


def ee_cdf(p: EEParams, t: Any) -> Any:
    """Exponentiated Exponential CDF ``(1 - exp(-rate*t))**exponent``."""
    times = as_times(t)
    return shaped(np.where(times > 0, np.exp(p.exponent * _ee_log_cdf(p, times)), 0.0), t)


def ee_pdf(p: EEParams, t: Any) -> Any:
    """Exponentiated Exponential density.

    At t = 0 the density is +inf for exponent < 1 (with an UnboundedDensityWarning),
    the rate for exponent = 1 and 0 for exponent > 1.
    """
    times = as_times(t)
    x = p.rate * np.maximum(times, 0.0)
    base = -np.expm1(-x)
    with np.errstate(divide="ignore", invalid="ignore"):
        interior = p.exponent * p.rate * np.power(base, p.exponent - 1.0) * np.exp(-x)
    if p.exponent < 1:
        at_zero = np.inf
        if np.any(times == 0):
            warn_unbounded("ee")
    elif p.exponent == 1:
        at_zero = p.rate
    else:
        at_zero = 0.0
    out = np.where(times > 0, interior, np.where(times == 0, at_zero, 0.0))
    return shaped(out, t)


def ee_survival(p: EEParams, t: Any) -> Any:
    """Exponentiated Exponential survival ``1 - cdf``, accurate in the upper tail."""
    times = as_times(t)
    return shaped(np.where(times > 0, -np.expm1(p.exponent * _ee_log_cdf(p, times)), 1.0), t)


def ee_hazard(p: EEParams, t: Any) -> Any:
    """Exponentiated Exponential hazard ``pdf / survival``."""
    times = as_times(t)
    return shaped(hazard_ratio(np.asarray(ee_pdf(p, times)), np.asarray(ee_survival(p, times))), t)


def coefficients_array(rates: np.ndarray) -> np.ndarray:
    """Return ``A_i = prod_{j != i} rates_j / (rates_j - rates_i)`` for validated rates."""
    diff = rates[None, :] - rates[:, None]
    np.fill_diagonal(diff, 1.0)
    ratio = rates[None, :] / diff
    np.fill_diagonal(ratio, 1.0)
    return np.prod(ratio, axis=1)


def hypo_coefficients(r: RateVector | Iterable[float]) -> HypoCoefficients:
    """Compute the signed Hypoexponential coefficients of a rate vector.

    Args:
        r: Distinct positive stage rates.

    Returns:
        HypoCoefficients whose values sum to 1.

    Raises:
        CoefficientSingularityError: If two rates are not distinct.
    """
    if isinstance(r, RateVector):
        # model_construct bypasses validation
        check_rates(r.rates)
    else:
        r = RateVector.of(r)
    a = coefficients_array(r.array)
    return HypoCoefficients(rates=r, a=tuple(float(x) for x in a))


class HypoValues(NamedTuple):
    """CDF, survival, density and log-CDF of a Hypoexponential at a set of times."""

    cdf: np.ndarray
    survival: np.ndarray
    pdf: np.ndarray
    log_cdf: np.ndarray
    raw_pdf: np.ndarray


def hypo_values(rates: np.ndarray, a: np.ndarray, times: np.ndarray) -> HypoValues:
    """Evaluate a Hypoexponential from its rates and coefficients.

    The CDF is summed directly where it is small and taken as one minus the summed
    survival elsewhere, so each side keeps its relative accuracy. Both are clamped
    into [0, 1]; a ConditioningWarning is raised when the raw sums leave that range
    by more than ``CANCELLATION_TOL``.
    """
    times = np.asarray(times, dtype=float)
    x = np.multiply.outer(np.maximum(times, 0.0), rates)
    cdf_raw = (-np.expm1(-x)) @ a
    decay = np.exp(-x)
    surv_raw = decay @ a
    pdf_raw = decay @ (a * rates)

    lower = cdf_raw <= 0.5  # noqa: PLR2004
    cdf = np.where(lower, cdf_raw, 1.0 - surv_raw)
    surv = np.where(lower, 1.0 - cdf_raw, surv_raw)
    if (
        np.any(cdf_raw < -CANCELLATION_TOL)
        or np.any(cdf_raw > 1 + CANCELLATION_TOL)
        or np.any(surv_raw < -CANCELLATION_TOL)
    ):
        warnings.warn("hypoexponential sum lost precision to cancellation", ConditioningWarning, stacklevel=2)
        logger.debug("cancellation: cdf range [%g, %g]", cdf_raw.min(), cdf_raw.max())

    outside = times <= 0
    cdf = np.where(outside, 0.0, np.clip(cdf, 0.0, 1.0))
    surv = np.where(outside, 1.0, np.clip(surv, 0.0, 1.0))
    pdf_raw = np.where(times < 0, 0.0, pdf_raw)
    with np.errstate(divide="ignore"):
        log_cdf = np.where(lower, np.log(cdf), np.log1p(-surv))
    log_cdf = np.where(outside, -np.inf, log_cdf)
    return HypoValues(cdf, surv, np.maximum(pdf_raw, 0.0), log_cdf, pdf_raw)


def _hypo(r: RateVector | Iterable[float], t: Any) -> HypoValues:
    coeffs = hypo_coefficients(r)
    return hypo_values(coeffs.rates.array, coeffs.array, as_times(t))


def hypo_cdf(r: RateVector | Iterable[float], t: Any) -> Any:
    """Hypoexponential CDF ``sum_i A_i (1 - exp(-rates_i t))``, clamped into [0, 1]."""
    return shaped(_hypo(r, t).cdf, t)


def hypo_pdf(r: RateVector | Iterable[float], t: Any) -> Any:
    """Hypoexponential density ``sum_i A_i rates_i exp(-rates_i t)``."""
    return shaped(_hypo(r, t).pdf, t)


def hypo_survival(r: RateVector | Iterable[float], t: Any) -> Any:
    """Hypoexponential survival ``sum_i A_i exp(-rates_i t)``."""
    return shaped(_hypo(r, t).survival, t)


def hypo_hazard(r: RateVector | Iterable[float], t: Any) -> Any:
    """Hypoexponential hazard ``pdf / survival``."""
    values = _hypo(r, t)
    return shaped(hazard_ratio(values.pdf, values.survival), t)


def exponentiate_cdf(cdf: Evaluator, alpha: float, t: Any) -> Any:
    """Exponentiated CDF ``cdf(t) ** alpha``.

    Args:
        cdf: Base CDF evaluator.
        alpha: Positive exponent.
        t: Time or array of times.

    Returns:
        Probability for each time.
    """
    alpha = _check_rate(alpha)
    base = np.clip(np.asarray(cdf(t), dtype=float), 0.0, 1.0)
    return shaped(np.power(base, alpha), t)


def exponentiate_pdf(cdf: Evaluator, pdf: Evaluator, alpha: float, t: Any) -> Any:
    """Exponentiated density ``alpha * cdf(t)**(alpha - 1) * pdf(t)``.

    Where the base CDF is 0 the density is the base density for alpha = 1, 0 for
    alpha > 1, and +inf for alpha < 1 if the base density is positive there.
    """
    alpha = _check_rate(alpha)
    base = np.clip(np.asarray(cdf(t), dtype=float), 0.0, 1.0)
    density = np.asarray(pdf(t), dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        interior = alpha * np.power(base, alpha - 1.0) * density
    if alpha < 1:
        at_zero = np.where(density > 0, np.inf, 0.0)
        if np.any((base == 0) & (density > 0)):
            warn_unbounded("exponentiated")
    elif alpha == 1:
        at_zero = density
    else:
        at_zero = np.zeros_like(density)
    return shaped(np.where(base > 0, interior, at_zero), t)


def exponentiate_survival(cdf: Evaluator, alpha: float, t: Any) -> Any:
    """Exponentiated survival ``1 - cdf(t) ** alpha``."""
    alpha = _check_rate(alpha)
    base = np.clip(np.asarray(cdf(t), dtype=float), 0.0, 1.0)
    with np.errstate(divide="ignore"):
        return shaped(-np.expm1(alpha * np.log(base)), t)


def exponentiate_hazard(cdf: Evaluator, pdf: Evaluator, alpha: float, t: Any) -> Any:
    """Exponentiated hazard ``pdf / survival``."""
    density = np.asarray(exponentiate_pdf(cdf, pdf, alpha, t), dtype=float)
    survival = np.asarray(exponentiate_survival(cdf, alpha, t), dtype=float)
    return shaped(hazard_ratio(density, survival), t)


@dataclass(frozen=True)
class ExponentiatedDistribution:
    """A base distribution raised to a positive power ``exponent``.

    ``survival`` is optional; when given, the upper tail is computed from it through
    ``log1p`` instead of from the base CDF.
    """

    cdf_fn: Evaluator
    pdf_fn: Evaluator
    exponent: float
    survival_fn: Evaluator | None = None

    def cdf(self, t: Any) -> Any:
        """Exponentiated CDF."""
        return exponentiate_cdf(self.cdf_fn, self.exponent, t)

    def pdf(self, t: Any) -> Any:
        """Exponentiated density."""
        return exponentiate_pdf(self.cdf_fn, self.pdf_fn, self.exponent, t)

    def survival(self, t: Any) -> Any:
        """Exponentiated survival."""
        if self.survival_fn is None:
            return exponentiate_survival(self.cdf_fn, self.exponent, t)
        base_surv = np.clip(np.asarray(self.survival_fn(t), dtype=float), 0.0, 1.0)
        base_cdf = np.clip(np.asarray(self.cdf_fn(t), dtype=float), 0.0, 1.0)
        with np.errstate(divide="ignore"):
            log_cdf = np.where(base_surv < 0.5, np.log1p(-base_surv), np.log(base_cdf))  # noqa: PLR2004
        return shaped(-np.expm1(self.exponent * log_cdf), t)

    def hazard(self, t: Any) -> Any:
        """Exponentiated hazard."""
        density = np.asarray(self.pdf(t), dtype=float)
        survival = np.asarray(self.survival(t), dtype=float)
        return shaped(hazard_ratio(density, survival), t)
