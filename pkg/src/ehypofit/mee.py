"""Maximum Exponentiated Exponential distribution.

The CDF is the product of Exponentiated Exponential CDFs and is evaluated in log
space. The binomial expansion for integer exponents is kept as a cross-check; its
alternating terms cancel badly once ``g * lambda * t`` grows.
"""

from __future__ import annotations

import logging
import math
from typing import Any

import numpy as np

from ehypofit.distributions import as_times, hazard_ratio, shaped, warn_unbounded
from ehypofit.exceptions import DomainError, ExpansionOverflowError
from ehypofit.models import MEEParams

logger = logging.getLogger(__name__)

MAX_EXPANSION_EXPONENT = 60


def _active(p: MEEParams) -> tuple[np.ndarray, np.ndarray]:
    lambdas = np.asarray(p.lambdas, dtype=float)
    exponents = np.asarray(p.exponents, dtype=float)
    keep = exponents > 0
    return lambdas[keep], exponents[keep]


def mee_log_cdf(p: MEEParams, t: Any) -> Any:
    """Logarithm of the MEE CDF, ``sum_j a_j log(1 - exp(-lambda_j t))``; -inf for t <= 0."""
    times = as_times(t)
    lambdas, exponents = _active(p)
    x = np.multiply.outer(np.maximum(times, 0.0), lambdas)
    with np.errstate(divide="ignore"):
        log_factors = np.where(x > np.log(2), np.log1p(-np.exp(-x)), np.log(-np.expm1(-x)))
    total = log_factors @ exponents
    return shaped(np.where(times > 0, total, -np.inf), t)


def mee_cdf(p: MEEParams, t: Any) -> Any:
    """MEE CDF ``prod_j (1 - exp(-lambda_j t)) ** a_j``."""
    return shaped(np.exp(np.asarray(mee_log_cdf(p, t))), t)


def mee_survival(p: MEEParams, t: Any) -> Any:
    """MEE survival ``1 - cdf`` computed as ``-expm1(log cdf)``."""
    return shaped(-np.expm1(np.asarray(mee_log_cdf(p, t))), t)


def mee_pdf(p: MEEParams, t: Any) -> Any:
    """MEE density: the CDF times ``sum_j a_j lambda_j exp(-lambda_j t) / (1 - exp(-lambda_j t))``.

    At t = 0 the density behaves like ``t ** (sum a_j - 1)``: it is +inf (with an
    UnboundedDensityWarning) when the exponents sum below 1, ``prod lambda_j ** a_j``
    when they sum to 1, and 0 otherwise.
    """
    times = as_times(t)
    lambdas, exponents = _active(p)
    x = np.multiply.outer(np.maximum(times, 0.0), lambdas)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        log_derivative = (1.0 / np.expm1(x)) @ (exponents * lambdas)
        interior = np.exp(np.asarray(mee_log_cdf(p, times))) * log_derivative

    total_exponent = float(exponents.sum())
    if total_exponent < 1:
        at_zero = np.inf
        if np.any(times == 0):
            warn_unbounded("mee")
    elif total_exponent == 1:
        at_zero = float(np.prod(lambdas**exponents))
    else:
        at_zero = 0.0
    return shaped(np.where(times > 0, interior, np.where(times == 0, at_zero, 0.0)), t)


def mee_hazard(p: MEEParams, t: Any) -> Any:
    """MEE hazard ``pdf / survival``; +inf with a TailSaturationWarning where survival underflows."""
    times = as_times(t)
    return shaped(hazard_ratio(np.asarray(mee_pdf(p, times)), np.asarray(mee_survival(p, times))), t)


def mee_cdf_expanded(p: MEEParams, t: Any) -> Any:
    """MEE CDF through the binomial expansion of each integer-exponent factor.

    Each factor is ``sum_{i=0}^{g} C(g, i) (-1)**(g - i) exp(-lambda (g - i) t)``.

    Raises:
        DomainError: If an exponent is not an integer.
        ExpansionOverflowError: If an exponent exceeds ``MAX_EXPANSION_EXPONENT``.
    """
    if not p.is_integer:
        msg = f"binomial expansion needs integer exponents, got {list(p.exponents)}"
        raise DomainError(msg)
    if max(p.exponents) > MAX_EXPANSION_EXPONENT:
        msg = f"binomial expansion supports exponents up to {MAX_EXPANSION_EXPONENT}, got {max(p.exponents):g}"
        raise ExpansionOverflowError(msg)

    times = as_times(t)
    clipped = np.maximum(times, 0.0)
    product = np.ones_like(clipped)
    for lam, g_value in zip(p.lambdas, p.exponents):
        g = int(g_value)
        if g == 0:
            continue
        factor = np.zeros_like(clipped)
        for i in range(g + 1):
            factor = factor + math.comb(g, i) * (-1) ** (g - i) * np.exp(-lam * (g - i) * clipped)
        product = product * factor
    return shaped(np.where(times > 0, product, 0.0), t)


def mee_sample(p: MEEParams, count: int, seed: int) -> np.ndarray:
    """Draw MEE variates as maxima of ``g_j`` exponentials with rate ``lambda_j`` over all j.

    Only integer exponents have this construction.

    Raises:
        DomainError: If an exponent is not an integer or count < 1.
    """
    if not p.is_integer:
        msg = "max-of-exponentials sampling needs integer exponents"
        raise DomainError(msg)
    if count < 1:
        msg = f"count must be >= 1, got {count}"
        raise DomainError(msg)
    rng = np.random.default_rng(seed)
    best = np.zeros(count)
    for lam, g_value in zip(p.lambdas, p.exponents):
        g = int(g_value)
        if g:
            draws = rng.exponential(scale=1.0 / lam, size=(count, g))
            best = np.maximum(best, draws.max(axis=1))
    return best
