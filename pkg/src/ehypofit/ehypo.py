"""Exponentiated Hypoexponential distribution.

All evaluation goes through the power form ``F_Y = F_S ** k`` where ``F_S`` is the
Hypoexponential CDF, which is valid for every real k > 0. For integer k the CDF also
expands into ``sum_i B_i F_{N_i}`` over the compositions of k, with each ``N_i`` a
Maximum Exponentiated Exponential variable; the expansion evaluators exist to check
the power form, since the ``B_i`` alternate in sign and grow like ``max|A_j| ** k``.
"""

from __future__ import annotations

import itertools
import logging
import math
from typing import Any

import numpy as np
from scipy import optimize

from ehypofit.distributions import (
    as_times,
    hazard_ratio,
    hypo_coefficients,
    hypo_values,
    shaped,
    warn_unbounded,
)
from ehypofit.exceptions import CombinatorialExplosionError, DomainError, NumericError
from ehypofit.mee import mee_cdf, mee_pdf, mee_survival
from ehypofit.models import EHypoExpansion, EHypoParams, ExpansionTerm, MEEParams, MultiIndex

logger = logging.getLogger(__name__)

MAX_INDEX_SET_SIZE = 1_000_000
ROOT_XTOL = 1e-12
ROOT_MAXITER = 200


def _compositions(k: int, n: int) -> list[tuple[int, ...]]:
    # stars and bars: n - 1 bar positions among k + n - 1 slots; bars and parts share one lexicographic order
    slots = k + n - 1
    parts = [
        tuple(right - left - 1 for left, right in itertools.pairwise((-1, *bars, slots)))
        for bars in itertools.combinations(range(slots), n - 1)
    ]
    return parts[::-1]


def enumerate_Ek(n: int, k: int) -> list[MultiIndex]:  # noqa: N802
    """Enumerate all compositions of k into n nonnegative parts.

    Args:
        n: Number of parts (stages).
        k: Integer exponent to split.

    Returns:
        The ``C(k + n - 1, n - 1)`` multi-indices in lexicographically decreasing order.

    Raises:
        DomainError: If n or k is below 1.
        CombinatorialExplosionError: If the set would exceed ``MAX_INDEX_SET_SIZE``.
    """
    if n < 1 or k < 1:
        msg = f"n and k must be >= 1, got n={n}, k={k}"
        raise DomainError(msg)
    size = math.comb(k + n - 1, n - 1)
    if size > MAX_INDEX_SET_SIZE:
        raise CombinatorialExplosionError(size, MAX_INDEX_SET_SIZE)
    return [MultiIndex(g=g) for g in _compositions(k, n)]


def _require_integer_k(p: EHypoParams) -> int:
    k = p.integer_k
    if k is None:
        msg = f"the expansion form needs an integer exponent, got k={p.k}"
        raise DomainError(msg)
    return k


def ehypo_expansion(p: EHypoParams) -> EHypoExpansion:
    """Expand an integer-k EHypo CDF into weighted MEE components.

    ``B_i = multinomial(k; g_i) * prod_j A_j ** g_{j,i}``, and component ``N_i`` is the
    MEE variable with the stage rates as lambdas and ``g_i`` as exponents.

    Raises:
        DomainError: If k is not an integer.
        CombinatorialExplosionError: If the index set is too large.
    """
    k = _require_integer_k(p)
    a = hypo_coefficients(p.rates).array
    k_factorial = math.factorial(k)
    terms = []
    for index in enumerate_Ek(p.n, k):
        multinomial = k_factorial // math.prod(math.factorial(part) for part in index.g)
        coefficient = multinomial * float(np.prod(a ** np.asarray(index.g)))
        component = MEEParams(lambdas=p.rates.rates, exponents=index.g)
        terms.append(ExpansionTerm(index=index, coefficient=coefficient, component=component))
    logger.debug("expanded k=%d over n=%d stages into %d terms", k, p.n, len(terms))
    return EHypoExpansion(params=p, terms=tuple(terms))


def _as_expansion(p: EHypoParams | EHypoExpansion) -> EHypoExpansion:
    return p if isinstance(p, EHypoExpansion) else ehypo_expansion(p)


def ehypo_expansion_cdf(p: EHypoParams | EHypoExpansion, t: Any) -> Any:
    """EHypo CDF as ``sum_i B_i F_{N_i}(t)``."""
    times = as_times(t)
    total = sum(term.coefficient * np.asarray(mee_cdf(term.component, times)) for term in _as_expansion(p).terms)
    return shaped(np.asarray(total, dtype=float), t)


def ehypo_expansion_pdf(p: EHypoParams | EHypoExpansion, t: Any) -> Any:
    """EHypo density as ``sum_i B_i f_{N_i}(t)``."""
    times = as_times(t)
    total = sum(term.coefficient * np.asarray(mee_pdf(term.component, times)) for term in _as_expansion(p).terms)
    return shaped(np.asarray(total, dtype=float), t)


def ehypo_expansion_survival(p: EHypoParams | EHypoExpansion, t: Any) -> Any:
    """EHypo survival as ``sum_i B_i R_{N_i}(t)``."""
    times = as_times(t)
    total = sum(
        term.coefficient * np.asarray(mee_survival(term.component, times)) for term in _as_expansion(p).terms
    )
    return shaped(np.asarray(total, dtype=float), t)


def _log_cdf(p: EHypoParams, times: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    coeffs = hypo_coefficients(p.rates)
    values = hypo_values(coeffs.rates.array, coeffs.array, times)
    return values.log_cdf, values.pdf


def ehypo_cdf(p: EHypoParams, t: Any) -> Any:
    """EHypo CDF ``F_S(t) ** k``."""
    times = as_times(t)
    log_cdf, _ = _log_cdf(p, times)
    return shaped(np.exp(p.k * log_cdf), t)


def ehypo_pdf(p: EHypoParams, t: Any) -> Any:
    """EHypo density ``k F_S(t) ** (k - 1) f_S(t)``.

    Near 0 the density behaves like ``t ** (n k - 1)``, so at t = 0 it is 0 for
    n k > 1, ``(prod(rates) / n!) ** k`` for n k = 1, and +inf (with an UnboundedDensityWarning)
    for n k < 1.
    """
    times = as_times(t)
    log_cdf, density = _log_cdf(p, times)
    with np.errstate(invalid="ignore", over="ignore"):
        interior = p.k * np.exp((p.k - 1.0) * log_cdf) * density

    nk = p.n * p.k
    if nk < 1:
        at_zero = np.inf
        if np.any(times == 0):
            warn_unbounded("ehypo")
    elif nk == 1:
        at_zero = math.exp(p.k * (float(np.sum(np.log(p.rates.array))) - math.lgamma(p.n + 1)))
    else:
        at_zero = 0.0
    return shaped(np.where(times > 0, interior, np.where(times == 0, at_zero, 0.0)), t)


def ehypo_survival(p: EHypoParams, t: Any) -> Any:
    """EHypo survival ``1 - F_S(t) ** k`` computed as ``-expm1(k log F_S(t))``."""
    times = as_times(t)
    log_cdf, _ = _log_cdf(p, times)
    return shaped(-np.expm1(p.k * log_cdf), t)


def ehypo_hazard(p: EHypoParams, t: Any) -> Any:
    """EHypo hazard ``pdf / survival``; +inf with a TailSaturationWarning where survival underflows."""
    times = as_times(t)
    return shaped(hazard_ratio(np.asarray(ehypo_pdf(p, times)), np.asarray(ehypo_survival(p, times))), t)


class EHypoSampler:
    """Random variate generator for one EHypo distribution.

    Integer k draws the maximum of k independent Hypoexponential variates, each a sum
    of independent exponentials. Any other k inverts the CDF numerically with Brent's
    method (bisection safeguarded secant and inverse quadratic steps).

    A sampler owns its generator; do not share one instance between threads.
    """

    def __init__(self, params: EHypoParams, seed: int) -> None:
        """Initialize the sampler.

        Args:
            params: Distribution to sample.
            seed: Seed of the underlying numpy generator.
        """
        self.params = params
        self._rng = np.random.default_rng(seed)
        coeffs = hypo_coefficients(params.rates)
        self._rates = coeffs.rates.array
        self._a = coeffs.array

    def draw(self, count: int) -> np.ndarray:
        """Draw ``count`` variates.

        Raises:
            DomainError: If count < 1.
            NumericError: If the root finder does not converge.
        """
        if count < 1:
            msg = f"count must be >= 1, got {count}"
            raise DomainError(msg)
        k = self.params.integer_k
        if k is not None:
            logger.debug("sampling %d variates as maxima of %d hypoexponential draws", count, k)
            stages = self._rng.exponential(scale=1.0 / self._rates, size=(count, k, self.params.n))
            return stages.sum(axis=2).max(axis=1)
        logger.debug("sampling %d variates by CDF inversion", count)
        uniforms = self._rng.uniform(np.finfo(float).tiny, 1.0, size=count)
        return np.array([self._invert(u) for u in uniforms])

    def _cdf(self, t: float) -> float:
        log_cdf = hypo_values(self._rates, self._a, np.asarray(t)).log_cdf
        return float(np.exp(self.params.k * log_cdf))

    def _invert(self, u: float) -> float:
        t_hi = 1.0 / float(self._rates.min())
        for _ in range(ROOT_MAXITER):
            if self._cdf(t_hi) > u:
                break
            t_hi *= 2.0
        else:
            msg = f"could not bracket the quantile of u={u}"
            raise NumericError(msg)

        root, result = optimize.brentq(
            lambda t: self._cdf(t) - u,
            0.0,
            t_hi,
            xtol=ROOT_XTOL,
            maxiter=ROOT_MAXITER,
            full_output=True,
            disp=False,
        )
        if not result.converged:
            msg = f"root finder did not converge for u={u}: {result.flag}"
            raise NumericError(msg)
        return float(root)


def ehypo_sample(p: EHypoParams, count: int, seed: int) -> np.ndarray:
    """Draw ``count`` EHypo variates, reproducibly for a given seed."""
    return EHypoSampler(p, seed).draw(count)
