"""Maximum-likelihood estimation of EHypo parameters.

For fixed rates the likelihood is maximized in k by the closed form
``k_hat = -N / sum_j log F_S(x_j)``, so the fit maximizes the profile log-likelihood
over the rates alone. Rates are optimized in unconstrained coordinates

    theta_1 = log a_1,  theta_i = log(a_i - (1 + MIN_RATE_GAP) a_{i-1}),

which keeps them positive, sorted and separated. Each start runs a Nelder-Mead
simplex, then BFGS on the analytic profile score, then Newton-Raphson steps with a
finite-difference Hessian of that score.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from ehypofit.distributions import coefficients_array, hypo_values
from ehypofit.exceptions import (
    CoalescentRatesWarning,
    ConditioningError,
    ConditioningWarning,
    DomainError,
    EHypoError,
    EHypoWarning,
    FitFailureError,
)
from ehypofit.models import EHypoParams, FitOptions, FitResult, RateVector, Sample

logger = logging.getLogger(__name__)

MIN_RATE_GAP = 1e-6
"""Relative separation floor between consecutive fitted rates."""

COALESCENT_GAP = 1e-4
"""Fitted gaps below this relative size trigger a CoalescentRatesWarning."""

SCORE_MIN_GAP = 1e-8
GRADIENT_TOL = 1e-6
MAX_NEWTON_STEPS = 20
START_SPREAD = (0.25, 4.0)


def _loglik_arrays(rates: np.ndarray, k: float, x: np.ndarray) -> float:
    values = hypo_values(rates, coefficients_array(rates), x)
    if np.any(values.raw_pdf <= 0):
        warnings.warn("density vanished under cancellation, log-likelihood is -inf", ConditioningWarning, stacklevel=3)
        return -np.inf
    total = x.size * np.log(k) + float(np.log(values.raw_pdf).sum())
    if k != 1:
        total += (k - 1.0) * float(values.log_cdf.sum())
    return total


def _log_cdf_sum(rates: np.ndarray, x: np.ndarray) -> float:
    values = hypo_values(rates, coefficients_array(rates), x)
    if np.any(values.cdf <= 0):
        msg = "hypoexponential CDF evaluated to <= 0 under cancellation"
        raise ConditioningError(msg)
    total = float(values.log_cdf.sum())
    if total >= 0:
        msg = "every CDF value rounds to 1, k_hat is unbounded"
        raise ConditioningError(msg)
    return total


def _k_hat_arrays(rates: np.ndarray, x: np.ndarray) -> float:
    return -x.size / _log_cdf_sum(rates, x)


def _coefficient_derivatives(rates: np.ndarray, a: np.ndarray) -> np.ndarray:
    """Return ``D[q, i] = dA_i / d rates_q``."""
    diff = rates[None, :] - rates[:, None]  # diff[q, i] = r_i - r_q
    np.fill_diagonal(diff, 1.0)
    d = a[None, :] * rates[None, :] / (rates[:, None] * diff)
    inverse = 1.0 / diff
    np.fill_diagonal(inverse, 0.0)
    np.fill_diagonal(d, a * inverse.sum(axis=1))
    return d


def _score_arrays(rates: np.ndarray, k: float, x: np.ndarray) -> np.ndarray:
    ordered = np.sort(rates)
    if rates.size > 1 and np.min(np.diff(ordered) / ordered[1:]) < SCORE_MIN_GAP:
        msg = f"rates {rates.tolist()} are too close for an accurate score"
        raise ConditioningError(msg)
    a = coefficients_array(rates)
    d = _coefficient_derivatives(rates, a)
    rx = np.multiply.outer(x, rates)
    decay = np.exp(-rx)
    values = hypo_values(rates, a, x)
    df = (decay * rates) @ d.T + a * (1.0 - rx) * decay
    dF = (-np.expm1(-rx)) @ d.T + a * x[:, None] * decay
    score = (df / values.raw_pdf[:, None]).sum(axis=0)
    if k != 1:
        score += (k - 1.0) * (dF / values.cdf[:, None]).sum(axis=0)
    return score


def loglik(p: EHypoParams, s: Sample) -> float:
    """Log-likelihood ``N log k + sum log f_S(x_j) + (k - 1) sum log F_S(x_j)``.

    Returns -inf, with a ConditioningWarning, when a density term vanishes under
    cancellation.
    """
    return _loglik_arrays(p.rates.array, p.k, s.array)


def k_hat(rates: RateVector, s: Sample) -> float:
    """Closed-form maximizer of the log-likelihood in k for fixed rates.

    Raises:
        ConditioningError: If a CDF value is not strictly inside (0, 1).
    """
    return _k_hat_arrays(RateVector.of(rates).array, s.array)


def score_k(p: EHypoParams, s: Sample) -> float:
    """Derivative of the log-likelihood in k: ``N / k + sum log F_S(x_j)``."""
    x = s.array
    return x.size / p.k + _log_cdf_sum(p.rates.array, x)


def score_alphas(p: EHypoParams, s: Sample) -> np.ndarray:
    """Gradient of the log-likelihood with respect to every rate.

    The coefficient derivatives are ``dA_q/da_q = A_q sum_{v != q} 1 / (a_v - a_q)``
    and ``dA_i/da_q = A_i a_i / (a_q (a_i - a_q))`` for i != q.

    Raises:
        ConditioningError: If two rates are within ``SCORE_MIN_GAP`` relative.
    """
    return _score_arrays(p.rates.array, p.k, s.array)


def score_alpha(p: EHypoParams, s: Sample, q: int) -> float:
    """Derivative of the log-likelihood with respect to rate ``q`` (0-based)."""
    if not 0 <= q < p.n:
        msg = f"stage index must be in [0, {p.n}), got {q}"
        raise DomainError(msg)
    return float(score_alphas(p, s)[q])


def profile_loglik(rates: RateVector, s: Sample, fix_k: float | None = None) -> tuple[float, float]:
    """Return ``(loglik, k)`` with k profiled out by ``k_hat`` unless ``fix_k`` is given."""
    r = RateVector.of(rates).array
    x = s.array
    k = fix_k if fix_k is not None else _k_hat_arrays(r, x)
    return _loglik_arrays(r, k, x), k


def rates_from_theta(theta: np.ndarray) -> np.ndarray:
    """Map unconstrained coordinates to sorted, separated rates."""
    rates = np.empty_like(theta)
    rates[0] = np.exp(theta[0])
    for i in range(1, theta.size):
        rates[i] = rates[i - 1] * (1.0 + MIN_RATE_GAP) + np.exp(theta[i])
    return rates


def theta_from_rates(rates: np.ndarray) -> np.ndarray:
    """Inverse of ``rates_from_theta`` for sorted rates separated by more than the floor."""
    rates = np.sort(np.asarray(rates, dtype=float))
    theta = np.empty_like(rates)
    theta[0] = np.log(rates[0])
    theta[1:] = np.log(rates[1:] - rates[:-1] * (1.0 + MIN_RATE_GAP))
    return theta


def _theta_jacobian(theta: np.ndarray) -> np.ndarray:
    n = theta.size
    i, j = np.indices((n, n))
    return np.where(j <= i, (1.0 + MIN_RATE_GAP) ** (i - j) * np.exp(theta)[None, :], 0.0)


@dataclass
class _ProfileObjective:
    """Mean negative profile log-likelihood in theta coordinates."""

    x: np.ndarray
    fix_k: float | None

    def rates_and_k(self, theta: np.ndarray) -> tuple[np.ndarray, float]:
        rates = rates_from_theta(theta)
        if not np.all(np.isfinite(rates)) or rates[-1] > 1e12:  # noqa: PLR2004
            msg = "rates left the representable range"
            raise DomainError(msg)
        k = self.fix_k if self.fix_k is not None else _k_hat_arrays(rates, self.x)
        return rates, k

    def __call__(self, theta: np.ndarray) -> float:
        try:
            rates, k = self.rates_and_k(theta)
            value = -_loglik_arrays(rates, k, self.x) / self.x.size
        except EHypoError:
            return np.inf
        return value if np.isfinite(value) else np.inf

    def gradient(self, theta: np.ndarray) -> np.ndarray:
        try:
            rates, k = self.rates_and_k(theta)
            # k_hat zeroes the k-score, so the profile gradient is the rate score at k_hat
            score = _score_arrays(rates, k, self.x)
        except EHypoError:
            return optimize.approx_fprime(theta, self, 1e-7)
        return -(_theta_jacobian(theta).T @ score) / self.x.size

    def hessian(self, theta: np.ndarray, step: float = 1e-5) -> np.ndarray:
        n = theta.size
        hess = np.empty((n, n))
        for j in range(n):
            e = np.zeros(n)
            e[j] = step
            hess[:, j] = (self.gradient(theta + e) - self.gradient(theta - e)) / (2 * step)
        return 0.5 * (hess + hess.T)


@dataclass
class _StartOutcome:
    theta: np.ndarray
    value: float
    gradient_norm: float
    iterations: int
    converged: bool
    trace: list[float] = field(default_factory=list)


def start_points(x: np.ndarray, options: FitOptions) -> list[np.ndarray]:
    """Deterministic start rates scattered around the moment-matched rate ``n / mean(x)``.

    Each start scales the base rate by a factor from a geometric grid over
    ``START_SPREAD`` and spreads the n stages geometrically by a seeded ratio near 3.
    ``options.initial_rates`` (sorted) is appended as an extra start.
    """
    n = options.n
    base = n / float(np.mean(x))
    rng = np.random.default_rng(options.seed)
    scales = np.geomspace(*START_SPREAD, num=options.starts)
    points = []
    for scale in scales:
        ratio = 3.0 * np.exp(rng.uniform(-0.25, 0.25))
        spread = ratio ** (np.arange(n) - (n - 1) / 2.0)
        points.append(np.sort(base * scale * spread))
    if options.initial_rates is not None:
        points.append(np.sort(np.asarray(options.initial_rates, dtype=float)))
    return points


def _newton_polish(
    objective: _ProfileObjective, theta: np.ndarray, value: float, tolerance: float, trace: list[float]
) -> tuple[np.ndarray, float, int, bool]:
    n_obs = objective.x.size
    for step_count in range(1, MAX_NEWTON_STEPS + 1):
        grad = objective.gradient(theta)
        try:
            direction = -np.linalg.solve(objective.hessian(theta), grad)
        except np.linalg.LinAlgError:
            direction = -grad
        if not np.all(np.isfinite(direction)) or direction @ grad >= 0:
            direction = -grad
        step = 1.0
        for _ in range(30):
            candidate = theta + step * direction
            candidate_value = objective(candidate)
            if candidate_value <= value:
                break
            step *= 0.5
        else:
            return theta, value, step_count, float(np.linalg.norm(grad)) <= GRADIENT_TOL
        change = value - candidate_value
        theta, value = candidate, candidate_value
        trace.append(-value * n_obs)
        if change < tolerance:
            return theta, value, step_count, True
    return theta, value, MAX_NEWTON_STEPS, False


def _fit_from(objective: _ProfileObjective, theta0: np.ndarray, options: FitOptions) -> _StartOutcome:
    n_obs = objective.x.size
    value = objective(theta0)
    trace = [-value * n_obs]
    theta = theta0
    iterations = 0

    simplex = optimize.minimize(
        objective,
        theta0,
        method="Nelder-Mead",
        options={"maxiter": options.max_iterations, "xatol": 1e-8, "fatol": options.tolerance},
    )
    iterations += simplex.nit
    if simplex.fun <= value:
        theta, value = simplex.x, float(simplex.fun)
        trace.append(-value * n_obs)

    if np.isfinite(value):
        quasi = optimize.minimize(
            objective,
            theta,
            jac=objective.gradient,
            method="BFGS",
            options={"maxiter": options.max_iterations, "gtol": 1e-10},
        )
        iterations += quasi.nit
        if np.isfinite(quasi.fun) and quasi.fun <= value:
            theta, value = quasi.x, float(quasi.fun)
            trace.append(-value * n_obs)

    converged = False
    if np.isfinite(value):
        theta, value, steps, settled = _newton_polish(objective, theta, value, options.tolerance, trace)
        iterations += steps
        grad_norm = float(np.linalg.norm(objective.gradient(theta)))
        converged = settled and grad_norm <= GRADIENT_TOL
    else:
        grad_norm = np.inf
    return _StartOutcome(theta, value, grad_norm, iterations, converged, trace)


def fit(s: Sample, options: FitOptions) -> FitResult:
    """Fit an n-stage EHypo distribution to a sample by maximum likelihood.

    Args:
        s: Positive observations, at least ``options.n + 2`` of them.
        options: Stage count, iteration limits, seed and an optional fixed k.

    Returns:
        FitResult with sorted rates and the best log-likelihood over all starts.

    Raises:
        DomainError: If the sample is too small.
        FitFailureError: If no start yields a finite likelihood.
    """
    x = s.array
    if x.size < options.n + 2:
        msg = f"need at least n + 2 = {options.n + 2} observations, got {x.size}"
        raise DomainError(msg)

    objective = _ProfileObjective(x=x, fix_k=options.fix_k)
    outcomes: list[_StartOutcome] = []
    failures: list[str] = []
    with warnings.catch_warnings(), np.errstate(all="ignore"):
        warnings.simplefilter("ignore", EHypoWarning)
        warnings.simplefilter("ignore", RuntimeWarning)
        for index, start in enumerate(start_points(x, options)):
            theta0 = theta_from_rates(start)
            outcome = _fit_from(objective, theta0, options)
            logger.debug(
                "start %d from %s: objective %.10g, |grad| %.3g, %d iterations",
                index,
                np.round(start, 6).tolist(),
                outcome.value,
                outcome.gradient_norm,
                outcome.iterations,
            )
            if np.isfinite(outcome.value):
                outcomes.append(outcome)
            else:
                failures.append(f"start {index} at rates {start.tolist()}: no finite likelihood")

    if not outcomes:
        msg = "no start point produced a finite likelihood"
        raise FitFailureError(msg, diagnostics=failures)

    best = min(outcomes, key=lambda o: (round(o.value, 12), o.gradient_norm))
    rates = rates_from_theta(best.theta)
    k = options.fix_k if options.fix_k is not None else _k_hat_arrays(rates, x)
    messages = [*failures]
    gaps = np.diff(rates) / rates[:-1]
    if gaps.size and gaps.min() < COALESCENT_GAP:
        message = "rates nearly coalescent, consider smaller n"
        warnings.warn(message, CoalescentRatesWarning, stacklevel=2)
        messages.append(message)
    if not best.converged:
        messages.append(f"optimizer did not converge (|grad| = {best.gradient_norm:.3g})")

    result = FitResult(
        params=EHypoParams(rates=rates, k=k),
        loglik=-best.value * x.size,
        converged=best.converged,
        iterations=best.iterations,
        gradient_norm=best.gradient_norm,
        k_fixed=options.fix_k is not None,
        warnings=tuple(messages),
        trace=tuple(best.trace),
    )
    logger.debug("fit finished: rates=%s k=%.6g loglik=%.10g", rates.tolist(), k, result.loglik)
    return result
