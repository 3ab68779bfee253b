"""Pydantic models for distribution parameters, samples and reports."""

from __future__ import annotations

import math
from collections.abc import Iterable
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationInfo, field_validator, model_validator

from ehypofit.exceptions import CoefficientSingularityError, DomainError

DISTINCT_RTOL = 1e-9
"""Minimum relative separation between any two rates."""


def _as_float_tuple(value: Any) -> tuple[float, ...]:
    if isinstance(value, (int, float)):
        value = [value]
    return tuple(float(x) for x in np.asarray(value, dtype=float).ravel())


def check_rates(rates: Iterable[float], *, label: str = "rate") -> None:
    """Validate a list of stage rates.

    Args:
        rates: Candidate rates.
        label: Name used in error messages.

    Raises:
        DomainError: If the list is empty or a rate is not finite and positive.
        CoefficientSingularityError: If two rates are closer than ``DISTINCT_RTOL`` relative.
    """
    values = np.asarray(list(rates), dtype=float)
    if values.size == 0:
        msg = f"at least one {label} is required"
        raise DomainError(msg)
    if not np.all(np.isfinite(values)) or np.any(values <= 0):
        msg = f"every {label} must be finite and > 0, got {values.tolist()}"
        raise DomainError(msg)
    if values.size > 1:
        ordered = np.sort(values)
        gaps = np.diff(ordered) / ordered[1:]
        if gaps.min() < DISTINCT_RTOL:
            msg = f"{label}s must be pairwise distinct (relative gap >= {DISTINCT_RTOL:g}), got {values.tolist()}"
            raise CoefficientSingularityError(msg)


def _check_positive(value: float, name: str) -> float:
    if not math.isfinite(value) or value <= 0:
        msg = f"{name} must be finite and > 0, got {value}"
        raise DomainError(msg)
    return value


class RateVector(BaseModel):
    """Distinct positive stage rates of a Hypoexponential distribution."""

    model_config = ConfigDict(frozen=True)

    rates: tuple[float, ...]

    @field_validator("rates", mode="before")
    @classmethod
    def _coerce(cls, value: Any) -> tuple[float, ...]:
        return _as_float_tuple(value)

    @field_validator("rates")
    @classmethod
    def _validate(cls, value: tuple[float, ...]) -> tuple[float, ...]:
        check_rates(value)
        return value

    @classmethod
    def of(cls, value: RateVector | Iterable[float]) -> RateVector:
        """Return ``value`` unchanged if it is a RateVector, else build one."""
        if isinstance(value, RateVector):
            return value
        return cls(rates=value)

    @property
    def n(self) -> int:
        return len(self.rates)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.rates, dtype=float)


class HypoCoefficients(BaseModel):
    """Signed partial-fraction weights attached to a RateVector."""

    model_config = ConfigDict(frozen=True)

    rates: RateVector
    a: tuple[float, ...]

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.a, dtype=float)


class EEParams(BaseModel):
    """Exponentiated Exponential parameters: rate and exponent."""

    model_config = ConfigDict(frozen=True)

    rate: float
    exponent: float

    @field_validator("rate", "exponent")
    @classmethod
    def _validate(cls, value: float, info: ValidationInfo) -> float:
        return _check_positive(value, info.field_name)


class MEEParams(BaseModel):
    """Maximum of independent Exponentiated Exponential variables.

    Zero exponents are allowed and contribute a factor 1; at least one must be positive.
    """

    model_config = ConfigDict(frozen=True)

    lambdas: tuple[float, ...]
    exponents: tuple[float, ...]

    @field_validator("lambdas", "exponents", mode="before")
    @classmethod
    def _coerce(cls, value: Any) -> tuple[float, ...]:
        return _as_float_tuple(value)

    @model_validator(mode="after")
    def _validate(self) -> MEEParams:
        check_rates(self.lambdas, label="lambda")
        if len(self.exponents) != len(self.lambdas):
            msg = f"{len(self.lambdas)} lambdas but {len(self.exponents)} exponents"
            raise DomainError(msg)
        exps = np.asarray(self.exponents)
        if not np.all(np.isfinite(exps)) or np.any(exps < 0) or not np.any(exps > 0):
            msg = f"exponents must be finite, >= 0 and not all zero, got {list(self.exponents)}"
            raise DomainError(msg)
        return self

    @property
    def n(self) -> int:
        return len(self.lambdas)

    @property
    def is_integer(self) -> bool:
        return all(float(g).is_integer() for g in self.exponents)


class EHypoParams(BaseModel):
    """Exponentiated Hypoexponential parameters: n stage rates and exponent k."""

    model_config = ConfigDict(frozen=True)

    rates: RateVector
    k: float

    @field_validator("rates", mode="before")
    @classmethod
    def _coerce_rates(cls, value: Any) -> Any:
        if isinstance(value, (RateVector, dict)):
            return value
        return {"rates": value}

    @field_validator("k")
    @classmethod
    def _validate_k(cls, value: float) -> float:
        return _check_positive(value, "k")

    @property
    def n(self) -> int:
        return self.rates.n

    @property
    def integer_k(self) -> int | None:
        """Return k as an int when it is a positive integer, else None."""
        if float(self.k).is_integer():
            return int(self.k)
        return None


class MultiIndex(BaseModel):
    """A composition of k into n nonnegative integer parts."""

    model_config = ConfigDict(frozen=True)

    g: tuple[int, ...]

    @field_validator("g")
    @classmethod
    def _validate(cls, value: tuple[int, ...]) -> tuple[int, ...]:
        if not value or any(part < 0 for part in value):
            msg = f"multi-index parts must be nonnegative, got {value}"
            raise DomainError(msg)
        return value

    @property
    def k(self) -> int:
        return sum(self.g)


class ExpansionTerm(BaseModel):
    """One term of the integer-k expansion: index, coefficient and MEE component."""

    model_config = ConfigDict(frozen=True)

    index: MultiIndex
    coefficient: float
    component: MEEParams


class EHypoExpansion(BaseModel):
    """Integer-k expansion of an EHypo CDF into weighted MEE CDFs."""

    model_config = ConfigDict(frozen=True)

    params: EHypoParams
    terms: tuple[ExpansionTerm, ...]

    @property
    def coefficients(self) -> np.ndarray:
        return np.asarray([term.coefficient for term in self.terms], dtype=float)


class Sample(BaseModel):
    """Independent positive observations."""

    model_config = ConfigDict(frozen=True)

    values: tuple[float, ...]

    @field_validator("values", mode="before")
    @classmethod
    def _coerce(cls, value: Any) -> tuple[float, ...]:
        return _as_float_tuple(value)

    @field_validator("values")
    @classmethod
    def _validate(cls, value: tuple[float, ...]) -> tuple[float, ...]:
        data = np.asarray(value)
        if data.size == 0:
            msg = "sample is empty"
            raise DomainError(msg)
        if not np.all(np.isfinite(data)) or np.any(data <= 0):
            msg = "sample values must be finite and > 0"
            raise DomainError(msg)
        return value

    @property
    def size(self) -> int:
        return len(self.values)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


class FitOptions(BaseModel):
    """Options for maximum-likelihood fitting."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=1)
    max_iterations: int = Field(default=2000, ge=1)
    tolerance: float = Field(default=1e-10, gt=0)
    seed: int = 42
    starts: int = Field(default=8, ge=1)
    fix_k: float | None = Field(default=None, gt=0)
    initial_rates: tuple[float, ...] | None = None


class FitResult(BaseModel):
    """Outcome of a maximum-likelihood fit.

    ``gradient_norm`` is the Euclidean norm of the gradient of the per-observation
    negative profile log-likelihood (divided by N) in the optimizer's log-gap
    coordinates; ``converged`` requires it to be at most 1e-6. The gradient of the
    total profile log-likelihood is N times larger.
    """

    model_config = ConfigDict(frozen=True)

    params: EHypoParams
    loglik: float
    converged: bool
    iterations: int
    gradient_norm: float
    k_fixed: bool = False
    warnings: tuple[str, ...] = ()
    trace: tuple[float, ...] = ()

    @property
    def n_params(self) -> int:
        """Number of estimated parameters (rates, plus k when it was free)."""
        return self.params.n + (0 if self.k_fixed else 1)


class GofReport(BaseModel):
    """Likelihood criteria and EDF statistics of one fitted model."""

    model_config = ConfigDict(frozen=True)

    neg2loglik: float
    aic: float
    aicc: float
    bic: float
    a_star: float
    w_star: float
    c: int
    v: int


class ComparisonRow(BaseModel):
    """One model's entry in a comparison table; ``report`` is None when its fit failed."""

    model_config = ConfigDict(frozen=True)

    name: str
    report: GofReport | None = None
    error: str | None = None
    ranks: dict[str, int] = Field(default_factory=dict)


class ComparisonTable(BaseModel):
    """Reports of several models with a per-criterion ranking."""

    model_config = ConfigDict(frozen=True)

    rows: tuple[ComparisonRow, ...]
    ranking: dict[str, tuple[str, ...]]
