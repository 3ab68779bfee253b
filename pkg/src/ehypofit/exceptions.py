"""Custom exceptions and warning categories for ehypofit."""

from __future__ import annotations

from enum import IntEnum


class ExitCode(IntEnum):
    """Process exit codes of the command-line interface."""

    OK = 0
    CONFIG = 1
    INGESTION = 2
    NUMERIC = 3


class EHypoError(Exception):
    """Base exception for ehypofit errors."""

    exit_code: ExitCode = ExitCode.NUMERIC

    def __init__(self, message: str, *, exit_code: ExitCode | None = None) -> None:
        """Initialize EHypoError.

        Args:
            message: Error message.
            exit_code: Overrides the class default exit code.
        """
        super().__init__(message)
        self.message = message
        if exit_code is not None:
            self.exit_code = exit_code


class DomainError(EHypoError):
    """Raised when a parameter or argument lies outside its domain."""


class CoefficientSingularityError(DomainError):
    """Raised when rates are too close for the Hypoexponential coefficients."""


class ExpansionOverflowError(EHypoError):
    """Raised when a binomial expansion exponent exceeds the supported cap."""


class CombinatorialExplosionError(EHypoError):
    """Raised when an index set would exceed the enumeration cap."""

    def __init__(self, size: int, bound: int) -> None:
        """Initialize CombinatorialExplosionError.

        Args:
            size: Number of elements that would be enumerated.
            bound: Maximum number of elements allowed.
        """
        super().__init__(f"index set has {size} elements, bound is {bound}")
        self.size = size
        self.bound = bound


class ConditioningError(EHypoError):
    """Raised when cancellation makes a computed quantity unusable."""


class NumericError(EHypoError):
    """Raised when an iterative numeric routine fails to converge."""


class FitFailureError(EHypoError):
    """Raised when no start point of a fit yields a finite likelihood."""

    def __init__(self, message: str, diagnostics: list[str] | None = None) -> None:
        """Initialize FitFailureError.

        Args:
            message: Error message.
            diagnostics: One line per failed start point.
        """
        super().__init__(message)
        self.diagnostics = diagnostics or []

    def __str__(self) -> str:
        """Return error message with diagnostics if available."""
        base = super().__str__()
        if self.diagnostics:
            return base + "\n" + "\n".join(f"  {line}" for line in self.diagnostics)
        return base


class ConfigError(EHypoError):
    """Raised when a run configuration is invalid."""

    exit_code = ExitCode.CONFIG


class IngestionError(EHypoError):
    """Raised when a data file cannot be turned into a sample."""

    exit_code = ExitCode.INGESTION

    def __init__(self, message: str, *, line: int | None = None, column: int | None = None) -> None:
        """Initialize IngestionError.

        Args:
            message: Error message.
            line: 1-based line number of the offending token.
            column: 1-based column number of the offending token.
        """
        super().__init__(message)
        self.line = line
        self.column = column

    def __str__(self) -> str:
        """Return error message with location if available."""
        base = super().__str__()
        if self.line is not None and self.column is not None:
            return f"{base} (line {self.line}, column {self.column})"
        if self.line is not None:
            return f"{base} (line {self.line})"
        return base


class EmptyDataError(IngestionError):
    """Raised when a data file contains no values."""


class NonPositiveValueError(IngestionError):
    """Raised when a data file contains a value that is not strictly positive."""


class ParseError(IngestionError):
    """Raised when a token in a data file is not a decimal real."""


class EHypoWarning(UserWarning):
    """Base category for non-fatal numeric conditions."""


class ConditioningWarning(EHypoWarning):
    """A sum left its valid range by more than the cancellation tolerance."""


class UnboundedDensityWarning(EHypoWarning):
    """A density was evaluated at a point where it is unbounded."""


class TailSaturationWarning(EHypoWarning):
    """A survival probability underflowed to zero, so the hazard is infinite."""


class CoalescentRatesWarning(EHypoWarning):
    """Fitted rates pushed against the minimum separation."""


class TailDegeneracyWarning(EHypoWarning):
    """A fitted CDF reached 0 or 1 at an order statistic."""
