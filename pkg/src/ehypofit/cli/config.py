"""Run configuration assembled from command-line options."""

from __future__ import annotations

import math
from enum import Enum
from pathlib import Path
from typing import Any, Literal, TypeVar

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ehypofit.exceptions import ConfigError, DomainError
from ehypofit.models import FitOptions, check_rates

MAX_GRID_POINTS = 10_000_000
GRID_SLACK = 1e-9


class Command(str, Enum):
    """Commands of the CLI."""

    EVAL = "eval"
    SAMPLE = "sample"
    FIT = "fit"
    COMPARE = "compare"
    PLOTDATA = "plotdata"


class ModelName(str, Enum):
    """Model families that can be fitted.

    ``exp`` and ``ee`` are the one-stage cases with k pinned to 1 and k free;
    ``hypoexp`` and ``ehypoexp`` take any stage count.
    """

    EXP = "exp"
    EE = "ee"
    HYPOEXP = "hypoexp"
    EHYPOEXP = "ehypoexp"


OutputFormat = Literal["json", "csv", "table"]
M = TypeVar("M", bound=BaseModel)


class GridSpec(BaseModel):
    """Evenly spaced evaluation points ``start, start + step, ..., stop``."""

    model_config = ConfigDict(frozen=True)

    start: float
    stop: float
    step: float

    @model_validator(mode="after")
    def _validate(self) -> GridSpec:
        if not all(math.isfinite(v) for v in (self.start, self.stop, self.step)):
            msg = "grid bounds and step must be finite"
            raise ConfigError(msg)
        if self.step <= 0:
            msg = f"grid step must be > 0, got {self.step:g}"
            raise ConfigError(msg)
        if self.start < 0 or self.stop <= self.start:
            msg = f"grid needs stop > start >= 0, got {self.start:g}:{self.stop:g}"
            raise ConfigError(msg)
        if self.size > MAX_GRID_POINTS:
            msg = f"grid has {self.size} points, at most {MAX_GRID_POINTS} are supported"
            raise ConfigError(msg)
        return self

    @classmethod
    def parse(cls, text: str) -> GridSpec:
        """Parse ``START:STOP:STEP``.

        Raises:
            ConfigError: If the text is malformed or describes an empty grid.
        """
        parts = text.split(":")
        if len(parts) != 3:  # noqa: PLR2004
            msg = f"grid must look like START:STOP:STEP, got '{text}'"
            raise ConfigError(msg)
        try:
            start, stop, step = (float(part) for part in parts)
        except ValueError as e:
            msg = f"grid must look like START:STOP:STEP, got '{text}'"
            raise ConfigError(msg) from e
        return cls(start=start, stop=stop, step=step)

    @property
    def size(self) -> int:
        return math.floor((self.stop - self.start) / self.step + GRID_SLACK) + 1

    def points(self) -> np.ndarray:
        """Grid abscissae; the last one is ``stop`` when the step divides the range."""
        return self.start + self.step * np.arange(self.size, dtype=float)


class ModelSpec(BaseModel):
    """A model family and its stage count, written ``name[:n]``."""

    model_config = ConfigDict(frozen=True)

    name: ModelName
    n: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _validate(self) -> ModelSpec:
        if self.name in (ModelName.EXP, ModelName.EE) and self.n != 1:
            msg = f"model '{self.name.value}' has a single stage, got n={self.n}"
            raise ConfigError(msg)
        return self

    @classmethod
    def parse(cls, text: str, default_n: int) -> ModelSpec:
        """Parse ``name`` or ``name:n``; ``default_n`` applies to multi-stage families.

        Raises:
            ConfigError: If the name is unknown or n is not a positive integer.
        """
        name_text, _, n_text = text.strip().partition(":")
        try:
            name = ModelName(name_text.lower())
        except ValueError as e:
            choices = ", ".join(m.value for m in ModelName)
            msg = f"unknown model '{name_text}', choose from {choices}"
            raise ConfigError(msg) from e
        if n_text:
            try:
                n = int(n_text)
            except ValueError as e:
                msg = f"stage count in '{text}' is not an integer"
                raise ConfigError(msg) from e
        else:
            n = 1 if name in (ModelName.EXP, ModelName.EE) else default_n
        return build(cls, name=name, n=n)

    @property
    def label(self) -> str:
        return self.name.value if self.name in (ModelName.EXP, ModelName.EE) else f"{self.name.value}:{self.n}"

    @property
    def fix_k(self) -> float | None:
        """The pinned exponent, or None when k is estimated."""
        return 1.0 if self.name in (ModelName.EXP, ModelName.HYPOEXP) else None

    def fit_options(self, seed: int) -> FitOptions:
        return build(FitOptions, n=self.n, seed=seed, fix_k=self.fix_k)


def parse_rates(text: str) -> tuple[float, ...]:
    """Parse a comma-separated rate list.

    Raises:
        ConfigError: If a rate is not a number.
    """
    try:
        return tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError as e:
        msg = f"rates must be comma-separated numbers, got '{text}'"
        raise ConfigError(msg) from e


class RunConfig(BaseModel):
    """Validated options of one CLI invocation."""

    model_config = ConfigDict(frozen=True)

    command: Command
    rates: tuple[float, ...] | None = None
    k: float = Field(default=1.0, gt=0)
    n: int = Field(default=2, ge=1)
    models: tuple[ModelSpec, ...] = ()
    data: Path | None = None
    grid: GridSpec | None = None
    count: int = Field(default=1000, ge=1)
    seed: int = 42
    output_format: OutputFormat = "json"
    out: Path | None = None

    @field_validator("rates")
    @classmethod
    def _validate_rates(cls, value: tuple[float, ...] | None) -> tuple[float, ...] | None:
        if value is not None:
            try:
                check_rates(value)
            except DomainError as e:
                raise ConfigError(e.message) from e
        return value

    @model_validator(mode="after")
    def _validate(self) -> RunConfig:
        if self.command in (Command.EVAL, Command.SAMPLE) and self.rates is None:
            msg = f"'{self.command.value}' needs --rates"
            raise ConfigError(msg)
        if self.command in (Command.FIT, Command.COMPARE, Command.PLOTDATA) and self.data is None:
            msg = f"'{self.command.value}' needs --data"
            raise ConfigError(msg)
        if self.command == Command.COMPARE and len(self.models) < 2:  # noqa: PLR2004
            msg = f"'compare' needs at least two models, got {len(self.models)}"
            raise ConfigError(msg)
        return self


def build(model: type[M], **values: Any) -> M:
    """Construct a pydantic model, reporting constraint violations as ConfigError.

    Raises:
        ConfigError: If validation fails.
    """
    try:
        return model(**values)
    except ValidationError as e:
        details = "; ".join(f"{'.'.join(str(p) for p in err['loc']) or 'value'}: {err['msg']}" for err in e.errors())
        raise ConfigError(details) from e
