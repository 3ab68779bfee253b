"""Reading observation files into samples."""

from __future__ import annotations

import logging
import re
from pathlib import Path

from pydantic import BaseModel, ConfigDict

from ehypofit.exceptions import EmptyDataError, IngestionError, NonPositiveValueError, ParseError
from ehypofit.models import Sample

logger = logging.getLogger(__name__)

TOKEN = re.compile(r"[^,\s]+")
DECIMAL = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")


class DatasetFile(BaseModel):
    """An observation file and the sample parsed from it."""

    model_config = ConfigDict(frozen=True)

    path: Path
    sample: Sample

    @property
    def count(self) -> int:
        return self.sample.size


def parse_values(text: str) -> list[float]:
    """Parse newline-, comma- or whitespace-separated decimal reals.

    Blank lines are skipped.

    Raises:
        ParseError: If a token is not a decimal real.
        NonPositiveValueError: If a value is not strictly positive.
        EmptyDataError: If the text holds no values.
    """
    values: list[float] = []
    for line_number, line in enumerate(text.splitlines(), start=1):
        for match in TOKEN.finditer(line):
            token = match.group()
            column = match.start() + 1
            if not DECIMAL.fullmatch(token):
                msg = f"'{token}' is not a decimal number"
                raise ParseError(msg, line=line_number, column=column)
            value = float(token)
            if value <= 0:
                msg = f"value {token} is not > 0"
                raise NonPositiveValueError(msg, line=line_number, column=column)
            values.append(value)
    if not values:
        msg = "no values found"
        raise EmptyDataError(msg)
    return values


def ingest(path: Path) -> DatasetFile:
    """Read an observation file.

    Raises:
        IngestionError: If the file cannot be read or parsed.
    """
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        msg = f"cannot read {path}: {e}"
        raise IngestionError(msg) from e

    try:
        values = parse_values(text)
    except IngestionError as e:
        e.message = f"{path}: {e.message}"
        e.args = (e.message,)
        raise
    dataset = DatasetFile(path=path, sample=Sample(values=values))
    logger.debug("read %d values from %s", dataset.count, path)
    return dataset
