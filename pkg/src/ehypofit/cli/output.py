"""Output formatting utilities for the CLI."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any

import click
import numpy as np
from rich.console import Console
from rich.markup import escape
from rich.table import Table

if TYPE_CHECKING:
    from pathlib import Path

SIGNIFICANT_DIGITS = 9

console = Console()
error_console = Console(stderr=True)


@dataclass(frozen=True)
class Block:
    """A named table of rows sharing one header."""

    name: str
    headers: list[str]
    rows: list[list[Any]]


def format_number(value: float) -> str:
    """Render a number with 9 significant digits."""
    return f"{value:.{SIGNIFICANT_DIGITS}g}"


def _cell(value: Any) -> str:
    if isinstance(value, (float, np.floating)):
        return format_number(float(value))
    if value is None:
        return ""
    return str(value)


def to_jsonable(value: Any) -> Any:
    """Round floats to 9 significant digits and spell non-finite ones as strings."""
    if isinstance(value, dict):
        return {str(key): to_jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [to_jsonable(item) for item in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        number = float(value)
        return float(format_number(number)) if math.isfinite(number) else format_number(number)
    return value


def render_json(data: dict[str, Any]) -> str:
    """Serialize a report as one JSON object."""
    return json.dumps(to_jsonable(data), indent=2)


def render_csv(blocks: list[Block]) -> str:
    """Serialize blocks as CSV, one header per block and a blank line between blocks."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    for index, block in enumerate(blocks):
        if index:
            buffer.write("\n")
        writer.writerow(block.headers)
        writer.writerows([_cell(cell) for cell in row] for row in block.rows)
    return buffer.getvalue()


def print_table(block: Block, target: Console | None = None) -> None:
    """Print a block as a formatted table using rich."""
    target = target or console
    if not block.rows:
        target.print("No data.")
        return

    table = Table(title=block.name, show_header=True, header_style="bold")
    for header in block.headers:
        table.add_column(header)
    for row in block.rows:
        table.add_row(*[escape(_cell(cell)) for cell in row])
    target.print(table)


def emit(data: dict[str, Any], blocks: list[Block], output_format: str, out: Path | None = None) -> None:
    """Write a report to ``out`` or stdout.

    Args:
        data: The JSON document of the report.
        blocks: The same report as tables, used by the csv and table formats.
        output_format: One of json, csv or table.
        out: Destination file; stdout when None.
    """
    if output_format == "table":
        if out is None:
            for block in blocks:
                print_table(block)
            return
        with out.open("w", encoding="utf-8") as handle:
            file_console = Console(file=handle, width=120)
            for block in blocks:
                print_table(block, file_console)
        return

    text = render_json(data) + "\n" if output_format == "json" else render_csv(blocks)
    if out is None:
        click.echo(text, nl=False)
    else:
        out.write_text(text, encoding="utf-8")


def print_error(message: str) -> None:
    """Print an error message in red to stderr."""
    error_console.print(f"[red]{escape(message)}[/red]", soft_wrap=True)


def print_warning(message: str) -> None:
    """Print a warning message in yellow to stderr."""
    error_console.print(f"[yellow]{escape(message)}[/yellow]", soft_wrap=True)
