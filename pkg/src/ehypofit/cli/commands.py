"""CLI commands for ehypofit."""

from __future__ import annotations

import functools
import logging
import warnings
from collections.abc import Callable, Iterator
from contextlib import contextmanager
from functools import partial
from pathlib import Path
from typing import Any

import click
import numpy as np

from ehypofit.cli.config import Command, GridSpec, ModelSpec, RunConfig, build, parse_rates
from ehypofit.cli.i18n import t
from ehypofit.cli.ingest import ingest
from ehypofit.cli.output import Block, emit, print_error, print_warning
from ehypofit.ehypo import ehypo_cdf, ehypo_hazard, ehypo_pdf, ehypo_sample, ehypo_survival
from ehypofit.estimate import fit as fit_sample
from ehypofit.exceptions import EHypoError, EHypoWarning, ExitCode
from ehypofit.gof import CRITERIA, compare as compare_models, gof_report, model_from_fit
from ehypofit.models import EHypoParams, FitResult, GofReport, Sample

logger = logging.getLogger(__name__)

DEFAULT_GRID = "0:10:0.01"
PLOT_POINTS = 200
ERROR_KEYS = {
    ExitCode.CONFIG: "cli.error.config",
    ExitCode.INGESTION: "cli.error.ingestion",
    ExitCode.NUMERIC: "cli.error.numeric",
}
EVAL_COLUMNS = ["t", "pdf", "cdf", "survival", "hazard"]


def fail(ctx: click.Context, error: EHypoError) -> None:
    """Report an error on stderr and exit with its code."""
    print_error(t(ERROR_KEYS[error.exit_code], error=str(error)))
    ctx.exit(int(error.exit_code))


@contextmanager
def reported_warnings() -> Iterator[list[str]]:
    """Collect EHypoWarnings raised in the block and print them, once each, on exit.

    Yields:
        A list the caller can append further warning messages to.
    """
    notes: list[str] = []
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", EHypoWarning)
            yield notes
    finally:
        messages = [str(w.message) for w in caught if issubclass(w.category, EHypoWarning)] + notes
        for message in dict.fromkeys(messages):
            print_warning(t("cli.warning", message=message))


def output_options(func: Callable[..., Any]) -> Callable[..., Any]:
    """Add ``--format`` and ``--out`` to a command."""

    @click.option(
        "--format",
        "output_format",
        type=click.Choice(["json", "csv", "table"]),
        default=None,
        help="Output format (defaults to the global --format)",
    )
    @click.option("--out", type=click.Path(dir_okay=False, path_type=Path), help="Write output to a file")
    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        return func(*args, **kwargs)

    return wrapper


seed_option = click.option(
    "--seed",
    type=int,
    default=42,
    show_default=True,
    envvar="EHYPOFIT_SEED",
    help="Random seed (or EHYPOFIT_SEED env)",
)


def resolve_format(ctx: click.Context, output_format: str | None) -> str:
    return output_format or ctx.obj.get("format", "json")


def params_dict(params: EHypoParams) -> dict[str, Any]:
    return {"rates": list(params.rates.rates), "k": params.k}


def report_dict(report: GofReport) -> dict[str, Any]:
    return report.model_dump()


def fit_summary(spec: ModelSpec, result: FitResult) -> dict[str, Any]:
    """JSON view of a fit: estimates and convergence block."""
    return {
        "model": spec.name.value,
        "n": spec.n,
        "estimates": {**params_dict(result.params), "k_fixed": result.k_fixed},
        "convergence": {
            "converged": result.converged,
            "iterations": result.iterations,
            "gradient_norm": result.gradient_norm,
            "warnings": list(result.warnings),
        },
    }


def run_fit(spec: ModelSpec, sample: Sample, seed: int) -> FitResult:
    """Fit one model family to a sample."""
    logger.debug("fitting %s to %d observations", spec.label, sample.size)
    return fit_sample(sample, spec.fit_options(seed))


def plot_data(params: EHypoParams, sample: Sample, grid: GridSpec) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Histogram and fitted density for a sample.

    Returns:
        ``(edges, density, t, pdf)``: Freedman-Diaconis bin edges, density-normalized bar
        heights, the grid abscissae and the density at them.
    """
    density, edges = np.histogram(sample.array, bins="fd", density=True)
    points = grid.points()
    return edges, density, points, np.asarray(ehypo_pdf(params, points), dtype=float)


def default_plot_grid(sample: Sample) -> GridSpec:
    """Grid from 0 to the largest observation in ``PLOT_POINTS`` steps."""
    top = float(sample.array.max())
    return GridSpec(start=0.0, stop=top, step=top / PLOT_POINTS)


@click.command("eval")
@click.option("--rates", required=True, help="Comma-separated stage rates, e.g. 5,4,3")
@click.option("--k", "k", type=float, default=1.0, show_default=True, help="Exponent k")
@click.option("--grid", default=DEFAULT_GRID, show_default=True, help="Evaluation grid START:STOP:STEP")
@output_options
@click.pass_context
def eval_command(
    ctx: click.Context,
    rates: str,
    k: float,
    grid: str,
    output_format: str | None,
    out: Path | None,
) -> None:
    """Evaluate pdf, cdf, survival and hazard on a grid."""
    try:
        cfg = build(
            RunConfig,
            command=Command.EVAL,
            rates=parse_rates(rates),
            k=k,
            grid=GridSpec.parse(grid),
            output_format=resolve_format(ctx, output_format),
            out=out,
        )
        params = EHypoParams(rates=cfg.rates, k=cfg.k)
        points = cfg.grid.points()
        with reported_warnings():
            columns = [
                points,
                ehypo_pdf(params, points),
                ehypo_cdf(params, points),
                ehypo_survival(params, points),
                ehypo_hazard(params, points),
            ]
        rows = np.column_stack(columns).tolist()
        data = {
            "command": "eval",
            "params": params_dict(params),
            "grid": cfg.grid.model_dump(),
            "data": {name: column for name, column in zip(EVAL_COLUMNS, columns)},
        }
        emit(data, [Block("eval", EVAL_COLUMNS, rows)], cfg.output_format, cfg.out)
    except EHypoError as e:
        fail(ctx, e)


@click.command()
@click.option("--rates", required=True, help="Comma-separated stage rates")
@click.option("--k", "k", type=float, default=1.0, show_default=True, help="Exponent k")
@click.option("--count", type=int, default=1000, show_default=True, help="Number of variates")
@seed_option
@output_options
@click.pass_context
def sample(  # noqa: PLR0913
    ctx: click.Context,
    rates: str,
    k: float,
    count: int,
    seed: int,
    output_format: str | None,
    out: Path | None,
) -> None:
    """Draw random variates from an EHypo distribution."""
    try:
        cfg = build(
            RunConfig,
            command=Command.SAMPLE,
            rates=parse_rates(rates),
            k=k,
            count=count,
            seed=seed,
            output_format=resolve_format(ctx, output_format),
            out=out,
        )
        params = EHypoParams(rates=cfg.rates, k=cfg.k)
        values = ehypo_sample(params, cfg.count, cfg.seed)
        data = {"command": "sample", "params": params_dict(params), "seed": cfg.seed, "values": values}
        emit(data, [Block("sample", ["x"], [[v] for v in values.tolist()])], cfg.output_format, cfg.out)
    except EHypoError as e:
        fail(ctx, e)


@click.command()
@click.option("--data", "data_path", required=True, type=click.Path(path_type=Path), help="Observation file")
@click.option("--model", default="ehypoexp", show_default=True, help="Model: exp, ee, hypoexp[:n] or ehypoexp[:n]")
@click.option("--n", "n", type=int, default=2, show_default=True, help="Stage count when --model omits it")
@seed_option
@output_options
@click.pass_context
def fit(  # noqa: PLR0913
    ctx: click.Context,
    data_path: Path,
    model: str,
    n: int,
    seed: int,
    output_format: str | None,
    out: Path | None,
) -> None:
    """Fit a model by maximum likelihood and report goodness of fit."""
    try:
        cfg = build(
            RunConfig,
            command=Command.FIT,
            n=n,
            models=(ModelSpec.parse(model, default_n=n),),
            data=data_path,
            seed=seed,
            output_format=resolve_format(ctx, output_format),
            out=out,
        )
        dataset = ingest(cfg.data)
        spec = cfg.models[0]
        report_error: EHypoError | None = None
        with reported_warnings():
            result = run_fit(spec, dataset.sample, cfg.seed)
            try:
                gof = report_dict(
                    gof_report(result.loglik, result.n_params, partial(ehypo_cdf, result.params), dataset.sample)
                )
            except EHypoError as e:
                report_error = e
                gof = {**dict.fromkeys(CRITERIA), "c": result.n_params, "v": dataset.count}

        data = {
            "command": "fit",
            "data": str(cfg.data),
            "n_observations": dataset.count,
            **fit_summary(spec, result),
            "gof": gof,
        }
        rows: list[list[Any]] = [["model", spec.label]]
        rows += [[f"rate_{i}", rate] for i, rate in enumerate(result.params.rates.rates, start=1)]
        rows += [["k", result.params.k], ["k_fixed", result.k_fixed]]
        rows += [[name, value] for name, value in gof.items()]
        rows += [["converged", result.converged], ["iterations", result.iterations]]
        rows += [["gradient_norm", result.gradient_norm]]
        emit(data, [Block("fit", ["field", "value"], rows)], cfg.output_format, cfg.out)

        if report_error is not None:
            print_error(t("cli.fit.no_report", error=str(report_error)))
            ctx.exit(int(ExitCode.NUMERIC))
        if not result.converged:
            print_error(t("cli.fit.not_converged", detail=f"|grad| = {result.gradient_norm:.3g}"))
            ctx.exit(int(ExitCode.NUMERIC))
    except EHypoError as e:
        fail(ctx, e)


@click.command()
@click.option("--data", "data_path", required=True, type=click.Path(path_type=Path), help="Observation file")
@click.option(
    "--models",
    default="hypoexp:2,ehypoexp:2",
    show_default=True,
    help="Comma-separated models, each exp, ee, hypoexp[:n] or ehypoexp[:n]",
)
@click.option("--n", "n", type=int, default=2, show_default=True, help="Stage count for models without one")
@seed_option
@output_options
@click.pass_context
def compare(  # noqa: PLR0913
    ctx: click.Context,
    data_path: Path,
    models: str,
    n: int,
    seed: int,
    output_format: str | None,
    out: Path | None,
) -> None:
    """Fit several models and rank them by information criteria and EDF statistics."""
    try:
        specs = tuple(ModelSpec.parse(text, default_n=n) for text in models.split(",") if text.strip())
        cfg = build(
            RunConfig,
            command=Command.COMPARE,
            n=n,
            models=specs,
            data=data_path,
            seed=seed,
            output_format=resolve_format(ctx, output_format),
            out=out,
        )
        dataset = ingest(cfg.data)

        candidates = []
        fits: dict[str, Any] = {}
        failures: dict[str, str] = {}
        with reported_warnings() as notes:
            for spec in cfg.models:
                try:
                    result = run_fit(spec, dataset.sample, cfg.seed)
                except EHypoError as e:
                    failures[spec.label] = str(e)
                    notes.append(t("cli.compare.failed", name=spec.label, error=str(e)))
                    continue
                candidates.append(model_from_fit(spec.label, result))
                fits[spec.label] = fit_summary(spec, result)
            table = compare_models(candidates, dataset.sample, failures)
            notes.extend(
                t("cli.compare.no_report", name=row.name, error=row.error)
                for row in table.rows
                if row.error and row.name not in failures
            )

        data = {
            "command": "compare",
            "data": str(cfg.data),
            "n_observations": dataset.count,
            "rows": [
                {
                    "name": row.name,
                    "report": report_dict(row.report) if row.report else None,
                    "ranks": row.ranks,
                    "error": row.error,
                }
                for row in table.rows
            ],
            "ranking": {criterion: list(names) for criterion, names in table.ranking.items()},
            "fits": fits,
        }
        headers = ["name", *CRITERIA, "c", "v", "error"]
        rows = []
        for row in table.rows:
            values = report_dict(row.report) if row.report else {}
            rows.append([row.name, *(values.get(name) for name in (*CRITERIA, "c", "v")), row.error])
        ranking_rows = [[criterion, " < ".join(names)] for criterion, names in table.ranking.items()]
        blocks = [Block("comparison", headers, rows), Block("ranking", ["criterion", "order"], ranking_rows)]
        emit(data, blocks, cfg.output_format, cfg.out)

        if any(row.error for row in table.rows):
            ctx.exit(int(ExitCode.NUMERIC))
    except EHypoError as e:
        fail(ctx, e)


@click.command()
@click.option("--data", "data_path", required=True, type=click.Path(path_type=Path), help="Observation file")
@click.option("--model", default="ehypoexp", show_default=True, help="Model to fit when --rates is not given")
@click.option("--n", "n", type=int, default=2, show_default=True, help="Stage count when --model omits it")
@click.option("--rates", default=None, help="Use these rates instead of fitting")
@click.option("--k", "k", type=float, default=1.0, show_default=True, help="Exponent k used with --rates")
@click.option("--grid", default=None, help="Density grid START:STOP:STEP (defaults to 0 to max(data))")
@seed_option
@output_options
@click.pass_context
def plotdata(  # noqa: PLR0913
    ctx: click.Context,
    data_path: Path,
    model: str,
    n: int,
    rates: str | None,
    k: float,
    grid: str | None,
    seed: int,
    output_format: str | None,
    out: Path | None,
) -> None:
    """Emit a density histogram of the data and the fitted density curve."""
    try:
        cfg = build(
            RunConfig,
            command=Command.PLOTDATA,
            n=n,
            rates=parse_rates(rates) if rates is not None else None,
            k=k,
            models=(ModelSpec.parse(model, default_n=n),),
            data=data_path,
            grid=GridSpec.parse(grid) if grid is not None else None,
            seed=seed,
            output_format=resolve_format(ctx, output_format),
            out=out,
        )
        dataset = ingest(cfg.data)
        with reported_warnings():
            if cfg.rates is not None:
                params = EHypoParams(rates=cfg.rates, k=cfg.k)
            else:
                params = run_fit(cfg.models[0], dataset.sample, cfg.seed).params
            edges, density, points, pdf = plot_data(params, dataset.sample, cfg.grid or default_plot_grid(dataset.sample))

        data = {
            "command": "plotdata",
            "data": str(cfg.data),
            "n_observations": dataset.count,
            "params": params_dict(params),
            "histogram": {"edges": edges, "density": density},
            "curve": {"t": points, "pdf": pdf},
        }
        blocks = [
            Block("histogram", ["bin_left", "bin_right", "density"], np.column_stack([edges[:-1], edges[1:], density]).tolist()),
            Block("curve", ["t", "pdf"], np.column_stack([points, pdf]).tolist()),
        ]
        emit(data, blocks, cfg.output_format, cfg.out)
    except EHypoError as e:
        fail(ctx, e)
