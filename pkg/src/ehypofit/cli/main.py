"""Main CLI entry point for ehypofit."""

from __future__ import annotations

import logging
import sys
from typing import Any

import click
from dotenv import find_dotenv, load_dotenv

from ehypofit.cli.commands import compare, eval_command, fit, plotdata, sample
from ehypofit.cli.i18n import DEFAULT_LOCALE, available_locales, load_locale
from ehypofit.exceptions import ExitCode


class EHypoGroup(click.Group):
    """Command group whose usage errors exit with the configuration code."""

    def main(  # type: ignore[override]
        self,
        args: Any = None,
        prog_name: str | None = None,
        complete_var: str | None = None,
        standalone_mode: bool = True,  # noqa: FBT001, FBT002
        **extra: Any,
    ) -> Any:
        if not standalone_mode:
            return super().main(args, prog_name, complete_var, standalone_mode=False, **extra)
        try:
            rv = super().main(args, prog_name, complete_var, standalone_mode=False, **extra)
        except click.ClickException as e:
            e.show()
            sys.exit(int(ExitCode.CONFIG))
        except click.Abort:
            click.echo("Aborted!", err=True)
            sys.exit(int(ExitCode.CONFIG))
        sys.exit(rv if isinstance(rv, int) else int(ExitCode.OK))


@click.group(cls=EHypoGroup)
@click.option("--debug", is_flag=True, help="Enable debug logging")
@click.option(
    "--lang",
    default=DEFAULT_LOCALE,
    type=click.Choice(available_locales()),
    help="Language of messages (en/de)",
)
@click.option(
    "--format",
    "output_format",
    default="json",
    type=click.Choice(["json", "csv", "table"]),
    help="Default output format of every command",
)
@click.pass_context
def cli(ctx: click.Context, debug: bool, lang: str, output_format: str) -> None:  # noqa: FBT001
    """Exponentiated Hypoexponential distributions: evaluate, sample, fit and compare."""
    load_locale(lang)

    if debug:
        logging.basicConfig(
            level=logging.DEBUG,
            format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        )

    ctx.ensure_object(dict)
    ctx.obj["debug"] = debug
    ctx.obj["lang"] = lang
    ctx.obj["format"] = output_format


cli.add_command(eval_command)
cli.add_command(sample)
cli.add_command(fit)
cli.add_command(compare)
cli.add_command(plotdata)


def main() -> None:
    """Console entry point: load ``.env`` from the working directory, then run the CLI."""
    load_dotenv(find_dotenv(usecwd=True))
    cli()


if __name__ == "__main__":
    main()
