import sys
from typing import Optional

import coloredlogs
import typer

from .config import Config

__version__ = Config.VERSION


def _show_version(value: bool) -> None:
    if value:
        typer.echo(f"cw-reach {__version__}")
        raise typer.Exit()


def create_app() -> typer.Typer:
    """
    The create_app function wraps the creation of the command-line application: it installs
    logging at Config.LOG_LEVEL on stderr and registers every sub-command.

    Returns:
        The typer application
    """
    coloredlogs.install(
        level=Config.LOG_LEVEL,
        stream=sys.stderr,
        fmt="%(asctime)s %(name)s %(levelname)s %(message)s",
    )

    app = typer.Typer(
        name="cw-reach",
        help="Impulsive relative-motion planning on circular orbits.",
        add_completion=False,
        no_args_is_help=True,
    )

    @app.callback()
    def main(
        version: Optional[bool] = typer.Option(
            None, "--version", callback=_show_version, is_eager=True, help="Show the version and exit."
        ),
    ):
        """Every sub-command reads a YAML scenario and writes CSV files plus manifest.yaml."""

    from app.routes import (bound, invert, plan_cfk, plan_cfm, propagate,
                            reach, verify_facts)

    app.command("propagate")(propagate)
    app.command("bound")(bound)
    app.command("reach")(reach)
    app.command("invert")(invert)
    app.command("plan-cfk")(plan_cfk)
    app.command("plan-cfm")(plan_cfm)
    app.command("verify-facts")(verify_facts)

    return app


app = create_app()
