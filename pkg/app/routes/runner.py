"""
    Shared handler of every sub-command: validate, run, and map the outcome to an exit status
"""
import logging
from typing import List, Optional

import typer

from app.services import scenario_service as ScenarioService
from app.utils import Response
from app.utils.common import Common
from app.utils.enumerator import Enumerator
from app.utils.exceptions import IoError

logger = logging.getLogger(__name__)

ScenarioOption = typer.Option(..., "--scenario", "-s", help="YAML scenario file.")
OutOption = typer.Option(None, "--out", "-o", help="Output folder for CSV files and the manifest.")
SetOption = typer.Option(None, "--set", help="Scenario override key=value on a dotted path; repeatable.")


def handle(command: str, scenario: str, out: Optional[str], overrides: Optional[List[str]]) -> Response.CommandResponse:
    try:
        result = ScenarioService.run(command, scenario, overrides=overrides or [], out=out)
        if result.summary:
            typer.echo(result.summary)

        if result.status == Enumerator.ExitCode.Ok:
            return Response.custom_response(result.dict(), result.message, True)
        return Response.infeasible(result.message, result.dict())

    except IoError as e:
        Common.exception_details(f"{command}: handle", e)
        return Response.server_error()

    except ValueError as e:
        logger.error("❌ %s", e)
        return Response.validation_error(str(e))

    except Exception as e:
        Common.exception_details(f"{command}: handle", e)
        return Response.server_error()


def finish(response: Response.CommandResponse) -> None:
    raise typer.Exit(code=response.status)
