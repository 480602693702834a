"""
    Common responses returned by every sub-command, with provisions for creating a custom response
    within a specified structure
"""
from typing import Any, Optional

import typer
from pydantic import BaseModel

from app.utils.enumerator import Enumerator
from app.utils.messages import Messages


class CommandResponse(BaseModel):
    data: Any = None
    message: str = ""
    success: bool = True
    status: int = Enumerator.ExitCode.Ok.value


def custom_response(
    data: Any = None,
    message: str = "",
    success: bool = True,
    status: Enumerator.ExitCode = Enumerator.ExitCode.Ok,
) -> CommandResponse:
    """
    Generates a custom response and echoes its message.

    Args:
        data: Data to pass in the response.
        message: Response message; stdout on success, stderr otherwise.
        success: Whether the command succeeded.
        status: Process exit status.

    Returns:
        CommandResponse: The response
    """
    if message:
        typer.echo(message, err=not success)
    return CommandResponse(data=data, message=message, success=success, status=status.value)


def validation_error(message: str) -> CommandResponse:
    """Response for rejected input (exit status 2)"""
    return custom_response(message=message, success=False, status=Enumerator.ExitCode.Validation)


def infeasible(message: str, data: Optional[Any] = None) -> CommandResponse:
    """Response for a run that finished but whose plan is infeasible or uncertified (exit status 3)"""
    return custom_response(data=data, message=message, success=False, status=Enumerator.ExitCode.Infeasible)


def server_error() -> CommandResponse:
    """Response for an unexpected failure (exit status 1)"""
    return custom_response(message=Messages.ERROR_INTERNAL, success=False, status=Enumerator.ExitCode.Internal)
