"""
    Reachable sets between fixed endpoints and their inversion
"""
from typing import List, Optional

from app.utils.enumerator import Enumerator

from .runner import OutOption, ScenarioOption, SetOption, finish, handle


def reach(
    scenario: str = ScenarioOption,
    out: Optional[str] = OutOption,
    overrides: Optional[List[str]] = SetOption,
):
    """Reach curves, the reach surface and boundary clearance of each constraint."""
    finish(handle(Enumerator.Command.Reach.value, scenario, out, overrides))


def invert(
    scenario: str = ScenarioOption,
    out: Optional[str] = OutOption,
    overrides: Optional[List[str]] = SetOption,
):
    """Recover (t, dt) of reached target positions; exit 3 when a target is unreachable."""
    finish(handle(Enumerator.Command.Invert.value, scenario, out, overrides))
