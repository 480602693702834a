"""
    Sphere and cone bounds of transfer legs
"""
from typing import List, Optional

from app.utils.enumerator import Enumerator

from .runner import OutOption, ScenarioOption, SetOption, finish, handle


def bound(
    scenario: str = ScenarioOption,
    out: Optional[str] = OutOption,
    overrides: Optional[List[str]] = SetOption,
):
    """Sphere and cone bounds per leg, the sigma curve and the optional max-reach sweep."""
    finish(handle(Enumerator.Command.Bound.value, scenario, out, overrides))
