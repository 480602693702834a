"""
    Closed-form propagation of states and impulse legs
"""
from typing import List, Optional

from app.utils.enumerator import Enumerator

from .runner import OutOption, ScenarioOption, SetOption, finish, handle


def propagate(
    scenario: str = ScenarioOption,
    out: Optional[str] = OutOption,
    overrides: Optional[List[str]] = SetOption,
):
    """Propagate a state or chain impulse legs; writes states, trajectory, legs and constraint verdicts."""
    finish(handle(Enumerator.Command.Propagate.value, scenario, out, overrides))
