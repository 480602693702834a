"""
    Formation-keeping maps and collision-free tour certification
"""
from typing import List, Optional

from app.utils.enumerator import Enumerator

from .runner import OutOption, ScenarioOption, SetOption, finish, handle


def plan_cfk(
    scenario: str = ScenarioOption,
    out: Optional[str] = OutOption,
    overrides: Optional[List[str]] = SetOption,
):
    """Two- and three-impulse feasibility maps on the unit ring; exit 3 when no cell is feasible."""
    finish(handle(Enumerator.Command.PlanCfk.value, scenario, out, overrides))


def plan_cfm(
    scenario: str = ScenarioOption,
    out: Optional[str] = OutOption,
    overrides: Optional[List[str]] = SetOption,
):
    """Certify a tour against a keep-out sphere for every flight time; exit 3 when uncertified."""
    finish(handle(Enumerator.Command.PlanCfm.value, scenario, out, overrides))
