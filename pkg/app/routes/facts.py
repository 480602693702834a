from typing import List, Optional

from app.utils.enumerator import Enumerator

from .runner import OutOption, ScenarioOption, SetOption, finish, handle


def verify_facts(
    scenario: str = ScenarioOption,
    out: Optional[str] = OutOption,
    overrides: Optional[List[str]] = SetOption,
):
    """Numeric checks of the transfer-matrix eigenvalue facts; exit 3 when an asserted check fails."""
    finish(handle(Enumerator.Command.VerifyFacts.value, scenario, out, overrides))
