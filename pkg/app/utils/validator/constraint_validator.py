import math
from typing import Optional

from pydantic import Field, root_validator

from ..enumerator import Enumerator
from ..messages import Messages
from .array_validator import FrozenModel, Vector3


class PathConstraint(FrozenModel):
    """
    Spherical-shell region rho_inner <= |r - center| <= rho_outer required during the open
    window (0, t_end) measured from mission start. A zero-radius constraint with an
    ``instant`` pins the position at that single time.
    """

    center: Vector3
    rho_inner: float = Field(0.0, ge=0)
    rho_outer: float = math.inf
    t_end: float = math.inf
    instant: Optional[float] = None

    @root_validator(skip_on_failure=True)
    def check_radii(cls, values):
        if math.isnan(values["rho_outer"]) or values["rho_inner"] > values["rho_outer"]:
            raise ValueError(Messages.ERROR_SCENARIO_RADII)
        if not values["t_end"] > 0:
            raise ValueError("t_end must be positive")
        instant = values.get("instant")
        if instant is not None:
            if values["rho_inner"] != 0 or values["rho_outer"] != 0:
                raise ValueError("An equality constraint must have zero radii.")
            if not math.isfinite(instant) or instant < 0:
                raise ValueError("An equality instant must be finite and nonnegative.")
        return values

    @property
    def kind(self) -> Enumerator.ConstraintKind:
        if self.instant is not None:
            return Enumerator.ConstraintKind.Equality
        if math.isinf(self.rho_outer):
            return Enumerator.ConstraintKind.Keep_Out
        return Enumerator.ConstraintKind.Shell


class Violation(FrozenModel):
    t: float
    r: Vector3
    distance: float


class ConstraintVerdict(FrozenModel):
    satisfied: bool
    first_violation: Optional[Violation] = None
    min_margin: float

    @root_validator(skip_on_failure=True)
    def check_consistency(cls, values):
        if values["satisfied"] and (values["min_margin"] < 0 or values.get("first_violation") is not None):
            raise ValueError("A satisfied verdict has a nonnegative margin and no violation.")
        return values
