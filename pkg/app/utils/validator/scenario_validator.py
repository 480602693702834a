import math
from typing import List, Literal, Optional

from pydantic import BaseModel, Field, conlist, root_validator, validator

from app.config import Config as Settings

from ..enumerator import Enumerator
from ..messages import Messages
from .constraint_validator import PathConstraint
from .orbit_validator import OrbitParams

Vec3 = conlist(float, min_items=3, max_items=3)

COMMANDS = [command.value for command in Enumerator.Command]
MODE_ALIASES = {"cfk": "plan-cfk", "cfm": "plan-cfm", "facts": "verify-facts"}


class StrictModel(BaseModel):
    class Config:
        extra = "forbid"


class OrbitBlock(StrictModel):
    mu: float = Field(Settings.EARTH_MU, gt=0)
    a_ts: Optional[float] = Field(None, gt=0)
    altitude: Optional[float] = None
    body_radius: float = Field(Settings.EARTH_RADIUS, gt=0)
    kappa: Optional[float] = Field(None, gt=0)

    @root_validator(skip_on_failure=True)
    def check_exactly_one(cls, values):
        given = [key for key in ("a_ts", "altitude", "kappa") if values.get(key) is not None]
        if len(given) != 1:
            raise ValueError(Messages.ERROR_SCENARIO_ORBIT)
        return values

    def to_params(self) -> OrbitParams:
        if self.kappa is not None:
            return OrbitParams.from_kappa(self.kappa, mu=self.mu)
        if self.altitude is not None:
            return OrbitParams.from_altitude(self.altitude, body_radius=self.body_radius, mu=self.mu)
        return OrbitParams(mu=self.mu, a_ts=self.a_ts)


class ConstraintBlock(StrictModel):
    center: Vec3 = [0.0, 0.0, 0.0]
    rho_inner: float = Field(0.0, ge=0)
    rho_outer: float = math.inf
    t_end: float = math.inf
    instant: Optional[float] = None

    @root_validator(skip_on_failure=True)
    def check_radii(cls, values):
        if not 0 <= values["rho_inner"] <= values["rho_outer"]:
            raise ValueError(Messages.ERROR_SCENARIO_RADII)
        return values

    def to_constraint(self) -> PathConstraint:
        return PathConstraint(**self.dict())


class LegBlock(StrictModel):
    r_i: Vec3
    r_j: Vec3
    dt: float = Field(..., gt=0)


class StateBlock(StrictModel):
    r: Vec3
    v: Vec3 = [0.0, 0.0, 0.0]
    t: float = 0.0


class PropagateBlock(StrictModel):
    state: Optional[StateBlock] = None
    steps: List[float] = []
    legs: List[LegBlock] = []
    v_1_minus: Vec3 = [0.0, 0.0, 0.0]
    n_samples: int = Field(200, ge=2)

    @root_validator(skip_on_failure=True)
    def check_payload(cls, values):
        if values.get("state") is None and not values.get("legs"):
            raise ValueError("The propagate block needs a state with steps, or legs.")
        if values.get("state") is not None and not values.get("steps"):
            raise ValueError("A propagated state needs at least one step.")
        return values


class ConeBlock(StrictModel):
    mode: Literal["measured", "user"] = Enumerator.ConeMode.Measured.value
    e_s: Optional[Vec3] = None
    rho_minus: Optional[float] = None
    rho_plus: Optional[Vec3] = None

    @root_validator(skip_on_failure=True)
    def check_user_values(cls, values):
        if values["mode"] == Enumerator.ConeMode.User.value and (
            values.get("rho_minus") is None or values.get("rho_plus") is None
        ):
            raise ValueError("A user cone needs rho_minus and rho_plus.")
        return values


class SweepBlock(StrictModel):
    r1_start: float = Field(0.1, gt=0)
    r1_stop: float = Field(5.0, gt=0)
    r1_count: int = Field(50, ge=1)
    t2_fractions: List[float] = [0.5, 0.75]
    n_directions: int = Field(10, ge=1)
    seed: int = 0

    @validator("t2_fractions", each_item=True)
    def check_fraction(cls, v):
        if not 0 < v < 1:
            raise ValueError("t2 fractions must lie in (0, 1)")
        return v


class BoundBlock(StrictModel):
    legs: conlist(LegBlock, min_items=1)
    n_samples: int = Field(Settings.DENSE_SAMPLES, ge=2)
    cone: ConeBlock = ConeBlock()
    sigma_points: int = Field(200, ge=2)
    sweep: Optional[SweepBlock] = None


class ReachBlock(StrictModel):
    r_i: Vec3
    r_j: Vec3
    curve_times: List[float] = []
    curve_points: int = Field(100, ge=2)
    t_res: int = Field(Settings.REACH_SURFACE_T_RES, ge=2)
    dt_res: int = Field(Settings.REACH_SURFACE_DT_RES, ge=2)
    epsilon: Optional[float] = Field(None, gt=0)


class InvertBlock(StrictModel):
    r_i: Vec3
    r_j: Vec3
    targets: conlist(Vec3, min_items=1)


class CfkBlock(StrictModel):
    rho_inner: float = Field(0.9, ge=0)
    rho_outer: float = 1.1
    beta_step: float = Field(Settings.CFK_BETA_STEP, gt=0)
    time_step: float = Field(Settings.CFK_TIME_STEP, gt=0)
    t_max: Optional[float] = Field(None, gt=0)
    n_impulses: int = Field(3, ge=2, le=3)
    beta_start: float = 0.0


class CfmBlock(StrictModel):
    positions: Optional[List[Vec3]] = None
    betas: Optional[List[float]] = None
    radius: float = Field(1.0, gt=0)
    keep_out_radius: Optional[float] = Field(None, gt=0)
    epsilon: Optional[float] = Field(None, gt=0)
    stress_cases: int = Field(0, ge=0)
    seed: int = 0

    @root_validator(skip_on_failure=True)
    def check_positions(cls, values):
        positions, betas = values.get("positions"), values.get("betas")
        if (positions is None) == (betas is None):
            raise ValueError("Give exactly one of positions or betas.")
        if len(positions if positions is not None else betas) < 2:
            raise ValueError(Messages.ERROR_TOO_FEW_POSITIONS)
        return values


class FactsBlock(StrictModel):
    grid: int = Field(50, ge=3)
    tau_fractions: List[float] = [0.3, 0.5, 0.7]


class PlannerBlock(StrictModel):
    mode: Literal[tuple(COMMANDS)]
    propagate: Optional[PropagateBlock] = None
    bound: Optional[BoundBlock] = None
    reach: Optional[ReachBlock] = None
    invert: Optional[InvertBlock] = None
    cfk: CfkBlock = CfkBlock()
    cfm: Optional[CfmBlock] = None
    facts: FactsBlock = FactsBlock()

    @validator("mode", pre=True)
    def normalise_mode(cls, v):
        return MODE_ALIASES.get(v, v)

    @root_validator(skip_on_failure=True)
    def check_mode_block(cls, values):
        block = {
            "propagate": "propagate",
            "bound": "bound",
            "reach": "reach",
            "invert": "invert",
            "plan-cfm": "cfm",
        }.get(values["mode"])
        if block is not None and values.get(block) is None:
            raise ValueError(Messages.ERROR_SCENARIO_BLOCK.format(block=block, command=values["mode"]))
        return values


class OutputBlock(StrictModel):
    directory: Optional[str] = None
    formats: List[Literal["csv"]] = ["csv"]


class ScenarioFile(StrictModel):
    command: Optional[str] = None
    orbit: OrbitBlock
    constraints: List[ConstraintBlock] = []
    planner: PlannerBlock
    output: OutputBlock = OutputBlock()
    seed: int = 0

    @root_validator(skip_on_failure=True)
    def check_command(cls, values):
        command = values.get("command")
        if command is not None and values["planner"].mode != command:
            raise ValueError(Messages.ERROR_SCENARIO_MODE.format(mode=values["planner"].mode, command=command))
        return values

    def to_document(self) -> dict:
        """Plain-data form used for hashing and serialization"""
        return self.dict(exclude={"command"})
