import math
from typing import List, Optional

import numpy as np
from pydantic import Field, root_validator

from ..enumerator import Enumerator
from .array_validator import FloatArray, FrozenModel, IntArray, Vector3
from .constraint_validator import PathConstraint
from .orbit_validator import OrbitParams, TransferLeg


class CfkScenario(FrozenModel):
    orbit: OrbitParams
    rho_inner: float = Field(..., ge=0)
    rho_outer: float
    beta_grid: FloatArray
    time_grid: FloatArray
    n_impulses: int = Field(3, ge=2, le=3)
    beta_start: float = 0.0

    @root_validator(skip_on_failure=True)
    def check_grid(cls, values):
        if not values["rho_inner"] < 1.0 < values["rho_outer"]:
            raise ValueError("The impulse ring (radius 1 km) must lie strictly inside the shell.")
        time_grid = values["time_grid"]
        if time_grid.size == 0 or np.any(time_grid <= 0):
            raise ValueError("Candidate flight times must be positive.")
        if time_grid.size > 1 and not np.all(np.diff(time_grid) > 0):
            raise ValueError("Candidate flight times must be strictly increasing.")
        if np.any(time_grid >= values["orbit"].transfer_limit):
            raise ValueError("Every candidate flight time must stay below pi/kappa.")
        if values["beta_grid"].size == 0:
            raise ValueError("The beta grid must not be empty.")
        return values


class FeasibilityMap(FrozenModel):
    """
    Verdict per (beta, flight time) cell. For the two-impulse map the witness of a feasible cell
    is the leg itself; for the three-impulse map ``witness_t2`` stores the first-leg flight time
    of the stored tour (NaN where no tour exists).
    """

    n_impulses: int
    beta_values: FloatArray
    t_values: FloatArray
    verdicts: IntArray
    margins: FloatArray
    coverage: Optional[IntArray] = None
    witness_t2: Optional[FloatArray] = None
    beta_start: float = 0.0
    provenance: str = ""

    @root_validator(skip_on_failure=True)
    def check_shapes(cls, values):
        shape = (values["beta_values"].size, values["t_values"].size)
        if values["verdicts"].shape != shape or values["margins"].shape != shape:
            raise ValueError("cell arrays must have shape (len(beta), len(t))")
        return values

    def feasible(self) -> np.ndarray:
        return self.verdicts == Enumerator.CellVerdict.Feasible.value


class BetaBand(FrozenModel):
    beta_start_deg: float
    beta_end_deg: float
    cells: int


class CoverageClass(FrozenModel):
    coverage: Enumerator.Coverage
    dt_min: float
    dt_max: float
    cells: int


class CfmLegReport(FrozenModel):
    index: int
    r_i: Vector3
    r_j: Vector3
    segment_margin: float
    limit_margin: float
    certified: bool


class CfmPlan(FrozenModel):
    impulse_positions: FloatArray
    keep_out: PathConstraint
    epsilon: float
    certified: bool
    legs: List[CfmLegReport] = []


class MissionLeg(FrozenModel):
    index: int
    leg: TransferLeg
    v_arrival: Vector3
    dv_norm: float
    delta: float
    sigma: float


class MissionSummary(FrozenModel):
    legs: List[MissionLeg]
    total_dv: float
    envelope: Optional[float] = None
    endpoint_constraints: List[PathConstraint] = []

    @property
    def total_time(self) -> float:
        return float(math.fsum(item.leg.dt for item in self.legs))
