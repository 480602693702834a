from typing import Optional

import numpy as np
from pydantic import Field, root_validator

from .array_validator import FloatArray, FrozenModel, Vector3


class FhatMatrix(FrozenModel):
    m: FloatArray
    t: float
    dt_total: float

    @root_validator(skip_on_failure=True)
    def check_symmetric(cls, values):
        m = values["m"]
        if m.shape != (6, 6):
            raise ValueError("F-hat must be 6x6")
        if np.max(np.abs(m - m.T)) > 1e-12 * max(1.0, float(np.max(np.abs(m)))):
            raise ValueError("F-hat must be symmetric")
        return values


class SphereBound(FrozenModel):
    delta: float = Field(..., ge=0)
    sigma: float = Field(..., ge=1)
    dt_total: float


class ConeBound(FrozenModel):
    e_s: Vector3
    rho_minus: float = Field(..., gt=0)
    rho_plus: Vector3
    c_theta: float = Field(..., ge=0, le=1)


class ConeExtents(FrozenModel):
    """Smallest distance and per-axis largest magnitude observed along a trajectory"""

    rho_minus: float = Field(..., ge=0)
    rho_plus: Vector3


class SweepRecord(FrozenModel):
    r1_km: float
    t2_fraction: float
    max_reached_km: float
    delta_bound_km: float


class FactCheck(FrozenModel):
    name: str
    asserted: bool
    passed: bool
    value: float
    tolerance: float
    detail: str = ""


class TableRow(FrozenModel):
    beta_i_deg: float
    beta_j_deg: float
    dt: float
    sigma: float
    delta: float
    max_sampled: Optional[float] = None
