import math
from typing import List, Optional, Tuple

import numpy as np
from pydantic import Field, root_validator, validator

from app.config import Config as Settings

from .array_validator import FloatArray, FrozenModel, Matrix3, Vector3


class OrbitParams(FrozenModel):
    """Circular target orbit: gravitational parameter, semi-major axis and mean motion"""

    mu: float = Field(Settings.EARTH_MU, gt=0)
    a_ts: float = Field(..., gt=0)
    kappa: float = Field(..., gt=0)

    @root_validator(pre=True)
    def derive_missing(cls, values):
        mu = float(values.get("mu", Settings.EARTH_MU))
        values["mu"] = mu
        if values.get("kappa") is None and values.get("a_ts") is not None:
            values["kappa"] = math.sqrt(mu / float(values["a_ts"]) ** 3)
        elif values.get("a_ts") is None and values.get("kappa") is not None:
            values["a_ts"] = (mu / float(values["kappa"]) ** 2) ** (1.0 / 3.0)
        return values

    @root_validator(skip_on_failure=True)
    def check_consistency(cls, values):
        mu, a_ts, kappa = values["mu"], values["a_ts"], values["kappa"]
        if abs(kappa ** 2 * a_ts ** 3 - mu) > 1e-12 * mu:
            raise ValueError("kappa^2 * a_ts^3 must equal mu to relative tolerance 1e-12.")
        return values

    @classmethod
    def from_altitude(cls, altitude: float, body_radius: Optional[float] = None, mu: Optional[float] = None):
        body_radius = Settings.EARTH_RADIUS if body_radius is None else body_radius
        return cls(mu=Settings.EARTH_MU if mu is None else mu, a_ts=body_radius + altitude)

    @classmethod
    def from_kappa(cls, kappa: float, mu: Optional[float] = None):
        return cls(mu=Settings.EARTH_MU if mu is None else mu, kappa=kappa)

    @property
    def transfer_limit(self) -> float:
        """pi/kappa, the exclusive upper bound of every flight time"""
        return math.pi / self.kappa

    @property
    def half_period(self) -> float:
        """0.5 pi/kappa, where the sphere-bound factor leaves 1"""
        return 0.5 * math.pi / self.kappa


class RelState(FrozenModel):
    r: Vector3
    v: Vector3
    t: float = 0.0

    @validator("t")
    def finite_epoch(cls, v):
        if not math.isfinite(v):
            raise ValueError("epoch must be finite")
        return v


class StmBlocks(FrozenModel):
    f_rr: Matrix3
    f_rv: Matrix3
    f_vr: Matrix3
    f_vv: Matrix3
    dt: float = Field(..., ge=0)


class TransferLeg(FrozenModel):
    r_i: Vector3
    r_j: Vector3
    v_i_minus: Vector3
    dt: float = Field(..., gt=0)
    dv: Vector3

    @property
    def v_i_plus(self) -> np.ndarray:
        return self.v_i_minus + self.dv


class Trajectory(FrozenModel):
    times: FloatArray
    positions: FloatArray
    leg: TransferLeg

    @root_validator(skip_on_failure=True)
    def check_samples(cls, values):
        times, positions = values["times"], values["positions"]
        if times.ndim != 1 or positions.shape != (times.size, 3):
            raise ValueError("positions must have shape (len(times), 3)")
        if times.size >= 2 and not np.all(np.diff(times) > 0):
            raise ValueError("sample times must be strictly increasing")
        return values

    @property
    def samples(self) -> List[Tuple[float, np.ndarray]]:
        return [(float(t), r) for t, r in zip(self.times, self.positions)]

    @property
    def spacing(self) -> float:
        return float(np.max(np.diff(self.times))) if self.times.size > 1 else 0.0
