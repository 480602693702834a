from typing import List, Optional, Tuple

import numpy as np
from pydantic import root_validator

from ..enumerator import Enumerator
from .array_validator import FloatArray, FrozenModel, Vector3


class ReachCurve(FrozenModel):
    r_i: Vector3
    r_j: Vector3
    t: float
    dt_values: FloatArray
    positions: FloatArray

    @root_validator(skip_on_failure=True)
    def check_shapes(cls, values):
        if values["positions"].shape != (values["dt_values"].size, 3):
            raise ValueError("one position per flight time is required")
        return values

    @property
    def samples(self) -> List[Tuple[float, np.ndarray]]:
        return [(float(dt), r) for dt, r in zip(self.dt_values, self.positions)]


class ReachSurface(FrozenModel):
    """
    Sampled union of all two-impulse trajectories between fixed endpoints. Column k holds the
    trajectory with flight time ``dt_values[k]`` sampled at ``times[k] = fractions * dt_values[k]``.
    """

    r_i: Vector3
    r_j: Vector3
    dt_values: FloatArray
    fractions: FloatArray
    times: FloatArray
    positions: FloatArray
    epsilon: float

    @root_validator(skip_on_failure=True)
    def check_shapes(cls, values):
        n_dt, n_u = values["dt_values"].size, values["fractions"].size
        if values["times"].shape != (n_dt, n_u) or values["positions"].shape != (n_dt, n_u, 3):
            raise ValueError("surface arrays must share the (dt, fraction) grid")
        return values

    @property
    def t_res(self) -> int:
        return int(self.fractions.size)

    @property
    def dt_res(self) -> int:
        return int(self.dt_values.size)

    @property
    def t_spacing(self) -> float:
        return float(np.max(self.dt_values) / max(self.t_res - 1, 1))

    @property
    def dt_spacing(self) -> float:
        return float(np.max(np.diff(self.dt_values))) if self.dt_res > 1 else 0.0


class InversionResult(FrozenModel):
    t: Optional[float] = None
    dt_total: Optional[float] = None
    residual: float
    status: Enumerator.InversionStatus = Enumerator.InversionStatus.Solved

    @property
    def ambiguous_endpoint(self) -> bool:
        return self.status == Enumerator.InversionStatus.Ambiguous_Endpoint


class Crossing(FrozenModel):
    t: float
    dt_total: float
    r: Vector3
    margin: float


class ClearanceReport(FrozenModel):
    clear: bool
    witness: Vector3
    min_boundary_distance: float
    crossings: int
    first_crossing: Optional[Crossing] = None
    t_spacing: float
    dt_spacing: float
    samples: int

    @property
    def certified_unreachable(self) -> bool:
        """The constrained region cannot be entered by any two-impulse trajectory of the set"""
        return self.clear


class ExclusionReport(FrozenModel):
    dt_a: float
    dt_b: float
    dt_s: Optional[float] = None
    witness_inside: Optional[bool] = None
    certification: Enumerator.Certification
    certified_ranges: List[Tuple[float, float]] = []
