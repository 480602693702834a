"""
    Path constraints: spherical shells, keep-out spheres and equality points, checked against
    single positions and sampled trajectories. Windows are open intervals (0, t_end) measured
    from mission start.
"""
import logging
import math
from typing import List, Optional

import numpy as np

from app.config import Config

from ..utils.enumerator import Enumerator
from ..utils.exceptions import InsufficientSampling
from ..utils.messages import Messages
from ..utils.validator import ConstraintVerdict, PathConstraint, Trajectory, Violation

logger = logging.getLogger(__name__)


def keep_out(center, radius: float, t_end: float = math.inf) -> PathConstraint:
    return PathConstraint(center=center, rho_inner=radius, rho_outer=math.inf, t_end=t_end)


def shell(center, rho_inner: float, rho_outer: float, t_end: float = math.inf) -> PathConstraint:
    return PathConstraint(center=center, rho_inner=rho_inner, rho_outer=rho_outer, t_end=t_end)


def equality(point, instant: float) -> PathConstraint:
    return PathConstraint(center=point, rho_inner=0.0, rho_outer=0.0, instant=instant)


def endpoint_constraints(r_1, r_n, t_n: float) -> List[PathConstraint]:
    """The two equality constraints every mission satisfies by construction"""
    return [equality(r_1, 0.0), equality(r_n, t_n)]


def in_window(constraint: PathConstraint, t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if constraint.kind == Enumerator.ConstraintKind.Equality:
        return np.abs(t - constraint.instant) <= Config.ENDPOINT_TOL
    return (t > 0.0) & (t < constraint.t_end)


def distances(constraint: PathConstraint, positions) -> np.ndarray:
    return np.linalg.norm(np.asarray(positions, dtype=float) - constraint.center, axis=-1)


def margins(constraint: PathConstraint, positions) -> np.ndarray:
    """
    Signed slack of each position: positive inside the allowed region, negative by the depth of
    the worst penetration.
    """
    d = distances(constraint, positions)
    if constraint.kind == Enumerator.ConstraintKind.Equality:
        return np.where(d <= Config.ENDPOINT_TOL, 0.0, -d)
    return np.minimum(d - constraint.rho_inner, constraint.rho_outer - d)


def check_point(constraint: PathConstraint, t: float, r) -> bool:
    if not bool(in_window(constraint, t)):
        return True
    return bool(margins(constraint, r) >= 0.0)


def check_trajectory(
    constraint: PathConstraint,
    trajectory: Trajectory,
    resolution: Optional[float] = None,
    t_start: float = 0.0,
) -> ConstraintVerdict:
    """
    Checks every in-window sample of a trajectory.

    Args:
      constraint: The path constraint.
      trajectory: Sampled leg; its times are relative to the leg start.
      resolution: Largest admissible sample spacing (s).
      t_start: Mission time of the leg start.

    Raises:
      InsufficientSampling: the sample spacing exceeds the resolution, or an equality instant
        inside the leg has no sample.
    """
    resolution = Config.CONSTRAINT_RESOLUTION if resolution is None else resolution
    times = t_start + trajectory.times

    if trajectory.spacing > resolution + 1e-9:
        raise InsufficientSampling(
            Messages.ERROR_INSUFFICIENT_SAMPLING.format(spacing=trajectory.spacing, resolution=resolution)
        )

    mask = in_window(constraint, times)
    if constraint.kind == Enumerator.ConstraintKind.Equality and not mask.any():
        if times[0] - Config.ENDPOINT_TOL <= constraint.instant <= times[-1] + Config.ENDPOINT_TOL:
            raise InsufficientSampling(Messages.ERROR_EQUALITY_INSTANT_MISSING.format(t=constraint.instant))

    if not mask.any():
        return ConstraintVerdict(satisfied=True, min_margin=math.inf)

    slack = margins(constraint, trajectory.positions)
    slack = np.where(mask, slack, np.inf)
    min_margin = float(np.min(slack))
    violated = np.flatnonzero(slack < 0.0)

    if violated.size == 0:
        return ConstraintVerdict(satisfied=True, min_margin=min_margin)

    first = int(violated[0])
    violation = Violation(
        t=float(times[first]),
        r=trajectory.positions[first],
        distance=float(distances(constraint, trajectory.positions[first])),
    )
    return ConstraintVerdict(satisfied=False, first_violation=violation, min_margin=min_margin)
