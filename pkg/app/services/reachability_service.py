"""
    Reachable curves and surfaces of two-impulse transfers between fixed endpoints, the inversion
    of a reached position back to (t, dt), and boundary-based clearance of path constraints.
"""
import logging
import math
from typing import Optional

import numpy as np
from scipy import ndimage, optimize

from app.config import Config

from ..utils.enumerator import Enumerator
from ..utils.exceptions import BadGrid, BoundaryNotClear, NoWitness, Unreachable
from ..utils.messages import Messages
from ..utils.validator import (ClearanceReport, Crossing, ExclusionReport,
                               InversionResult, OrbitParams, PathConstraint,
                               ReachCurve, ReachSurface)
from . import constraint_service as ConstraintService
from . import dynamics_service as DynamicsService

logger = logging.getLogger(__name__)


def _positions_on_grid(params: OrbitParams, r_i, r_j, times, dt_values, guard: bool = True) -> np.ndarray:
    """
    r(t) = F_rr(t) r_i + F_rv(t) v0(dt) for a (D, ...) array of times, one row per flight time.
    """
    r_i = np.asarray(r_i, dtype=float)
    v0 = DynamicsService.departure_velocity(params, r_i, r_j, dt_values, guard=guard)
    times = np.asarray(times, dtype=float)
    f_rr, f_rv, _, _ = DynamicsService.stm_blocks_batch(params.kappa, times)
    v0 = v0.reshape((v0.shape[0],) + (1,) * (times.ndim - 1) + (3,))
    return np.einsum("...ab,b->...a", f_rr, r_i) + np.einsum("...ab,...b->...a", f_rv, v0)


def reach_curve(params: OrbitParams, r_i, r_j, t: float, dt_grid) -> ReachCurve:
    """Positions reached at time t for every flight time of the grid"""
    dt_values = np.asarray(dt_grid, dtype=float).reshape(-1)
    if not t > 0 or dt_values.size == 0 or np.any(dt_values <= t) or np.any(dt_values >= params.transfer_limit):
        raise BadGrid(Messages.ERROR_BAD_GRID.format(t=t, limit=params.transfer_limit))
    times = np.full(dt_values.shape, float(t))
    positions = _positions_on_grid(params, r_i, r_j, times, dt_values, guard=False)
    return ReachCurve(r_i=r_i, r_j=r_j, t=t, dt_values=dt_values, positions=positions)


def reach_grid_positions(params: OrbitParams, r_i, r_j, t_grid, dt_grid) -> np.ndarray:
    """
    Positions on a (t, dt) grid.

    Returns:
      np.ndarray: Shape (len(t_grid), len(dt_grid), 3); NaN where t > dt.
    """
    t_grid = np.asarray(t_grid, dtype=float).reshape(-1)
    dt_values = np.asarray(dt_grid, dtype=float).reshape(-1)
    if np.any(t_grid < 0):
        raise BadGrid(Messages.ERROR_BAD_GRID.format(t=float(t_grid.min()), limit=params.transfer_limit))

    times = np.broadcast_to(t_grid[None, :], (dt_values.size, t_grid.size))
    positions = _positions_on_grid(params, r_i, r_j, times, dt_values)
    positions = np.where((t_grid[None, :] <= dt_values[:, None])[..., None], positions, np.nan)
    return np.swapaxes(positions, 0, 1)


def reach_surface(
    params: OrbitParams,
    r_i,
    r_j,
    t_res: int,
    dt_res: int,
    epsilon: Optional[float] = None,
    dt_min: Optional[float] = None,
) -> ReachSurface:
    """
    Samples every two-impulse trajectory from dt_min up to pi/kappa - epsilon, both boundary
    trajectories included.
    """
    if t_res < 2 or dt_res < 2:
        raise BadGrid(Messages.ERROR_BAD_RESOLUTION)
    epsilon = Config.CFM_EPSILON if epsilon is None else epsilon
    dt_min = Config.GUARD_MIN_DT if dt_min is None else dt_min

    dt_values = np.linspace(dt_min, params.transfer_limit - epsilon, dt_res)
    fractions = np.linspace(0.0, 1.0, t_res)
    times = dt_values[:, None] * fractions[None, :]
    positions = _positions_on_grid(params, r_i, r_j, times, dt_values, guard=False)

    logger.info("🌐 Reach surface sampled on %d x %d grid", dt_res, t_res)
    return ReachSurface(
        r_i=r_i, r_j=r_j, dt_values=dt_values, fractions=fractions,
        times=times, positions=positions, epsilon=epsilon,
    )


def residual_field(params: OrbitParams, r_target, r_i, r_j, t_grid, dt_grid) -> np.ndarray:
    """Distance from r_target of every (t, dt) grid position; NaN where t > dt"""
    positions = reach_grid_positions(params, r_i, r_j, t_grid, dt_grid)
    return np.linalg.norm(positions - np.asarray(r_target, dtype=float), axis=-1)


def count_basins(field, threshold: float) -> int:
    """Number of connected grid regions where the field is below threshold"""
    below = np.nan_to_num(np.asarray(field, dtype=float), nan=np.inf) < threshold
    _, count = ndimage.label(below)
    return int(count)


class _ReachResidual:
    """Residual r(u * dt, dt) - target with its analytic Jacobian in (u, dt)"""

    def __init__(self, params: OrbitParams, r_target, r_i, r_j):
        self.params = params
        self.target = np.asarray(r_target, dtype=float)
        self.r_i = np.asarray(r_i, dtype=float)
        self.r_j = np.asarray(r_j, dtype=float)

    def _state(self, x):
        u, dt = x
        kappa = self.params.kappa
        f_rr_T, f_rv_T, f_vr_T, f_vv_T = DynamicsService.stm_blocks_batch(kappa, dt)
        v0 = np.linalg.solve(f_rv_T, self.r_j - f_rr_T @ self.r_i)
        dv0 = -np.linalg.solve(f_rv_T, f_vr_T @ self.r_i + f_vv_T @ v0)
        f_rr, f_rv, f_vr, f_vv = DynamicsService.stm_blocks_batch(kappa, u * dt)
        r = f_rr @ self.r_i + f_rv @ v0
        v = f_vr @ self.r_i + f_vv @ v0
        return r, v, f_rv @ dv0

    def residual(self, x) -> np.ndarray:
        r, _, _ = self._state(x)
        return r - self.target

    def jacobian(self, x) -> np.ndarray:
        u, dt = x
        _, v, shift = self._state(x)
        return np.column_stack([dt * v, u * v + shift])


def invert_reach(
    params: OrbitParams,
    r_target,
    r_i,
    r_j,
    seed_grid: Optional[int] = None,
    tol: Optional[float] = None,
    max_seeds: int = 8,
) -> InversionResult:
    """
    Finds the (t, dt) whose two-impulse trajectory between r_i and r_j passes through r_target.

    A seed grid over (t / dt, dt) is refined by bounded least squares from the best seeds.

    Raises:
      Unreachable: no root with residual below tol inside [GUARD_MIN_DT, pi/kappa - GUARD_EDGE_MARGIN].
    """
    seed_grid = Config.INVERSION_SEED_GRID if seed_grid is None else seed_grid
    tol = Config.INVERSION_TOL if tol is None else tol
    r_target = np.asarray(r_target, dtype=float)
    if r_target.shape != (3,) or not np.all(np.isfinite(r_target)):
        raise Unreachable(Messages.ERROR_UNREACHABLE.format(target=r_target.tolist(), residual=math.inf))

    for endpoint in (r_i, r_j):
        if np.linalg.norm(r_target - np.asarray(endpoint, dtype=float)) <= Config.ENDPOINT_TOL:
            return InversionResult(residual=0.0, status=Enumerator.InversionStatus.Ambiguous_Endpoint)

    dt_low = Config.GUARD_MIN_DT
    dt_high = params.transfer_limit - Config.GUARD_EDGE_MARGIN
    dt_values = np.linspace(dt_low, dt_high, seed_grid)
    fractions = np.linspace(0.0, 1.0, seed_grid)
    times = dt_values[:, None] * fractions[None, :]
    positions = _positions_on_grid(params, r_i, r_j, times, dt_values)
    field = np.linalg.norm(positions - r_target, axis=-1)

    problem = _ReachResidual(params, r_target, r_i, r_j)
    best = None
    for flat in np.argsort(field, axis=None)[:max_seeds]:
        k, m = np.unravel_index(flat, field.shape)
        solution = optimize.least_squares(
            problem.residual,
            x0=np.array([fractions[m], dt_values[k]]),
            jac=problem.jacobian,
            bounds=([0.0, dt_low], [1.0, dt_high]),
            method="trf",
            x_scale=np.array([1.0, dt_high]),
            xtol=1e-15,
            ftol=1e-15,
            gtol=1e-15,
            max_nfev=200,
        )
        residual = float(np.linalg.norm(solution.fun))
        if best is None or residual < best[0]:
            best = (residual, solution.x)
        if residual < tol:
            break

    residual, (u, dt_total) = best
    if residual >= tol:
        raise Unreachable(Messages.ERROR_UNREACHABLE.format(target=r_target.tolist(), residual=residual))
    return InversionResult(t=float(u * dt_total), dt_total=float(dt_total), residual=residual)


def _witness_margin(constraint: PathConstraint, witness) -> float:
    return float(ConstraintService.margins(constraint, witness))


def boundary_clearance(
    params: OrbitParams,
    r_i,
    r_j,
    constraint: PathConstraint,
    grid: Optional[ReachSurface] = None,
    witness=None,
    t_start: float = 0.0,
    guard: Optional[float] = None,
) -> ClearanceReport:
    """
    Clearance of a constraint boundary by the whole reach surface. Inner and outer spheres are
    checked separately; with the witness on the allowed side and no in-window sample within the
    sampling guard of either sphere, no two-impulse trajectory between the endpoints enters the
    forbidden region.

    Raises:
      NoWitness: the witness lies in the forbidden region.
    """
    guard = Config.SAMPLING_GUARD_KM if guard is None else guard
    witness = np.asarray(r_i if witness is None else witness, dtype=float)
    if _witness_margin(constraint, witness) < 0.0:
        raise NoWitness(Messages.ERROR_NO_WITNESS.format(witness=witness.tolist()))

    if grid is None:
        grid = reach_surface(params, r_i, r_j, Config.REACH_SURFACE_T_RES, Config.REACH_SURFACE_DT_RES)

    mask = ConstraintService.in_window(constraint, t_start + grid.times)
    slack = np.where(mask, ConstraintService.margins(constraint, grid.positions), np.inf)
    crossing = slack < guard
    min_distance = float(np.min(slack)) if mask.any() else math.inf

    first_crossing = None
    if crossing.any():
        k, m = np.unravel_index(int(np.flatnonzero(crossing)[0]), crossing.shape)
        first_crossing = Crossing(
            t=float(grid.times[k, m]), dt_total=float(grid.dt_values[k]),
            r=grid.positions[k, m], margin=float(slack[k, m]),
        )

    return ClearanceReport(
        clear=not crossing.any(),
        witness=witness,
        min_boundary_distance=min_distance,
        crossings=int(np.sum(crossing)),
        first_crossing=first_crossing,
        t_spacing=grid.t_spacing,
        dt_spacing=grid.dt_spacing,
        samples=int(mask.sum()),
    )


def leg_min_margin(
    params: OrbitParams,
    r_i,
    r_j,
    constraint: PathConstraint,
    dt_total: float,
    n_samples: Optional[int] = None,
    t_start: float = 0.0,
) -> float:
    """Smallest in-window constraint margin along one densely sampled leg"""
    n_samples = Config.DENSE_SAMPLES if n_samples is None else n_samples
    times = np.linspace(0.0, dt_total, n_samples)
    positions = DynamicsService.transfer_positions(params, r_i, r_j, dt_total, times, guard=False)
    mask = ConstraintService.in_window(constraint, t_start + times)
    if not mask.any():
        return math.inf
    return float(np.min(ConstraintService.margins(constraint, positions[mask])))


def time_window_exclusion(
    params: OrbitParams,
    r_i,
    r_j,
    constraint: PathConstraint,
    dt_a: float,
    dt_b: float,
    dt_s: Optional[float] = None,
    n_samples: Optional[int] = None,
    scan_points: int = 200,
) -> ExclusionReport:
    """
    With the trajectories at dt_a and dt_b clear of the forbidden region, a witness flight time
    dt_s whose trajectory enters it decides which side is certified: a witness inside
    [dt_a, dt_b] certifies every flight time outside, and a witness outside certifies every
    flight time inside. Without dt_s the flight times are scanned for a witness.

    Raises:
      BadGrid: dt_a >= dt_b or either outside (0, pi/kappa).
      BoundaryNotClear: a boundary trajectory enters the forbidden region.
    """
    limit = params.transfer_limit
    if not 0.0 < dt_a < dt_b < limit:
        raise BadGrid(Messages.ERROR_BAD_WINDOW.format(dt_a=dt_a, dt_b=dt_b))

    guard = Config.SAMPLING_GUARD_KM
    for dt in (dt_a, dt_b):
        if leg_min_margin(params, r_i, r_j, constraint, dt, n_samples) < guard:
            raise BoundaryNotClear(Messages.ERROR_BOUNDARY_NOT_CLEAR.format(dt=dt))

    def enters(dt: float) -> bool:
        return leg_min_margin(params, r_i, r_j, constraint, dt, n_samples) < 0.0

    if dt_s is None:
        scan = np.linspace(Config.GUARD_MIN_DT, limit - Config.CFM_EPSILON, scan_points)
        inside = [dt for dt in scan if dt_a < dt < dt_b and enters(dt)]
        outside = [] if inside else [dt for dt in scan if not dt_a <= dt <= dt_b and enters(dt)]
        dt_s = inside[0] if inside else outside[0] if outside else None
        if dt_s is None:
            return ExclusionReport(dt_a=dt_a, dt_b=dt_b, certification=Enumerator.Certification.Not_Certified)
    elif not enters(dt_s):
        return ExclusionReport(dt_a=dt_a, dt_b=dt_b, dt_s=dt_s, certification=Enumerator.Certification.Not_Certified)

    if dt_a < dt_s < dt_b:
        return ExclusionReport(
            dt_a=dt_a, dt_b=dt_b, dt_s=dt_s, witness_inside=True,
            certification=Enumerator.Certification.Outside_Interval,
            certified_ranges=[(0.0, dt_a), (dt_b, limit)],
        )
    return ExclusionReport(
        dt_a=dt_a, dt_b=dt_b, dt_s=dt_s, witness_inside=False,
        certification=Enumerator.Certification.Inside_Interval,
        certified_ranges=[(dt_a, dt_b)],
    )
