"""
    Closed-form Clohessy-Wiltshire propagation, two-point transfer matrices, impulse solving and
    trajectory sampling. Units are km, km/s and s; the frame is RSW (x radial, y along-track,
    z cross-track).
"""
import logging
import math
from typing import Optional, Tuple

import numpy as np

from app.config import Config

from ..utils.exceptions import DomainError, DtOutOfRange, SingularTransfer
from ..utils.messages import Messages
from ..utils.validator import (OrbitParams, RelState, StmBlocks, Trajectory,
                               TransferLeg)

logger = logging.getLogger(__name__)


def stm_blocks_batch(kappa: float, times) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    Evaluates the four transition blocks for an array of flight times.

    Args:
      kappa: Mean motion (rad/s).
      times: Flight times (s), any shape.

    Returns:
      (f_rr, f_rv, f_vr, f_vv), each of shape times.shape + (3, 3).
    """
    times = np.asarray(times, dtype=float)
    s = kappa * times
    c = np.cos(s)
    sn = np.sin(s)
    shape = times.shape + (3, 3)

    f_rr = np.zeros(shape)
    f_rr[..., 0, 0] = 4.0 - 3.0 * c
    f_rr[..., 1, 0] = 6.0 * (sn - s)
    f_rr[..., 1, 1] = 1.0
    f_rr[..., 2, 2] = c

    f_rv = np.zeros(shape)
    f_rv[..., 0, 0] = sn / kappa
    f_rv[..., 0, 1] = 2.0 * (1.0 - c) / kappa
    f_rv[..., 1, 0] = -2.0 * (1.0 - c) / kappa
    f_rv[..., 1, 1] = (4.0 * sn - 3.0 * s) / kappa
    f_rv[..., 2, 2] = sn / kappa

    f_vr = np.zeros(shape)
    f_vr[..., 0, 0] = 3.0 * kappa * sn
    f_vr[..., 1, 0] = 6.0 * kappa * (c - 1.0)
    f_vr[..., 2, 2] = -kappa * sn

    f_vv = np.zeros(shape)
    f_vv[..., 0, 0] = c
    f_vv[..., 0, 1] = 2.0 * sn
    f_vv[..., 1, 0] = -2.0 * sn
    f_vv[..., 1, 1] = 4.0 * c - 3.0
    f_vv[..., 2, 2] = c

    return f_rr, f_rv, f_vr, f_vv


def check_flight_time(params: OrbitParams, dt: float) -> None:
    """Raises DtOutOfRange unless 0 <= dt < pi/kappa"""
    limit = params.transfer_limit
    if not (math.isfinite(dt) and 0.0 <= dt < limit):
        raise DtOutOfRange(Messages.ERROR_DT_OUT_OF_RANGE.format(dt=dt, limit=limit))


def check_conditioning(
    params: OrbitParams,
    dt,
    min_dt: Optional[float] = None,
    edge_margin: Optional[float] = None,
) -> None:
    """
    Guards every inversion of F_rv: the flight time must lie in
    [min_dt, pi/kappa - edge_margin] and the condition estimate must stay below
    Config.MAX_CONDITION.

    Raises:
      DtOutOfRange: dt outside [0, pi/kappa).
      SingularTransfer: dt outside the conditioning window or F_rv ill-conditioned.
    """
    min_dt = Config.GUARD_MIN_DT if min_dt is None else min_dt
    edge_margin = Config.GUARD_EDGE_MARGIN if edge_margin is None else edge_margin
    upper = params.transfer_limit - edge_margin

    for value in np.atleast_1d(np.asarray(dt, dtype=float)):
        check_flight_time(params, float(value))
        if value < min_dt or value > upper:
            raise SingularTransfer(Messages.ERROR_SINGULAR_TRANSFER.format(dt=value, lower=min_dt, upper=upper))

    _, f_rv, _, _ = stm_blocks_batch(params.kappa, dt)
    conditions = np.atleast_1d(np.linalg.cond(f_rv))
    worst = int(np.argmax(conditions))
    if conditions[worst] > Config.MAX_CONDITION:
        raise SingularTransfer(
            Messages.ERROR_ILL_CONDITIONED.format(
                dt=np.atleast_1d(dt)[worst], cond=conditions[worst], limit=Config.MAX_CONDITION
            )
        )


def stm_blocks(params: OrbitParams, dt: float) -> StmBlocks:
    check_flight_time(params, dt)
    f_rr, f_rv, f_vr, f_vv = stm_blocks_batch(params.kappa, dt)
    return StmBlocks(f_rr=f_rr, f_rv=f_rv, f_vr=f_vr, f_vv=f_vv, dt=dt)


def state_transition_matrix(params: OrbitParams, dt: float) -> np.ndarray:
    """The 6x6 matrix mapping [r; v] at time 0 to [r; v] at time dt"""
    blocks = stm_blocks(params, dt)
    return np.block([[blocks.f_rr, blocks.f_rv], [blocks.f_vr, blocks.f_vv]])


def propagate(params: OrbitParams, state: RelState, dt: float) -> RelState:
    blocks = stm_blocks(params, dt)
    r = blocks.f_rr @ state.r + blocks.f_rv @ state.v
    v = blocks.f_vr @ state.r + blocks.f_vv @ state.v
    return RelState(r=r, v=v, t=state.t + dt)


def departure_velocity(params: OrbitParams, r_i, r_j, dt, guard: bool = True) -> np.ndarray:
    """
    Velocity right after the impulse at r_i that reaches r_j after dt.

    Args:
      params: Orbit parameters.
      r_i: Start positions, shape (..., 3).
      r_j: End positions, shape (..., 3), broadcast against r_i.
      dt: Flight time (scalar) or flight times of shape (D,) broadcast against the leading axes.
      guard: Apply the conditioning window; when False only the [0, pi/kappa) range and the
        condition estimate are enforced.

    Returns:
      np.ndarray: Departure velocities, shape broadcast(...) + (3,).
    """
    if guard:
        check_conditioning(params, dt)
    else:
        check_conditioning(params, dt, min_dt=0.0, edge_margin=0.0)

    r_i = np.asarray(r_i, dtype=float)
    r_j = np.asarray(r_j, dtype=float)
    f_rr, f_rv, _, _ = stm_blocks_batch(params.kappa, dt)
    rhs = r_j - np.einsum("...ab,...b->...a", f_rr, r_i)
    batch = np.broadcast_shapes(f_rv.shape[:-2], rhs.shape[:-1])
    f_rv = np.broadcast_to(f_rv, batch + (3, 3))
    rhs = np.broadcast_to(rhs, batch + (3,))[..., None]
    return np.linalg.solve(f_rv, rhs)[..., 0]


def impulse_for_transfer(params: OrbitParams, r_i, r_j, v_i_minus, dt: float) -> np.ndarray:
    if not dt > 0:
        raise DtOutOfRange(Messages.ERROR_DT_NOT_POSITIVE.format(dt=dt, limit=params.transfer_limit))
    v_plus = departure_velocity(params, r_i, r_j, dt)
    return v_plus - np.asarray(v_i_minus, dtype=float)


def build_transfer_leg(params: OrbitParams, r_i, r_j, dt: float, v_i_minus=None) -> TransferLeg:
    v_i_minus = np.zeros(3) if v_i_minus is None else np.asarray(v_i_minus, dtype=float)
    dv = impulse_for_transfer(params, r_i, r_j, v_i_minus, dt)
    return TransferLeg(r_i=r_i, r_j=r_j, v_i_minus=v_i_minus, dt=dt, dv=dv)


def landing_miss(params: OrbitParams, leg: TransferLeg) -> float:
    """Distance between r_j and the position reached by coasting from r_i with v_i_minus + dv"""
    blocks = stm_blocks(params, leg.dt)
    return float(np.linalg.norm(blocks.f_rr @ leg.r_i + blocks.f_rv @ leg.v_i_plus - leg.r_j))


def check_landing(params: OrbitParams, leg: TransferLeg, index: int = 0) -> None:
    """
    Raises DomainError unless the leg impulse carries r_i onto r_j within ENDPOINT_TOL, scaled by
    the larger endpoint norm above 1 km.
    """
    miss = landing_miss(params, leg)
    scale = max(1.0, float(np.linalg.norm(leg.r_i)), float(np.linalg.norm(leg.r_j)))
    if miss > Config.ENDPOINT_TOL * scale:
        raise DomainError(Messages.ERROR_LEG_MISSES_TARGET.format(index=index, miss=miss, end=leg.r_j.tolist()))


def arrival_velocity(params: OrbitParams, r_i, r_j, v_i_minus, dt: float) -> np.ndarray:
    """Velocity reached at r_j, before the next impulse"""
    v_plus = np.asarray(v_i_minus, dtype=float) + impulse_for_transfer(params, r_i, r_j, v_i_minus, dt)
    _, _, f_vr, f_vv = stm_blocks_batch(params.kappa, dt)
    return f_vr @ np.asarray(r_i, dtype=float) + f_vv @ v_plus


def two_point_matrices(params: OrbitParams, t: float, dt_total: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    F1, F2 with r(t) = F1 r_i + F2 r_j on the two-impulse path of flight time dt_total.

    Returns:
      (F1, F2): F2 = F_rv(t) F_rv(dt_total)^-1, F1 = F_rr(t) - F2 F_rr(dt_total).
    """
    check_conditioning(params, dt_total)
    if not 0.0 <= t <= dt_total:
        raise DtOutOfRange(Messages.ERROR_DT_OUT_OF_RANGE.format(dt=t, limit=dt_total))

    f_rr_t, f_rv_t, _, _ = stm_blocks_batch(params.kappa, t)
    f_rr_T, f_rv_T, _, _ = stm_blocks_batch(params.kappa, dt_total)
    f2 = np.linalg.solve(f_rv_T.T, f_rv_t.T).T
    f1 = f_rr_t - f2 @ f_rr_T
    return f1, f2


def trajectory_position(params: OrbitParams, r_i, r_j, dt_total: float, t: float) -> np.ndarray:
    f1, f2 = two_point_matrices(params, t, dt_total)
    return f1 @ np.asarray(r_i, dtype=float) + f2 @ np.asarray(r_j, dtype=float)


def transfer_positions(params: OrbitParams, r_i, r_j, dt_total: float, times, guard: bool = True) -> np.ndarray:
    """
    Positions on the two-impulse path through (r_i, r_j, dt_total) at many times, for one or
    many endpoint pairs at once.

    Args:
      r_i, r_j: Endpoints of shape (..., 3), broadcast against each other.
      dt_total: Common flight time of all pairs.
      times: Sample times in [0, dt_total], shape (N,).

    Returns:
      np.ndarray: Positions of shape (..., N, 3).
    """
    times = np.asarray(times, dtype=float)
    if times.size and (times.min() < 0.0 or times.max() > dt_total):
        raise DtOutOfRange(Messages.ERROR_DT_OUT_OF_RANGE.format(dt=float(times.max()), limit=dt_total))

    r_i = np.asarray(r_i, dtype=float)
    v0 = departure_velocity(params, r_i, r_j, dt_total, guard=guard)
    r_i = np.broadcast_to(r_i, v0.shape)
    f_rr, f_rv, _, _ = stm_blocks_batch(params.kappa, times)
    return np.einsum("nab,...b->...na", f_rr, r_i) + np.einsum("nab,...b->...na", f_rv, v0)


def sample_trajectory(params: OrbitParams, leg: TransferLeg, n_samples: int) -> Trajectory:
    if n_samples < 2:
        raise DomainError(Messages.ERROR_TOO_FEW_SAMPLES)
    times = np.linspace(0.0, leg.dt, n_samples)
    positions = transfer_positions(params, leg.r_i, leg.r_j, leg.dt, times)
    return Trajectory(times=times, positions=positions, leg=leg)


def minimum_impulse_count(params: OrbitParams, total_time: float) -> int:
    """Fewest impulses that keep every flight time of a mission below pi/kappa"""
    if not total_time > 0:
        raise DomainError(Messages.ERROR_DT_NOT_POSITIVE.format(dt=total_time, limit=math.inf))
    return max(math.floor(total_time / params.transfer_limit) + 1, 2)


def decision_variable_count(n_impulses: int) -> int:
    """n - 2 intermediate positions plus n - 1 flight times"""
    if n_impulses < 2:
        raise DomainError(Messages.ERROR_TOO_FEW_POSITIONS)
    return 2 * n_impulses - 3
