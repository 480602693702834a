"""
    Spectral bounds on two-impulse trajectories: the F-hat quadratic form, a Jacobi eigensolver,
    Gerschgorin disks, the sphere bound with its sigma envelope, the multi-impulse envelope and
    the cone bound on the direction of the position.
"""
import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from app.config import Config

from ..utils.exceptions import AllZero, BadAxis, DomainError, DtOutOfRange, EmptyList, NotSymmetric
from ..utils.messages import Messages
from ..utils.timer import log_runtime
from ..utils.validator import (ConeBound, ConeExtents, FactCheck, FhatMatrix,
                               OrbitParams, SphereBound, SweepRecord, Trajectory)
from . import dynamics_service as DynamicsService

logger = logging.getLogger(__name__)


def fhat(params: OrbitParams, t: float, dt_total: float) -> FhatMatrix:
    """
    F-hat = [F1 F2]^T [F1 F2], so that x^T F-hat x = |r(t)|^2 for x = [r_i; r_j].

    Raises:
      DtOutOfRange: unless 0 < t < dt_total.
      SingularTransfer: dt_total outside the conditioning window.
    """
    if not 0.0 < t < dt_total:
        raise DtOutOfRange(Messages.ERROR_DT_OUT_OF_RANGE.format(dt=t, limit=dt_total))
    f1, f2 = DynamicsService.two_point_matrices(params, t, dt_total)
    g = np.hstack([f1, f2])
    m = g.T @ g
    return FhatMatrix(m=0.5 * (m + m.T), t=t, dt_total=dt_total)


def _check_symmetric(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotSymmetric(Messages.ERROR_NOT_SQUARE.format(shape=m.shape))
    asymmetry = float(np.max(np.abs(m - m.T))) if m.size else 0.0
    if asymmetry > Config.SYMMETRY_TOL * max(1.0, float(np.max(np.abs(m))) if m.size else 1.0):
        raise NotSymmetric(Messages.ERROR_NOT_SYMMETRIC.format(asym=asymmetry))
    return m


def sym_eigen_decomposition(m, tol: Optional[float] = None, max_sweeps: Optional[int] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    Cyclic Jacobi eigen-decomposition of a real symmetric matrix.

    Args:
      m: Symmetric n x n matrix.
      tol: Stop when the off-diagonal Frobenius norm is below tol * |m|.
      max_sweeps: Upper bound on full sweeps.

    Returns:
      (values, vectors): ascending eigenvalues and the matching orthonormal columns.
    """
    tol = Config.JACOBI_TOL if tol is None else tol
    max_sweeps = Config.JACOBI_MAX_SWEEPS if max_sweeps is None else max_sweeps

    a = _check_symmetric(m).copy()
    a = 0.5 * (a + a.T)
    n = a.shape[0]
    q = np.eye(n)
    scale = np.linalg.norm(a)

    for sweep in range(max_sweeps):
        off = math.sqrt(2.0 * float(np.sum(np.tril(a, -1) ** 2)))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for r in range(p + 1, n):
                apr = a[p, r]
                if apr == 0.0:
                    continue
                theta = (a[r, r] - a[p, p]) / (2.0 * apr)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.hypot(t, 1.0)
                s = t * c

                col_p, col_r = a[:, p].copy(), a[:, r].copy()
                a[:, p] = c * col_p - s * col_r
                a[:, r] = s * col_p + c * col_r
                row_p, row_r = a[p, :].copy(), a[r, :].copy()
                a[p, :] = c * row_p - s * row_r
                a[r, :] = s * row_p + c * row_r

                vec_p, vec_r = q[:, p].copy(), q[:, r].copy()
                q[:, p] = c * vec_p - s * vec_r
                q[:, r] = s * vec_p + c * vec_r
    else:
        logger.warning("⚠️ Jacobi iteration stopped after %d sweeps", max_sweeps)

    values = np.diag(a).copy()
    order = np.argsort(values, kind="stable")
    return values[order], q[:, order]


def sym_eigenvalues(m) -> List[float]:
    values, _ = sym_eigen_decomposition(m)
    return values.tolist()


def zero_eigenvalue_count(values: Sequence[float]) -> int:
    values = np.asarray(values, dtype=float)
    threshold = Config.ZERO_EIGEN_REL * max(1.0, float(np.max(values)))
    return int(np.sum(np.abs(values) < threshold))


def gerschgorin_disks(m) -> List[Tuple[float, float]]:
    """Center m(i,i) and deleted absolute row sum of every row"""
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError(Messages.ERROR_NOT_SQUARE.format(shape=m.shape))
    centers = np.diag(m)
    radii = np.sum(np.abs(m), axis=1) - np.abs(centers)
    return list(zip(centers.tolist(), radii.tolist()))


def _sigma(kappa: float, dt_total) -> np.ndarray:
    dt_total = np.asarray(dt_total, dtype=float)
    half = 0.5 * math.pi / kappa
    with np.errstate(divide="ignore"):
        wide = 0.5 * math.sqrt(2.0) / np.cos(0.5 * kappa * dt_total)
    return np.where(dt_total <= half, 1.0, np.maximum(wide, 1.0))


def sigma_envelope(params: OrbitParams, dt_total: float) -> float:
    if not 0.0 < dt_total < params.transfer_limit:
        raise DtOutOfRange(Messages.ERROR_DT_OUT_OF_RANGE.format(dt=dt_total, limit=params.transfer_limit))
    return float(_sigma(params.kappa, dt_total))


def sigma_curve(params: OrbitParams, dt_grid) -> np.ndarray:
    dt_grid = np.asarray(dt_grid, dtype=float)
    if np.any(dt_grid <= 0) or np.any(dt_grid >= params.transfer_limit):
        raise DtOutOfRange(
            Messages.ERROR_DT_OUT_OF_RANGE.format(dt=float(dt_grid.max()), limit=params.transfer_limit)
        )
    return _sigma(params.kappa, dt_grid)


def sphere_bound(params: OrbitParams, r_i, r_j, dt_total: float) -> SphereBound:
    sigma = sigma_envelope(params, dt_total)
    radius = math.hypot(float(np.linalg.norm(r_i)), float(np.linalg.norm(r_j)))
    return SphereBound(delta=sigma * radius, sigma=sigma, dt_total=dt_total)


def multi_impulse_envelope(rho_list: Sequence[float]) -> float:
    if len(rho_list) == 0:
        raise EmptyList(Messages.ERROR_EMPTY_LIST)
    if min(rho_list) <= 0:
        raise DomainError(Messages.ERROR_NON_POSITIVE_RADIUS)
    return math.sqrt(2.0) * max(rho_list)


def cone_bound(e_s, rho_minus: float, rho_plus) -> ConeBound:
    e_s = np.asarray(e_s, dtype=float)
    rho_plus = np.asarray(rho_plus, dtype=float)
    if e_s.shape != (3,) or np.any(e_s < 0) or abs(np.linalg.norm(e_s) - 1.0) > 1e-9:
        raise BadAxis(Messages.ERROR_BAD_AXIS.format(axis=e_s.tolist()))
    if not rho_minus > 0:
        raise DomainError(Messages.ERROR_BAD_RHO_MINUS.format(value=rho_minus))
    if rho_plus.shape != (3,) or np.any(rho_plus < 0):
        raise DomainError(Messages.ERROR_BAD_RHO_PLUS.format(value=rho_plus.tolist()))

    c_theta = min(1.0, float(e_s @ rho_plus) / rho_minus)
    return ConeBound(e_s=e_s, rho_minus=rho_minus, rho_plus=rho_plus, c_theta=c_theta)


def best_cone_axis(rho_plus) -> np.ndarray:
    """Basis vector on the smallest positive extent; ties go to the lowest index"""
    rho_plus = np.asarray(rho_plus, dtype=float)
    if rho_plus.shape != (3,) or np.any(rho_plus < 0):
        raise DomainError(Messages.ERROR_BAD_RHO_PLUS.format(value=rho_plus.tolist()))
    if not np.any(rho_plus > 0):
        raise AllZero(Messages.ERROR_ALL_ZERO)

    candidates = np.where(rho_plus > 0, rho_plus, np.inf)
    e_s = np.zeros(3)
    e_s[int(np.argmin(candidates))] = 1.0
    return e_s


def measure_cone_extents(trajectory: Trajectory) -> ConeExtents:
    positions = trajectory.positions
    return ConeExtents(
        rho_minus=float(np.min(np.linalg.norm(positions, axis=1))),
        rho_plus=np.max(np.abs(positions), axis=0),
    )


@log_runtime("max-reach sweep")
def max_reach_sweep(
    params: OrbitParams,
    r1_norms: Sequence[float],
    t2_fractions: Sequence[float],
    n_directions: int,
    seed: int = 0,
    n_samples: Optional[int] = None,
) -> List[SweepRecord]:
    """
    Largest distance reached on legs from random 3-D directions of given norm to the origin,
    next to the sphere bound, for each flight time fraction of pi/kappa. One record per scenario,
    that is per (fraction, norm, direction).
    """
    n_samples = Config.DENSE_SAMPLES if n_samples is None else n_samples
    rng = np.random.default_rng(seed)
    records = []

    for fraction in t2_fractions:
        dt_total = fraction * params.transfer_limit
        sigma = sigma_envelope(params, dt_total)
        times = np.linspace(0.0, dt_total, n_samples)
        for norm in r1_norms:
            directions = rng.normal(size=(n_directions, 3))
            directions /= np.linalg.norm(directions, axis=1, keepdims=True)
            r_1 = norm * directions
            positions = DynamicsService.transfer_positions(params, r_1, np.zeros(3), dt_total, times)
            reached = np.max(np.linalg.norm(positions, axis=-1), axis=-1)
            records.extend(
                SweepRecord(
                    r1_km=float(norm),
                    t2_fraction=float(fraction),
                    max_reached_km=float(value),
                    delta_bound_km=sigma * float(norm),
                )
                for value in reached
            )

    logger.info("📈 Swept %d scenarios", len(records))
    return records


def _interior_grid(count: int) -> np.ndarray:
    return np.arange(1, count + 1) / (count + 1.0)


@log_runtime("fact checks")
def verify_facts(params: OrbitParams, grid: int = 50, tau_fractions: Sequence[float] = (0.3, 0.5, 0.7)) -> List[FactCheck]:
    """
    Numeric checks of the spectral properties behind the sphere bound.

    Asserted checks: eigenvalue time-reversal symmetry, nullity of F-hat, absolute row-sum
    symmetry, the threshold behaviour of the largest F-hat eigenvalue at half of pi/kappa and the
    Gerschgorin midpoint bound. The largest eigenvalue of F1^T F1 and the single-extremum shape
    are reported only.
    """
    checks = []
    tau_grid = _interior_grid(grid) * params.transfer_limit
    tau_grid = tau_grid[(tau_grid >= Config.GUARD_MIN_DT) & (tau_grid <= params.transfer_limit - Config.GUARD_EDGE_MARGIN)]
    u_grid = _interior_grid(grid)

    worst_reversal = 0.0
    worst_row_sum = 0.0
    nullity_failures = 0
    for tau in tau_grid:
        for u in u_grid:
            t = u * tau
            f1, f2 = DynamicsService.two_point_matrices(params, t, tau)
            g1, g2 = DynamicsService.two_point_matrices(params, tau - t, tau)

            forward = np.asarray(sym_eigenvalues(f1.T @ f1))
            mirrored = np.asarray(sym_eigenvalues(g2.T @ g2))
            scale = max(1.0, float(np.max(np.abs(forward))))
            worst_reversal = max(worst_reversal, float(np.max(np.abs(forward - mirrored))) / scale)

            m = fhat(params, t, tau).m
            m_mirror = fhat(params, tau - t, tau).m
            rows = np.sum(np.abs(m), axis=1)
            rows_mirror = np.sum(np.abs(m_mirror), axis=1)
            worst_row_sum = max(worst_row_sum, float(np.max(np.abs(rows[:3] - rows_mirror[3:]))))

            if zero_eigenvalue_count(sym_eigenvalues(m)) != 3:
                nullity_failures += 1

    checks.append(FactCheck(
        name="eigenvalue_time_reversal", asserted=True, passed=worst_reversal <= 1e-8,
        value=worst_reversal, tolerance=1e-8,
        detail="eig(F1^T F1)(t) against eig(F2^T F2)(tau - t)",
    ))
    checks.append(FactCheck(
        name="fhat_three_zero_eigenvalues", asserted=True, passed=nullity_failures == 0,
        value=float(nullity_failures), tolerance=0.0,
        detail=f"grid points with nullity other than 3 out of {tau_grid.size * u_grid.size}",
    ))
    checks.append(FactCheck(
        name="row_sum_time_reversal", asserted=True, passed=worst_row_sum <= 1e-9,
        value=worst_row_sum, tolerance=1e-9,
        detail="absolute row sums of rows 1-3 at t against rows 4-6 at tau - t",
    ))

    scan = np.linspace(0.1, 0.9, 17)
    for fraction in tau_fractions:
        tau = fraction * params.transfer_limit
        largest = np.array([sym_eigenvalues(fhat(params, u * tau, tau).m)[-1] for u in scan])
        largest_f1 = np.array([
            sym_eigenvalues(_f1_gram(params, u * tau, tau))[-1] for u in scan
        ])
        peak = float(np.max(largest))
        expectation = "< 1" if fraction < 0.5 else "> 1" if fraction > 0.5 else "= 1"
        checks.append(FactCheck(
            name=f"fhat_threshold_tau_{fraction:g}", asserted=True,
            passed=_matches_threshold(peak, fraction),
            value=peak, tolerance=1e-6,
            detail=f"largest F-hat eigenvalue over interior t, expected {expectation}",
        ))
        checks.append(FactCheck(
            name=f"f1_gram_threshold_tau_{fraction:g}", asserted=False,
            passed=_matches_threshold(float(np.max(largest_f1)), fraction),
            value=float(np.max(largest_f1)), tolerance=1e-6,
            detail=f"largest F1^T F1 eigenvalue over interior t, expected {expectation}",
        ))
        checks.append(FactCheck(
            name=f"single_extremum_tau_{fraction:g}", asserted=False,
            passed=_turning_points(largest) <= 1,
            value=float(_turning_points(largest)), tolerance=1.0,
            detail="turning points of the largest F-hat eigenvalue over t",
        ))

    for fraction in (0.7, 0.8):
        tau = fraction * params.transfer_limit
        m = fhat(params, 0.5 * tau, tau).m
        reach = max(center + radius for center, radius in gerschgorin_disks(m))
        expected = 0.5 / math.cos(0.5 * params.kappa * tau) ** 2
        checks.append(FactCheck(
            name=f"gerschgorin_midpoint_tau_{fraction:g}", asserted=True,
            passed=abs(reach - expected) <= 1e-6 and sym_eigenvalues(m)[-1] <= expected + 1e-9,
            value=reach, tolerance=1e-6,
            detail=f"max(center + radius) at t = tau/2 against 0.5 sec^2 = {expected:.12g}",
        ))

    failed = [check.name for check in checks if check.asserted and not check.passed]
    if failed:
        logger.warning("⚠️ Failing fact checks: %s", ", ".join(failed))
    else:
        logger.info("✅ %s", Messages.OK_FACTS)
    return checks


def _f1_gram(params: OrbitParams, t: float, tau: float) -> np.ndarray:
    f1, _ = DynamicsService.two_point_matrices(params, t, tau)
    gram = f1.T @ f1
    return 0.5 * (gram + gram.T)


def _matches_threshold(peak: float, fraction: float) -> bool:
    if fraction < 0.5:
        return peak < 1.0 - 1e-6
    if fraction > 0.5:
        return peak > 1.0 + 1e-6
    return abs(peak - 1.0) <= 1e-6


def _turning_points(series: np.ndarray) -> int:
    steps = np.diff(series)
    steps = steps[np.abs(steps) > 1e-12 * max(1.0, float(np.max(np.abs(series))))]
    return int(np.sum(np.sign(steps[1:]) != np.sign(steps[:-1])))
