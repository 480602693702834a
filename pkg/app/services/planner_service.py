"""
    Grid-search planners on the unit impulse ring: circular formation keeping (CFK) feasibility
    maps, collision-free maneuver (CFM) certification of impulse positions, and multi-impulse
    mission assembly.
"""
import concurrent.futures
import hashlib
import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from app.config import Config

from ..utils.common import Common
from ..utils.enumerator import Enumerator
from ..utils.exceptions import ChainBroken, DomainError, EndpointInside
from ..utils.messages import Messages
from ..utils.timer import log_runtime
from ..utils.validator import (BetaBand, CfkScenario, CfmLegReport, CfmPlan,
                               CoverageClass, FeasibilityMap, MissionLeg,
                               MissionSummary, OrbitParams, PathConstraint,
                               TableRow, TransferLeg)
from . import constraint_service as ConstraintService
from . import dynamics_service as DynamicsService
from . import reachability_service as ReachabilityService
from . import spectral_service as SpectralService

logger = logging.getLogger(__name__)

# Polar-angle bins used to decide whether a tour visits every beta
COVERAGE_BINS = 360


def ring_positions(betas_deg, radius: float = 1.0) -> np.ndarray:
    betas = np.radians(np.asarray(betas_deg, dtype=float))
    return radius * np.stack([np.cos(betas), np.sin(betas), np.zeros_like(betas)], axis=-1)


def default_time_grid(params: OrbitParams, step: Optional[float] = None, t_max: Optional[float] = None) -> np.ndarray:
    step = Config.CFK_TIME_STEP if step is None else step
    upper = params.transfer_limit - Config.GUARD_EDGE_MARGIN
    upper = upper if t_max is None else min(t_max, upper)
    return step * np.arange(1, math.floor(upper / step + 1e-9) + 1)


def default_beta_grid(step: Optional[float] = None) -> np.ndarray:
    step = Config.CFK_BETA_STEP if step is None else step
    return step * np.arange(0, math.ceil(360.0 / step - 1e-9))


def build_cfk_scenario(
    params: OrbitParams,
    rho_inner: float = 0.9,
    rho_outer: float = 1.1,
    beta_step: Optional[float] = None,
    time_step: Optional[float] = None,
    t_max: Optional[float] = None,
    n_impulses: int = 3,
    beta_start: float = 0.0,
) -> CfkScenario:
    return CfkScenario(
        orbit=params,
        rho_inner=rho_inner,
        rho_outer=rho_outer,
        beta_grid=default_beta_grid(beta_step),
        time_grid=default_time_grid(params, time_step, t_max),
        n_impulses=n_impulses,
        beta_start=beta_start,
    )


def leg_sample_count(dt: float, step: Optional[float] = None) -> int:
    """Samples per leg so that the spacing never exceeds the planner time step"""
    step = Config.CFK_TIME_STEP if step is None else step
    return max(Config.CFK_MIN_SAMPLES, math.ceil(dt / step) + 1)


def _scenario_digest(scenario: CfkScenario) -> str:
    digest = hashlib.sha256()
    digest.update(repr((scenario.orbit.mu, scenario.orbit.kappa, scenario.rho_inner, scenario.rho_outer,
                        scenario.n_impulses, scenario.beta_start)).encode())
    digest.update(np.ascontiguousarray(scenario.beta_grid).tobytes())
    digest.update(np.ascontiguousarray(scenario.time_grid).tobytes())
    return digest.hexdigest()


def _ring_constraint(scenario: CfkScenario) -> PathConstraint:
    return ConstraintService.shell(np.zeros(3), scenario.rho_inner, scenario.rho_outer)


def _covered_bins(positions: np.ndarray) -> np.ndarray:
    """
    Polar-angle bins swept by sampled planar paths, filling the arc between consecutive samples.

    Args:
      positions: Shape (M, N, 3).

    Returns:
      np.ndarray: Boolean array of shape (M, COVERAGE_BINS).
    """
    width = 360.0 / COVERAGE_BINS
    angles = Common.polar_angle_deg(positions)
    steps = np.mod(np.diff(angles, axis=-1) + 180.0, 360.0) - 180.0
    subdivisions = max(2, int(math.ceil(float(np.max(np.abs(steps), initial=0.0)) / width)) + 1)
    fractions = np.linspace(0.0, 1.0, subdivisions)
    swept = angles[..., :-1, None] + steps[..., None] * fractions
    bins = (np.floor(np.mod(swept, 360.0) / width).astype(int) % COVERAGE_BINS).reshape(angles.shape[0], -1)

    covered = np.zeros((angles.shape[0], COVERAGE_BINS), dtype=bool)
    covered[np.arange(angles.shape[0])[:, None], bins] = True
    return covered


def max_circular_gap(covered: np.ndarray) -> np.ndarray:
    """Longest circular run of uncovered bins along the last axis"""
    n = covered.shape[-1]
    doubled = np.concatenate([covered, covered], axis=-1)
    index = np.arange(2 * n)
    last = np.maximum.accumulate(np.where(doubled, index, -1), axis=-1)
    run = np.max((index - last)[..., n:], axis=-1)
    return np.where(covered.any(axis=-1), run, n)


def _leg_family(
    scenario: CfkScenario,
    outbound: bool,
    with_bins: bool,
    threads: Optional[int] = None,
) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    """
    Margins (and swept bins) of every leg between the start point and each beta of the grid,
    one column per flight time. Outbound legs leave the start point, return legs end there.
    """
    params = scenario.orbit
    constraint = _ring_constraint(scenario)
    start = Common.unit_circle_position(scenario.beta_start)
    ring = ring_positions(scenario.beta_grid)

    def column(dt: float):
        times = np.linspace(0.0, dt, leg_sample_count(dt))
        if outbound:
            positions = DynamicsService.transfer_positions(params, start, ring, dt, times)
        else:
            positions = DynamicsService.transfer_positions(params, ring, start, dt, times)
        mask = ConstraintService.in_window(constraint, times)
        slack = np.min(np.where(mask, ConstraintService.margins(constraint, positions), np.inf), axis=-1)
        if not with_bins:
            return slack, None

        # only legs that keep to the ring can contribute to a tour
        covered = np.zeros((ring.shape[0], COVERAGE_BINS), dtype=bool)
        kept = slack >= Config.SAMPLING_GUARD_KM
        if kept.any():
            covered[kept] = _covered_bins(positions[kept])
        return slack, covered

    with concurrent.futures.ThreadPoolExecutor(max_workers=threads or Config.THREADS) as executor:
        results = list(executor.map(column, scenario.time_grid))

    margins = np.stack([result[0] for result in results], axis=1)
    bins = np.stack([result[1] for result in results], axis=1) if with_bins else None
    return margins, bins


@log_runtime("two-impulse CFK map")
def cfk_two_impulse_map(scenario: CfkScenario, threads: Optional[int] = None) -> FeasibilityMap:
    """
    Verdict of every (beta_2, t_2) leg from the start point, with rows that no flight time can
    reach marked as the two-impulse unreachable band.
    """
    logger.info("🗺️ Building two-impulse map on %d x %d cells", scenario.beta_grid.size, scenario.time_grid.size)
    margins, _ = _leg_family(scenario, outbound=True, with_bins=False, threads=threads)
    feasible = margins >= Config.SAMPLING_GUARD_KM

    verdicts = np.where(feasible, Enumerator.CellVerdict.Feasible.value, Enumerator.CellVerdict.Infeasible.value)
    unreachable = ~feasible.any(axis=1)
    verdicts[unreachable, :] = Enumerator.CellVerdict.Unreachable_Two_Impulse.value

    return FeasibilityMap(
        n_impulses=2,
        beta_values=scenario.beta_grid,
        t_values=scenario.time_grid,
        verdicts=verdicts,
        margins=margins,
        beta_start=scenario.beta_start,
        provenance=_scenario_digest(scenario),
    )


def _classify_row(
    feasible_out: np.ndarray,
    margins_out: np.ndarray,
    bins_out: np.ndarray,
    feasible_back: np.ndarray,
    margins_back: np.ndarray,
    bins_back: np.ndarray,
    time_grid: np.ndarray,
):
    """Coverage, witness t2 and tour margin of every return flight time of one beta_2 row"""
    n_t = time_grid.size
    coverage = np.full(n_t, Enumerator.Coverage.Empty.value)
    witness = np.full(n_t, np.nan)
    margins = np.full(n_t, -np.inf)

    outbound = np.flatnonzero(feasible_out)
    back = np.flatnonzero(feasible_back)
    if outbound.size == 0 or back.size == 0:
        return coverage, witness, margins

    patterns, first = np.unique(bins_out[outbound], axis=0, return_index=True)
    pattern_index = outbound[first]
    gaps = max_circular_gap(patterns[:, None, :] | bins_back[back][None, :, :])
    full = gaps * (360.0 / COVERAGE_BINS) < Config.FULL_COVERAGE_GAP_DEG

    ranked = np.where(full, time_grid[pattern_index][:, None], np.inf)
    choice = np.argmin(ranked, axis=0)
    has_full = full.any(axis=0)
    chosen = np.where(has_full, pattern_index[choice], outbound[0])

    coverage[back] = np.where(has_full, Enumerator.Coverage.Full.value, Enumerator.Coverage.Partial.value)
    witness[back] = time_grid[chosen]
    margins[back] = np.minimum(margins_out[chosen], margins_back[back])
    return coverage, witness, margins


@log_runtime("three-impulse CFK map")
def cfk_three_impulse_map(scenario: CfkScenario, threads: Optional[int] = None) -> FeasibilityMap:
    """
    Verdict of every (beta_2, dt_32) cell of tours start -> beta_2 -> start. A cell is feasible
    when some first leg reaches beta_2 and the return leg of flight time dt_32 satisfies the
    ring constraint; feasible cells are split into full and partial polar coverage.
    """
    logger.info("🗺️ Building three-impulse map on %d x %d cells", scenario.beta_grid.size, scenario.time_grid.size)
    margins_out, bins_out = _leg_family(scenario, outbound=True, with_bins=True, threads=threads)
    margins_back, bins_back = _leg_family(scenario, outbound=False, with_bins=True, threads=threads)
    guard = Config.SAMPLING_GUARD_KM
    feasible_out = margins_out >= guard
    feasible_back = margins_back >= guard

    def row(i: int):
        return _classify_row(
            feasible_out[i], margins_out[i], bins_out[i],
            feasible_back[i], margins_back[i], bins_back[i],
            scenario.time_grid,
        )

    with concurrent.futures.ThreadPoolExecutor(max_workers=threads or Config.THREADS) as executor:
        rows = list(executor.map(row, range(scenario.beta_grid.size)))

    coverage = np.stack([r[0] for r in rows])
    witness_t2 = np.stack([r[1] for r in rows])
    margins = np.stack([r[2] for r in rows])

    reachable = feasible_out.any(axis=1)
    returnable = feasible_back.any(axis=1)
    verdicts = np.where(feasible_back, Enumerator.CellVerdict.Feasible.value, Enumerator.CellVerdict.Infeasible.value)
    verdicts[reachable & ~returnable, :] = Enumerator.CellVerdict.Unreachable_Two_Impulse.value
    verdicts[~reachable, :] = Enumerator.CellVerdict.Unreachable_Two_And_Three_Impulse.value
    coverage[verdicts != Enumerator.CellVerdict.Feasible.value] = Enumerator.Coverage.Empty.value

    logger.info("✅ %d feasible cells", int(np.sum(verdicts == Enumerator.CellVerdict.Feasible.value)))
    return FeasibilityMap(
        n_impulses=3,
        beta_values=scenario.beta_grid,
        t_values=scenario.time_grid,
        verdicts=verdicts,
        margins=np.where(np.isfinite(margins), margins, np.nan),
        coverage=coverage,
        witness_t2=witness_t2,
        beta_start=scenario.beta_start,
        provenance=_scenario_digest(scenario),
    )


def witness_legs(params: OrbitParams, feasibility_map: FeasibilityMap, i: int, j: int) -> List[TransferLeg]:
    """Legs of the tour stored for feasible cell (i, j)"""
    if feasibility_map.verdicts[i, j] != Enumerator.CellVerdict.Feasible.value:
        raise DomainError(Messages.ERROR_CELL_NOT_FEASIBLE.format(i=i, j=j))
    start = Common.unit_circle_position(feasibility_map.beta_start)
    target = Common.unit_circle_position(float(feasibility_map.beta_values[i]))
    dt = float(feasibility_map.t_values[j])

    if feasibility_map.n_impulses == 2:
        return [DynamicsService.build_transfer_leg(params, start, target, dt)]

    t2 = float(feasibility_map.witness_t2[i, j])
    first = DynamicsService.build_transfer_leg(params, start, target, t2)
    v_arrival = DynamicsService.arrival_velocity(params, start, target, first.v_i_minus, t2)
    second = DynamicsService.build_transfer_leg(params, target, start, dt, v_i_minus=v_arrival)
    return [first, second]


def _runs(flags: np.ndarray) -> List[Tuple[int, int]]:
    runs, begin = [], None
    for index, flag in enumerate(flags):
        if flag and begin is None:
            begin = index
        elif not flag and begin is not None:
            runs.append((begin, index - 1))
            begin = None
    if begin is not None:
        runs.append((begin, len(flags) - 1))
    return runs


def unreachable_bands(feasibility_map: FeasibilityMap) -> List[BetaBand]:
    """Contiguous beta intervals with no feasible cell; bands wrap through 360 degrees"""
    betas = feasibility_map.beta_values
    empty = ~feasibility_map.feasible().any(axis=1)
    runs = _runs(empty)

    if len(runs) > 1 and runs[0][0] == 0 and runs[-1][1] == betas.size - 1 and betas.size > 1:
        step = betas[1] - betas[0]
        if abs((betas[-1] + step) - (betas[0] + 360.0)) < 1e-9:
            runs = [(runs[-1][0], runs[0][1])] + runs[1:-1]

    bands = []
    for begin, end in runs:
        cells = end - begin + 1 if end >= begin else end + betas.size - begin + 1
        bands.append(BetaBand(beta_start_deg=float(betas[begin]), beta_end_deg=float(betas[end]), cells=cells))
    return bands


def coverage_classes(feasibility_map: FeasibilityMap) -> List[CoverageClass]:
    """Flight-time extents of the full- and partial-coverage regions of a three-impulse map"""
    if feasibility_map.coverage is None:
        return []
    classes = []
    for coverage in (Enumerator.Coverage.Full, Enumerator.Coverage.Partial):
        cells = feasibility_map.coverage == coverage.value
        if not cells.any():
            continue
        columns = feasibility_map.t_values[cells.any(axis=0)]
        classes.append(CoverageClass(
            coverage=coverage, dt_min=float(columns.min()), dt_max=float(columns.max()), cells=int(cells.sum()),
        ))
    return classes


def table_one_rows(
    params: OrbitParams,
    rows: Sequence[Tuple[float, float, float]],
    n_samples: Optional[int] = None,
) -> List[TableRow]:
    """Sphere bounds of unit-ring legs given as (beta_i, beta_j, dt) rows, with the sampled maximum"""
    n_samples = Config.DENSE_SAMPLES if n_samples is None else n_samples
    result = []
    for beta_i, beta_j, dt in rows:
        r_i = Common.unit_circle_position(beta_i)
        r_j = Common.unit_circle_position(beta_j)
        bound = SpectralService.sphere_bound(params, r_i, r_j, dt)
        positions = DynamicsService.transfer_positions(params, r_i, r_j, dt, np.linspace(0.0, dt, n_samples))
        result.append(TableRow(
            beta_i_deg=beta_i, beta_j_deg=beta_j, dt=dt, sigma=bound.sigma, delta=bound.delta,
            max_sampled=float(np.max(np.linalg.norm(positions, axis=-1))),
        ))
    return result


def segment_distance_range(center, a, b) -> Tuple[float, float]:
    """Smallest and largest distance from center to the straight segment a-b"""
    center, a, b = (np.asarray(x, dtype=float) for x in (center, a, b))
    ab = b - a
    length = float(ab @ ab)
    s = 0.0 if length == 0.0 else min(1.0, max(0.0, float((center - a) @ ab) / length))
    nearest = float(np.linalg.norm(a + s * ab - center))
    farthest = max(float(np.linalg.norm(a - center)), float(np.linalg.norm(b - center)))
    return nearest, farthest


def cfm_leg_report(
    params: OrbitParams,
    r_i,
    r_j,
    keep_out: PathConstraint,
    epsilon: Optional[float] = None,
    index: int = 0,
    n_samples: Optional[int] = None,
) -> CfmLegReport:
    """
    Clearance of the two boundary trajectories of one leg: the straight chord (flight time to 0)
    and the trajectory with flight time pi/kappa - epsilon.

    Raises:
      EndpointInside: an endpoint violates the keep-out constraint.
    """
    epsilon = Config.CFM_EPSILON if epsilon is None else epsilon
    for point in (r_i, r_j):
        if float(ConstraintService.margins(keep_out, point)) < 0.0:
            raise EndpointInside(Messages.ERROR_ENDPOINT_INSIDE.format(point=np.asarray(point).tolist()))

    nearest, farthest = segment_distance_range(keep_out.center, r_i, r_j)
    segment_margin = min(nearest - keep_out.rho_inner, keep_out.rho_outer - farthest)

    dt_limit = params.transfer_limit - epsilon
    times = np.linspace(0.0, dt_limit, Config.DENSE_SAMPLES if n_samples is None else n_samples)
    positions = DynamicsService.transfer_positions(params, r_i, r_j, dt_limit, times, guard=False)
    limit_margin = float(np.min(ConstraintService.margins(keep_out, positions)))

    return CfmLegReport(
        index=index,
        r_i=r_i,
        r_j=r_j,
        segment_margin=segment_margin,
        limit_margin=limit_margin,
        certified=segment_margin > 0.0 and limit_margin >= Config.SAMPLING_GUARD_KM,
    )


def cfm_certify_leg(params: OrbitParams, r_i, r_j, keep_out: PathConstraint, epsilon: Optional[float] = None) -> bool:
    return cfm_leg_report(params, r_i, r_j, keep_out, epsilon).certified


@log_runtime("CFM tour")
def cfm_plan_tour(params: OrbitParams, positions, keep_out: PathConstraint, epsilon: Optional[float] = None) -> CfmPlan:
    positions = np.asarray(positions, dtype=float)
    if positions.ndim != 2 or positions.shape[0] < 2:
        raise DomainError(Messages.ERROR_TOO_FEW_POSITIONS)
    epsilon = Config.CFM_EPSILON if epsilon is None else epsilon

    legs = [
        cfm_leg_report(params, positions[k], positions[k + 1], keep_out, epsilon, index=k)
        for k in range(positions.shape[0] - 1)
    ]
    certified = all(leg.certified for leg in legs)
    if certified:
        logger.info("✅ %s", Messages.OK_CERTIFIED)
    else:
        logger.info("🚫 %s", Messages.NOT_CERTIFIED.format(legs=sum(not leg.certified for leg in legs)))
    return CfmPlan(impulse_positions=positions, keep_out=keep_out, epsilon=epsilon, certified=certified, legs=legs)


def cfm_stress_sweep(
    params: OrbitParams, plan: CfmPlan, cases: int, seed: int = 0, n_samples: Optional[int] = None
) -> np.ndarray:
    """
    Smallest keep-out margin of the tour for random flight-time assignments.

    Returns:
      np.ndarray: One margin per case; negative entries are collisions.
    """
    n_samples = Config.CFM_SWEEP_SAMPLES if n_samples is None else n_samples
    rng = np.random.default_rng(seed)
    positions = plan.impulse_positions
    upper = params.transfer_limit - plan.epsilon
    result = np.empty(cases)
    for case in range(cases):
        dts = rng.uniform(Config.GUARD_MIN_DT, upper, size=positions.shape[0] - 1)
        result[case] = min(
            ReachabilityService.leg_min_margin(params, positions[k], positions[k + 1], plan.keep_out, dt, n_samples)
            for k, dt in enumerate(dts)
        )
    return result


def assemble_mission(params: OrbitParams, legs: Sequence[TransferLeg]) -> MissionSummary:
    """
    Chains legs with velocity continuity: each leg departs with the arrival velocity of the
    previous one and its impulse is recomputed accordingly.

    Raises:
      ChainBroken: a leg does not start where the previous one ends.
      DomainError: a leg impulse does not carry it onto its end point.
    """
    if len(legs) == 0:
        raise DomainError(Messages.ERROR_NO_LEGS)
    for index in range(1, len(legs)):
        if not Common.is_close_point(legs[index].r_i, legs[index - 1].r_j, Config.ENDPOINT_TOL):
            raise ChainBroken(Messages.ERROR_CHAIN_BROKEN.format(
                index=index, start=legs[index].r_i.tolist(), end=legs[index - 1].r_j.tolist(),
            ))

    v_minus = legs[0].v_i_minus
    summary_legs = []
    for index, leg in enumerate(legs):
        DynamicsService.check_flight_time(params, leg.dt)
        DynamicsService.check_landing(params, leg, index)
        chained = DynamicsService.build_transfer_leg(params, leg.r_i, leg.r_j, leg.dt, v_i_minus=v_minus)
        v_arrival = DynamicsService.arrival_velocity(params, leg.r_i, leg.r_j, v_minus, leg.dt)
        bound = SpectralService.sphere_bound(params, leg.r_i, leg.r_j, leg.dt)
        summary_legs.append(MissionLeg(
            index=index, leg=chained, v_arrival=v_arrival,
            dv_norm=float(np.linalg.norm(chained.dv)), delta=bound.delta, sigma=bound.sigma,
        ))
        v_minus = v_arrival

    envelope = None
    if all(leg.dt <= params.half_period for leg in legs):
        norms = [float(np.linalg.norm(legs[0].r_i))] + [float(np.linalg.norm(leg.r_j)) for leg in legs]
        positive = [norm for norm in norms if norm > 0.0]
        envelope = SpectralService.multi_impulse_envelope(positive) if positive else 0.0

    total_time = math.fsum(leg.dt for leg in legs)
    return MissionSummary(
        legs=summary_legs,
        total_dv=math.fsum(item.dv_norm for item in summary_legs),
        envelope=envelope,
        endpoint_constraints=ConstraintService.endpoint_constraints(legs[0].r_i, legs[-1].r_j, total_time),
    )
