"""
    Runs one sub-command on a validated scenario: computes every dataset, then writes the CSV
    files and the run manifest from a single thread.
"""
import logging
import math
import os
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel

from app.config import Config

from ..utils import constants
from ..utils import files_and_folders as FilesAndFolders
from ..utils import formatter as Formatter
from ..utils.enumerator import Enumerator
from ..utils.exceptions import ScenarioError, Unreachable
from ..utils.messages import Messages
from ..utils.parser import Parser
from ..utils.timer import log_runtime
from ..utils.validator import OrbitParams, RelState, ScenarioFile
from . import constraint_service as ConstraintService
from . import dynamics_service as DynamicsService
from . import planner_service as PlannerService
from . import reachability_service as ReachabilityService
from . import spectral_service as SpectralService

logger = logging.getLogger(__name__)


class RunOutcome(BaseModel):
    """Datasets computed by one sub-command, before anything is written"""

    datasets: List[Tuple[str, List[str], Any]] = []
    status: Enumerator.ExitCode = Enumerator.ExitCode.Ok
    message: str = ""
    resolutions: Dict[str, float] = {}
    summary: Optional[str] = None

    class Config:
        arbitrary_types_allowed = True


class RunResult(BaseModel):
    command: str
    status: Enumerator.ExitCode
    message: str
    directory: str
    files: List[str]
    manifest: str
    summary: Optional[str] = None


def _frame(rows, columns: List[str]) -> pd.DataFrame:
    return Formatter.to_frame(rows, columns)


def _label(enum, value) -> str:
    return Enumerator.label(enum, value)


def _dataset(outcome_datasets: list, filename: str, columns: List[str], rows) -> pd.DataFrame:
    frame = _frame(rows, columns)
    outcome_datasets.append((filename, columns, frame))
    return frame


# propagate


def _sample_count(dt: float, requested: int) -> int:
    return max(requested, math.ceil(dt / Config.CONSTRAINT_RESOLUTION) + 1)


def run_propagate(scenario: ScenarioFile, params: OrbitParams) -> RunOutcome:
    block = scenario.planner.propagate
    datasets: list = []
    status, message = Enumerator.ExitCode.Ok, ""

    if block.state is not None:
        state = RelState(r=block.state.r, v=block.state.v, t=block.state.t)
        rows = [[state.t, *state.r, *state.v]]
        for step in block.steps:
            state = DynamicsService.propagate(params, state, step)
            rows.append([state.t, *state.r, *state.v])
        _dataset(datasets, constants.STATES_FILE, constants.STATES_COLUMNS, rows)

    if block.legs:
        legs = [
            DynamicsService.build_transfer_leg(
                params, leg.r_i, leg.r_j, leg.dt, v_i_minus=block.v_1_minus if k == 0 else None
            )
            for k, leg in enumerate(block.legs)
        ]
        mission = PlannerService.assemble_mission(params, legs)
        constraints = [item.to_constraint() for item in scenario.constraints] + list(mission.endpoint_constraints)

        trajectory_rows, leg_rows = [], []
        verdicts = [[True, math.inf, math.nan] for _ in constraints]
        t_start = 0.0
        for item in mission.legs:
            trajectory = DynamicsService.sample_trajectory(params, item.leg, _sample_count(item.leg.dt, block.n_samples))
            times = t_start + trajectory.times
            skip = 0 if item.index == 0 else 1
            trajectory_rows.extend([t, *r] for t, r in zip(times[skip:], trajectory.positions[skip:]))
            leg_rows.append([
                item.index, item.leg.dt, *item.leg.dv, item.dv_norm, item.sigma, item.delta,
                float(np.max(np.linalg.norm(trajectory.positions, axis=1))),
            ])
            for verdict, constraint in zip(verdicts, constraints):
                checked = ConstraintService.check_trajectory(constraint, trajectory, t_start=t_start)
                verdict[1] = min(verdict[1], checked.min_margin)
                if not checked.satisfied and verdict[0]:
                    verdict[0], verdict[2] = False, checked.first_violation.t
            t_start += item.leg.dt

        _dataset(datasets, constants.TRAJECTORY_FILE, constants.TRAJECTORY_COLUMNS, trajectory_rows)
        _dataset(datasets, constants.LEGS_FILE, constants.LEGS_COLUMNS, leg_rows)
        _dataset(datasets, constants.CONSTRAINTS_FILE, constants.CONSTRAINTS_COLUMNS, [
            [k, _label(Enumerator.ConstraintKind, constraint.kind.value), satisfied, margin, violation_t]
            for k, (constraint, (satisfied, margin, violation_t)) in enumerate(zip(constraints, verdicts))
        ])

        violated = sum(not verdict[0] for verdict in verdicts)
        if violated:
            status, message = Enumerator.ExitCode.Infeasible, Messages.NOT_SATISFIED.format(count=violated)

    return RunOutcome(
        datasets=datasets, status=status, message=message,
        resolutions={"constraint_resolution_s": Config.CONSTRAINT_RESOLUTION, "min_leg_samples": block.n_samples},
    )


# bound


def _cone_row(index: int, cone_block, positions: np.ndarray) -> list:
    if cone_block.mode == Enumerator.ConeMode.User.value:
        rho_minus, rho_plus = cone_block.rho_minus, np.asarray(cone_block.rho_plus, dtype=float)
    else:
        rho_minus = float(np.min(np.linalg.norm(positions, axis=1)))
        rho_plus = np.max(np.abs(positions), axis=0)
    e_s = SpectralService.best_cone_axis(rho_plus) if cone_block.e_s is None else np.asarray(cone_block.e_s, dtype=float)

    if rho_minus <= 0.0:
        logger.warning("⚠️ Leg %d passes through the origin; the cone bound is vacuous", index)
        c_theta = math.nan
    else:
        c_theta = SpectralService.cone_bound(e_s, rho_minus, rho_plus).c_theta

    norms = np.linalg.norm(positions, axis=1)
    nonzero = norms > 0.0
    cosines = np.abs(positions[nonzero] @ e_s) / norms[nonzero]
    return [index, cone_block.mode, *e_s, rho_minus, *rho_plus, c_theta, float(np.max(cosines, initial=0.0))]


def run_bound(scenario: ScenarioFile, params: OrbitParams) -> RunOutcome:
    block = scenario.planner.bound
    datasets: list = []
    sphere_rows, cone_rows = [], []

    for index, leg in enumerate(block.legs):
        bound = SpectralService.sphere_bound(params, leg.r_i, leg.r_j, leg.dt)
        times = np.linspace(0.0, leg.dt, block.n_samples)
        positions = DynamicsService.transfer_positions(params, leg.r_i, leg.r_j, leg.dt, times)
        sampled = float(np.max(np.linalg.norm(positions, axis=1)))
        sphere_rows.append([index, leg.dt, bound.sigma, bound.delta, sampled])
        cone_rows.append(_cone_row(index, block.cone, positions))

    summary = _dataset(datasets, constants.SPHERE_BOUNDS_FILE, constants.SPHERE_BOUNDS_COLUMNS, sphere_rows)
    _dataset(datasets, constants.CONE_BOUNDS_FILE, constants.CONE_BOUNDS_COLUMNS, cone_rows)

    dt_grid = np.linspace(0.0, params.transfer_limit, block.sigma_points + 2)[1:-1]
    sigma = SpectralService.sigma_curve(params, dt_grid)
    _dataset(datasets, constants.SIGMA_CURVE_FILE, constants.SIGMA_CURVE_COLUMNS, zip(dt_grid, sigma))

    resolutions = {"leg_samples": block.n_samples, "sigma_points": block.sigma_points}
    if block.sweep is not None:
        sweep = block.sweep
        records = SpectralService.max_reach_sweep(
            params,
            np.linspace(sweep.r1_start, sweep.r1_stop, sweep.r1_count),
            sweep.t2_fractions,
            sweep.n_directions,
            seed=sweep.seed,
            n_samples=block.n_samples,
        )
        _dataset(datasets, constants.MAX_REACH_FILE, constants.MAX_REACH_COLUMNS, [
            [record.r1_km, record.t2_fraction, record.max_reached_km, record.delta_bound_km] for record in records
        ])
        resolutions["sweep_directions"] = sweep.n_directions

    return RunOutcome(datasets=datasets, resolutions=resolutions, summary=Formatter.render_table(summary))


# reach


def run_reach(scenario: ScenarioFile, params: OrbitParams) -> RunOutcome:
    block = scenario.planner.reach
    datasets: list = []
    epsilon = Config.CFM_EPSILON if block.epsilon is None else block.epsilon

    curve_rows = []
    for t in block.curve_times:
        dt_grid = np.linspace(t, params.transfer_limit - epsilon, block.curve_points + 1)[1:]
        curve = ReachabilityService.reach_curve(params, block.r_i, block.r_j, t, dt_grid)
        curve_rows.extend([t, dt, *r] for dt, r in curve.samples)
    if curve_rows:
        _dataset(datasets, constants.REACH_CURVES_FILE, constants.REACH_CURVES_COLUMNS, curve_rows)

    surface = ReachabilityService.reach_surface(params, block.r_i, block.r_j, block.t_res, block.dt_res, epsilon)
    _dataset(datasets, constants.REACH_SURFACE_FILE, constants.REACH_SURFACE_COLUMNS, [
        [surface.dt_values[k], surface.times[k, m], *surface.positions[k, m]]
        for k in range(surface.dt_res)
        for m in range(surface.t_res)
    ])

    clearance_rows = []
    for index, item in enumerate(scenario.constraints):
        report = ReachabilityService.boundary_clearance(params, block.r_i, block.r_j, item.to_constraint(), grid=surface)
        clearance_rows.append([
            index, report.clear, report.min_boundary_distance, report.crossings,
            report.t_spacing, report.dt_spacing, report.samples,
        ])
    summary = None
    if clearance_rows:
        summary = Formatter.render_table(
            _dataset(datasets, constants.CLEARANCE_FILE, constants.CLEARANCE_COLUMNS, clearance_rows)
        )

    return RunOutcome(
        datasets=datasets,
        resolutions={"t_res": block.t_res, "dt_res": block.dt_res, "curve_points": block.curve_points,
                     "epsilon_s": epsilon},
        summary=summary,
    )


# invert


def run_invert(scenario: ScenarioFile, params: OrbitParams) -> RunOutcome:
    block = scenario.planner.invert
    rows, unreachable = [], 0

    for index, target in enumerate(block.targets):
        try:
            result = ReachabilityService.invert_reach(params, target, block.r_i, block.r_j)
            t, dt, residual, status = result.t, result.dt_total, result.residual, result.status
        except Unreachable as e:
            logger.warning("🚫 %s", e)
            t, dt, residual, status = None, None, math.nan, Enumerator.InversionStatus.Unreachable
            unreachable += 1
        rows.append([
            index, *target, status.value,
            math.nan if t is None else t, math.nan if dt is None else dt, residual,
        ])

    datasets: list = []
    frame = _dataset(datasets, constants.INVERSION_FILE, constants.INVERSION_COLUMNS, rows)
    status, message = Enumerator.ExitCode.Ok, ""
    if unreachable:
        status, message = Enumerator.ExitCode.Infeasible, Messages.NOT_REACHABLE.format(count=unreachable)

    return RunOutcome(
        datasets=datasets, status=status, message=message,
        resolutions={"seed_grid": Config.INVERSION_SEED_GRID},
        summary=Formatter.render_table(frame),
    )


# plan-cfk


def _map_rows(feasibility_map) -> list:
    rows = []
    for i, beta in enumerate(feasibility_map.beta_values):
        for j, t in enumerate(feasibility_map.t_values):
            row = [beta, t, _label(Enumerator.CellVerdict, int(feasibility_map.verdicts[i, j]))]
            if feasibility_map.coverage is not None:
                row += [
                    _label(Enumerator.Coverage, int(feasibility_map.coverage[i, j])),
                    feasibility_map.witness_t2[i, j],
                ]
            row.append(feasibility_map.margins[i, j])
            rows.append(row)
    return rows


def run_plan_cfk(scenario: ScenarioFile, params: OrbitParams) -> RunOutcome:
    block = scenario.planner.cfk
    cfk = PlannerService.build_cfk_scenario(
        params,
        rho_inner=block.rho_inner,
        rho_outer=block.rho_outer,
        beta_step=block.beta_step,
        time_step=block.time_step,
        t_max=block.t_max,
        n_impulses=block.n_impulses,
        beta_start=block.beta_start,
    )
    datasets: list = []

    maps = [PlannerService.cfk_two_impulse_map(cfk)]
    _dataset(datasets, constants.CFK_TWO_IMPULSE_FILE, constants.CFK_TWO_IMPULSE_COLUMNS, _map_rows(maps[0]))
    if block.n_impulses == 3:
        maps.append(PlannerService.cfk_three_impulse_map(cfk))
        _dataset(datasets, constants.CFK_THREE_IMPULSE_FILE, constants.CFK_THREE_IMPULSE_COLUMNS, _map_rows(maps[1]))

    _dataset(datasets, constants.UNREACHABLE_BANDS_FILE, constants.UNREACHABLE_BANDS_COLUMNS, [
        [item.n_impulses, band.beta_start_deg, band.beta_end_deg, band.cells]
        for item in maps
        for band in PlannerService.unreachable_bands(item)
    ])

    classes = PlannerService.coverage_classes(maps[-1])
    summary = None
    if block.n_impulses == 3:
        frame = _dataset(datasets, constants.COVERAGE_CLASSES_FILE, constants.COVERAGE_CLASSES_COLUMNS, [
            [_label(Enumerator.Coverage, item.coverage.value), item.dt_min, item.dt_max, item.cells]
            for item in classes
        ])
        summary = Formatter.render_table(frame)

    status, message = Enumerator.ExitCode.Ok, ""
    if not maps[-1].feasible().any():
        status, message = Enumerator.ExitCode.Infeasible, Messages.NOT_FEASIBLE

    return RunOutcome(
        datasets=datasets, status=status, message=message,
        resolutions={"beta_step_deg": block.beta_step, "time_step_s": block.time_step,
                     "beta_cells": int(cfk.beta_grid.size), "time_cells": int(cfk.time_grid.size)},
        summary=summary,
    )


# plan-cfm


def _cfm_keep_out(scenario: ScenarioFile):
    block = scenario.planner.cfm
    if block.keep_out_radius is not None:
        return ConstraintService.keep_out(np.zeros(3), block.keep_out_radius)
    if len(scenario.constraints) == 1:
        return scenario.constraints[0].to_constraint()
    raise ScenarioError(Messages.ERROR_CFM_KEEP_OUT)


def run_plan_cfm(scenario: ScenarioFile, params: OrbitParams) -> RunOutcome:
    block = scenario.planner.cfm
    keep_out = _cfm_keep_out(scenario)
    if block.positions is not None:
        positions = np.asarray(block.positions, dtype=float)
    else:
        positions = PlannerService.ring_positions(block.betas, block.radius)

    plan = PlannerService.cfm_plan_tour(params, positions, keep_out, block.epsilon)
    datasets: list = []
    frame = _dataset(datasets, constants.CFM_LEGS_FILE, constants.CFM_LEGS_COLUMNS, [
        [leg.index, *leg.r_i, *leg.r_j, leg.segment_margin, leg.limit_margin, leg.certified]
        for leg in plan.legs
    ])

    if block.stress_cases:
        margins = PlannerService.cfm_stress_sweep(params, plan, block.stress_cases, seed=block.seed)
        _dataset(datasets, constants.CFM_STRESS_FILE, constants.CFM_STRESS_COLUMNS, enumerate(margins))
        collisions = int(np.sum(margins < 0.0))
        if collisions:
            logger.warning("💥 %d of %d stress cases enter the keep-out sphere", collisions, block.stress_cases)

    status, message = Enumerator.ExitCode.Ok, Messages.OK_CERTIFIED
    if not plan.certified:
        status = Enumerator.ExitCode.Infeasible
        message = Messages.NOT_CERTIFIED.format(legs=sum(not leg.certified for leg in plan.legs))

    return RunOutcome(
        datasets=datasets, status=status, message=message,
        resolutions={"epsilon_s": plan.epsilon, "limit_samples": Config.DENSE_SAMPLES,
                     "stress_cases": block.stress_cases},
        summary=Formatter.render_table(frame),
    )


# verify-facts


def run_verify_facts(scenario: ScenarioFile, params: OrbitParams) -> RunOutcome:
    block = scenario.planner.facts
    checks = SpectralService.verify_facts(params, grid=block.grid, tau_fractions=block.tau_fractions)
    datasets: list = []
    frame = _dataset(datasets, constants.FACTS_FILE, constants.FACTS_COLUMNS, [
        [check.name, check.asserted, check.passed, check.value, check.tolerance, check.detail] for check in checks
    ])

    failed = sum(check.asserted and not check.passed for check in checks)
    status, message = Enumerator.ExitCode.Ok, Messages.OK_FACTS
    if failed:
        status, message = Enumerator.ExitCode.Infeasible, Messages.NOT_FACTS.format(count=failed)

    return RunOutcome(
        datasets=datasets, status=status, message=message,
        resolutions={"grid": block.grid},
        summary=Formatter.render_table(frame),
    )


HANDLERS = {
    Enumerator.Command.Propagate.value: run_propagate,
    Enumerator.Command.Bound.value: run_bound,
    Enumerator.Command.Reach.value: run_reach,
    Enumerator.Command.Invert.value: run_invert,
    Enumerator.Command.PlanCfk.value: run_plan_cfk,
    Enumerator.Command.PlanCfm.value: run_plan_cfm,
    Enumerator.Command.VerifyFacts.value: run_verify_facts,
}


def write_outputs(directory: str, scenario: ScenarioFile, outcome: RunOutcome) -> Tuple[List[str], str]:
    """Writes every dataset, then the manifest. Files already present are listed in the manifest too."""
    written = [
        Formatter.emit_csv(frame, os.path.join(directory, filename), columns)
        for filename, columns, frame in outcome.datasets
    ]

    names = {os.path.basename(path) for path in written} | {Config.MANIFEST_FILENAME}
    stale = sorted(
        entry for entry in os.listdir(directory)
        if entry not in names and os.path.isfile(os.path.join(directory, entry))
    )
    if stale:
        logger.warning("⚠️ %s", Messages.WARN_STALE_FILES.format(files=", ".join(stale)))

    manifest = FilesAndFolders.write_manifest(
        directory,
        Parser.scenario_hash(scenario),
        written + [os.path.join(directory, entry) for entry in stale],
        outcome.resolutions,
        FilesAndFolders.tolerances_in_use(),
    )
    return written, manifest


@log_runtime("run")
def run(command: str, scenario_path: str, overrides: Optional[List[str]] = None, out: Optional[str] = None) -> RunResult:
    """
    Loads and validates a scenario, runs one sub-command and writes its artifacts.

    Args:
      command: Sub-command name.
      scenario_path: YAML scenario file.
      overrides: key=value strings applied to the scenario before validation.
      out: Output folder; falls back to the scenario's output block, then Config.OUTPUT_DIRECTORY.

    Returns:
      RunResult: Exit status, message and the written files.
    """
    scenario = Parser.load_scenario(scenario_path, command=command, overrides=overrides)
    params = scenario.orbit.to_params()
    logger.info("🛰️ Running %s (kappa = %.6e rad/s, pi/kappa = %.3f s)", command, params.kappa, params.transfer_limit)

    outcome = HANDLERS[command](scenario, params)

    directory = FilesAndFolders.get_output_directory(out or scenario.output.directory)
    written, manifest = write_outputs(directory, scenario, outcome)
    message = outcome.message or Messages.OK_RUN.format(command=command, count=len(written), directory=directory)

    return RunResult(
        command=command,
        status=outcome.status,
        message=message,
        directory=directory,
        files=written,
        manifest=manifest,
        summary=outcome.summary,
    )
