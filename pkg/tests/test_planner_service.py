import math

import numpy as np
import pytest

from app.services import constraint_service as ConstraintService
from app.services import dynamics_service as DynamicsService
from app.services import planner_service as PlannerService
from app.services import reachability_service as ReachabilityService
from app.utils.enumerator import Enumerator
from app.utils.exceptions import ChainBroken, DomainError, EndpointInside
from app.utils.validator import FeasibilityMap, TransferLeg

FEASIBLE = Enumerator.CellVerdict.Feasible.value
INFEASIBLE = Enumerator.CellVerdict.Infeasible.value


@pytest.fixture
def coarse_cfk(orbit_400):
    return PlannerService.build_cfk_scenario(orbit_400, beta_step=10.0, time_step=100.0, n_impulses=3)


def test_default_grids(orbit_400):
    betas = PlannerService.default_beta_grid(1.0)
    assert betas.size == 360
    assert betas[0] == 0.0 and betas[-1] == 359.0

    times = PlannerService.default_time_grid(orbit_400, 10.0)
    assert times[0] == 10.0
    assert times[-1] <= orbit_400.transfer_limit - 1.0
    assert times[-1] + 10.0 > orbit_400.transfer_limit - 1.0


def test_ring_positions():
    positions = PlannerService.ring_positions([0.0, 90.0, 180.0], radius=2.0)
    np.testing.assert_allclose(positions, [[2, 0, 0], [0, 2, 0], [-2, 0, 0]], atol=1e-12)


def test_leg_sample_count_respects_time_step():
    assert PlannerService.leg_sample_count(100.0, 10.0) == 200
    assert PlannerService.leg_sample_count(2700.0, 10.0) == 271


def test_max_circular_gap():
    covered = np.zeros((4, 12), dtype=bool)
    covered[1] = True
    covered[2, 5] = True
    covered[3, [0, 6]] = True
    np.testing.assert_array_equal(PlannerService.max_circular_gap(covered), [12, 0, 11, 5])


def test_two_impulse_map_on_coarse_grid(coarse_cfk):
    feasibility_map = PlannerService.cfk_two_impulse_map(coarse_cfk, threads=2)
    assert feasibility_map.verdicts.shape == (36, coarse_cfk.time_grid.size)
    # 10 degrees along the ring in 100 s stays inside the shell
    assert feasibility_map.verdicts[1, 0] == FEASIBLE
    # straight across the ring passes the keep-out circle
    assert feasibility_map.verdicts[18, 0] != FEASIBLE
    assert np.all(feasibility_map.margins[feasibility_map.feasible()] >= 1e-3)


def test_three_impulse_map_cells(coarse_cfk):
    feasibility_map = PlannerService.cfk_three_impulse_map(coarse_cfk, threads=2)
    feasible = feasibility_map.feasible()
    assert feasible.any()

    empty = Enumerator.Coverage.Empty.value
    assert np.all(feasibility_map.coverage[~feasible] == empty)
    assert np.all(feasibility_map.coverage[feasible] != empty)
    assert np.all(np.isfinite(feasibility_map.witness_t2[feasible]))

    i, j = map(int, np.argwhere(feasible)[0])
    legs = PlannerService.witness_legs(coarse_cfk.orbit, feasibility_map, i, j)
    assert len(legs) == 2
    np.testing.assert_allclose(legs[0].r_j, legs[1].r_i)
    np.testing.assert_allclose(legs[1].r_j, legs[0].r_i)
    assert legs[1].dt == feasibility_map.t_values[j]


def test_maps_are_deterministic(coarse_cfk):
    first = PlannerService.cfk_three_impulse_map(coarse_cfk, threads=1)
    second = PlannerService.cfk_three_impulse_map(coarse_cfk, threads=4)
    np.testing.assert_array_equal(first.verdicts, second.verdicts)
    np.testing.assert_array_equal(first.coverage, second.coverage)
    np.testing.assert_array_equal(first.witness_t2, second.witness_t2)
    assert first.provenance == second.provenance


def _manual_map(verdicts, coverage=None):
    verdicts = np.asarray(verdicts)
    return FeasibilityMap(
        n_impulses=2 if coverage is None else 3,
        beta_values=10.0 * np.arange(verdicts.shape[0]),
        t_values=100.0 * np.arange(1, verdicts.shape[1] + 1),
        verdicts=verdicts,
        margins=np.zeros(verdicts.shape),
        coverage=coverage,
    )


def test_unreachable_bands_wrap_through_zero():
    verdicts = np.full((36, 2), FEASIBLE)
    verdicts[[0, 1, 34, 35], :] = INFEASIBLE
    verdicts[[10, 11, 12], :] = INFEASIBLE
    bands = PlannerService.unreachable_bands(_manual_map(verdicts))
    assert [(band.beta_start_deg, band.beta_end_deg, band.cells) for band in bands] == [
        (340.0, 10.0, 4),
        (100.0, 120.0, 3),
    ]


def test_coverage_classes():
    verdicts = np.full((3, 4), FEASIBLE)
    coverage = np.array([
        [2, 2, 1, 1],
        [0, 2, 2, 1],
        [1, 1, 1, 1],
    ])
    classes = PlannerService.coverage_classes(_manual_map(verdicts, coverage))
    summary = {item.coverage: (item.dt_min, item.dt_max, item.cells) for item in classes}
    assert summary[Enumerator.Coverage.Full] == (100.0, 300.0, 4)
    assert summary[Enumerator.Coverage.Partial] == (100.0, 400.0, 7)


def test_table_one_rows(orbit_400):
    rows = PlannerService.table_one_rows(orbit_400, [(0.0, 90.0, 200.0), (0.0, 270.0, 1000.0)], n_samples=500)
    for row in rows:
        assert row.delta == pytest.approx(math.sqrt(2.0))
        assert row.max_sampled <= row.delta


def test_segment_distance_range():
    nearest, farthest = PlannerService.segment_distance_range([0, 0, 0], [1, 0, 0], [0, 1, 0])
    assert nearest == pytest.approx(math.sqrt(0.5))
    assert farthest == pytest.approx(1.0)
    nearest, _ = PlannerService.segment_distance_range([0, 0, 0], [1, 1, 0], [2, 1, 0])
    assert nearest == pytest.approx(math.sqrt(2.0))


def test_cfm_certifies_clockwise_leg(orbit_400):
    keep_out = ConstraintService.keep_out([0, 0, 0], 0.5)
    assert PlannerService.cfm_certify_leg(orbit_400, [1, 0, 0], [0, -1, 0], keep_out, epsilon=1.0)
    assert not PlannerService.cfm_certify_leg(orbit_400, [1, 0, 0], [0, 1, 0], keep_out, epsilon=1.0)


def test_cfm_tour_on_four_ring_positions(orbit_400):
    keep_out = ConstraintService.keep_out([0, 0, 0], 0.5)
    positions = PlannerService.ring_positions([0.0, 270.0, 180.0, 90.0, 0.0])
    plan = PlannerService.cfm_plan_tour(orbit_400, positions, keep_out)
    assert plan.certified
    assert len(plan.legs) == 4

    margins = PlannerService.cfm_stress_sweep(orbit_400, plan, cases=10, seed=7, n_samples=300)
    assert margins.shape == (10,)
    assert np.all(margins > 0.0)


def test_cfm_rejects_endpoint_inside_keep_out(orbit_400):
    keep_out = ConstraintService.keep_out([0, 0, 0], 0.5)
    with pytest.raises(EndpointInside):
        PlannerService.cfm_leg_report(orbit_400, [0.2, 0.0, 0.0], [0.0, -1.0, 0.0], keep_out)


def test_assemble_mission_chains_velocities(orbit_400):
    first = DynamicsService.build_transfer_leg(orbit_400, [1, 0, 0], [0, -1, 0], 600.0)
    second = DynamicsService.build_transfer_leg(orbit_400, [0, -1, 0], [-1, 0, 0], 700.0)
    mission = PlannerService.assemble_mission(orbit_400, [first, second])

    np.testing.assert_allclose(mission.legs[1].leg.v_i_minus, mission.legs[0].v_arrival)
    np.testing.assert_allclose(
        mission.legs[1].leg.v_i_plus,
        DynamicsService.departure_velocity(orbit_400, [0, -1, 0], [-1, 0, 0], 700.0),
        atol=1e-15,
    )
    assert mission.total_time == pytest.approx(1300.0)
    assert mission.total_dv == pytest.approx(sum(item.dv_norm for item in mission.legs))
    assert mission.envelope == pytest.approx(math.sqrt(2.0))
    assert [constraint.instant for constraint in mission.endpoint_constraints] == [0.0, 1300.0]


def test_assemble_mission_needs_connected_legs(orbit_400):
    first = DynamicsService.build_transfer_leg(orbit_400, [1, 0, 0], [0, -1, 0], 600.0)
    second = DynamicsService.build_transfer_leg(orbit_400, [0, 1, 0], [-1, 0, 0], 700.0)
    with pytest.raises(ChainBroken):
        PlannerService.assemble_mission(orbit_400, [first, second])


def test_two_impulse_examples_at_full_resolution(orbit_400):
    scenario = PlannerService.build_cfk_scenario(orbit_400, t_max=200.0, n_impulses=2)
    feasibility_map = PlannerService.cfk_two_impulse_map(scenario, threads=2)
    assert feasibility_map.beta_values[20] == 20.0 and feasibility_map.t_values[19] == 200.0
    assert feasibility_map.verdicts[20, 19] == FEASIBLE

    assert feasibility_map.beta_values[180] == 180.0 and feasibility_map.t_values[0] == 10.0
    assert feasibility_map.verdicts[180, 0] != FEASIBLE


def _denser(params, leg):
    samples = 10 * (PlannerService.leg_sample_count(leg.dt) - 1) + 1
    return DynamicsService.sample_trajectory(params, leg, samples)


@pytest.mark.parametrize("build", [PlannerService.cfk_two_impulse_map, PlannerService.cfk_three_impulse_map])
def test_witness_trajectories_hold_under_denser_sampling(coarse_cfk, build):
    feasibility_map = build(coarse_cfk, threads=2)
    ring = ConstraintService.shell([0, 0, 0], coarse_cfk.rho_inner, coarse_cfk.rho_outer)
    cells = np.argwhere(feasibility_map.feasible())
    assert cells.size

    for i, j in cells[::5]:
        for leg in PlannerService.witness_legs(coarse_cfk.orbit, feasibility_map, int(i), int(j)):
            trajectory = _denser(coarse_cfk.orbit, leg)
            assert ConstraintService.check_trajectory(ring, trajectory).satisfied
            assert np.max(np.abs(trajectory.positions[:, 2])) <= 1e-12


def test_witness_legs_need_feasible_cell(coarse_cfk):
    feasibility_map = PlannerService.cfk_two_impulse_map(coarse_cfk, threads=2)
    i, j = map(int, np.argwhere(~feasibility_map.feasible())[0])
    with pytest.raises(DomainError, match="not feasible"):
        PlannerService.witness_legs(coarse_cfk.orbit, feasibility_map, i, j)


def test_certified_legs_hold_for_every_flight_time(orbit_400):
    keep_out = ConstraintService.keep_out([0, 0, 0], 0.5)
    positions = PlannerService.ring_positions([0.0, 270.0, 180.0, 90.0, 0.0])
    flight_times = np.linspace(1.0, orbit_400.transfer_limit - 1.0, 200)

    for r_i, r_j in zip(positions[:-1], positions[1:]):
        assert PlannerService.cfm_certify_leg(orbit_400, r_i, r_j, keep_out)
        margins = [
            ReachabilityService.leg_min_margin(orbit_400, r_i, r_j, keep_out, dt, n_samples=1000)
            for dt in flight_times
        ]
        assert min(margins) >= 0.0


def test_assemble_mission_rejects_leg_that_misses_its_end(orbit_400):
    first = DynamicsService.build_transfer_leg(orbit_400, [1, 0, 0], [0, -1, 0], 600.0)
    coasting = TransferLeg(r_i=[0, -1, 0], r_j=[-1, 0, 0], v_i_minus=[0, 0, 0], dt=700.0, dv=[0, 0, 0])
    with pytest.raises(DomainError, match="lands"):
        PlannerService.assemble_mission(orbit_400, [first, coasting])
