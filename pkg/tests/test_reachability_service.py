import numpy as np
import pytest
from scipy import spatial

from app.config import Config
from app.services import constraint_service as ConstraintService
from app.services import dynamics_service as DynamicsService
from app.services import reachability_service as ReachabilityService
from app.utils.common import Common
from app.utils.enumerator import Enumerator
from app.utils.exceptions import BadGrid, BoundaryNotClear, NoWitness, Unreachable

R_I = np.array([1.0, 0.0, 0.0])
R_J = np.array([0.0, 1.0, 0.0])


def test_reach_curve_matches_pointwise_positions(orbit_400):
    dt_grid = np.linspace(400.0, 2500.0, 8)
    curve = ReachabilityService.reach_curve(orbit_400, R_I, R_J, 300.0, dt_grid)
    assert curve.positions.shape == (8, 3)
    for dt, position in curve.samples:
        np.testing.assert_allclose(
            position, DynamicsService.trajectory_position(orbit_400, R_I, R_J, dt, 300.0), atol=1e-10
        )


@pytest.mark.parametrize("dt_grid", [[300.0, 900.0], [500.0, 1e6], []])
def test_reach_curve_rejects_bad_grid(orbit_400, dt_grid):
    with pytest.raises(BadGrid):
        ReachabilityService.reach_curve(orbit_400, R_I, R_J, 300.0, dt_grid)


def test_reach_grid_masks_times_after_arrival(orbit_400):
    positions = ReachabilityService.reach_grid_positions(orbit_400, R_I, R_J, [0.0, 500.0, 1500.0], [1000.0, 2000.0])
    assert positions.shape == (3, 2, 3)
    assert np.all(np.isnan(positions[2, 0]))
    assert np.all(np.isfinite(positions[2, 1]))
    np.testing.assert_allclose(positions[0, 0], R_I, atol=1e-12)


def test_reach_surface_boundaries(orbit_400):
    surface = ReachabilityService.reach_surface(orbit_400, R_I, R_J, t_res=25, dt_res=30)
    assert surface.positions.shape == (30, 25, 3)
    np.testing.assert_allclose(surface.positions[:, 0], np.broadcast_to(R_I, (30, 3)), atol=1e-12)
    np.testing.assert_allclose(surface.positions[:, -1], np.broadcast_to(R_J, (30, 3)), atol=1e-6)
    assert surface.dt_values[-1] == pytest.approx(orbit_400.transfer_limit - 1.0)
    with pytest.raises(BadGrid):
        ReachabilityService.reach_surface(orbit_400, R_I, R_J, t_res=1, dt_res=30)


def test_invert_reach_recovers_times(orbit_400):
    for t, dt in ((300.0, 1200.0), (1500.0, 2200.0), (40.0, 200.0)):
        target = DynamicsService.trajectory_position(orbit_400, R_I, R_J, dt, t)
        result = ReachabilityService.invert_reach(orbit_400, target, R_I, R_J)
        assert result.status == Enumerator.InversionStatus.Solved
        assert result.t == pytest.approx(t, abs=0.1)
        assert result.dt_total == pytest.approx(dt, abs=0.1)
        assert result.residual < 1e-6


def test_invert_reach_flags_endpoints(orbit_400):
    result = ReachabilityService.invert_reach(orbit_400, R_J, R_I, R_J)
    assert result.ambiguous_endpoint
    assert result.t is None


def test_invert_reach_rejects_far_target(orbit_400):
    with pytest.raises(Unreachable):
        ReachabilityService.invert_reach(orbit_400, [100.0, 100.0, 100.0], R_I, R_J)


def test_residual_field_has_single_basin(orbit_400):
    t_grid = np.linspace(0.0, 2700.0, 91)
    dt_grid = np.linspace(30.0, 2700.0, 90)
    target = DynamicsService.trajectory_position(orbit_400, R_I, R_J, dt_grid[40], t_grid[20])
    field = ReachabilityService.residual_field(orbit_400, target, R_I, R_J, t_grid, dt_grid)
    assert field[20, 40] == pytest.approx(0.0, abs=1e-9)
    assert ReachabilityService.count_basins(field, 1e-6) == 1


def test_boundary_clearance_certifies_clear_pair(orbit_400):
    keep_out = ConstraintService.keep_out([0, 0, 0], 0.5)
    report = ReachabilityService.boundary_clearance(orbit_400, R_I, [0.0, -1.0, 0.0], keep_out)
    assert report.clear
    assert report.certified_unreachable
    assert report.crossings == 0
    assert report.min_boundary_distance > 0.0


def test_boundary_clearance_finds_crossing(orbit_400):
    keep_out = ConstraintService.keep_out([0, 0, 0], 0.5)
    report = ReachabilityService.boundary_clearance(orbit_400, R_I, [-1.0, 0.0, 0.0], keep_out)
    assert not report.clear
    assert report.crossings > 0
    assert report.first_crossing.margin < 0.0


def test_boundary_clearance_needs_witness_outside(orbit_400):
    keep_out = ConstraintService.keep_out([0, 0, 0], 0.5)
    with pytest.raises(NoWitness):
        ReachabilityService.boundary_clearance(orbit_400, R_I, R_J, keep_out, witness=[0.1, 0.0, 0.0])


def test_leg_min_margin(orbit_400):
    keep_out = ConstraintService.keep_out([0, 0, 0], 0.5)
    assert ReachabilityService.leg_min_margin(orbit_400, R_I, [-1.0, 0.0, 0.0], keep_out, 100.0) < 0.0
    assert ReachabilityService.leg_min_margin(orbit_400, R_I, [0.9, 0.1, 0.0], keep_out, 60.0) > 0.0


def test_time_window_exclusion_validates_interval(orbit_400):
    keep_out = ConstraintService.keep_out([0, 0, 0], 0.5)
    with pytest.raises(BadGrid):
        ReachabilityService.time_window_exclusion(orbit_400, R_I, [-1.0, 0.0, 0.0], keep_out, 900.0, 300.0)
    with pytest.raises(BoundaryNotClear):
        ReachabilityService.time_window_exclusion(orbit_400, R_I, [-1.0, 0.0, 0.0], keep_out, 100.0, 900.0)


def test_time_window_exclusion_without_witness(orbit_400):
    keep_out = ConstraintService.keep_out([0, 0, 0], 0.5)
    report = ReachabilityService.time_window_exclusion(
        orbit_400, R_I, [0.0, -1.0, 0.0], keep_out, 300.0, 900.0, n_samples=400, scan_points=20
    )
    assert report.certification == Enumerator.Certification.Not_Certified
    assert report.certified_ranges == []


def _keep_out_on_leg(params, dt_s, boundaries):
    """Keep-out sphere centred on the dt_s trajectory, half as wide as its gap to the boundary legs"""
    center = DynamicsService.trajectory_position(params, R_I, R_J, dt_s, 0.5 * dt_s)
    gaps = []
    for dt in boundaries:
        positions = DynamicsService.transfer_positions(
            params, R_I, R_J, dt, np.linspace(0.0, dt, Config.DENSE_SAMPLES), guard=False
        )
        gaps.append(float(np.min(np.linalg.norm(positions - center, axis=1))))
    radius = 0.5 * min(gaps)
    assert radius > 2.0 * Config.SAMPLING_GUARD_KM
    return ConstraintService.keep_out(center, radius)


def _entering_flight_times(params, r_j, constraint, ranges, points=200):
    entering = []
    for low, high in ranges:
        low = max(low, Config.GUARD_MIN_DT)
        high = min(high, params.transfer_limit - Config.CFM_EPSILON)
        for dt in np.linspace(low, high, points):
            if ReachabilityService.leg_min_margin(params, R_I, r_j, constraint, dt) < 0.0:
                entering.append(dt)
    return entering


def test_time_window_exclusion_certifies_outside(orbit_400):
    keep_out = _keep_out_on_leg(orbit_400, 1200.0, (300.0, 2400.0))
    report = ReachabilityService.time_window_exclusion(orbit_400, R_I, R_J, keep_out, 300.0, 2400.0, dt_s=1200.0)
    assert report.certification == Enumerator.Certification.Outside_Interval
    assert report.witness_inside
    assert report.certified_ranges == [(0.0, 300.0), (2400.0, orbit_400.transfer_limit)]
    assert _entering_flight_times(orbit_400, R_J, keep_out, report.certified_ranges) == []


def test_time_window_exclusion_certifies_inside(orbit_400):
    keep_out = _keep_out_on_leg(orbit_400, 1200.0, (1500.0, 2400.0))
    report = ReachabilityService.time_window_exclusion(orbit_400, R_I, R_J, keep_out, 1500.0, 2400.0, dt_s=1200.0)
    assert report.certification == Enumerator.Certification.Inside_Interval
    assert not report.witness_inside
    assert report.certified_ranges == [(1500.0, 2400.0)]
    assert _entering_flight_times(orbit_400, R_J, keep_out, report.certified_ranges) == []


@pytest.mark.parametrize("r_j, dt_a, dt_b", [([-0.5, -0.8, 0.0], 300.0, 900.0), ([0.0, 1.0, 0.0], 50.0, 200.0)])
def test_time_window_exclusion_finds_witness_outside(orbit_400, r_j, dt_a, dt_b):
    keep_out = ConstraintService.keep_out([0, 0, 0], 0.5)
    report = ReachabilityService.time_window_exclusion(orbit_400, R_I, r_j, keep_out, dt_a, dt_b)
    assert report.certification == Enumerator.Certification.Inside_Interval
    assert not dt_a <= report.dt_s <= dt_b
    assert report.certified_ranges == [(dt_a, dt_b)]


def test_time_window_exclusion_against_flight_time_sweep(orbit_400):
    keep_out = ConstraintService.keep_out([0, 0, 0], 0.5)
    report = ReachabilityService.time_window_exclusion(orbit_400, R_I, R_J, keep_out, 50.0, 200.0)
    assert report.certification == Enumerator.Certification.Inside_Interval
    assert _entering_flight_times(orbit_400, R_J, keep_out, report.certified_ranges) == []


def test_reach_map_is_injective(orbit_400):
    limit = orbit_400.transfer_limit
    t_grid = np.linspace(10.0, limit - 10.0, 200)
    dt_grid = np.linspace(20.0, limit - 5.0, 200)
    positions = ReachabilityService.reach_grid_positions(orbit_400, R_I, R_J, t_grid, dt_grid)

    valid = t_grid[:, None] < dt_grid[None, :] - 1.0
    cells = np.argwhere(valid)
    pairs = spatial.cKDTree(positions[valid]).query_pairs(r=1e-9, output_type="ndarray")
    if pairs.size:
        separation = np.max(np.abs(cells[pairs[:, 0]] - cells[pairs[:, 1]]), axis=1)
        assert np.all(separation < 2)


@pytest.mark.parametrize("t_1, t_2", [(300.0, 301.0), (300.0, 1200.0), (900.0, 2000.0)])
def test_reach_curves_at_different_times_are_disjoint(orbit_400, t_1, t_2):
    limit = orbit_400.transfer_limit
    first = ReachabilityService.reach_curve(orbit_400, R_I, R_J, t_1, np.linspace(t_1 + 1.0, limit - 1.0, 500))
    second = ReachabilityService.reach_curve(orbit_400, R_I, R_J, t_2, np.linspace(t_2 + 1.0, limit - 1.0, 500))
    assert np.min(spatial.distance.cdist(first.positions, second.positions)) > 1e-9


def test_reach_surface_points_lie_on_their_trajectories(orbit_400):
    surface = ReachabilityService.reach_surface(orbit_400, R_I, R_J, t_res=12, dt_res=10, epsilon=5.0, dt_min=20.0)
    for k, dt in enumerate(surface.dt_values):
        for m, t in enumerate(surface.times[k]):
            np.testing.assert_allclose(
                surface.positions[k, m], DynamicsService.trajectory_position(orbit_400, R_I, R_J, dt, t), atol=1e-9
            )

    for k, m in ((2, 3), (5, 6), (7, 8)):
        result = ReachabilityService.invert_reach(orbit_400, surface.positions[k, m], R_I, R_J)
        assert result.t == pytest.approx(surface.times[k, m], abs=0.1)
        assert result.dt_total == pytest.approx(surface.dt_values[k], abs=0.1)


@pytest.mark.slow
def test_boundary_clearance_is_never_contradicted(orbit_400, rng):
    checked = 0
    for _ in range(50):
        beta_i = rng.uniform(0.0, 360.0)
        beta_j = beta_i + rng.uniform(30.0, 330.0)
        r_i, r_j = Common.unit_circle_position(beta_i), Common.unit_circle_position(beta_j)
        keep_out = ConstraintService.keep_out([0, 0, 0], rng.uniform(0.3, 0.6))

        report = ReachabilityService.boundary_clearance(orbit_400, r_i, r_j, keep_out)
        if not report.clear:
            continue
        checked += 1
        finer = ReachabilityService.reach_surface(
            orbit_400, r_i, r_j, 10 * Config.REACH_SURFACE_T_RES, 10 * Config.REACH_SURFACE_DT_RES
        )
        window = ConstraintService.in_window(keep_out, finer.times)
        assert np.all(ConstraintService.margins(keep_out, finer.positions[window]) >= 0.0)
    assert checked > 0
