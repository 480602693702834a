import math
import os

import pandas as pd
import pytest
import yaml
from typer.testing import CliRunner

from app import app
from app.utils.files_and_folders import file_sha256

runner = CliRunner()

PROPAGATE = """
    orbit:
      altitude: 400
    constraints:
      - rho_inner: 0.5
    planner:
      mode: propagate
      propagate:
        legs:
          - {r_i: [1, 0, 0], r_j: [0, -1, 0], dt: 600}
          - {r_i: [0, -1, 0], r_j: [-1, 0, 0], dt: 700}
"""

BOUND = """
    orbit:
      altitude: 400
    planner:
      mode: bound
      bound:
        n_samples: 500
        sigma_points: 20
        legs:
          - {r_i: [1, 0, 0], r_j: [0, 1, 0], dt: 3000}
"""

CFK = """
    orbit:
      altitude: 400
    planner:
      mode: plan-cfk
      cfk:
        beta_step: 30
        time_step: 300
        n_impulses: 3
"""


def invoke(*args):
    return runner.invoke(app, [str(arg) for arg in args])


def test_version():
    result = invoke("--version")
    assert result.exit_code == 0
    assert "cw-reach" in result.output


def test_propagate_writes_trajectory_and_manifest(write_scenario, tmp_path):
    out = tmp_path / "propagate"
    result = invoke("propagate", "--scenario", write_scenario(PROPAGATE), "--out", out)
    assert result.exit_code == 0, result.output

    trajectory = pd.read_csv(out / "trajectory.csv")
    assert list(trajectory.columns) == ["t_s", "x_km", "y_km", "z_km"]
    assert trajectory["t_s"].iloc[-1] == pytest.approx(1300.0)
    assert trajectory["t_s"].is_monotonic_increasing and trajectory["t_s"].is_unique

    verdicts = pd.read_csv(out / "constraint_verdicts.csv")
    assert len(verdicts) == 3
    assert verdicts["satisfied"].all()

    manifest = yaml.safe_load((out / "manifest.yaml").read_text())
    listed = {item["name"]: item["sha256"] for item in manifest["files"]}
    on_disk = {name for name in os.listdir(out) if name != "manifest.yaml"}
    assert set(listed) == on_disk == {"trajectory.csv", "legs.csv", "constraint_verdicts.csv"}
    for name, digest in listed.items():
        assert file_sha256(str(out / name)) == digest
    assert len(manifest["scenario_hash"]) == 64
    assert manifest["tolerances"]["sampling_guard_km"] == 1e-3


def test_propagate_reports_violated_constraint(write_scenario, tmp_path):
    path = write_scenario(PROPAGATE)
    result = invoke(
        "propagate", "-s", path, "-o", tmp_path / "out",
        "--set", "planner.propagate.legs=[{r_i: [1, 0, 0], r_j: [-1, 0, 0], dt: 100}]",
    )
    assert result.exit_code == 3
    verdicts = pd.read_csv(tmp_path / "out" / "constraint_verdicts.csv")
    assert not verdicts["satisfied"].iloc[0]
    assert 0.0 < verdicts["violation_t_s"].iloc[0] < 100.0


def test_manifest_lists_files_from_earlier_runs(write_scenario, tmp_path):
    out = tmp_path / "shared"
    out.mkdir()
    (out / "old.csv").write_text("a\n1\n")
    result = invoke("propagate", "-s", write_scenario(PROPAGATE), "-o", out)
    assert result.exit_code == 0
    manifest = yaml.safe_load((out / "manifest.yaml").read_text())
    assert "old.csv" in {item["name"] for item in manifest["files"]}


def test_bound_rejects_flight_time_beyond_limit(write_scenario, tmp_path):
    result = invoke("bound", "-s", write_scenario(BOUND), "-o", tmp_path)
    assert result.exit_code == 2
    assert "pi/kappa" in result.output


def test_bound_with_override(write_scenario, tmp_path):
    result = invoke("bound", "-s", write_scenario(BOUND), "-o", tmp_path, "--set", "planner.bound.legs.0.dt=1000")
    assert result.exit_code == 0, result.output

    spheres = pd.read_csv(tmp_path / "sphere_bounds.csv")
    assert spheres["delta_km"].iloc[0] == pytest.approx(math.sqrt(2.0))
    assert spheres["max_sampled_km"].iloc[0] <= spheres["delta_km"].iloc[0]
    assert len(pd.read_csv(tmp_path / "sigma_curve.csv")) == 20
    cones = pd.read_csv(tmp_path / "cone_bounds.csv")
    assert cones["max_abs_cos_theta"].iloc[0] <= cones["c_theta"].iloc[0] + 1e-9


@pytest.mark.parametrize("override", ["planner.bound.legs.7.dt=1", "orbit.kappa=1e-3"])
def test_bad_override_is_a_validation_error(write_scenario, tmp_path, override):
    result = invoke("bound", "-s", write_scenario(BOUND), "-o", tmp_path, "--set", override)
    assert result.exit_code == 2


def test_missing_scenario_file(tmp_path):
    result = invoke("bound", "-s", tmp_path / "nope.yaml", "-o", tmp_path)
    assert result.exit_code == 2


def test_command_and_mode_must_agree(write_scenario, tmp_path):
    result = invoke("propagate", "-s", write_scenario(BOUND), "-o", tmp_path)
    assert result.exit_code == 2


def test_invert_of_far_target_is_unreachable(write_scenario, tmp_path):
    path = write_scenario("""
        orbit:
          altitude: 400
        planner:
          mode: invert
          invert:
            r_i: [1, 0, 0]
            r_j: [0, 1, 0]
            targets:
              - [100, 100, 100]
    """)
    result = invoke("invert", "-s", path, "-o", tmp_path)
    assert result.exit_code == 3
    inversion = pd.read_csv(tmp_path / "inversion.csv")
    assert inversion["status"].iloc[0] == "unreachable"


def test_reach_reports_clearance(write_scenario, tmp_path):
    path = write_scenario("""
        orbit:
          altitude: 400
        constraints:
          - rho_inner: 0.5
        planner:
          mode: reach
          reach:
            r_i: [1, 0, 0]
            r_j: [0, -1, 0]
            curve_times: [200]
            curve_points: 10
            t_res: 20
            dt_res: 20
    """)
    result = invoke("reach", "-s", path, "-o", tmp_path)
    assert result.exit_code == 0, result.output
    assert len(pd.read_csv(tmp_path / "reach_curves.csv")) == 10
    assert len(pd.read_csv(tmp_path / "reach_surface.csv")) == 400
    clearance = pd.read_csv(tmp_path / "clearance.csv")
    assert clearance["clear"].all()


def test_verify_facts(write_scenario, tmp_path):
    path = write_scenario("""
        orbit:
          altitude: 400
        planner:
          mode: facts
          facts:
            grid: 6
    """)
    result = invoke("verify-facts", "-s", path, "-o", tmp_path)
    assert result.exit_code == 0, result.output
    facts = pd.read_csv(tmp_path / "facts.csv")
    assert facts.loc[facts["asserted"], "passed"].all()


def test_plan_cfm_certifies_ring_tour(write_scenario, tmp_path):
    path = write_scenario("""
        orbit:
          altitude: 400
        planner:
          mode: plan-cfm
          cfm:
            betas: [0, 270, 180, 90, 0]
            keep_out_radius: 0.5
    """)
    result = invoke("plan-cfm", "-s", path, "-o", tmp_path)
    assert result.exit_code == 0, result.output
    legs = pd.read_csv(tmp_path / "cfm_legs.csv")
    assert len(legs) == 4
    assert legs["certified"].all()


def test_plan_cfm_needs_a_keep_out(write_scenario, tmp_path):
    path = write_scenario("""
        orbit:
          altitude: 400
        planner:
          mode: plan-cfm
          cfm:
            betas: [0, 270]
    """)
    result = invoke("plan-cfm", "-s", path, "-o", tmp_path)
    assert result.exit_code == 2


def test_plan_cfk_is_deterministic(write_scenario, tmp_path):
    path = write_scenario(CFK)
    first = invoke("plan-cfk", "-s", path, "-o", tmp_path / "first")
    second = invoke("plan-cfk", "-s", path, "-o", tmp_path / "second")
    assert first.exit_code in (0, 3)
    assert second.exit_code == first.exit_code

    names = sorted(name for name in os.listdir(tmp_path / "first") if name.endswith(".csv"))
    assert "cfk_three_impulse_map.csv" in names
    for name in names:
        assert (tmp_path / "first" / name).read_bytes() == (tmp_path / "second" / name).read_bytes()
