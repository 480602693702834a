import pytest
from pydantic import ValidationError

from app.utils.exceptions import ScenarioError
from app.utils.parser import Parser

BOUND_SCENARIO = """
    orbit:
      altitude: 400
    planner:
      mode: bound
      bound:
        legs:
          - {r_i: [1, 0, 0], r_j: [0, 1, 0], dt: 1000}
"""


def test_overrides_follow_dotted_paths():
    document = {"planner": {"bound": {"legs": [{"dt": 100}]}}}
    updated = Parser.apply_overrides(document, ["planner.bound.legs.0.dt=250", "output.directory=runs/a"])
    assert updated["planner"]["bound"]["legs"][0]["dt"] == 250
    assert updated["output"] == {"directory": "runs/a"}
    assert document["planner"]["bound"]["legs"][0]["dt"] == 100


def test_override_values_are_yaml():
    _, value = Parser.parse_override("planner.cfm.betas=[0, 90, 180]")
    assert value == [0, 90, 180]
    _, value = Parser.parse_override("planner.cfk.t_max=1500.5")
    assert value == 1500.5
    path, value = Parser.parse_override("output.directory=")
    assert path == ["output", "directory"] and value is None


@pytest.mark.parametrize("override", ["no-equals-sign", "=3", "planner.bound.legs.4.dt=1", "planner.bound.legs.x.dt=1"])
def test_bad_overrides(override):
    document = {"planner": {"bound": {"legs": [{"dt": 100}]}}}
    with pytest.raises(ScenarioError):
        Parser.apply_overrides(document, [override])


def test_missing_scenario_file(tmp_path):
    with pytest.raises(ScenarioError):
        Parser.read_document(str(tmp_path / "missing.yaml"))


def test_scenario_must_be_a_mapping(write_scenario):
    with pytest.raises(ScenarioError):
        Parser.read_document(write_scenario("- just\n- a list\n"))


def test_command_must_match_mode(write_scenario):
    path = write_scenario(BOUND_SCENARIO)
    assert Parser.load_scenario(path, command="bound").planner.mode == "bound"
    with pytest.raises(ValidationError):
        Parser.load_scenario(path, command="propagate")


def test_mode_aliases(write_scenario):
    path = write_scenario("""
        orbit:
          kappa: 1.1e-3
        planner:
          mode: cfk
    """)
    scenario = Parser.load_scenario(path, command="plan-cfk")
    assert scenario.planner.mode == "plan-cfk"
    assert scenario.planner.cfk.rho_inner == 0.9


def test_orbit_needs_exactly_one_size(write_scenario):
    path = write_scenario("""
        orbit:
          altitude: 400
          kappa: 1.1e-3
        planner:
          mode: verify-facts
    """)
    with pytest.raises(ValidationError):
        Parser.load_scenario(path)


def test_unknown_keys_are_rejected(write_scenario):
    path = write_scenario(BOUND_SCENARIO + "    colour: blue\n")
    with pytest.raises(ValidationError):
        Parser.load_scenario(path)


def test_dump_is_canonical(write_scenario):
    scenario = Parser.load_scenario(write_scenario(BOUND_SCENARIO), overrides=["constraints=[{rho_inner: 0.5}]"])
    text = Parser.dump_scenario(scenario)
    reloaded = Parser.load_scenario(write_scenario(text, name="dumped.yaml"))
    assert Parser.dump_scenario(reloaded) == text
    assert Parser.scenario_hash(reloaded) == Parser.scenario_hash(scenario)


def test_hash_ignores_key_order(write_scenario):
    reordered = """
        planner:
          bound:
            legs:
              - {dt: 1000, r_j: [0, 1, 0], r_i: [1, 0, 0]}
          mode: bound
        orbit:
          altitude: 400
    """
    first = Parser.load_scenario(write_scenario(BOUND_SCENARIO, name="a.yaml"))
    second = Parser.load_scenario(write_scenario(reordered, name="b.yaml"))
    assert Parser.scenario_hash(first) == Parser.scenario_hash(second)
