import json

import pytest

from perimeter_defense.geometry import CoordinationError
from perimeter_defense.model import (
    AttackerStrategy,
    InvalidScenario,
    Scenario,
    ScenarioParams,
    defended_interval,
    gaps,
    load_scenario,
    make_state,
    remaining_block,
    scenario_from_mapping,
    scenario_to_mapping,
    signed_gaps,
    validate,
)

BASE = ScenarioParams(10, 3, 2, 1, 3)


def test_defended_interval_centered():
    s = make_state(BASE, [5.0, 8.0, 1.5], 5.0)
    iv = defended_interval(s, 0)
    assert iv.start.value == 4.0 and iv.end.value == 6.0


def test_defended_interval_wraps():
    s = make_state(BASE, [0.5, 4.0, 7.0], 0.5)
    iv = defended_interval(s, 0)
    assert iv.start.value == pytest.approx(9.5)
    assert iv.end.value == pytest.approx(1.5)


def test_defended_interval_full_circle():
    p = ScenarioParams(2, 1, 2, 1, 3)
    iv = defended_interval(make_state(p, [1.0], 0.0), 0)
    assert iv.length == 2


def test_defended_interval_index_checked():
    s = make_state(BASE, [1, 4, 7], 1)
    with pytest.raises(IndexError):
        defended_interval(s, 3)


def test_gaps_sum_and_order():
    s = make_state(BASE, [1.0, 4.0, 7.5], 1.0)
    g = gaps(s)
    assert g == pytest.approx([1.0, 1.5, 1.5])
    assert sum(g) == pytest.approx(10 - 3 * 2)


def test_gaps_single_defender():
    p = ScenarioParams(10, 1, 2, 1, 3)
    assert gaps(make_state(p, [3.0], 3.0)) == [8]


def test_gaps_overlap_raises():
    s = make_state(BASE, [1.0, 2.0, 6.0], 1.0)
    with pytest.raises(CoordinationError):
        gaps(s)
    assert signed_gaps(s)[0] == pytest.approx(-1.0)


def test_remaining_block():
    s = make_state(BASE, [1.0, 4.0, 7.5], 0.5, attacker_direction=1)
    assert remaining_block(s) == pytest.approx(1.5)


def test_validate_ok_and_violations():
    assert validate(BASE).ok
    bad = validate(BASE.replace(defender_speed=3))
    assert not bad.ok and any("not slower" in v for v in bad.violations)
    many = validate(ScenarioParams(-1, 0, 0, -1, -2))
    assert len(many.violations) >= 4


def test_validate_full_coverage_is_a_note():
    r = validate(ScenarioParams(5, 3, 2, 1, 3))
    assert r.ok and any("full coverage" in n for n in r.notes)


def test_validate_rejects_non_numbers():
    assert not validate(ScenarioParams(float("nan"), 3, 2, 1, 3)).ok
    assert not validate(ScenarioParams(10, 2.5, 2, 1, 3)).ok


def test_strategy_validation():
    with pytest.raises(ValueError):
        AttackerStrategy(1, (2.0, 1.0))
    with pytest.raises(ValueError):
        AttackerStrategy(0)
    s = AttackerStrategy(-1, (1.0, 2.0))
    assert [s.direction_at(t) for t in (0.5, 1.0, 1.5, 2.5)] == [-1, 1, 1, -1]


DOC = {
    "circumference": 10,
    "defender_count": 3,
    "defense_length": 2,
    "defender_speed": 1,
    "attacker_speed": 3,
    "initial_config": "case2",
    "attacker_strategy": {"initial_direction": -1, "switch_times": [0.5, 1.25]},
}


def test_scenario_round_trip(tmp_path):
    path = tmp_path / "s.json"
    path.write_text(json.dumps(DOC))
    sc = load_scenario(path)
    assert sc == Scenario(BASE, "case2", AttackerStrategy(-1, (0.5, 1.25)))
    assert scenario_from_mapping(scenario_to_mapping(sc)) == sc


def test_scenario_defaults():
    doc = {k: DOC[k] for k in ("circumference", "defender_count", "defense_length",
                               "defender_speed", "attacker_speed")}
    sc = scenario_from_mapping(doc)
    assert sc.initial_config == "case1" and sc.attacker_strategy == AttackerStrategy(1, ())


@pytest.mark.parametrize("mutate,needle", [
    (lambda d: d.pop("defense_length"), "defense_length"),
    (lambda d: d.update(colour="red"), "colour"),
    (lambda d: d.update(initial_config="case3"), "initial_config"),
    (lambda d: d.update(attacker_speed=0.5), "not slower"),
    (lambda d: d["attacker_strategy"].update(switch_times=[2, 1]), "attacker_strategy"),
])
def test_scenario_errors_name_the_problem(mutate, needle):
    doc = json.loads(json.dumps(DOC))
    mutate(doc)
    with pytest.raises(InvalidScenario, match=needle):
        scenario_from_mapping(doc)


def test_load_scenario_bad_files(tmp_path):
    with pytest.raises(InvalidScenario):
        load_scenario(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(InvalidScenario):
        load_scenario(bad)
