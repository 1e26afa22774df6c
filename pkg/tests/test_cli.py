import json
import re
import subprocess
import sys

import pytest

from perimeter_defense.analytic import case_transition_time
from perimeter_defense.cli import main
from perimeter_defense.model import ScenarioParams

BASE = ["--circumference", "10", "--defenders", "3", "--defense-length", "2",
        "--defender-speed", "1", "--attacker-speed", "3"]
SMALL = ["--circumference", "3.2", "--defenders", "2", "--defense-length", "1",
         "--defender-speed", "1", "--attacker-speed", "3"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_hold(capsys):
    code, out, _ = run(capsys, "analyze", *BASE)
    assert code == 0
    assert "defenders hold" in out
    assert re.search(r"^max circumference C_max +10$", out, re.M)


def test_analyze_attacker_wins(capsys):
    argv = ["analyze", *BASE]
    argv[argv.index("10")] = "10.1"
    code, out, _ = run(capsys, *argv)
    assert code == 1 and "attacker wins" in out


def test_analyze_json(capsys):
    code, out, _ = run(capsys, "analyze", *BASE, "--json")
    doc = json.loads(out)
    assert code == 0
    assert doc["max_circumference"] == 10 and doc["gamma"] == 1 and doc["min_defenders"] == 3
    assert doc["params"]["defender_count"] == 3


def test_analyze_missing_field_in_file(tmp_path, capsys):
    path = tmp_path / "s.json"
    path.write_text(json.dumps({"circumference": 10, "defender_count": 3, "defender_speed": 1,
                                "attacker_speed": 3}))
    code, _, err = run(capsys, "analyze", "--scenario", str(path))
    assert code == 2 and "defense_length" in err


def test_missing_flag_named(capsys):
    code, _, err = run(capsys, "analyze", "--circumference", "10")
    assert code == 2 and "defender_count" in err


def test_invalid_values(capsys):
    argv = ["analyze", *BASE]
    argv[argv.index("3", argv.index("--attacker-speed"))] = "0.5"
    code, _, err = run(capsys, *argv)
    assert code == 2 and "not slower" in err


def test_simulate_breach_line(capsys):
    code, out, err = run(capsys, "simulate", *SMALL)
    assert code == 1
    assert out.splitlines()[-1] == "VERDICT breach t=0.5 pos=1.5"
    assert out.splitlines()[0].startswith("time,event,subject,attacker_pos")
    assert "warning:" in err


def test_simulate_case2_shift(capsys):
    code, out, _ = run(capsys, "simulate", *SMALL, "--config", "case2")
    shift = case_transition_time(ScenarioParams(3.2, 2, 1, 1, 3))
    line = out.splitlines()[-1]
    t = float(line.split()[2].removeprefix("t="))
    assert code == 1 and t == pytest.approx(0.5 - shift)


def test_simulate_full_coverage(capsys):
    argv = ["simulate", *BASE, "--attacker-dir", "-1", "--switch-times", "0.3,0.9"]
    argv[argv.index("10")] = "5"
    code, out, _ = run(capsys, *argv)
    assert code == 0 and out.splitlines()[-1].startswith("VERDICT defended")


def test_simulate_to_file(tmp_path, capsys):
    path = tmp_path / "trace.csv"
    code, out, _ = run(capsys, "simulate", *BASE, "--out", str(path))
    assert code == 0
    assert out.strip() == "VERDICT defended t=50 pos=-"
    assert path.read_text().startswith("time,event,subject,attacker_pos")


def test_scenario_file_with_overrides(tmp_path, capsys):
    path = tmp_path / "s.json"
    path.write_text(json.dumps({
        "circumference": 3.2, "defender_count": 2, "defense_length": 1,
        "defender_speed": 1, "attacker_speed": 3,
        "attacker_strategy": {"initial_direction": 1, "switch_times": []},
    }))
    code, out, _ = run(capsys, "simulate", "--scenario", str(path))
    assert code == 1
    code, out, _ = run(capsys, "simulate", "--scenario", str(path), "--circumference", "3")
    assert code == 0


def test_bad_direction_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["simulate", *SMALL, "--attacker-dir", "2"])
    assert info.value.code == 2


def test_sweep_command(tmp_path, capsys):
    out_path = tmp_path / "sweep.csv"
    code, _, _ = run(capsys, "sweep", *BASE, "--axis", "circumference", "--values", "9.5,10,10.5",
                     "--grid", "0.2", "--horizon-mult", "2", "--out", str(out_path))
    lines = out_path.read_text().splitlines()
    assert code == 0
    assert lines[0] == "axis_value,analytic_wins,simulated_wins,margin,breach_time,breach_pos,schedules_searched"
    assert [ln.split(",")[2] for ln in lines[1:]] == ["0", "0", "1"]


def test_sweep_invalid_point(capsys):
    code, _, err = run(capsys, "sweep", *BASE, "--axis", "attacker_speed", "--values", "3,0.5")
    assert code == 2 and "0.5" in err


def test_verify_single_draw(capsys):
    code, out, _ = run(capsys, "verify", "--seed", "3", "--count", "1")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "verify seed=3 count=1" and lines[-1] == "ALL PASS"
    checked = [int(ln.split()[-1].split("/")[1]) for ln in lines[1:-1]]
    assert max(checked) == 1


def test_verify_rejects_zero_count(capsys):
    code, _, err = run(capsys, "verify", "--count", "0")
    assert code == 2 and "count" in err


def test_module_entry_point_byte_identical():
    cmd = [sys.executable, "-m", "perimeter_defense", "simulate", *SMALL,
           "--attacker-dir", "-1", "--switch-times", "0.1,0.2"]
    a = subprocess.run(cmd, capture_output=True)
    b = subprocess.run(cmd, capture_output=True)
    assert a.returncode == b.returncode
    assert a.stdout == b.stdout and a.stdout
