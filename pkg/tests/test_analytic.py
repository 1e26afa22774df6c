import warnings

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from perimeter_defense import analytic as an
from perimeter_defense.model import ScenarioParams, signed_gaps

from . import oracles

P = ScenarioParams(10, 3, 2, 1, 3)


def test_blocking_time_examples():
    assert an.blocking_time(1, 2, 1) == 1
    assert an.blocking_time(0.5, 3, 1) == 0.25
    assert an.blocking_time(2, 2, 0) == 1


def test_blocking_time_matches_stepped_chase():
    for args in ((1, 2, 1), (0.5, 3, 1), (2, 2, 0)):
        assert an.blocking_time(*args) == pytest.approx(oracles.chase_time(*args), abs=1e-9)


def test_blocking_time_rejects_slow_attacker():
    with pytest.raises(ValueError):
        an.blocking_time(1, 1, 1)


def test_gap_closable_examples():
    assert an.gap_closable(1, 2, 1, 1)
    assert not an.gap_closable(0.9, 2, 1, 1)
    assert an.gap_closable(0, 0, 0, 0)
    assert not an.gap_closable(5, 1, 0, 0)


def test_gamma_examples():
    assert an.gamma(1, 3) == 1
    assert an.gamma(0, 2.5) == 0
    assert an.gamma(1, 2) == 2
    with pytest.raises(ValueError):
        an.gamma(3, 3)


def test_optimal_gap_examples():
    assert an.optimal_gap(P) == pytest.approx(float(oracles.closable_gap(2, 1, 3)))
    assert an.optimal_gap(P) == 2
    assert an.optimal_gap(ScenarioParams(5, 2, 1.7, 0, 3)) == 0
    assert an.optimal_gap(ScenarioParams(5, 2, 1, 1, 2)) == 2


def test_max_circumference_examples():
    assert an.max_circumference(P) == float(oracles.c_max(3, 2, 1, 3)) == 10
    assert an.max_circumference(ScenarioParams(5, 1, 2, 0.3, 0.9)) == 2
    assert an.max_circumference(ScenarioParams(5, 2, 1, 1, 3)) == 3


def test_attacker_wins_examples():
    w = an.attacker_wins(P.replace(circumference=10.1))
    assert w.attacker_wins and w.margin == pytest.approx(0.1)
    assert an.attacker_wins(P) == (False, 0)
    assert not an.attacker_wins(ScenarioParams(6, 3, 2, 0, 1)).attacker_wins


def test_min_defenders_examples():
    assert an.min_defenders(10, 2, 1, 3) == 3
    assert an.min_defenders(10, 1, 1, 3) == 6
    assert an.min_defenders(1.5, 2, 1, 3) == 1


def test_critical_speed_ratio_examples():
    assert an.critical_speed_ratio(10, 2, 3) == 3
    with pytest.raises(an.NoFiniteThreshold):
        an.critical_speed_ratio(10, 2, 5)
    assert an.critical_speed_ratio(4, 1, 2) == 2


def test_max_defense_threshold_examples():
    assert an.max_defense_threshold(10, 3, 1, 3) == 2
    assert an.max_defense_threshold(7.5, 1, 1, 3) == 7.5
    assert an.max_defense_threshold(12, 4, 1, 3) == pytest.approx(12 / 7)


def test_case_transition_time_examples():
    assert an.case_transition_time(P) == 0.5
    assert an.case_transition_time(ScenarioParams(5, 2, 1, 1, 2)) == 0.5
    # second form: half the optimal gap closed at the combined speed
    assert an.case_transition_time(P) == pytest.approx(0.5 * an.optimal_gap(P) / 2)
    assert an.case_transition_time(ScenarioParams(5, 2, 1, 0, 4)) == pytest.approx(0.5 / 4)


def test_case1_config_examples():
    s = an.case1_config(ScenarioParams(3, 2, 1, 1, 3))
    assert [d.position.value for d in s.defenders] == pytest.approx([0.5, 2.5])
    assert s.attacker.position.value == 0 and s.blocker_index == 0
    assert signed_gaps(an.case1_config(P)) == pytest.approx([2, 2, 0])
    one = an.case1_config(ScenarioParams(2, 1, 2, 1, 3))
    assert one.attacker.position.value == 0


def test_case1_policy_directions():
    s = an.case1_config(P)
    assert [d.direction for d in s.defenders] == [1, -1, -1]


def test_case2_config_examples():
    s = an.case2_config(P)
    assert signed_gaps(s) == pytest.approx([1, 2, 1])
    assert s.attacker.position.value == s.defenders[0].position.value
    one = an.case2_config(ScenarioParams(7, 1, 2, 1, 3))
    assert one.attacker.position == one.defenders[0].position


def test_case_gaps_match_oracle():
    for n, C, d in ((3, 10, 2), (5, 13, 1.5), (2, 3, 1)):
        p = ScenarioParams(C, n, d, 1, 3)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", an.ConfigurationWarning)
            g1, g2 = signed_gaps(an.case1_config(p)), signed_gaps(an.case2_config(p))
        assert g1 == pytest.approx([float(x) for x in oracles.case1_gaps(n, C, d)])
        assert g2 == pytest.approx([float(x) for x in oracles.case2_gaps(n, C, d)])


def test_config_beyond_cmax_warns():
    with pytest.warns(an.ConfigurationWarning):
        an.case1_config(P.replace(circumference=10.5))


def test_analyze_report():
    r = an.analyze(P)
    assert r.as_dict() == {
        "gamma": 1, "optimal_gap": 2, "max_circumference": 10, "attacker_wins": False,
        "margin": 0, "min_defenders": 3, "max_defense_length_threshold": 2,
        "critical_speed_ratio": 3, "case_transition_time": 0.5,
    }
    assert an.analyze(ScenarioParams(5, 3, 2, 1, 3)).critical_speed_ratio is None


# ------------------------------------------------------------- properties

def params_strategy():
    return st.builds(
        lambda n, v, ratio, d, factor: (n, v, ratio, d, factor),
        st.integers(1, 8),
        st.floats(0.01, 1.0),
        st.floats(1.01, 5.0),
        st.floats(0.01, 1.0),
        st.floats(0.5, 2.0),
    )


def build(n, v, ratio, d, factor):
    base = ScenarioParams(1.0, n, d, v, v * ratio)
    return base.replace(circumference=an.max_circumference(base) * factor)


@given(params_strategy())
def test_cmax_matches_rational_oracle(t):
    n, v, ratio, d, _ = t
    p = build(*t)
    assert an.max_circumference(p) == pytest.approx(float(oracles.c_max(n, d, v, v * ratio)), rel=1e-12)


@given(params_strategy())
def test_four_forms_agree(t):
    p = build(*t)
    margin = an.attacker_wins(p).margin
    assume(abs(margin) > 1e-9 * p.circumference)
    forms = an.win_conditions(p)
    assert set(forms.values()) == {margin > 0}


@given(params_strategy())
def test_min_defenders_brackets_and_matches_oracle(t):
    p = build(*t)
    m = an.min_defenders(p.circumference, p.defense_length, p.defender_speed, p.attacker_speed)
    assert not an.attacker_wins(p.replace(defender_count=m)).attacker_wins
    if m > 1:
        assert an.attacker_wins(p.replace(defender_count=m - 1)).attacker_wins


def test_min_defenders_rational_oracle_exact_thresholds():
    # integer thresholds where a naive ceil would over-count
    for C, d, v, va in ((10, 2, 1, 3), (10, 1, 1, 3), (12, 2, 1, 3), (7, 1, 0, 5)):
        assert an.min_defenders(C, d, v, va) == oracles.min_team(C, d, v, va)


@given(params_strategy())
def test_boundary_consistency(t):
    p = build(*t)
    cmax = an.max_circumference(p)
    assert not an.attacker_wins(p.replace(circumference=cmax)).attacker_wins
    assert an.attacker_wins(p.replace(circumference=cmax * (1 + 1e-12))).attacker_wins


@settings(max_examples=50)
@given(params_strategy(), st.sampled_from(["circumference", "attacker_speed", "defender_count",
                                           "defense_length", "defender_speed"]))
def test_verdict_monotone(t, axis):
    p = build(*t)
    up = {"circumference": 1, "attacker_speed": 1, "defender_count": -1,
          "defense_length": -1, "defender_speed": -1}[axis]
    flags = []
    for k in range(1, 8):
        if axis == "defender_count":
            q = p.replace(defender_count=k)
            flags.append(an.attacker_wins(q).attacker_wins)
            continue
        x = getattr(p, axis) * (0.7 + 0.1 * k)
        q = p.replace(**{axis: x})
        if q.defender_speed >= q.attacker_speed:
            continue
        flags.append(an.attacker_wins(q).attacker_wins)
    # wins never turn back off in the direction that helps the attacker
    seq = flags if up > 0 else list(reversed(flags))
    assert seq == sorted(seq)


@given(st.floats(1.0, 100.0), st.floats(0.01, 1.0), st.integers(1, 8))
def test_critical_ratio_matches_oracle(C, d, n):
    assume(C / d - n > 1e-6)
    assert an.critical_speed_ratio(C, d, n) == pytest.approx(
        float(oracles.speed_ratio_threshold(C, d, n)), rel=1e-12)


@given(params_strategy())
def test_case_sums_identical(t):
    p = build(*t)
    assume(p.defender_count >= 2 and not p.full_coverage)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", an.ConfigurationWarning)
        s1 = sum(signed_gaps(an.case1_config(p)))
        s2 = sum(signed_gaps(an.case2_config(p)))
    total = p.defender_count * p.defense_length
    assert total + s1 == pytest.approx(p.circumference, rel=1e-12)
    assert total + s2 == pytest.approx(p.circumference, rel=1e-12)


def test_degenerate_forms():
    one = ScenarioParams(3, 1, 2, 1, 3)
    assert an.max_circumference(one) == 2
    static = ScenarioParams(3, 4, 0.5, 0, 3)
    assert an.max_circumference(static) == 2
    assert an.win_conditions(static) == dict.fromkeys(
        ("circumference", "defense_length", "gamma", "speed_ratio"), True)
