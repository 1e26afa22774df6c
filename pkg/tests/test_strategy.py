import pytest

from perimeter_defense.analytic import case1_config
from perimeter_defense.engine import EventKind, next_event
from perimeter_defense.model import AttackerStrategy, ScenarioParams, make_state
from perimeter_defense.strategy import (
    GameDecided,
    HandoffError,
    apply_policy,
    constant_attacker,
    coordinated_velocities,
    defender_policy,
    escort_group,
    handoff,
    mirror_index,
    mirror_state,
)

P = ScenarioParams(10, 3, 2, 1, 3)


def test_policy_case1():
    a = defender_policy(case1_config(P))
    assert a.directions == (1, -1, -1)
    assert a.blocker_index == 0


def test_policy_negates_when_attacker_turns():
    s = case1_config(P)
    flipped = make_state(P, [d.position.value for d in s.defenders], 0.0, 0, -1)
    # the touching neighbour behind is now ahead and runs with the blocker
    a = defender_policy(flipped)
    assert a.directions[0] == -1 and a.directions[1] == 1


def test_policy_after_handoff():
    p = ScenarioParams(3, 2, 1, 1, 3)
    ev = next_event(case1_config(p))
    assert ev.kind == EventKind.HANDOFF and ev.time == pytest.approx(0.5)
    assert ev.snapshot.blocker_index == 1
    assert [d.direction for d in ev.snapshot.defenders] == [-1, 1]


def test_policy_uncovered_attacker():
    s = make_state(P, [1.0, 4.5, 7.5], 3.5)
    with pytest.raises(GameDecided):
        defender_policy(s)


def test_escort_group_follows_contacts():
    assert escort_group([0.0, 0.0, 1.0], 0, 1) == [0, 1, 2]
    assert escort_group([1.0, 0.0, 0.0], 0, 1) == [0]
    assert escort_group([1.0, 1.0, 0.0], 0, -1) == [0, 2]


def test_full_coverage_is_static():
    assert coordinated_velocities([-1.0, -1.0], 0, 1, 1.0, True) == [0.0, 0.0]


def test_handoff_transfers_role():
    p = ScenarioParams(3, 2, 1, 1, 3)
    s = make_state(p, [1.0, 2.0], 1.5, blocker_index=0, attacker_direction=1)
    after = handoff(s)
    assert after.blocker_index == 1
    assert [d.direction for d in after.defenders] == [-1, 1]


def test_handoff_preconditions():
    p = ScenarioParams(3, 2, 1, 1, 3)
    with pytest.raises(HandoffError):
        handoff(make_state(p, [1.0, 2.0], 1.2))
    with pytest.raises(HandoffError):
        handoff(make_state(p, [1.0, 2.2], 1.5))
    with pytest.raises(HandoffError):
        handoff(make_state(ScenarioParams(3, 1, 1, 1, 3), [1.0], 1.5))


def test_handoff_after_reversal_targets_other_side():
    p = ScenarioParams(3, 2, 1, 1, 3)
    # heading -1, so the swath touching defender 0's negative end takes over
    s = apply_policy(make_state(p, [1.0, 0.0], 0.5, 0, -1))
    after = handoff(s)
    assert after.blocker_index == 1


def test_constant_attacker():
    assert constant_attacker(1) == AttackerStrategy(1, ())
    assert constant_attacker(-1).switch_times == ()


def test_mirror_state_involution():
    s = case1_config(P)
    m = mirror_state(s)
    assert m.attacker.direction == -1
    assert m.blocker_index == mirror_index(0, 3) == 2
    back = mirror_state(m)
    assert [d.position.value for d in back.defenders] == pytest.approx([d.position.value for d in s.defenders])
    assert back.blocker_index == s.blocker_index
