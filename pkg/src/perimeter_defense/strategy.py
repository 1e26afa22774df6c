"""Defender coordination and attacker heading policies."""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

from .geometry import EPS, contains, wrap
from .model import (
    AgentState,
    AttackerStrategy,
    GameState,
    attacker_offset,
    defended_interval,
    signed_gaps,
)


class GameDecided(RuntimeError):
    """The attacker is no longer covered by its blocker."""


class HandoffError(RuntimeError):
    pass


@dataclass(frozen=True)
class DirectionAssignment:
    directions: tuple[int, ...]
    speeds: tuple[float, ...]
    blocker_index: int


def escort_group(gaps: Sequence[float], blocker: int, direction: int, eps: float = EPS) -> list[int]:
    """Blocker plus the chain of defenders already touching it on the attacker's side.

    ``gaps[i]`` is the gap between defender ``i`` and ``i + 1``. A defender
    that has closed its gap onto the blocker keeps contact and travels with
    it instead of pushing into it.
    """
    n = len(gaps)
    group = [blocker]
    j = blocker
    for _ in range(n - 1):
        gap = gaps[j] if direction > 0 else gaps[(j - 1) % n]
        if gap > eps:
            break
        j = (j + direction) % n
        group.append(j)
    return group


def coordinated_velocities(
    gaps: Sequence[float],
    blocker: int,
    direction: int,
    speed: float,
    full_coverage: bool,
    eps: float = EPS,
) -> list[float]:
    """Signed defender velocities for the coordinated policy.

    The blocker runs with the attacker, every other defender runs the
    opposite way to close the gap ahead. Full coverage needs no motion.
    """
    n = len(gaps)
    if full_coverage:
        return [0.0] * n
    vel = [-direction * speed] * n
    for i in escort_group(gaps, blocker, direction, eps):
        vel[i] = direction * speed
    return vel


def defender_policy(state: GameState, eps: float = EPS) -> DirectionAssignment:
    blocker = state.blocker_index
    if not contains(defended_interval(state, blocker), state.attacker.position, eps):
        raise GameDecided(
            f"attacker at {state.attacker.position.value} is outside defender {blocker}'s swath"
        )
    p = state.params
    vel = coordinated_velocities(
        signed_gaps(state), blocker, state.attacker.direction,
        p.defender_speed, p.full_coverage, eps,
    )
    s = state.attacker.direction
    dirs = tuple(1 if w > 0 else -1 if w < 0 else (s if i == blocker else -s) for i, w in enumerate(vel))
    return DirectionAssignment(dirs, tuple(abs(w) for w in vel), blocker)


def apply_policy(state: GameState, eps: float = EPS) -> GameState:
    """Return ``state`` with defender headings set by :func:`defender_policy`."""
    a = defender_policy(state, eps)
    defenders = tuple(
        AgentState(d.position, a.directions[i], a.speeds[i]) for i, d in enumerate(state.defenders)
    )
    return replace(state, defenders=defenders)


def handoff(state: GameState, eps: float = EPS) -> GameState:
    """Pass the blocking role to the neighbour ahead of the attacker.

    The attacker must sit on the blocker's leading edge and that edge must
    touch (or overlap) the neighbour's swath.
    """
    p = state.params
    n = p.defender_count
    if n == 1:
        raise HandoffError("a single defender has no neighbour to hand off to")
    s = state.attacker.direction
    b = state.blocker_index
    ahead = (b + s) % n
    lead = s * attacker_offset(state)
    if abs(lead - p.defense_length / 2) > eps:
        raise HandoffError(
            f"attacker is {p.defense_length / 2 - lead} short of defender {b}'s edge"
        )
    gap = signed_gaps(state)[b if s > 0 else ahead]
    if gap > eps:
        raise HandoffError(f"gap of {gap} between defender {b} and defender {ahead}")
    return apply_policy(replace(state, blocker_index=ahead), eps)


def constant_attacker(direction: int = 1) -> AttackerStrategy:
    return AttackerStrategy(direction, ())


def mirror_state(state: GameState) -> GameState:
    """Reflect the game through position 0.

    Defender labels are reversed so they stay in positive-direction order;
    headings flip sign.
    """
    c = state.params.circumference
    n = state.params.defender_count

    def reflect(a: AgentState) -> AgentState:
        return AgentState(wrap(-a.position.value, c), -a.direction, a.speed)

    defenders = tuple(reflect(d) for d in reversed(state.defenders))
    return replace(
        state,
        attacker=reflect(state.attacker),
        defenders=defenders,
        blocker_index=n - 1 - state.blocker_index,
    )


def mirror_index(i: int, n: int) -> int:
    return n - 1 - i
