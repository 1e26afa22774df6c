"""Scenario parameters, agent states and game snapshots."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Optional, Sequence

from .geometry import EPS, CircInterval, CircPos, CoordinationError, directed_arc, gap_after, wrap


class InvalidScenario(ValueError):
    """Raised when scenario parameters or a scenario file cannot be used."""


@dataclass(frozen=True)
class ScenarioParams:
    circumference: float
    defender_count: int
    defense_length: float
    defender_speed: float
    attacker_speed: float

    @property
    def full_coverage(self) -> bool:
        """Defended swaths can cover the whole boundary at once."""
        return self.defender_count * self.defense_length >= self.circumference - EPS

    def replace(self, **changes) -> "ScenarioParams":
        values = {
            "circumference": self.circumference,
            "defender_count": self.defender_count,
            "defense_length": self.defense_length,
            "defender_speed": self.defender_speed,
            "attacker_speed": self.attacker_speed,
        }
        values.update(changes)
        return ScenarioParams(**values)

    def check(self) -> "ScenarioParams":
        report = validate(self)
        if not report.ok:
            raise InvalidScenario("; ".join(report.violations))
        return self


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...] = ()
    notes: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def validate(params: ScenarioParams) -> ValidationReport:
    """List every violated precondition; full coverage is only a note."""
    bad: list[str] = []
    notes: list[str] = []
    numeric = {
        "circumference": params.circumference,
        "defense_length": params.defense_length,
        "defender_speed": params.defender_speed,
        "attacker_speed": params.attacker_speed,
    }
    for name, value in numeric.items():
        if not isinstance(value, (int, float)) or isinstance(value, bool) or not math.isfinite(value):
            bad.append(f"{name} must be a finite number, got {value!r}")
    if bad:
        return ValidationReport(tuple(bad))

    n = params.defender_count
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        bad.append(f"defender_count must be a positive integer, got {n!r}")
    if params.circumference <= 0:
        bad.append(f"circumference must be positive, got {params.circumference}")
    if params.defense_length <= 0:
        bad.append(f"defense_length must be positive, got {params.defense_length}")
    if params.defender_speed < 0:
        bad.append(f"defender_speed must be non-negative, got {params.defender_speed}")
    if params.attacker_speed <= params.defender_speed:
        bad.append(
            "defender not slower than attacker: "
            f"defender_speed={params.defender_speed} >= attacker_speed={params.attacker_speed}"
        )
    if not bad and params.full_coverage:
        notes.append(
            f"full coverage: {n} * {params.defense_length} >= {params.circumference}"
        )
    return ValidationReport(tuple(bad), tuple(notes))


@dataclass(frozen=True)
class AgentState:
    position: CircPos
    direction: int
    speed: float

    def __post_init__(self):
        if self.direction not in (1, -1):
            raise ValueError(f"direction must be +1 or -1, got {self.direction}")
        if self.speed < 0:
            raise ValueError(f"speed must be non-negative, got {self.speed}")


@dataclass(frozen=True)
class AttackerStrategy:
    """Piecewise-constant heading: start in ``initial_direction``, flip at each switch time."""

    initial_direction: int = 1
    switch_times: tuple[float, ...] = ()

    def __post_init__(self):
        if self.initial_direction not in (1, -1):
            raise ValueError(f"initial_direction must be +1 or -1, got {self.initial_direction}")
        times = tuple(float(t) for t in self.switch_times)
        for t in times:
            if not math.isfinite(t) or t < 0:
                raise ValueError(f"switch times must be finite and >= 0, got {t}")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError(f"switch times must be strictly increasing, got {times}")
        object.__setattr__(self, "switch_times", times)

    def direction_at(self, t: float) -> int:
        flips = sum(1 for s in self.switch_times if s <= t)
        return self.initial_direction * (-1) ** flips


@dataclass(frozen=True)
class GameState:
    """Snapshot of the game.

    Defenders are listed in positive-direction order and indexed from 0;
    ``blocker_index`` names the defender currently covering the attacker.
    """

    params: ScenarioParams
    time: float
    attacker: AgentState
    defenders: tuple[AgentState, ...]
    blocker_index: int

    def __post_init__(self):
        object.__setattr__(self, "defenders", tuple(self.defenders))
        if len(self.defenders) != self.params.defender_count:
            raise ValueError(
                f"expected {self.params.defender_count} defenders, got {len(self.defenders)}"
            )
        if not 0 <= self.blocker_index < len(self.defenders):
            raise ValueError(f"blocker_index {self.blocker_index} out of range")

    @property
    def circumference(self) -> float:
        return self.params.circumference


def defended_interval(state: GameState, i: int) -> CircInterval:
    """Closed arc of length ``defense_length`` centred on defender ``i``."""
    n = state.params.defender_count
    if not 0 <= i < n:
        raise IndexError(f"defender index {i} out of range for {n} defenders")
    c = state.params.circumference
    d = min(state.params.defense_length, c)
    start = state.defenders[i].position.shifted(-d / 2)
    return CircInterval(start, d)


def signed_gaps(state: GameState) -> list[float]:
    """Gap after each defender, negative where swaths overlap.

    Entry ``i`` is the gap between defender ``i`` and defender ``i + 1``
    (the last one wraps to defender 0).
    """
    p = state.params
    if p.defender_count == 1:
        return [p.circumference - p.defense_length]
    pos = [a.position for a in state.defenders]
    out = []
    for i, here in enumerate(pos):
        nxt = pos[(i + 1) % len(pos)]
        out.append(directed_arc(here, nxt, 1) - p.defense_length)
    return out


def gaps(state: GameState, eps: float = EPS) -> list[float]:
    """Non-negative gaps between consecutive defended intervals.

    Raises :class:`~perimeter_defense.geometry.CoordinationError` when two
    swaths overlap by more than ``eps``.
    """
    p = state.params
    if p.defender_count == 1:
        if p.defense_length > p.circumference + eps:
            raise CoordinationError("single swath longer than the circumference")
        return [max(p.circumference - p.defense_length, 0.0)]
    intervals = [defended_interval(state, i) for i in range(p.defender_count)]
    return [
        gap_after(a, intervals[(i + 1) % len(intervals)], eps)
        for i, a in enumerate(intervals)
    ]


def attacker_offset(state: GameState, i: Optional[int] = None) -> float:
    """Signed arc from defender ``i`` (default: the blocker) to the attacker, in ``[-C/2, C/2)``."""
    i = state.blocker_index if i is None else i
    c = state.params.circumference
    raw = state.attacker.position.value - state.defenders[i].position.value
    return wrap(raw + c / 2, c).value - c / 2


def remaining_block(state: GameState) -> float:
    """Length of the blocker's swath still ahead of the attacker (d_{a,1})."""
    half = state.params.defense_length / 2
    return half - state.attacker.direction * attacker_offset(state)


def make_state(
    params: ScenarioParams,
    defender_positions: Sequence[float],
    attacker_position: float,
    blocker_index: int = 0,
    attacker_direction: int = 1,
    defender_directions: Optional[Sequence[int]] = None,
    defender_speeds: Optional[Sequence[float]] = None,
    time: float = 0.0,
) -> GameState:
    """Build a :class:`GameState` from raw positions (wrapped onto the circle)."""
    c = params.circumference
    n = params.defender_count
    dirs = list(defender_directions) if defender_directions is not None else [
        attacker_direction if i == blocker_index else -attacker_direction for i in range(n)
    ]
    speeds = list(defender_speeds) if defender_speeds is not None else [params.defender_speed] * n
    defenders = tuple(
        AgentState(wrap(x, c), dirs[i], speeds[i]) for i, x in enumerate(defender_positions)
    )
    attacker = AgentState(wrap(attacker_position, c), attacker_direction, params.attacker_speed)
    return GameState(params, time, attacker, defenders, blocker_index)


# ---------------------------------------------------------------- scenario files

_REQUIRED = ("circumference", "defender_count", "defense_length", "defender_speed", "attacker_speed")
_OPTIONAL = ("initial_config", "attacker_strategy")


@dataclass(frozen=True)
class Scenario:
    params: ScenarioParams
    initial_config: str = "case1"
    attacker_strategy: AttackerStrategy = field(default_factory=AttackerStrategy)


def scenario_from_mapping(doc: Mapping[str, Any]) -> Scenario:
    if not isinstance(doc, Mapping):
        raise InvalidScenario("scenario document must be a JSON object")
    unknown = sorted(set(doc) - set(_REQUIRED) - set(_OPTIONAL))
    if unknown:
        raise InvalidScenario(f"unknown scenario keys: {', '.join(unknown)}")
    missing = [k for k in _REQUIRED if k not in doc]
    if missing:
        raise InvalidScenario(f"missing scenario field(s): {', '.join(missing)}")

    n = doc["defender_count"]
    if isinstance(n, float) and n.is_integer():
        n = int(n)
    params = ScenarioParams(
        circumference=doc["circumference"],
        defender_count=n,
        defense_length=doc["defense_length"],
        defender_speed=doc["defender_speed"],
        attacker_speed=doc["attacker_speed"],
    )
    report = validate(params)
    if not report.ok:
        raise InvalidScenario("; ".join(report.violations))

    config = doc.get("initial_config", "case1")
    if config not in ("case1", "case2"):
        raise InvalidScenario(f"initial_config must be 'case1' or 'case2', got {config!r}")

    strat_doc = doc.get("attacker_strategy", {})
    if not isinstance(strat_doc, Mapping):
        raise InvalidScenario("attacker_strategy must be an object")
    extra = sorted(set(strat_doc) - {"initial_direction", "switch_times"})
    if extra:
        raise InvalidScenario(f"unknown attacker_strategy keys: {', '.join(extra)}")
    try:
        strategy = AttackerStrategy(
            int(strat_doc.get("initial_direction", 1)),
            tuple(strat_doc.get("switch_times", ())),
        )
    except (TypeError, ValueError) as exc:
        raise InvalidScenario(f"bad attacker_strategy: {exc}") from exc
    return Scenario(params, config, strategy)


def load_scenario(path: str | Path) -> Scenario:
    """Read a scenario JSON file. Unknown keys and missing fields are errors."""
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise InvalidScenario(f"cannot read scenario file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidScenario(f"scenario file {path} is not valid JSON: {exc}") from exc
    return scenario_from_mapping(doc)


def scenario_to_mapping(scenario: Scenario) -> dict[str, Any]:
    p = scenario.params
    return {
        "circumference": p.circumference,
        "defender_count": p.defender_count,
        "defense_length": p.defense_length,
        "defender_speed": p.defender_speed,
        "attacker_speed": p.attacker_speed,
        "initial_config": scenario.initial_config,
        "attacker_strategy": {
            "initial_direction": scenario.attacker_strategy.initial_direction,
            "switch_times": list(scenario.attacker_strategy.switch_times),
        },
    }
