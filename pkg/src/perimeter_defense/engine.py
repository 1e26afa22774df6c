"""Exact event-driven simulation.

Between events every agent moves at constant velocity, so the time of the
next event (attacker reaching an edge, a gap closing, a scheduled heading
change, the horizon) is a closed-form root. The engine jumps from event to
event and never discretises time.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from enum import IntEnum
from pathlib import Path
from typing import Optional, Sequence, TextIO, Union

from .geometry import EPS, directed_arc, wrap
from .model import (
    AgentState,
    AttackerStrategy,
    GameState,
    ScenarioParams,
    attacker_offset,
)
from .strategy import GameDecided, coordinated_velocities

DEFAULT_MAX_EVENTS = 1_000_000
# relative tolerance under which two candidate event times count as simultaneous
_TIE = 1e-13


class EventKind(IntEnum):
    # value doubles as tie-break priority, lowest first
    BREACH = 0
    HANDOFF = 1
    GAP_CLOSED = 2
    GAP_OPENED = 3
    ATTACKER_SWITCH = 4
    HORIZON_REACHED = 5

    @property
    def label(self) -> str:
        return "".join(part.capitalize() for part in self.name.split("_"))


@dataclass(frozen=True)
class Event:
    time: float
    kind: EventKind
    subject: str
    snapshot: Optional[GameState] = None


@dataclass(frozen=True)
class Breach:
    time: float
    position: float


@dataclass(frozen=True)
class Defended:
    horizon: float
    steady_state: bool = False


@dataclass
class SimOutcome:
    verdict: Union[Breach, Defended]
    trace: list[Event] = field(default_factory=list)
    initial: Optional[GameState] = None
    events: int = 0

    @property
    def breached(self) -> bool:
        return isinstance(self.verdict, Breach)

    @property
    def final(self) -> Optional[GameState]:
        return self.trace[-1].snapshot if self.trace else self.initial


class EventLimitExceeded(RuntimeError):
    def __init__(self, message: str, trace: list[Event]):
        super().__init__(message)
        self.trace = trace


def default_horizon(params: ScenarioParams) -> float:
    return 10.0 * params.circumference / (params.attacker_speed - params.defender_speed)


def gap_label(i: int, n: int) -> str:
    return f"gap_{i + 1}_{(i + 1) % n + 1}"


class Play:
    """Mutable kinematic state used by the engine and the schedule search.

    Defender centres are kept unwrapped (``u[0] < u[1] < ... < u[0] + C``)
    so gaps are plain differences and always sum to ``C - n*d``. The
    attacker is stored as an offset from its blocker's centre.
    """

    __slots__ = (
        "params", "C", "n", "d", "v", "va", "eps", "full",
        "t", "u", "b", "o", "s", "w", "switches", "next_switch",
    )

    def __init__(self, state: GameState, switch_times: Sequence[float] = (), eps: float = EPS):
        p = state.params
        self.params = p
        self.C = p.circumference
        self.n = p.defender_count
        self.d = p.defense_length
        self.v = p.defender_speed
        self.va = p.attacker_speed
        self.eps = eps
        self.full = p.full_coverage
        self.t = state.time
        pos = [a.position for a in state.defenders]
        u = [pos[0].value]
        for prev, cur in zip(pos, pos[1:]):
            u.append(u[-1] + directed_arc(prev, cur, 1))
        self.u = u
        self.b = state.blocker_index
        self.o = attacker_offset(state)
        self.s = state.attacker.direction
        if self.d >= self.C - eps and abs(abs(self.o) - self.C / 2) <= eps:
            # opposite the centre of a swath that wraps the circle both edges
            # meet; like any touch point, the attacker starts on the trailing one
            self.o = -self.s * self.C / 2
        if self.d < self.C and abs(self.o) > self.d / 2 + eps:
            raise GameDecided("attacker starts outside its blocker's swath")
        self.switches = [x for x in switch_times if x >= self.t]
        self.next_switch = 0
        self.w: list[float] = []
        self.update_policy()

    def copy(self) -> "Play":
        other = object.__new__(Play)
        other.params, other.C, other.n, other.d = self.params, self.C, self.n, self.d
        other.v, other.va, other.eps, other.full = self.v, self.va, self.eps, self.full
        other.t, other.b, other.o, other.s = self.t, self.b, self.o, self.s
        other.switches, other.next_switch = self.switches, self.next_switch
        other.u = self.u[:]
        other.w = self.w[:]
        return other

    # -------------------------------------------------------------- queries
    def gaps(self) -> list[float]:
        u, d = self.u, self.d
        g = [b - a - d for a, b in zip(u, u[1:])]
        g.append(u[0] + self.C - u[-1] - d)
        return g

    def update_policy(self) -> None:
        self.w = coordinated_velocities(self.gaps(), self.b, self.s, self.v, self.full, self.eps)

    def attacker_position(self) -> float:
        return wrap(self.u[self.b] + self.o, self.C).value

    def key(self, quantum: float) -> tuple:
        """Rotation-invariant fingerprint of the state (blocker first)."""
        g = self.gaps()
        b = self.b
        return (self.s, round(self.o / quantum), *[round(x / quantum) for x in g[b:] + g[:b]])

    def snapshot(self) -> GameState:
        c = self.C
        defenders = []
        for i, (x, w) in enumerate(zip(self.u, self.w)):
            if w > 0:
                direction = 1
            elif w < 0:
                direction = -1
            else:
                direction = self.s if i == self.b else -self.s
            defenders.append(AgentState(wrap(x, c), direction, abs(w)))
        attacker = AgentState(wrap(self.u[self.b] + self.o, c), self.s, self.va)
        return GameState(self.params, self.t, attacker, tuple(defenders), self.b)

    # ------------------------------------------------------------ dynamics
    def advance(self, dt: float) -> None:
        if dt <= 0:
            return
        w = self.w
        self.u = [x + y * dt for x, y in zip(self.u, w)]
        self.o += (self.s * self.va - w[self.b]) * dt
        self.t += dt

    def _ahead_gap_index(self) -> int:
        return self.b if self.s > 0 else (self.b - 1) % self.n

    def flip(self) -> None:
        self.s = -self.s
        self.update_policy()

    def step(self, until: float) -> tuple[EventKind, str]:
        """Advance to the next event at or before ``until`` and apply it."""
        n, s, b = self.n, self.s, self.b
        w, g, eps = self.w, self.gaps(), self.eps

        # candidates: edge, gap closings, scheduled switch, horizon
        cands = []
        if not (n == 1 and self.full):
            # a lone swath that wraps the circle has no edge to reach
            lead = s * self.o
            t_edge = max(self.d / 2 - lead, 0.0) / (self.va - s * w[b])
            cands.append((t_edge, EventKind.HANDOFF, -1))
        for i in range(n):
            rate = w[i] - w[(i + 1) % n]
            if rate > 0 and g[i] > eps:
                cands.append((g[i] / rate, EventKind.GAP_CLOSED, i))
        if self.next_switch < len(self.switches):
            cands.append((max(self.switches[self.next_switch] - self.t, 0.0),
                          EventKind.ATTACKER_SWITCH, -1))
        cands.append((max(until - self.t, 0.0), EventKind.HORIZON_REACHED, -1))

        first = min(cands)[0]
        limit = first + _TIE * max(1.0, abs(self.t) + first)
        kind, which = EventKind.HORIZON_REACHED, -1
        for c in cands:
            if c[0] <= limit and c[1] < kind:
                kind, which = c[1], c[2]
        # never step past the earliest candidate, whichever event wins the tie
        self.advance(first)

        if kind == EventKind.HANDOFF:
            gi = self._ahead_gap_index()
            ahead = self.gaps()[gi]
            self.o = s * self.d / 2
            if ahead > self.eps and not self.full:
                return EventKind.BREACH, "attacker"
            nb = (b + s) % n
            # A sub-eps gap counts as touching: the attacker lands exactly on
            # the new swath's trailing edge. Carrying the residue instead would
            # let it grow by gamma at every zero-margin handoff.
            self.o = -s * (self.d / 2 + min(ahead, 0.0))
            self.b = nb
            if abs(self.u[0]) > 4 * self.C:
                shift = math.floor(self.u[0] / self.C) * self.C
                self.u = [x - shift for x in self.u]
            self.update_policy()
            return EventKind.HANDOFF, f"defender_{b + 1}->defender_{nb + 1}"
        if kind == EventKind.GAP_CLOSED:
            self.update_policy()
            return kind, gap_label(which, n)
        if kind == EventKind.ATTACKER_SWITCH:
            self.next_switch += 1
            self.flip()
            return kind, "attacker"
        return kind, "horizon"

    def opening_gaps(self) -> list[int]:
        g = self.gaps()
        n, w = self.n, self.w
        return [i for i in range(n) if g[i] <= self.eps and w[(i + 1) % n] - w[i] > 0]


def _play_from(state: GameState, strategy: Optional[AttackerStrategy], eps: float) -> Play:
    switches: Sequence[float] = ()
    if strategy is not None:
        rel = [state.time + x for x in strategy.switch_times]
        switches = rel
        if strategy.initial_direction != state.attacker.direction:
            flipped = AgentState(state.attacker.position, strategy.initial_direction, state.attacker.speed)
            state = GameState(state.params, state.time, flipped, state.defenders, state.blocker_index)
    return Play(state, switches, eps)


def next_event(
    state: GameState,
    attacker_strategy: Optional[AttackerStrategy] = None,
    horizon: float = math.inf,
    eps: float = EPS,
) -> Event:
    """The first event reached from ``state``, with the post-event snapshot.

    Switch times in ``attacker_strategy`` are measured from ``state.time``.
    """
    play = _play_from(state, attacker_strategy, eps)
    kind, subject = play.step(state.time + horizon)
    return Event(play.t, kind, subject, play.snapshot())


def simulate(
    params: ScenarioParams,
    initial: GameState,
    attacker_strategy: Optional[AttackerStrategy] = None,
    horizon: Optional[float] = None,
    *,
    record: bool = True,
    steady_state: bool = True,
    max_events: int = DEFAULT_MAX_EVENTS,
    eps: float = EPS,
) -> SimOutcome:
    """Play the game from ``initial`` until a breach or the horizon.

    Switch times in ``attacker_strategy`` are measured from ``initial.time``.
    Once no heading changes remain, a repeated rotation-invariant state at
    a handoff proves the play periodic and ends the run as defended.
    """
    if initial.params != params:
        raise ValueError("initial state was built for different parameters")
    horizon = default_horizon(params) if horizon is None else horizon
    until = initial.time + horizon
    play = _play_from(initial, attacker_strategy, eps)
    trace: list[Event] = []
    seen: set[tuple] = set()
    quantum = 1e-10 * max(params.circumference, 1.0)
    n = params.defender_count

    events = 0
    while True:
        kind, subject = play.step(until)
        events += 1
        if record:
            trace.append(Event(play.t, kind, subject, play.snapshot()))
            if kind in (EventKind.HANDOFF, EventKind.ATTACKER_SWITCH):
                for i in play.opening_gaps():
                    trace.append(Event(play.t, EventKind.GAP_OPENED, gap_label(i, n), trace[-1].snapshot))
        if kind == EventKind.BREACH:
            verdict: Union[Breach, Defended] = Breach(play.t, play.attacker_position())
            break
        if kind == EventKind.HORIZON_REACHED:
            verdict = Defended(horizon)
            break
        if kind == EventKind.HANDOFF and steady_state and play.next_switch >= len(play.switches):
            k = play.key(quantum)
            if k in seen:
                verdict = Defended(horizon, steady_state=True)
                if record:
                    trace.append(Event(play.t, EventKind.HORIZON_REACHED, "steady_state", trace[-1].snapshot))
                break
            seen.add(k)
        if events >= max_events:
            raise EventLimitExceeded(f"more than {max_events} events without a verdict", trace)
    return SimOutcome(verdict, trace, initial, events)


# ------------------------------------------------------------------ export

def _fmt(x: float) -> str:
    return f"{x:.12g}"


def trace_header(n: int) -> list[str]:
    cols = ["time", "event", "subject", "attacker_pos", "attacker_dir"]
    for i in range(1, n + 1):
        cols += [f"def{i}_pos", f"def{i}_dir"]
    cols += [f"gap_{i}_{i % n + 1}" for i in range(1, n + 1)]
    return cols


def _row(time: float, label: str, subject: str, state: GameState) -> list[str]:
    from .model import signed_gaps

    row = [_fmt(time), label, subject, _fmt(state.attacker.position.value), str(state.attacker.direction)]
    for dfd in state.defenders:
        row += [_fmt(dfd.position.value), str(dfd.direction)]
    row += [_fmt(g) for g in signed_gaps(state)]
    return row


def write_trace_csv(outcome: SimOutcome, out: Union[str, Path, TextIO]) -> None:
    """Write the trace as CSV, one row per event, preceded by the initial state."""
    if isinstance(out, (str, Path)):
        with open(out, "w", newline="") as fh:
            write_trace_csv(outcome, fh)
        return
    if outcome.initial is None:
        raise ValueError("outcome has no initial snapshot")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(trace_header(outcome.initial.params.defender_count))
    writer.writerow(_row(outcome.initial.time, "Initial", "-", outcome.initial))
    for ev in outcome.trace:
        if ev.snapshot is not None:
            writer.writerow(_row(ev.time, ev.kind.label, ev.subject, ev.snapshot))


def trace_csv(outcome: SimOutcome) -> str:
    buf = io.StringIO()
    write_trace_csv(outcome, buf)
    return buf.getvalue()
