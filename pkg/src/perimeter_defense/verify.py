"""Randomised property suite run by ``perimeter-defense verify``.

Each draw picks a team, speeds and swath length at random and sets the
circumference to ``C_max * factor`` for a factor near the boundary. Every
property is checked on every draw it applies to and tallied by name.
"""
from __future__ import annotations

import math
import random
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

from . import analytic
from .analytic import ConfigurationWarning, attacker_wins, case1_config, case2_config
from .engine import EventKind, SimOutcome, simulate
from .fixed_step import fixed_step_simulate
from .geometry import EPS, CircPos, directed_arc, wrap
from .model import AttackerStrategy, ScenarioParams, signed_gaps
from .search import brute_force_attacker, episode_settings
from .strategy import mirror_state
from .sweep import BAND

FACTORS = (0.9, 1.0, 1.001, 1.5)
FIXED_DT = 1e-4


@dataclass(frozen=True)
class Draw:
    params: ScenarioParams
    factor: float
    c_max: float

    @property
    def in_band(self) -> bool:
        return abs(self.params.circumference - self.c_max) <= BAND * self.params.circumference


def draw_params(rng: random.Random, factors=FACTORS) -> Draw:
    """n in [1, 8], v in (0, 1], va/v in (1, 5], d in (0, 1], C = C_max * factor."""
    n = rng.randint(1, 8)
    v = 1.0 - rng.random()
    ratio = 1.0 + 4.0 * (1.0 - rng.random())
    d = 1.0 - rng.random()
    factor = rng.choice(factors)
    base = ScenarioParams(1.0, n, d, v, v * ratio)
    c_max = analytic.max_circumference(base)
    return Draw(base.replace(circumference=c_max * factor), factor, c_max)


@dataclass
class Tally:
    passed: int = 0
    checked: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.passed == self.checked


@dataclass
class VerifyReport:
    seed: int
    count: int
    tallies: dict[str, Tally]

    @property
    def ok(self) -> bool:
        return all(t.ok for t in self.tallies.values())

    def format(self) -> str:
        width = max(len(name) for name in self.tallies)
        lines = [f"verify seed={self.seed} count={self.count}"]
        for name, t in self.tallies.items():
            status = "PASS" if t.ok else "FAIL"
            lines.append(f"{status} {name:<{width}} {t.passed}/{t.checked}")
            lines.extend(f"    {msg}" for msg in t.failures[:3])
        lines.append("ALL PASS" if self.ok else "FAILURES")
        return "\n".join(lines)


# ------------------------------------------------------------- properties
# Each returns None when it does not apply to the draw, else (ok, detail).

Result = Optional[tuple[bool, str]]


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def prop_wrap(draw: Draw, rng: random.Random) -> Result:
    c = draw.params.circumference
    raw = rng.uniform(-5 * c, 5 * c)
    p = wrap(raw, c)
    q = wrap(p.value, c)
    ok = 0.0 <= p.value < c and q.value == p.value
    return ok, f"wrap({raw}, {c}) = {p.value}"


def prop_arc_complement(draw: Draw, rng: random.Random) -> Result:
    c = draw.params.circumference
    a, b = CircPos(rng.uniform(0, c), c), CircPos(rng.uniform(0, c), c)
    total = directed_arc(a, b, 1) + directed_arc(a, b, -1)
    ok = abs(total) <= 1e-12 * c or abs(total - c) <= 1e-12 * c
    return ok, f"arcs between {a.value} and {b.value} sum to {total}"


def prop_win_forms(draw: Draw, rng: random.Random) -> Result:
    if draw.in_band:
        return None
    forms = analytic.win_conditions(draw.params)
    expected = attacker_wins(draw.params).attacker_wins
    return all(f == expected for f in forms.values()), f"{forms} vs {expected}"


def prop_min_defenders(draw: Draw, rng: random.Random) -> Result:
    p = draw.params
    m = analytic.min_defenders(p.circumference, p.defense_length, p.defender_speed, p.attacker_speed)
    holds = not attacker_wins(p.replace(defender_count=m)).attacker_wins
    below = m == 1 or attacker_wins(p.replace(defender_count=m - 1)).attacker_wins
    return holds and below, f"min_defenders={m} for {p}"


def prop_case_gap_sums(draw: Draw, rng: random.Random) -> Result:
    p = draw.params.replace(circumference=draw.c_max)
    if p.defender_count < 2 or p.full_coverage:
        return None
    target = p.circumference - p.defender_count * p.defense_length
    s1, s2 = sum(signed_gaps(case1_config(p))), sum(signed_gaps(case2_config(p)))
    ok = _rel(s1, s2) <= 1e-12 and _rel(s1, target) <= 1e-12
    return ok, f"gap sums {s1}, {s2}, expected {target}"


def prop_case_transition(draw: Draw, rng: random.Random) -> Result:
    p = draw.params.replace(circumference=draw.c_max)
    if p.defender_count < 2 or p.full_coverage:
        return None
    t12 = analytic.case_transition_time(p)
    out = simulate(p, case1_config(p), horizon=t12, steady_state=False)
    if out.breached or any(e.kind == EventKind.HANDOFF for e in out.trace):
        return False, "play left case 1 before the transition time"
    moved = _rotated_gaps(signed_gaps(out.final), out.final.blocker_index)
    target = _rotated_gaps(signed_gaps(case2_config(p)), 0)
    err = max(abs(a - b) for a, b in zip(moved, target))
    return err <= 1e-9, f"gap profile differs by {err}"


def _rotated_gaps(g: list[float], blocker: int) -> list[float]:
    return g[blocker:] + g[:blocker]


def _trace_conserved(out: SimOutcome, params: ScenarioParams) -> tuple[bool, str]:
    target = params.circumference - params.defender_count * params.defense_length
    tol = 1e-12 * params.circumference
    if params.defender_count == 1:
        return True, ""
    states = [out.initial] + [e.snapshot for e in out.trace if e.snapshot is not None]
    worst = max(abs(sum(signed_gaps(s)) - target) for s in states)
    return worst <= tol, f"gap sum off by {worst}"


def prop_critical_handoffs(draw: Draw, rng: random.Random) -> Result:
    p = draw.params.replace(circumference=draw.c_max)
    if p.defender_count < 2 or p.full_coverage:
        return None
    _, horizon = episode_settings(p)
    out = simulate(p, case1_config(p), horizon=horizon)
    if out.breached:
        return False, f"breach at C_max: {out.verdict}"
    for e in out.trace:
        if e.kind == EventKind.HANDOFF:
            ahead = signed_gaps(e.snapshot)
            # after the handoff the closed gap sits behind the new blocker
            s = e.snapshot.attacker.direction
            b = e.snapshot.blocker_index
            gap = ahead[(b - 1) % p.defender_count if s > 0 else b]
            if abs(gap) > EPS:
                return False, f"handoff at t={e.time} with gap {gap}"
    return True, ""


def prop_breach_above(draw: Draw, rng: random.Random) -> Result:
    p = draw.params.replace(circumference=draw.c_max * (1 + 1e-3))
    if p.full_coverage:
        return None
    _, horizon = episode_settings(p)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConfigurationWarning)
        start = case1_config(p)
    out = simulate(p, start, horizon=horizon)
    ok = out.breached and 0 < out.verdict.time < math.inf
    return ok, f"constant heading at 1.001*C_max gave {out.verdict}"


def prop_reflection(draw: Draw, rng: random.Random) -> Result:
    p = draw.params
    _, horizon = episode_settings(p, laps=1.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConfigurationWarning)
        start = case1_config(p)
    a = simulate(p, start, AttackerStrategy(1), horizon, steady_state=False)
    b = simulate(p, mirror_state(start), AttackerStrategy(-1), horizon, steady_state=False)
    ka = [(e.kind, e.time) for e in a.trace]
    kb = [(e.kind, e.time) for e in b.trace]
    if [k for k, _ in ka] != [k for k, _ in kb]:
        return False, "mirrored run produced different events"
    err = max((abs(x - y) / max(1.0, abs(x)) for (_, x), (_, y) in zip(ka, kb)), default=0.0)
    return err <= 1e-12, f"event times differ by {err}"


def prop_boundary_agreement(draw: Draw, rng: random.Random, cache: dict) -> Result:
    p = draw.params
    res = _searched(draw, cache)
    expected = attacker_wins(p).attacker_wins
    if draw.factor == 1.0:
        # the boundary itself belongs to the defenders
        expected = False
    elif draw.in_band:
        return None
    ok = res.breached == expected
    return ok, f"factor {draw.factor}: search breached={res.breached}, analytic wins={expected} for {p}"


def prop_search_conservation(draw: Draw, rng: random.Random, cache: dict) -> Result:
    res = _searched(draw, cache)
    out = res.outcome or _held_run(draw)
    return _trace_conserved(out, draw.params)


def prop_fixed_step(draw: Draw, rng: random.Random, cache: dict) -> Result:
    if draw.in_band:
        return None
    p = draw.params
    res = _searched(draw, cache)
    strategy = res.strategy or AttackerStrategy(1)
    _, horizon = episode_settings(p)
    event = res.outcome or _held_run(draw)
    fixed = fixed_step_simulate(p, _start(p), strategy, FIXED_DT, horizon)
    if event.breached != fixed.breached:
        return False, f"event {event.verdict} vs fixed-step {fixed.verdict}"
    if event.breached:
        err = abs(event.verdict.time - fixed.verdict.time)
        return err <= p.attacker_speed * FIXED_DT, f"breach times differ by {err}"
    return True, ""


def _start(p: ScenarioParams):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConfigurationWarning)
        return case1_config(p)


def _searched(draw: Draw, cache: dict):
    if "search" not in cache:
        grid, horizon = episode_settings(draw.params)
        cache["search"] = brute_force_attacker(draw.params, _start(draw.params), 3, grid, horizon)
    return cache["search"]


def _held_run(draw: Draw) -> SimOutcome:
    _, horizon = episode_settings(draw.params)
    return simulate(draw.params, _start(draw.params), AttackerStrategy(1), horizon)


PROPERTIES: dict[str, Callable] = {
    "geometry.wrap_range": prop_wrap,
    "geometry.arc_complement": prop_arc_complement,
    "analytic.win_forms_agree": prop_win_forms,
    "analytic.min_defenders_bracket": prop_min_defenders,
    "analytic.case_gap_sums": prop_case_gap_sums,
    "engine.case_transition": prop_case_transition,
    "engine.critical_zero_gap_handoffs": prop_critical_handoffs,
    "engine.breach_above_critical": prop_breach_above,
    "strategy.reflection_symmetry": prop_reflection,
}

SEARCH_PROPERTIES: dict[str, Callable] = {
    "strategy.boundary_agreement": prop_boundary_agreement,
    "engine.gap_conservation": prop_search_conservation,
    "engine.fixed_step_agreement": prop_fixed_step,
}


def run_verify(seed: int = 0, count: int = 100) -> VerifyReport:
    """Check every property on ``count`` draws from ``random.Random(seed)``."""
    if count < 1:
        raise ValueError(f"count must be at least 1, got {count}")
    rng = random.Random(seed)
    tallies = {name: Tally() for name in {**PROPERTIES, **SEARCH_PROPERTIES}}
    for k in range(count):
        draw = draw_params(rng)
        cache: dict = {}
        checks = [(name, lambda f=f: f(draw, rng)) for name, f in PROPERTIES.items()]
        checks += [(name, lambda f=f: f(draw, rng, cache)) for name, f in SEARCH_PROPERTIES.items()]
        for name, check in checks:
            try:
                result = check()
            except Exception as exc:  # a crash is a failed property, not an aborted suite
                result = (False, f"{type(exc).__name__}: {exc}")
            if result is None:
                continue
            ok, detail = result
            t = tallies[name]
            t.checked += 1
            if ok:
                t.passed += 1
            else:
                t.failures.append(f"draw {k}: {detail}")
    return VerifyReport(seed, count, tallies)
