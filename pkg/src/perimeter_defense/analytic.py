"""Closed-form results for homogeneous defenders.

With every defender sharing swath length ``d`` and speed ``v`` against an
attacker of speed ``va``, ``n`` defenders hold a perimeter of circumference

    C_max = n*d + (n - 1) * d * gamma,   gamma = 2*v / (va - v)

and the attacker wins exactly when ``C > C_max``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .model import GameState, ScenarioParams, make_state
from .strategy import apply_policy

_CEIL_SLACK = 1e-12


class ConfigurationWarning(UserWarning):
    """An extremal configuration was requested for a circumference it cannot hold."""


class NoFiniteThreshold(ValueError):
    """The swaths already cover the boundary, so no speed ratio lets the attacker through."""


def _check_speeds(v_agent: float, v_attacker: float) -> None:
    if not v_attacker > v_agent >= 0:
        raise ValueError(
            f"need attacker_speed > defender_speed >= 0, got {v_attacker} and {v_agent}"
        )


def blocking_time(d_a1: float, v_attacker: float, v_defender: float) -> float:
    """Time a defender running with the attacker can keep it covered."""
    _check_speeds(v_defender, v_attacker)
    if d_a1 < 0:
        raise ValueError(f"remaining swath must be non-negative, got {d_a1}")
    return d_a1 / (v_attacker - v_defender)


def gap_closable(t: float, gap: float, v1: float, v2: float) -> bool:
    """Can two defenders approaching at ``v1 + v2`` close ``gap`` within ``t``?"""
    if gap <= 0:
        return True
    closing = v1 + v2
    if closing <= 0:
        return False
    return t >= gap / closing


def gamma(v_agent: float, v_attacker: float) -> float:
    _check_speeds(v_agent, v_attacker)
    return 2.0 * v_agent / (v_attacker - v_agent)


def optimal_gap(params: ScenarioParams) -> float:
    """Largest gap two approaching defenders close during one blocking episode."""
    return params.defense_length * gamma(params.defender_speed, params.attacker_speed)


def max_circumference(params: ScenarioParams) -> float:
    n = params.defender_count
    return n * params.defense_length + (n - 1) * optimal_gap(params)


class Verdict(NamedTuple):
    attacker_wins: bool
    margin: float


def attacker_wins(params: ScenarioParams) -> Verdict:
    """``C > C_max``; the margin ``C - C_max`` is positive exactly when the attacker wins."""
    margin = params.circumference - max_circumference(params)
    return Verdict(margin > 0, margin)


def min_defenders(circumference: float, d_agent: float, v_agent: float, v_attacker: float) -> int:
    """Smallest team that holds: least ``n`` with ``C/d <= n + (n-1)*gamma``."""
    if circumference <= 0 or d_agent <= 0:
        raise ValueError("circumference and defense length must be positive")
    g = gamma(v_agent, v_attacker)
    ratio = circumference / d_agent
    if ratio <= 1:
        return 1
    x = (ratio + g) / (1 + g)
    return max(1, math.ceil(x * (1 - _CEIL_SLACK)))


def critical_speed_ratio(circumference: float, d_agent: float, n: int) -> float:
    """Attacker/defender speed ratio above which the attacker wins."""
    excess = circumference / d_agent - n
    if excess <= 0:
        raise NoFiniteThreshold(
            f"{n} swaths of length {d_agent} cover circumference {circumference}"
        )
    return 2.0 * (n - 1) / excess + 1.0


def max_defense_threshold(circumference: float, n: int, v_agent: float, v_attacker: float) -> float:
    """Swath length below which the attacker wins."""
    if n < 1:
        raise ValueError(f"need at least one defender, got {n}")
    return circumference / (n + (n - 1) * gamma(v_agent, v_attacker))


def case_transition_time(params: ScenarioParams) -> float:
    """Time for play starting at a touch point to reach the mid-swath configuration."""
    return 0.5 * blocking_time(params.defense_length, params.attacker_speed, params.defender_speed)


def win_conditions(params: ScenarioParams) -> dict[str, bool]:
    """The attacker-win test phrased four ways (circumference, swath, gamma, speed ratio).

    Denominators that vanish are resolved by the limiting inequality.
    """
    C, n, d = params.circumference, params.defender_count, params.defense_length
    v, va = params.defender_speed, params.attacker_speed
    g = gamma(v, va)
    excess = C / d - n
    if n == 1:
        gamma_form = excess > 0
    else:
        gamma_form = g < excess / (n - 1)
    if excess <= 0:
        speed_form = False
    elif v == 0:
        speed_form = True
    else:
        speed_form = va / v > 2 * (n - 1) / excess + 1
    return {
        "circumference": C / d > n + (n - 1) * g,
        "defense_length": d < C / (n + (n - 1) * g),
        "gamma": gamma_form,
        "speed_ratio": speed_form,
    }


@dataclass(frozen=True)
class AnalyticReport:
    gamma: float
    optimal_gap: float
    max_circumference: float
    attacker_wins: bool
    margin: float
    min_defenders: int
    max_defense_length_threshold: float
    critical_speed_ratio: Optional[float]
    case_transition_time: float

    def as_dict(self) -> dict:
        return {
            "gamma": self.gamma,
            "optimal_gap": self.optimal_gap,
            "max_circumference": self.max_circumference,
            "attacker_wins": self.attacker_wins,
            "margin": self.margin,
            "min_defenders": self.min_defenders,
            "max_defense_length_threshold": self.max_defense_length_threshold,
            "critical_speed_ratio": self.critical_speed_ratio,
            "case_transition_time": self.case_transition_time,
        }


def analyze(params: ScenarioParams) -> AnalyticReport:
    params.check()
    C, n, d = params.circumference, params.defender_count, params.defense_length
    v, va = params.defender_speed, params.attacker_speed
    verdict = attacker_wins(params)
    try:
        ratio: Optional[float] = critical_speed_ratio(C, d, n)
    except NoFiniteThreshold:
        ratio = None
    return AnalyticReport(
        gamma=gamma(v, va),
        optimal_gap=optimal_gap(params),
        max_circumference=max_circumference(params),
        attacker_wins=verdict.attacker_wins,
        margin=verdict.margin,
        min_defenders=min_defenders(C, d, v, va),
        max_defense_length_threshold=max_defense_threshold(C, n, v, va),
        critical_speed_ratio=ratio,
        case_transition_time=case_transition_time(params),
    )


# ------------------------------------------------------ extremal configurations

def _interior_gap(params: ScenarioParams) -> float:
    n = params.defender_count
    g = (params.circumference - n * params.defense_length) / (n - 1)
    if params.circumference > max_circumference(params):
        warnings.warn(
            f"circumference {params.circumference} exceeds C_max "
            f"{max_circumference(params)}; defenders cannot hold this configuration",
            ConfigurationWarning,
            stacklevel=3,
        )
    return g


def case1_config(params: ScenarioParams) -> GameState:
    """Attacker at position 0, on the touch point where defender n-1's swath meets defender 0's.

    All other gaps are equal. When the swaths cannot be disjoint
    (``n*d > C``) the defenders are spread evenly with overlap instead.
    """
    params.check()
    C, n, d = params.circumference, params.defender_count, params.defense_length
    if n == 1 or params.full_coverage:
        step = C / n
    else:
        step = d + _interior_gap(params)
    centres = [d / 2 + i * step for i in range(n)]
    return apply_policy(make_state(params, centres, 0.0, blocker_index=0, attacker_direction=1))


def case2_config(params: ScenarioParams) -> GameState:
    """Attacker at position 0, the centre of defender 0's swath.

    The two gaps flanking defender 0 are half the interior gap.
    """
    params.check()
    C, n, d = params.circumference, params.defender_count, params.defense_length
    if n == 1 or params.full_coverage:
        centres = [i * C / n for i in range(n)]
    else:
        g = _interior_gap(params)
        centres = [0.0] + [d + g / 2 + (i - 1) * (d + g) for i in range(1, n)]
    return apply_policy(make_state(params, centres, 0.0, blocker_index=0, attacker_direction=1))
