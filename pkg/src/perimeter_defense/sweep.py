"""Parameter sweeps comparing the closed-form verdict with searched play."""
from __future__ import annotations

import csv
import io
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, TextIO, Union

from .analytic import ConfigurationWarning, attacker_wins, case1_config
from .model import InvalidScenario, ScenarioParams, validate
from .search import DEFAULT_MAX_SWITCHES, brute_force_attacker, default_grid

AXES = (
    "circumference",
    "defender_count",
    "defense_length",
    "defender_speed",
    "attacker_speed",
    "speed_ratio",
)

# points closer than this fraction of C to the boundary are reported, not asserted
BAND = 1e-6

CSV_HEADER = (
    "axis_value",
    "analytic_wins",
    "simulated_wins",
    "margin",
    "breach_time",
    "breach_pos",
    "schedules_searched",
)


@dataclass(frozen=True)
class SweepSpec:
    """One axis of ``base`` swept over ``values``.

    ``grid`` and ``horizon_mult`` default to the search defaults: a grid of
    ``0.05*d/va`` and a horizon of ``horizon_mult * C / (va - v)``.
    """

    base: ScenarioParams
    axis: str
    values: tuple[float, ...]
    max_switches: int = DEFAULT_MAX_SWITCHES
    grid: Optional[float] = None
    horizon_mult: float = 10.0

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"unknown sweep axis {self.axis!r}; choose from {', '.join(AXES)}")
        object.__setattr__(self, "values", tuple(self.values))
        if not self.values:
            raise ValueError("sweep needs at least one value")
        for x in self.values:
            if not math.isfinite(x):
                raise ValueError(f"sweep value {x!r} is not finite")

    def point(self, value: float) -> ScenarioParams:
        if self.axis == "speed_ratio":
            params = self.base.replace(attacker_speed=self.base.defender_speed * value)
        elif self.axis == "defender_count":
            if float(value) != int(value):
                raise InvalidScenario(f"defender_count sweep value {value} is not an integer")
            params = self.base.replace(defender_count=int(value))
        else:
            params = self.base.replace(**{self.axis: value})
        report = validate(params)
        if not report.ok:
            raise InvalidScenario(f"{self.axis}={value}: " + "; ".join(report.violations))
        return params

    def points(self) -> list[ScenarioParams]:
        return [self.point(x) for x in self.values]


@dataclass(frozen=True)
class SweepRow:
    axis_value: float
    params: ScenarioParams
    analytic_wins: bool
    simulated_wins: bool
    margin: float
    breach_time: Optional[float]
    breach_pos: Optional[float]
    schedules_searched: int

    @property
    def in_band(self) -> bool:
        """Too close to the boundary for the simulated verdict to be asserted."""
        return abs(self.margin) <= BAND * self.params.circumference

    @property
    def agrees(self) -> bool:
        return self.analytic_wins == self.simulated_wins


def _evaluate(args: tuple[SweepSpec, float]) -> SweepRow:
    spec, value = args
    params = spec.point(value)
    grid = default_grid(params) if spec.grid is None else spec.grid
    horizon = spec.horizon_mult * params.circumference / (params.attacker_speed - params.defender_speed)
    with warnings.catch_warnings():
        # past C_max the extremal start cannot be held, which is the point
        warnings.simplefilter("ignore", ConfigurationWarning)
        start = case1_config(params)
    result = brute_force_attacker(params, start, spec.max_switches, grid, horizon)
    verdict = attacker_wins(params)
    return SweepRow(
        axis_value=value,
        params=params,
        analytic_wins=verdict.attacker_wins,
        simulated_wins=result.breached,
        margin=verdict.margin,
        breach_time=result.breach_time,
        breach_pos=result.breach_position,
        schedules_searched=result.schedules_searched,
    )


def run_sweep(spec: SweepSpec, workers: int = 1) -> list[SweepRow]:
    """Evaluate every point of ``spec``; rows come back in value order.

    Invalid points are rejected before any search starts. With
    ``workers > 1`` points run in separate processes; the rows are identical.
    """
    spec.points()
    jobs = [(spec, x) for x in spec.values]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_evaluate, jobs))
    return [_evaluate(job) for job in jobs]


def single_crossing(flags: Sequence[bool]) -> bool:
    """True when the sequence changes value at most once."""
    return sum(1 for a, b in zip(flags, flags[1:]) if a != b) <= 1


def _fmt(x: Optional[float]) -> str:
    return "" if x is None else f"{x:.12g}"


def write_sweep_csv(rows: Sequence[SweepRow], out: Union[str, Path, TextIO]) -> None:
    if isinstance(out, (str, Path)):
        with open(out, "w", newline="") as fh:
            write_sweep_csv(rows, fh)
        return
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in rows:
        writer.writerow([
            _fmt(r.axis_value),
            int(r.analytic_wins),
            int(r.simulated_wins),
            _fmt(r.margin),
            _fmt(r.breach_time),
            _fmt(r.breach_pos),
            r.schedules_searched,
        ])


def sweep_csv(rows: Sequence[SweepRow]) -> str:
    buf = io.StringIO()
    write_sweep_csv(rows, buf)
    return buf.getvalue()
