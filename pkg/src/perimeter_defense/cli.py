"""Command-line front end.

Exit codes: 0 defenders hold, 1 attacker wins, 2 invalid input,
3 verification failure.
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings
from typing import Optional, Sequence

from .analytic import ConfigurationWarning, analyze, case1_config, case2_config
from .engine import Breach, SimOutcome, simulate, write_trace_csv
from .geometry import GeometryError
from .model import AttackerStrategy, InvalidScenario, Scenario, ScenarioParams, load_scenario, validate
from .search import DEFAULT_MAX_SWITCHES, SearchBudgetExceeded
from .strategy import GameDecided
from .sweep import AXES, SweepSpec, run_sweep, write_sweep_csv
from .verify import run_verify

EXIT_HOLD, EXIT_BREACH, EXIT_INVALID, EXIT_VERIFY = 0, 1, 2, 3

_PARAM_FLAGS = {
    "circumference": "circumference",
    "defenders": "defender_count",
    "defense_length": "defense_length",
    "defender_speed": "defender_speed",
    "attacker_speed": "attacker_speed",
}


class UsageError(Exception):
    pass


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _direction(text: str) -> int:
    if text in ("+1", "1"):
        return 1
    if text == "-1":
        return -1
    raise argparse.ArgumentTypeError(f"direction must be +1 or -1, got {text!r}")


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _scenario_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("scenario")
    g.add_argument("--scenario", metavar="PATH", help="scenario JSON file; flags override its values")
    g.add_argument("--circumference", type=float)
    g.add_argument("--defenders", type=int, help="number of defenders")
    g.add_argument("--defense-length", type=float)
    g.add_argument("--defender-speed", type=float)
    g.add_argument("--attacker-speed", type=float)


def _oracle_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-switches", type=int, default=DEFAULT_MAX_SWITCHES,
                   help="heading changes the searched attacker may make (default 3)")
    p.add_argument("--grid", type=float, help="switch-time grid step (default 0.05*d/va)")
    p.add_argument("--horizon-mult", type=float, default=10.0,
                   help="horizon as a multiple of C/(va - v) (default 10)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="perimeter-defense",
        description="Closed-form analysis and exact simulation of perimeter defense on a circle.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="closed-form verdict and thresholds")
    _scenario_args(p)
    p.add_argument("--json", action="store_true", help="print JSON instead of a table")

    p = sub.add_parser("simulate", help="event-driven run; trace CSV and a verdict line")
    _scenario_args(p)
    p.add_argument("--config", choices=("case1", "case2"))
    p.add_argument("--attacker-dir", type=_direction, help="+1 or -1")
    p.add_argument("--switch-times", type=_float_list, help="comma-separated heading change times")
    p.add_argument("--horizon-mult", type=float, default=10.0,
                   help="horizon as a multiple of C/(va - v) (default 10)")
    p.add_argument("--out", metavar="PATH", help="write the trace CSV here instead of stdout")

    p = sub.add_parser("sweep", help="analytic vs searched verdicts along one axis")
    _scenario_args(p)
    p.add_argument("--axis", choices=AXES, required=True)
    p.add_argument("--values", type=_float_list, required=True, help="comma-separated axis values")
    _oracle_args(p)
    p.add_argument("--workers", type=int, default=1, help="processes for independent points")
    p.add_argument("--out", metavar="PATH", help="write the CSV here instead of stdout")

    p = sub.add_parser("verify", help="randomised property suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=100)
    return parser


def resolve_scenario(args: argparse.Namespace) -> Scenario:
    """Scenario file (if any) with flag overrides applied, validated."""
    values: dict = {}
    base: Optional[Scenario] = None
    if args.scenario:
        base = load_scenario(args.scenario)
        values = {
            "circumference": base.params.circumference,
            "defender_count": base.params.defender_count,
            "defense_length": base.params.defense_length,
            "defender_speed": base.params.defender_speed,
            "attacker_speed": base.params.attacker_speed,
        }
    for flag, name in _PARAM_FLAGS.items():
        value = getattr(args, flag)
        if value is not None:
            values[name] = value
    missing = [name for name in _PARAM_FLAGS.values() if name not in values]
    if missing:
        raise InvalidScenario(f"missing scenario field(s): {', '.join(missing)}")
    params = ScenarioParams(**values)
    report = validate(params)
    if not report.ok:
        raise InvalidScenario("; ".join(report.violations))

    config = base.initial_config if base else "case1"
    strategy = base.attacker_strategy if base else AttackerStrategy()
    if getattr(args, "config", None):
        config = args.config
    direction = getattr(args, "attacker_dir", None)
    switches = getattr(args, "switch_times", None)
    if direction is not None or switches is not None:
        strategy = AttackerStrategy(
            strategy.initial_direction if direction is None else direction,
            strategy.switch_times if switches is None else switches,
        )
    return Scenario(params, config, strategy)


def verdict_line(outcome: SimOutcome) -> str:
    v = outcome.verdict
    if isinstance(v, Breach):
        return f"VERDICT breach t={_fmt(v.time)} pos={_fmt(v.position)}"
    return f"VERDICT defended t={_fmt(v.horizon)} pos=-"


def cmd_analyze(args: argparse.Namespace) -> int:
    scenario = resolve_scenario(args)
    report = analyze(scenario.params)
    if args.json:
        doc = {"params": vars(scenario.params).copy(), **report.as_dict()}
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        ratio = report.critical_speed_ratio
        rows = [
            ("gamma", _fmt(report.gamma)),
            ("optimal gap d_gap", _fmt(report.optimal_gap)),
            ("max circumference C_max", _fmt(report.max_circumference)),
            ("verdict", "attacker wins" if report.attacker_wins else "defenders hold"),
            ("margin C - C_max", _fmt(report.margin)),
            ("min defenders", str(report.min_defenders)),
            ("defense length threshold", _fmt(report.max_defense_length_threshold)),
            ("critical speed ratio", "none (swaths cover the boundary)" if ratio is None else _fmt(ratio)),
            ("case transition time t_12", _fmt(report.case_transition_time)),
        ]
        width = max(len(k) for k, _ in rows)
        for k, v in rows:
            print(f"{k:<{width}}  {v}")
    return EXIT_BREACH if report.attacker_wins else EXIT_HOLD


def cmd_simulate(args: argparse.Namespace) -> int:
    scenario = resolve_scenario(args)
    p = scenario.params
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ConfigurationWarning)
        start = case1_config(p) if scenario.initial_config == "case1" else case2_config(p)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    horizon = args.horizon_mult * p.circumference / (p.attacker_speed - p.defender_speed)
    outcome = simulate(p, start, scenario.attacker_strategy, horizon)
    if args.out:
        write_trace_csv(outcome, args.out)
    else:
        write_trace_csv(outcome, sys.stdout)
    print(verdict_line(outcome))
    return EXIT_BREACH if outcome.breached else EXIT_HOLD


def cmd_sweep(args: argparse.Namespace) -> int:
    scenario = resolve_scenario(args)
    spec = SweepSpec(scenario.params, args.axis, args.values, args.max_switches, args.grid, args.horizon_mult)
    rows = run_sweep(spec, workers=args.workers)
    if args.out:
        write_sweep_csv(rows, args.out)
    else:
        write_sweep_csv(rows, sys.stdout)
    bad = [r for r in rows if not r.in_band and not r.agrees]
    for r in bad:
        print(f"disagreement at {args.axis}={_fmt(r.axis_value)}", file=sys.stderr)
    return EXIT_VERIFY if bad else EXIT_HOLD


def cmd_verify(args: argparse.Namespace) -> int:
    if args.count < 1:
        raise UsageError(f"--count must be at least 1, got {args.count}")
    report = run_verify(args.seed, args.count)
    print(report.format())
    return EXIT_HOLD if report.ok else EXIT_VERIFY


COMMANDS = {"analyze": cmd_analyze, "simulate": cmd_simulate, "sweep": cmd_sweep, "verify": cmd_verify}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (InvalidScenario, UsageError, GeometryError, GameDecided, SearchBudgetExceeded, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
