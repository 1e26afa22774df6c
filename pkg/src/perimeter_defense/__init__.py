"""Perimeter defense on a circular boundary: closed forms and exact simulation."""
from .analytic import (
    AnalyticReport,
    ConfigurationWarning,
    NoFiniteThreshold,
    analyze,
    attacker_wins,
    blocking_time,
    case1_config,
    case2_config,
    case_transition_time,
    critical_speed_ratio,
    gamma,
    gap_closable,
    max_circumference,
    max_defense_threshold,
    min_defenders,
    optimal_gap,
    win_conditions,
)
from .engine import (
    Breach,
    Defended,
    Event,
    EventKind,
    EventLimitExceeded,
    SimOutcome,
    default_horizon,
    next_event,
    simulate,
    trace_csv,
    write_trace_csv,
)
from .fixed_step import fixed_step_simulate
from .geometry import EPS, CircInterval, CircPos, CoordinationError, GeometryError, contains, directed_arc, gap_after, wrap
from .model import (
    AgentState,
    AttackerStrategy,
    GameState,
    InvalidScenario,
    Scenario,
    ScenarioParams,
    ValidationReport,
    defended_interval,
    gaps,
    load_scenario,
    make_state,
    signed_gaps,
    validate,
)
from .search import SearchBudgetExceeded, SearchResult, brute_force_attacker, episode_settings
from .strategy import (
    DirectionAssignment,
    GameDecided,
    HandoffError,
    apply_policy,
    constant_attacker,
    defender_policy,
    handoff,
    mirror_state,
)
from .sweep import SweepRow, SweepSpec, run_sweep, sweep_csv, write_sweep_csv
from .verify import VerifyReport, run_verify

__version__ = "0.1.0"
