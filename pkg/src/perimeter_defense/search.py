"""Exhaustive search over attacker heading schedules.

The family searched is every schedule with at most ``K`` heading changes,
each at a positive multiple of the grid step ``delta`` below the horizon,
starting in either direction. The earliest breach wins; ties go to the
lexicographically smallest schedule, with an initial heading of +1 ranking
before -1 and fewer switches before more.

The game is invariant under rotation and relabelling of defenders, and a
schedule's future depends only on the current state, so subtrees are
memoised on a rotation-invariant fingerprint of the state. The result is
the same as enumerating every schedule.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .engine import EventKind, Play, SimOutcome, default_horizon, simulate
from .geometry import EPS
from .model import AttackerStrategy, GameState, ScenarioParams

DEFAULT_MAX_SWITCHES = 3
DEFAULT_NODE_CAP = 1_000_000


class SearchBudgetExceeded(RuntimeError):
    """Too many search nodes; coarsen the grid or lower the switch count."""


def default_grid(params: ScenarioParams) -> float:
    return 0.05 * params.defense_length / params.attacker_speed


def episode_settings(params: ScenarioParams, per_episode: int = 4, laps: float = 2.0) -> tuple[float, float]:
    """Grid and horizon scaled to one blocking episode ``P = d/(va - v)``.

    The grid is ``P/per_episode`` and the horizon ``laps*(n+1)*P``, enough
    for the blocking role to pass round the whole team ``laps`` times. The
    fixed defaults blow up when ``va`` is close to ``v`` (long episodes,
    fine grid); these keep the schedule count independent of the speeds.
    """
    period = params.defense_length / (params.attacker_speed - params.defender_speed)
    return period / per_episode, laps * (params.defender_count + 1) * period


@dataclass(frozen=True)
class SearchResult:
    outcome: Optional[SimOutcome]
    strategy: Optional[AttackerStrategy]
    max_switches: int
    grid: float
    horizon: float
    schedules_searched: int
    nodes: int

    @property
    def breached(self) -> bool:
        return self.outcome is not None

    @property
    def breach_time(self) -> Optional[float]:
        return self.outcome.verdict.time if self.outcome else None

    @property
    def breach_position(self) -> Optional[float]:
        return self.outcome.verdict.position if self.outcome else None


def family_size(max_switches: int, grid_points: int) -> int:
    """Number of schedules in the family (both initial headings)."""
    return 2 * sum(math.comb(grid_points, k) for k in range(min(max_switches, grid_points) + 1))


# memo entry: (breach_tau, switch_indices) or (None, covered_horizon)
_Entry = tuple


class _Searcher:
    def __init__(self, params: ScenarioParams, grid: float, horizon: float,
                 grid_points: int, node_cap: int, eps: float):
        self.grid = grid
        self.horizon = horizon
        self.grid_points = grid_points
        self.node_cap = node_cap
        self.nodes = 0
        self.quantum = 1e-10 * max(params.circumference, 1.0)
        self.leaf_memo: dict[tuple, _Entry] = {}
        self.node_memo: dict[tuple, _Entry] = {}

    def _tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.node_cap:
            raise SearchBudgetExceeded(
                f"schedule search exceeded {self.node_cap} nodes; coarsen the grid"
            )

    @staticmethod
    def _tol(tau: float) -> float:
        return 1e-12 * max(1.0, abs(tau))

    @staticmethod
    def _recall(entry: Optional[_Entry], remaining: float, limit: float):
        """Memo answer for a subtree, or ``None`` when it must be searched."""
        if entry is None:
            return None
        tau, extra = entry
        if tau is not None:
            return (tau, extra) if tau <= remaining else (None, ())
        if limit <= extra:
            return (None, ())
        return None

    def leaf(self, play: Play, remaining: float, bound: float, key: Optional[tuple] = None) -> Optional[float]:
        """Earliest breach (relative time) with no further heading change."""
        key = play.key(self.quantum) if key is None else key
        limit = min(remaining, bound)
        hit = self.leaf_memo.get(key)
        if hit is not None:
            tau, covered = hit
            if tau is not None:
                return tau if tau <= remaining else None
            if limit <= covered:
                return None
        self._tick()
        p = play.copy()
        t0 = p.t
        until = t0 + limit
        seen: set[tuple] = set()
        tau: Optional[float] = None
        covered = limit
        while True:
            kind, _ = p.step(until)
            if kind == EventKind.BREACH:
                tau = p.t - t0
                break
            if kind == EventKind.HORIZON_REACHED:
                break
            if kind == EventKind.HANDOFF:
                k = p.key(self.quantum)
                if k in seen:
                    covered = math.inf
                    break
                seen.add(k)
        self.leaf_memo[key] = (tau, None) if tau is not None else (None, covered)
        return tau

    def solve(self, play: Play, k: int, index: int, bound: float,
              key: Optional[tuple] = None) -> tuple[Optional[float], tuple[int, ...]]:
        """Earliest breach from a grid node with ``k`` switches left.

        ``index`` is the node's grid index; returned switch indices are
        relative to it. Breaches at or after ``bound`` are not sought.
        """
        remaining = self.horizon - index * self.grid
        key = play.key(self.quantum) if key is None else key
        if k == 0 or index + 1 > self.grid_points:
            return self.leaf(play, remaining, bound, key), ()

        limit = min(remaining, bound)
        hit = self._recall(self.node_memo.get((k, key)), remaining, limit)
        if hit is not None:
            return hit
        self._tick()

        best_tau = self.leaf(play, remaining, bound, key)
        best_sched: tuple[int, ...] = ()
        cur = play.copy()
        t0 = cur.t
        i = 0
        visited: set[tuple] = set()
        while index + i + 1 <= self.grid_points:
            i += 1
            t_i = i * self.grid
            ceiling = bound if best_tau is None else min(bound, best_tau - self._tol(best_tau))
            if t_i >= ceiling:
                break
            # the constant-heading path is breach-free up to here (the leaf saw to it)
            while True:
                kind, _ = cur.step(t0 + t_i)
                if kind == EventKind.HORIZON_REACHED or kind == EventKind.BREACH:
                    break
            if kind == EventKind.BREACH:
                break
            # A grid state seen earlier on this path only offers the same
            # futures later, so no later switch can beat what was found.
            here = cur.key(self.quantum)
            if here in visited:
                break
            visited.add(here)
            # flipping changes only the heading, which leads the key
            child_key = (-here[0],) + here[1:]
            if k > 1 and index + i + 1 <= self.grid_points:
                hit = self._recall(self.node_memo.get((k - 1, child_key)),
                                   self.horizon - (index + i) * self.grid, ceiling - t_i)
                if hit is not None and hit[0] is None:
                    continue
            child = cur.copy()
            child.flip()
            tau_c, sched_c = self.solve(child, k - 1, index + i, ceiling - t_i, child_key)
            if tau_c is not None and t_i + tau_c < ceiling:
                best_tau = t_i + tau_c
                best_sched = (i,) + tuple(i + x for x in sched_c)

        if best_tau is not None:
            self.node_memo[(k, key)] = (best_tau, best_sched)
        else:
            self.node_memo[(k, key)] = (None, limit)
        return best_tau, best_sched


def brute_force_attacker(
    params: ScenarioParams,
    config: GameState,
    max_switches: int = DEFAULT_MAX_SWITCHES,
    grid: Optional[float] = None,
    horizon: Optional[float] = None,
    *,
    node_cap: int = DEFAULT_NODE_CAP,
    eps: float = EPS,
) -> SearchResult:
    """Earliest breach over all schedules with at most ``max_switches`` heading changes.

    Switches happen at multiples of ``grid`` strictly inside ``(0, horizon)``.
    Returns the winning schedule replayed through :func:`simulate`, or no
    outcome when every schedule is held.
    """
    if max_switches < 0:
        raise ValueError("max_switches must be non-negative")
    grid = default_grid(params) if grid is None else grid
    horizon = default_horizon(params) if horizon is None else horizon
    if not grid > 0 or not horizon > 0:
        raise ValueError("grid and horizon must be positive")
    grid_points = max(math.ceil(horizon / grid) - 1, 0)
    searcher = _Searcher(params, grid, horizon, grid_points, node_cap, eps)

    best: Optional[tuple[float, int, tuple[int, ...]]] = None
    for rank, direction in enumerate((1, -1)):
        root = Play(config, (), eps)
        root.t = 0.0
        if root.s != direction:
            root.flip()
        bound = math.inf if best is None else best[0] - searcher._tol(best[0])
        tau, sched = searcher.solve(root, max_switches, 0, bound)
        if tau is not None and (best is None or tau < bound):
            best = (tau, rank, sched)

    size = family_size(max_switches, grid_points)
    if best is None:
        return SearchResult(None, None, max_switches, grid, horizon, size, searcher.nodes)
    _, rank, sched = best
    strategy = AttackerStrategy((1, -1)[rank], tuple(i * grid for i in sched))
    outcome = simulate(params, config, strategy, horizon, steady_state=False, eps=eps)
    return SearchResult(outcome if outcome.breached else None, strategy, max_switches,
                        grid, horizon, size, searcher.nodes)
