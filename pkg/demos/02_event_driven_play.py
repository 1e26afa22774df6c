# Exact event-driven play.
#
# Velocities are piecewise constant, so every event is a closed-form root
# and the engine jumps from one to the next without a time step.

import warnings

from perimeter_defense import (
    AttackerStrategy,
    ConfigurationWarning,
    EventKind,
    ScenarioParams,
    case1_config,
    signed_gaps,
    simulate,
    trace_csv,
)

p = ScenarioParams(10, 3, 2, 1, 3)
start = case1_config(p)
print("case 1 gaps:", signed_gaps(start))

# at C_max the blocking role passes on exactly as each gap closes
out = simulate(p, start, AttackerStrategy(1), horizon=6, steady_state=False)
for e in out.trace:
    if e.kind == EventKind.HANDOFF:
        print(f"t={e.time:.3f}  {e.subject:24} gaps={[round(g, 6) for g in signed_gaps(e.snapshot)]}")
print(out.verdict)

# just past C_max a gap is still open when the attacker reaches the edge
q = p.replace(circumference=10.1)
with warnings.catch_warnings():
    warnings.simplefilter("ignore", ConfigurationWarning)
    out = simulate(q, case1_config(q), AttackerStrategy(1), horizon=20)
print("\nC=10.1:", out.verdict)

# the whole trace is available as CSV
print()
print(trace_csv(out))
