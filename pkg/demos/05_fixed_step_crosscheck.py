# An independent fixed-step integrator against the exact engine.
#
# With constant headings every event lands on the same time in both, so
# the interesting case is a turn that falls between two steps: the error
# then shrinks in proportion to dt.

import warnings

from perimeter_defense import (
    AttackerStrategy,
    ConfigurationWarning,
    ScenarioParams,
    case1_config,
    fixed_step_simulate,
    simulate,
)

p = ScenarioParams(10.1, 3, 2, 1, 3)
with warnings.catch_warnings():
    warnings.simplefilter("ignore", ConfigurationWarning)
    start = case1_config(p)

turn = AttackerStrategy(1, (0.73333333,))
exact = simulate(p, start, turn, horizon=20).verdict
print("exact:", exact)
for dt in (1e-2, 1e-3, 1e-4, 1e-5):
    got = fixed_step_simulate(p, start, turn, dt, horizon=20).verdict
    err = abs(got.time - exact.time)
    print(f"dt={dt:g}: breach t={got.time:.8f}  error={err:.2e}  (va*dt={p.attacker_speed * dt:.0e})")
