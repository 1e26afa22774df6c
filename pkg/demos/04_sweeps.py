# Sweeping one parameter and comparing searched play with the closed form.
#
# A coarser grid and shorter horizon than the defaults keep this quick.

import sys

from perimeter_defense import ScenarioParams, SweepSpec, run_sweep
from perimeter_defense.sweep import write_sweep_csv

base = ScenarioParams(10, 3, 2, 1, 3)

sweeps = [
    ("circumference", (9.0, 9.5, 10.0, 10.5, 11.0)),
    ("defender_count", (2, 3, 4)),
    ("speed_ratio", (2.5, 3.0, 3.5)),
]
for axis, values in sweeps:
    rows = run_sweep(SweepSpec(base, axis, values, grid=0.1, horizon_mult=3))
    print(f"# {axis}")
    write_sweep_csv(rows, sys.stdout)
    flags = "".join("B" if r.simulated_wins else "." for r in rows)
    print(f"# verdicts {flags}, all agree: {all(r.agrees or r.in_band for r in rows)}\n")
