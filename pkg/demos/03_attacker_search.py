# Searching the attacker's heading schedules.
#
# The attacker may turn at most K times, at multiples of a grid step. The
# search is exhaustive over that family; states reached by different
# schedules are shared, so the cost stays far below the family size.

import time
import warnings

from perimeter_defense import ConfigurationWarning, ScenarioParams, brute_force_attacker, case1_config

p = ScenarioParams(10, 3, 2, 1, 3)

for c in (10.0, 10.1, 11.0):
    q = p.replace(circumference=c)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConfigurationWarning)
        start = case1_config(q)
    t0 = time.perf_counter()
    res = brute_force_attacker(q, start, max_switches=3, grid=0.05, horizon=20)
    took = time.perf_counter() - t0
    print(f"C={c}: {res.schedules_searched:,} schedules, {res.nodes} nodes, {took:.2f}s")
    if res.breached:
        print(f"    breach at t={res.breach_time:.4f} pos={res.breach_position:.4f} via {res.strategy}")
    else:
        print("    no schedule breaks through")
