# Closed-form win conditions for n defenders guarding a circle.
#
# Three defenders with swaths of length 2 move at speed 1; the attacker
# runs along the boundary at speed 3.

from perimeter_defense import ScenarioParams, analyze, max_circumference, min_defenders

p = ScenarioParams(circumference=10, defender_count=3, defense_length=2,
                   defender_speed=1, attacker_speed=3)

report = analyze(p)
for name, value in report.as_dict().items():
    print(f"{name:>30}: {value}")

# C_max is the largest circle the team can hold. Anything bigger and the
# attacker wins by running in one direction.
print()
for c in (9.5, 10.0, 10.5):
    q = p.replace(circumference=c)
    print(f"C={c:5}: C_max={max_circumference(q):g}  attacker wins: {analyze(q).attacker_wins}")

# how many defenders a bigger circle needs
print()
for c in (10, 20, 40, 80):
    print(f"C={c:3}: need {min_defenders(c, 2, 1, 3)} defenders")

# a slow team (v -> 0) can only hold what its swaths cover outright
still = p.replace(defender_speed=0.0)
print("\nstatic team C_max:", max_circumference(still), "= n*d")
