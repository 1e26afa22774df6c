# The randomised property suite that backs the CLI's verify command.

from perimeter_defense import run_verify

report = run_verify(seed=42, count=20)
print(report.format())
