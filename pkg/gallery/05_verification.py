"""
Cross-check everything against everything else.

The identity suite draws random (β, α) and compares closed forms, quadratures
and the amplitude constants. The simulation checks run the two worked
examples to t = 1000.
"""

from qwalk2c.verify import simulation_checks, theorem_consistency_suite

report = theorem_consistency_suite(samples=25, seed=1)
print(report.summary())

for check in simulation_checks():
    mark = "ok " if check.passed else "BAD"
    print(f"{mark} {check.name:<24} {check.value:.3e}  (bound {check.bound:.1e})")
