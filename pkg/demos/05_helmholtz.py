"""
Helmholtz conditions
====================

Check whether a second order equation Phi(t, x, v, a) = 0 follows from a
Lagrangian as written.
"""
from gaugeforge import helmholtz_check
from gaugeforge.expr import parse

for ode in ("a + 4*x", "a + c*x", "t^2*a + 2*t*v + x", "a + 0.3*v + 4*x"):
    report = helmholtz_check(parse(ode), seed=0)
    verdicts = ", ".join(f"{c.name}={'ok' if c.passed else 'FAIL'}" for c in report.conditions)
    print(f"{ode:22s} overall={report.overall}  {verdicts}")
