"""
Null Lagrangians from gauge functions
=====================================

Build the gauge function Phi = f1 x^2/2 + f2 x t + f4 x + f6 t, take its
total time derivative and certify that the Euler-Lagrange expression of
the result vanishes identically.
"""
from gaugeforge import GaugeSet, euler_lagrange, is_null, null_lagrangian_from_gauge, primary_gauge
from gaugeforge.expr import parse
from gaugeforge.gauge import gauge_scalar

# Constant coefficients give the primary null Lagrangian
g = primary_gauge("C1", "C2", "C4", "C6")
print("Phi  =", gauge_scalar(g))
print("L_n  =", null_lagrangian_from_gauge(g))

# Time dependent coefficients work the same way
g = GaugeSet("t", "sin(2*t)", "t^2", "exp(-t)")
L = null_lagrangian_from_gauge(g)
print("L_g  =", L)
print("E-L  =", euler_lagrange(L).residual)
print("certificate:", is_null(L).kind)

# Adding x t breaks the null condition: E-L gives -t, and a witness is returned
bad = parse("C1*v*x + C2*v*t + x*t + C4*v + C2*x + C6")
cert = is_null(bad, seed=0)
print("with x*t:", cert.kind, "residual", cert.residual, "witness t =", round(cert.witness["t"], 3))
