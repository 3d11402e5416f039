"""
Energy functions, forces and the driven Lagrangian
==================================================

The null Lagrangian leaves the equation of motion alone but changes the
energy function. The same gauge functions define a force F(t) and an
energy shift G(t); moving them into the Lagrangian as F x + G drives the
oscillator.
"""
from gaugeforge import (
    GaugeSet,
    LagrangianSpec,
    classify_gauges,
    convert_to_driven,
    energy_decomposition,
    euler_lagrange,
    extract_force,
    primary_gauge,
)

# Constant gauge: E = (v^2 + omega0^2 x^2)/2 - (C2 x + C6)
spec = LagrangianSpec(gauge=primary_gauge("C1", "C2", "C4", "C6"))
E = energy_decomposition(spec)
print("E_gs =", E.standard)
print("E_gf =", E.gauge)
print("roles:", classify_gauges(spec.gauge).roles())

# A general gauge set
g = GaugeSet("0.1*t", "sin(nu*t)", "t^2", "t")
force, shift = extract_force(g)
print("F(t) =", force)
print("G(t) =", shift)
print("roles:", classify_gauges(g).roles())
print("E_gf =", energy_decomposition(LagrangianSpec(gauge=g)).gauge)

# Driven form L_gs + F x + G and its equation of motion
driven = convert_to_driven(LagrangianSpec(gauge=g))
print("L    =", driven.assembled())
print("E-L  =", euler_lagrange(driven.assembled()).residual)
