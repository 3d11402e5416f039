"""
Expressions, derivatives and the canonical form
===============================================

Parse strings in t, x, v, a and named constants, differentiate them and
take total time derivatives along a path.
"""
import numpy as np

from gaugeforge.expr import compile_expr, diff, evaluate, parse, simplify, to_string, total_time_derivative

# Parsing follows the usual precedence; ^ takes an integer exponent
phi = parse("0.5*C1*x^2 + C2*x*t + sin(t)*x")
print("phi       =", to_string(phi))

# Partial derivatives come back simplified
print("dphi/dx   =", diff(phi, "x"))
print("dphi/dt   =", diff(phi, "t"))

# d/dt = d/dt + v d/dx (+ a d/dv when v appears)
print("dphi/dt|tot =", total_time_derivative(phi))

# simplify brings equal expressions to one canonical tree
a = simplify(parse("(x + 1)^2 - x^2"))
b = simplify(parse("2*x + 1"))
print("(x+1)^2 - x^2 == 2x + 1 :", a == b)

# Scalar and vectorized evaluation
print("phi(t=1, x=2, C1=1, C2=0) =", evaluate(phi, {"t": 1.0, "x": 2.0, "C1": 1.0, "C2": 0.0}))
t = np.linspace(0, 1, 5)
print("vectorized:", compile_expr(phi)({"t": t, "x": np.cos(t), "C1": 1.0, "C2": 0.5}))
