"""Shared generators and independent numeric oracles for the tests."""
import math

import numpy as np
from hypothesis import strategies as st

from gaugeforge.expr import Add, Const, Cos, Exp, Mul, Neg, Number, Pow, Sin, Sub, Var, parse
from gaugeforge.gauge import GaugeSet


def _coef(rng, lo=-2.0, hi=2.0):
    value = round(float(rng.uniform(lo, hi)), 2)
    return value if value != 0 else 0.5


def random_time_function(rng) -> str:
    """A degree <= 3 polynomial, a sin/cos combination, or a mix of both."""
    kind = rng.integers(0, 4)
    if kind == 0:
        degree = int(rng.integers(0, 4))
        return " + ".join(f"({_coef(rng)})*t^{k}" for k in range(degree + 1))
    if kind == 1:
        return (f"({_coef(rng)})*sin({_coef(rng, 0.5, 3)}*t) + "
                f"({_coef(rng)})*cos({_coef(rng, 0.5, 3)}*t)")
    if kind == 2:
        return f"(({_coef(rng)}) + ({_coef(rng)})*t)*cos({_coef(rng, 0.5, 3)}*t)"
    return f"({_coef(rng)})*t^2*sin({_coef(rng, 0.5, 3)}*t) + ({_coef(rng)})"


def random_gauge_sets(n, seed=2024):
    rng = np.random.default_rng(seed)
    return [GaugeSet(*(parse(random_time_function(rng)) for _ in range(4))) for _ in range(n)]


# analytic test paths: (x(t), x'(t)) as numpy callables
PATHS = {
    "sin": (np.sin, np.cos),
    "cos2t_plus_t": (lambda t: np.cos(2 * t) + t, lambda t: -2 * np.sin(2 * t) + 1),
    "quadratic": (lambda t: 0.5 * t**2 - t + 0.3, lambda t: t - 1),
    "decay": (lambda t: np.exp(-0.3 * t), lambda t: -0.3 * np.exp(-0.3 * t)),
    "beat": (lambda t: np.sin(t) * np.cos(0.5 * t),
             lambda t: np.cos(t) * np.cos(0.5 * t) - 0.5 * np.sin(t) * np.sin(0.5 * t)),
}


def central_difference(f, t, h=1e-5):
    return (f(t + h) - f(t - h)) / (2 * h)


def magnitude(e, b):
    """Upper bound on the size of intermediates when evaluating ``e``.

    Used to scale floating point tolerances for expressions with
    cancellation.
    """
    if isinstance(e, Number):
        return abs(float(e.value))
    if isinstance(e, (Var, Const)):
        return abs(b[e.name])
    if isinstance(e, Neg):
        return magnitude(e.arg, b)
    if isinstance(e, (Add, Sub)):
        return magnitude(e.left, b) + magnitude(e.right, b)
    if isinstance(e, Mul):
        return magnitude(e.left, b) * magnitude(e.right, b)
    if isinstance(e, Pow):
        return magnitude(e.base, b) ** e.exponent
    if isinstance(e, (Sin, Cos)):
        # absolute error in the argument passes through unamplified
        return max(1.0, magnitude(e.arg, b))
    if isinstance(e, Exp):
        return math.exp(magnitude(e.arg, b))
    raise TypeError(e)


# --- hypothesis strategies --------------------------------------------------

numbers = st.integers(0, 40).map(lambda n: Number(n / 4))
atoms = st.one_of(
    numbers,
    st.sampled_from([Var("t"), Var("x"), Var("v"), Const("c"), Const("k")]),
)


def _extend(children):
    binary = st.tuples(st.sampled_from([Add, Sub, Mul]), children, children).map(
        lambda a: a[0](a[1], a[2]))
    unary = st.tuples(st.sampled_from([Neg, Sin, Cos]), children).map(lambda a: a[0](a[1]))
    power = st.tuples(children, st.integers(0, 3)).map(lambda a: Pow(a[0], a[1]))
    return st.one_of(binary, unary, power)


#: polynomial/trig trees without division or exp, so evaluation is total
expressions = st.recursive(atoms, _extend, max_leaves=12)

bindings = st.fixed_dictionaries({
    name: st.floats(-2.0, 2.0, allow_nan=False) for name in ("t", "x", "v", "c", "k")
})


# --- acceptance bookkeeping -------------------------------------------------

#: "PASS [n] title: detail" lines, printed by the terminal summary hook
ACCEPTANCE_LINES: list[str] = []
