from __future__ import annotations

from .nodes import (
    VARIABLES,
    Add,
    Const,
    Cos,
    Div,
    Exp,
    Expr,
    Mul,
    Neg,
    Number,
    Pow,
    Sin,
    Sub,
    Var,
    A,
    V,
    ZERO,
    variables,
)
from .simplify import simplify


def diff(e: Expr, var: str) -> Expr:
    """Partial derivative of ``e`` with respect to the variable ``var``.

    The other variables are held fixed. Constants differentiate to zero.
    """
    if var not in VARIABLES:
        raise ValueError(f"can only differentiate with respect to {VARIABLES}, not {var!r}")
    return simplify(_d(e, var))


def _d(e, var):
    if isinstance(e, (Number, Const)):
        return ZERO
    if isinstance(e, Var):
        return Number(1) if e.name == var else ZERO
    if isinstance(e, Neg):
        return Neg(_d(e.arg, var))
    if isinstance(e, Add):
        return Add(_d(e.left, var), _d(e.right, var))
    if isinstance(e, Sub):
        return Sub(_d(e.left, var), _d(e.right, var))
    if isinstance(e, Mul):
        return Add(Mul(_d(e.left, var), e.right), Mul(e.left, _d(e.right, var)))
    if isinstance(e, Div):
        # (u/w)' = u'/w - u w'/w^2
        u, w = e.left, e.right
        return Sub(Div(_d(u, var), w), Div(Mul(u, _d(w, var)), Pow(w, 2)))
    if isinstance(e, Pow):
        n = e.exponent
        if n == 0:
            return ZERO
        return Mul(Mul(Number(n), Pow(e.base, n - 1)), _d(e.base, var))
    if isinstance(e, Sin):
        return Mul(Cos(e.arg), _d(e.arg, var))
    if isinstance(e, Cos):
        return Neg(Mul(Sin(e.arg), _d(e.arg, var)))
    if isinstance(e, Exp):
        return Mul(e, _d(e.arg, var))
    raise TypeError(f"unknown node {e!r}")


def total_time_derivative(e: Expr) -> Expr:
    """d/dt along a path: ``de/dt + v*de/dx + a*de/dv``.

    ``e`` may depend on t, x and v; the result may additionally contain
    ``a``, but only when ``e`` depends on ``v``.
    """
    if "a" in variables(e):
        raise ValueError("total_time_derivative expects an expression in t, x, v only")
    raw = Add(Add(_d(e, "t"), Mul(V, _d(e, "x"))), Mul(A, _d(e, "v")))
    return simplify(raw)
