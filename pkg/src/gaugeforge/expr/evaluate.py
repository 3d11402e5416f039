from __future__ import annotations

import math
from typing import Callable, Mapping

import numpy as np

from ..errors import DomainError, UnboundSymbol
from .nodes import (
    BUILTIN_CONSTANTS,
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
)


def _lookup(name, bindings):
    if name in bindings:
        return float(bindings[name])
    if name in BUILTIN_CONSTANTS:
        return BUILTIN_CONSTANTS[name]
    raise UnboundSymbol(name)


def evaluate(e: Expr, bindings: Mapping[str, float]) -> float:
    """Evaluate ``e`` in IEEE double arithmetic.

    Raises :class:`UnboundSymbol` for a missing name and
    :class:`DomainError` on division by zero, ``0^negative``, overflow or
    any other non-finite intermediate.
    """
    result = _eval(e, bindings)
    return result


def _eval(e, b):
    if isinstance(e, Number):
        try:
            r = float(e.value)
        except OverflowError as exc:
            raise DomainError(f"literal {e!r} overflows") from exc
    elif isinstance(e, (Var, Const)):
        r = _lookup(e.name, b)
    elif isinstance(e, Add):
        r = _eval(e.left, b) + _eval(e.right, b)
    elif isinstance(e, Sub):
        r = _eval(e.left, b) - _eval(e.right, b)
    elif isinstance(e, Mul):
        r = _eval(e.left, b) * _eval(e.right, b)
    elif isinstance(e, Div):
        num, den = _eval(e.left, b), _eval(e.right, b)
        if den == 0.0:
            raise DomainError(f"division by zero in {e}")
        r = num / den
    elif isinstance(e, Neg):
        r = -_eval(e.arg, b)
    elif isinstance(e, Pow):
        base = _eval(e.base, b)
        if base == 0.0 and e.exponent < 0:
            raise DomainError(f"zero raised to negative power in {e}")
        try:
            r = base**e.exponent
        except OverflowError as exc:
            raise DomainError(f"overflow in {e}") from exc
    elif isinstance(e, Sin):
        r = math.sin(_eval(e.arg, b))
    elif isinstance(e, Cos):
        r = math.cos(_eval(e.arg, b))
    elif isinstance(e, Exp):
        try:
            r = math.exp(_eval(e.arg, b))
        except OverflowError as exc:
            raise DomainError(f"overflow in {e}") from exc
    else:
        raise TypeError(f"unknown node {e!r}")
    if not math.isfinite(r):
        raise DomainError(f"non-finite value while evaluating {e}")
    return r


def compile_expr(e: Expr) -> Callable[[Mapping], np.ndarray]:
    """Vectorised evaluator: returns ``f(bindings)`` accepting arrays.

    Bindings may mix scalars and equally shaped arrays. The result always
    has the broadcast shape of the inputs. Floating point exceptions raise
    :class:`DomainError` exactly as :func:`evaluate` does.
    """
    fn = _compile(e)

    def run(bindings):
        with np.errstate(all="raise"):
            try:
                out = fn(bindings)
            except FloatingPointError as exc:
                raise DomainError(f"{exc} while evaluating {e}") from exc
        return out

    return run


def _compile(e):
    if isinstance(e, Number):
        value = float(e.value)
        return lambda b: value
    if isinstance(e, (Var, Const)):
        name = e.name

        def lookup(b):
            if name in b:
                return np.asarray(b[name], dtype=float)
            if name in BUILTIN_CONSTANTS:
                return BUILTIN_CONSTANTS[name]
            raise UnboundSymbol(name)

        return lookup
    if isinstance(e, Neg):
        f = _compile(e.arg)
        return lambda b: np.negative(f(b))
    if isinstance(e, (Add, Sub, Mul, Div)):
        op = {Add: np.add, Sub: np.subtract, Mul: np.multiply, Div: np.divide}[type(e)]
        f, g = _compile(e.left), _compile(e.right)
        return lambda b: op(f(b), g(b))
    if isinstance(e, Pow):
        f, n = _compile(e.base), e.exponent
        if n < 0:
            return lambda b: np.divide(1.0, np.power(f(b), -n))
        return lambda b: np.power(f(b), n)
    if isinstance(e, (Sin, Cos, Exp)):
        op = {Sin: np.sin, Cos: np.cos, Exp: np.exp}[type(e)]
        f = _compile(e.arg)
        return lambda b: op(f(b))
    raise TypeError(f"unknown node {e!r}")
