"""Immutable expression tree over the variables t, x, v (=dx/dt) and a (=d2x/dt2)."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import math
import numbers

VARIABLES = ("t", "x", "v", "a")
FUNCTIONS = ("sin", "cos", "exp")
#: Constants with a fixed value; every other constant name must be bound.
BUILTIN_CONSTANTS = {"pi": math.pi}

# binding power used by the printer; higher binds tighter
_PREC_SUM = 1
_PREC_PRODUCT = 2
_PREC_UNARY = 3
_PREC_POWER = 4
_PREC_ATOM = 5


def to_fraction(value) -> Fraction:
    """Exact rational for a numeric literal.

    Floats go through their shortest repr so ``0.1`` becomes 1/10 rather
    than the nearest binary fraction.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, numbers.Integral):
        return Fraction(int(value))
    if isinstance(value, numbers.Real):
        value = float(value)
        if not math.isfinite(value):
            raise ValueError(f"non-finite literal {value!r}")
        return Fraction(repr(value))
    raise TypeError(f"cannot convert {value!r} to a number")


def format_fraction(q: Fraction) -> str:
    """Decimal text when exact, otherwise ``(p/q)``."""
    if q.denominator == 1:
        return str(q.numerator)
    d = q.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"({q.numerator}/{q.denominator})"
    places = max(twos, fives)
    scaled = abs(q.numerator) * 10**places // q.denominator
    digits = str(scaled).rjust(places + 1, "0")
    text = digits[:-places] + "." + digits[-places:]
    return "-" + text if q < 0 else text


class Expr:
    """Base class for expression nodes.

    Nodes are frozen dataclasses, so ``==`` is structural equality and
    nodes are hashable. Arithmetic operators build new trees without any
    simplification.
    """

    __slots__ = ()
    precedence = _PREC_ATOM

    def __add__(self, other):
        return Add(self, as_expr(other))

    def __radd__(self, other):
        return Add(as_expr(other), self)

    def __sub__(self, other):
        return Sub(self, as_expr(other))

    def __rsub__(self, other):
        return Sub(as_expr(other), self)

    def __mul__(self, other):
        return Mul(self, as_expr(other))

    def __rmul__(self, other):
        return Mul(as_expr(other), self)

    def __truediv__(self, other):
        return Div(self, as_expr(other))

    def __rtruediv__(self, other):
        return Div(as_expr(other), self)

    def __neg__(self):
        return Neg(self)

    def __pow__(self, exponent):
        if not isinstance(exponent, numbers.Integral):
            raise TypeError("only integer exponents are supported")
        return Pow(self, int(exponent))

    def children(self) -> tuple:
        return ()

    def __str__(self):
        return to_string(self)


@dataclass(frozen=True, slots=True)
class Number(Expr):
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", to_fraction(self.value))

    def __repr__(self):
        return f"Number({format_fraction(self.value)})"


@dataclass(frozen=True, slots=True)
class Const(Expr):
    name: str

    def __repr__(self):
        return f"Const({self.name})"


@dataclass(frozen=True, slots=True)
class Var(Expr):
    name: str

    def __post_init__(self):
        if self.name not in VARIABLES:
            raise ValueError(f"{self.name!r} is not one of {VARIABLES}")

    def __repr__(self):
        return f"Var({self.name})"


@dataclass(frozen=True, slots=True)
class Neg(Expr):
    arg: Expr
    precedence = _PREC_UNARY

    def children(self):
        return (self.arg,)


@dataclass(frozen=True, slots=True)
class _Binary(Expr):
    left: Expr
    right: Expr

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, slots=True)
class Add(_Binary):
    precedence = _PREC_SUM
    symbol = "+"


@dataclass(frozen=True, slots=True)
class Sub(_Binary):
    precedence = _PREC_SUM
    symbol = "-"


@dataclass(frozen=True, slots=True)
class Mul(_Binary):
    precedence = _PREC_PRODUCT
    symbol = "*"


@dataclass(frozen=True, slots=True)
class Div(_Binary):
    precedence = _PREC_PRODUCT
    symbol = "/"


@dataclass(frozen=True, slots=True)
class Pow(Expr):
    base: Expr
    exponent: int
    precedence = _PREC_POWER

    def __post_init__(self):
        if isinstance(self.exponent, bool) or not isinstance(self.exponent, numbers.Integral):
            raise TypeError("Pow exponent must be an integer")
        object.__setattr__(self, "exponent", int(self.exponent))

    def children(self):
        return (self.base,)


@dataclass(frozen=True, slots=True)
class _Function(Expr):
    arg: Expr

    def children(self):
        return (self.arg,)


@dataclass(frozen=True, slots=True)
class Sin(_Function):
    fname = "sin"


@dataclass(frozen=True, slots=True)
class Cos(_Function):
    fname = "cos"


@dataclass(frozen=True, slots=True)
class Exp(_Function):
    fname = "exp"


FUNCTION_NODES = {"sin": Sin, "cos": Cos, "exp": Exp}

ZERO = Number(0)
ONE = Number(1)
T, X, V, A = (Var(n) for n in VARIABLES)


def as_expr(value) -> Expr:
    """Coerce numbers to :class:`Number`; strings are parsed."""
    if isinstance(value, Expr):
        return value
    if isinstance(value, str):
        from .parser import parse

        return parse(value)
    return Number(value)


def walk(e: Expr):
    """Pre-order iteration over all nodes."""
    stack = [e]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.children()))


def free_symbols(e: Expr) -> set[str]:
    """Names of all variables and non-builtin constants in ``e``."""
    return {
        n.name
        for n in walk(e)
        if isinstance(n, Var) or (isinstance(n, Const) and n.name not in BUILTIN_CONSTANTS)
    }


def variables(e: Expr) -> set[str]:
    return {n.name for n in walk(e) if isinstance(n, Var)}


def constants(e: Expr) -> set[str]:
    return {n.name for n in walk(e) if isinstance(n, Const) and n.name not in BUILTIN_CONSTANTS}


def substitute(e: Expr, mapping) -> Expr:
    """Replace variables/constants by name. Values are coerced with :func:`as_expr`."""
    mapping = {k: as_expr(val) for k, val in mapping.items()}

    def go(node):
        if isinstance(node, (Var, Const)):
            return mapping.get(node.name, node)
        if isinstance(node, Number):
            return node
        if isinstance(node, Neg):
            return Neg(go(node.arg))
        if isinstance(node, _Binary):
            return type(node)(go(node.left), go(node.right))
        if isinstance(node, Pow):
            return Pow(go(node.base), node.exponent)
        if isinstance(node, _Function):
            return type(node)(go(node.arg))
        raise TypeError(f"unknown node {node!r}")

    return go(e)


def _wrap(text, child, min_prec):
    return f"({text})" if child.precedence < min_prec else text


def to_string(e: Expr) -> str:
    """Render ``e`` in the input grammar with minimal parentheses.

    The output parses back to a structurally identical tree for any tree
    produced by :func:`~gaugeforge.expr.parse`.
    """
    if isinstance(e, Number):
        text = format_fraction(e.value)
        return f"({text})" if e.value < 0 else text
    if isinstance(e, (Var, Const)):
        return e.name
    if isinstance(e, Neg):
        # operand is a grammar factor: unary or power or atom
        return "-" + _wrap(to_string(e.arg), e.arg, _PREC_UNARY)
    if isinstance(e, Pow):
        # base must be an atom
        base = _wrap(to_string(e.base), e.base, _PREC_ATOM)
        return f"{base}^{e.exponent}"
    if isinstance(e, _Function):
        return f"{e.fname}({to_string(e.arg)})"
    if isinstance(e, _Binary):
        left = _wrap(to_string(e.left), e.left, e.precedence)
        right = _wrap(to_string(e.right), e.right, e.precedence + 1)
        return f"{left} {e.symbol} {right}" if e.precedence == _PREC_SUM else f"{left}{e.symbol}{right}"
    raise TypeError(f"unknown node {e!r}")
