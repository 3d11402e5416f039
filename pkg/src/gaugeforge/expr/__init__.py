"""Symbolic expressions in t, x, v (velocity) and a (acceleration)."""
from .derivative import diff, total_time_derivative
from .evaluate import compile_expr, evaluate
from .nodes import (
    BUILTIN_CONSTANTS,
    FUNCTIONS,
    VARIABLES,
    A,
    Add,
    Const,
    Cos,
    Div,
    Exp,
    Expr,
    Mul,
    Neg,
    Number,
    ONE,
    Pow,
    Sin,
    Sub,
    T,
    V,
    Var,
    X,
    ZERO,
    as_expr,
    constants,
    free_symbols,
    substitute,
    to_string,
    variables,
    walk,
)
from .parser import parse, tokenize
from .simplify import is_zero, simplify

__all__ = [
    "A", "Add", "BUILTIN_CONSTANTS", "Const", "Cos", "Div", "Exp", "Expr", "FUNCTIONS",
    "Mul", "Neg", "Number", "ONE", "Pow", "Sin", "Sub", "T", "V", "VARIABLES", "Var",
    "X", "ZERO", "as_expr", "compile_expr", "constants", "diff", "evaluate",
    "free_symbols", "is_zero", "parse", "simplify", "substitute", "to_string",
    "tokenize", "total_time_derivative", "variables", "walk",
]
