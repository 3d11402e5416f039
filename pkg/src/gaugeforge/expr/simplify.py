"""Canonicalising simplifier.

Every expression is normalised to a sum of monomials with exact rational
coefficients. A monomial is a product of atoms raised to integer powers,
where an atom is a variable, a constant, ``sin``/``cos``/``exp`` of a
canonical argument, or (only with a negative power) a canonical sum that
could not be cancelled. Products are distributed over sums and positive
powers of sums are expanded, so identical terms always collect.

The rewrite set is fixed and terminating. It knows nothing about
trigonometric identities: ``sin(t)^2 + cos(t)^2 - 1`` stays as it is.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .nodes import (
    VARIABLES,
    Add,
    Const,
    Cos,
    Div,
    Expr,
    Mul,
    Neg,
    Number,
    Pow,
    Sin,
    Sub,
    Var,
    _Function,
    to_string,
)

# A monomial is a sorted tuple of (atom, exponent) pairs; a polynomial maps
# monomials to non-zero Fraction coefficients.
_ZERO_INVERSE = Pow(Number(0), -1)


def simplify(e: Expr) -> Expr:
    """Return the canonical form of ``e``.

    Idempotent, and equal to ``e`` under evaluation wherever ``e`` is
    defined.
    """
    return _to_expr(_norm(e))


def is_zero(e: Expr) -> bool:
    """True when ``e`` simplifies to the literal 0."""
    return not _norm(e)


@lru_cache(maxsize=4096)
def _norm(e):
    if isinstance(e, Number):
        return {(): e.value} if e.value else {}
    if isinstance(e, (Var, Const)):
        return {((e, 1),): Fraction(1)}
    if isinstance(e, Neg):
        return _scale(_norm(e.arg), -1)
    if isinstance(e, Add):
        return _add(_norm(e.left), _norm(e.right))
    if isinstance(e, Sub):
        return _add(_norm(e.left), _scale(_norm(e.right), -1))
    if isinstance(e, Mul):
        return _mul(_norm(e.left), _norm(e.right))
    if isinstance(e, Div):
        return _mul(_norm(e.left), _inverse(_norm(e.right)))
    if isinstance(e, Pow):
        return _power(_norm(e.base), e.exponent)
    if isinstance(e, _Function):
        return _function(type(e), _norm(e.arg))
    raise TypeError(f"unknown node {e!r}")


def _atom_key(atom):
    if isinstance(atom, Const):
        return (0, atom.name)
    if isinstance(atom, Var):
        return (1, str(VARIABLES.index(atom.name)))
    if isinstance(atom, _Function):
        return (2, to_string(atom))
    if isinstance(atom, Pow):
        return (4, to_string(atom))
    return (3, to_string(atom))


def _mono_key(mono):
    degree = sum(abs(n) for _, n in mono)
    return (-degree, tuple((_atom_key(a), -n) for a, n in mono))


def _ordered(poly):
    return sorted(poly.items(), key=lambda item: _mono_key(item[0]))


def _add(p, q):
    out = dict(p)
    for mono, c in q.items():
        total = out.get(mono, 0) + c
        if total:
            out[mono] = total
        else:
            out.pop(mono, None)
    return out


def _scale(p, k):
    if not k:
        return {}
    return {m: c * k for m, c in p.items()}


def _is_sum_atom(atom):
    return not isinstance(atom, (Var, Const, _Function, Pow))


def _mono_mul(m1, m2):
    """Product of two monomials as a polynomial (sums may re-expand)."""
    powers = dict(m1)
    for atom, n in m2:
        total = powers.get(atom, 0) + n
        if total:
            powers[atom] = total
        else:
            powers.pop(atom)
    return _from_powers(powers)


def _from_powers(powers):
    expand = [(a, n) for a, n in powers.items() if n > 0 and _is_sum_atom(a)]
    if not expand:
        mono = tuple(sorted(powers.items(), key=lambda an: _atom_key(an[0])))
        return {mono: Fraction(1)}
    rest = {a: n for a, n in powers.items() if (a, n) not in expand}
    out = _from_powers(rest)
    for atom, n in expand:
        out = _mul(out, _power(_norm(atom), n))
    return out


def _mul(p, q):
    out = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            out = _add(out, _scale(_mono_mul(m1, m2), c1 * c2))
    return out


def _inverse(p):
    if not p:
        return {((_ZERO_INVERSE, 1),): Fraction(1)}
    if len(p) == 1:
        (mono, c), = p.items()
        return _scale(_from_powers({a: -n for a, n in mono}), 1 / c)
    # keep the sum as an opaque atom, scaled so its leading coefficient is 1
    lead = _ordered(p)[0][1]
    monic = _scale(p, 1 / lead)
    return {((_to_expr(monic), -1),): 1 / lead}


def _power(p, n):
    if n < 0:
        return _power(_inverse(p), -n)
    result = {(): Fraction(1)}
    base = p
    while n:
        if n & 1:
            result = _mul(result, base)
        n >>= 1
        if n:
            base = _mul(base, base)
    return result


def _function(node, arg):
    if not arg:
        # sin(0) = 0, cos(0) = exp(0) = 1
        return {} if node is Sin else {(): Fraction(1)}
    sign = 1
    if node in (Sin, Cos) and _ordered(arg)[0][1] < 0:
        arg = _scale(arg, -1)
        sign = -1 if node is Sin else 1
    atom = node(_to_expr(arg))
    return {((atom, 1),): Fraction(sign)}


def _is_decimal(q):
    d = q.denominator
    for p in (2, 5):
        while d % p == 0:
            d //= p
    return d == 1


def _chain(factors, op):
    out = factors[0]
    for f in factors[1:]:
        out = op(out, f)
    return out


def _term(coef, mono, negate):
    """Expression for a single monomial; ``negate`` puts a Neg on the first factor."""
    numer, denom = [], []
    if _is_decimal(coef):
        if coef != 1:
            numer.append(Number(coef))
    else:
        if coef.numerator != 1:
            numer.append(Number(coef.numerator))
        denom.append(Number(coef.denominator))
    for atom, n in mono:
        if n < 0 and _is_sum_atom(atom):
            # a denominator product would be re-expanded into a different sum
            numer.append(Pow(atom, n))
            continue
        target = numer if n > 0 else denom
        target.append(atom if abs(n) == 1 else Pow(atom, abs(n)))
    if not numer:
        numer.append(Number(1))
    if negate:
        numer[0] = Neg(numer[0])
    e = _chain(numer, Mul)
    if denom:
        e = Div(e, _chain(denom, Mul))
    return e


def _to_expr(poly):
    if not poly:
        return Number(0)
    out = None
    for mono, c in _ordered(poly):
        if out is None:
            out = _term(abs(c), mono, negate=c < 0)
        elif c < 0:
            out = Sub(out, _term(-c, mono, False))
        else:
            out = Add(out, _term(c, mono, False))
    return out

