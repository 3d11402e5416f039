"""Recursive-descent parser for the expression grammar.

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := '-' factor | atom ('^' integer)?
    atom   := number | ident | ident '(' expr ')' | '(' expr ')'

Whitespace is insignificant. A leading '-' is also accepted on the
exponent so that printed negative powers read back.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, NamedTuple

from ..errors import ExprSyntaxError, UnknownIdentifier
from .nodes import (
    BUILTIN_CONSTANTS,
    FUNCTION_NODES,
    VARIABLES,
    Add,
    Const,
    Div,
    Expr,
    Mul,
    Neg,
    Number,
    Pow,
    Sub,
    Var,
)

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


class Token(NamedTuple):
    kind: str
    text: str
    offset: int  # byte offset


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", text, _byte_offset(text, pos))
        if m.lastgroup != "ws":
            tokens.append(Token(m.lastgroup, m.group(), _byte_offset(text, pos)))
        pos = m.end()
    tokens.append(Token("end", "", _byte_offset(text, len(text))))
    return tokens


def _byte_offset(text, index):
    return len(text[:index].encode("utf-8"))


class _Parser:
    def __init__(self, text, allowed):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.allowed = allowed

    @property
    def tok(self):
        return self.tokens[self.i]

    def error(self, message, tok=None):
        tok = tok or self.tok
        return ExprSyntaxError(message, self.text, tok.offset)

    def accept(self, text):
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text):
        if not self.accept(text):
            found = "end of input" if self.tok.kind == "end" else repr(self.tok.text)
            raise self.error(f"expected {text!r}, found {found}")

    def parse(self):
        e = self.expr()
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self.tok.text!r}")
        return e

    def expr(self):
        e = self.term()
        while True:
            if self.accept("+"):
                e = Add(e, self.term())
            elif self.accept("-"):
                e = Sub(e, self.term())
            else:
                return e

    def term(self):
        e = self.factor()
        while True:
            if self.accept("*"):
                e = Mul(e, self.factor())
            elif self.accept("/"):
                e = Div(e, self.factor())
            else:
                return e

    def factor(self):
        if self.accept("-"):
            return Neg(self.factor())
        base = self.atom()
        if self.accept("^"):
            sign = -1 if self.accept("-") else 1
            tok = self.tok
            if tok.kind != "number" or not tok.text.isdigit():
                raise self.error("exponent must be an integer literal")
            self.i += 1
            return Pow(base, sign * int(tok.text))
        return base

    def atom(self):
        tok = self.tok
        if tok.kind == "number":
            self.i += 1
            return Number(Fraction(tok.text))
        if tok.kind == "ident":
            self.i += 1
            if self.accept("("):
                node = FUNCTION_NODES.get(tok.text)
                if node is None:
                    raise UnknownIdentifier(tok.text, tok.offset)
                arg = self.expr()
                self.expect(")")
                return node(arg)
            if tok.text in VARIABLES:
                return Var(tok.text)
            if tok.text in FUNCTION_NODES:
                raise self.error(f"function {tok.text!r} needs an argument")
            if tok.text in BUILTIN_CONSTANTS or self.allowed is None or tok.text in self.allowed:
                return Const(tok.text)
            raise UnknownIdentifier(tok.text, tok.offset)
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        if tok.kind == "end":
            raise self.error("unexpected end of input")
        raise self.error(f"unexpected {tok.text!r}")


def parse(text: str, constants: Iterable[str] | None = None) -> Expr:
    """Parse ``text`` into an :class:`Expr`.

    ``constants`` lists the constant names that may appear. When it is
    ``None`` every identifier that is not a variable or function is taken
    to be a constant.
    """
    allowed = None if constants is None else frozenset(constants)
    return _Parser(text, allowed).parse()
