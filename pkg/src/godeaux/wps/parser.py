"""Recursive-descent parser for polynomial expressions.

Grammar::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" INTEGER)?
    atom   := INTEGER | NAME | "(" expr ")"

Division is only allowed by nonzero constants.  Names resolve first to the
optional ``definitions`` namespace, then to ambient variables.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Mapping

from ..fields import QQ, Field, FieldError
from .poly import Ambient, Polynomial

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:\.\d*)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))")


class ParseError(ValueError):
    def __init__(self, message: str, text: str, position: int):
        self.message = message
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position}\n  {text}\n  {' ' * position}^")


def _tokenize(text: str):
    pos, out = 0, []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", text, start)
        start = m.start(m.lastgroup)
        kind = m.lastgroup
        value = m.group(kind)
        if kind == "num" and "." in value:
            raise ParseError("decimal numbers are not accepted; use a fraction", text, start)
        out.append((kind, value, start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text, ambient, field, definitions):
        self.text = text
        self.ambient = ambient
        self.field = field
        self.defs = definitions or {}
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.text, tok[2])

    def expect(self, op):
        tok = self.peek()
        if tok[0] != "op" or tok[1] != op:
            self.error(f"expected {op!r}" + (f", got {tok[1]!r}" if tok[1] else ", got end of input"))
        return self.take()

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            self.error("empty expression")
        result = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected {self.peek()[1]!r}")
        return result

    def expr(self):
        left = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            right = self.term()
            left = left + right if op == "+" else left - right
        return left

    def term(self):
        left = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op_tok = self.take()
            rhs_tok = self.peek()
            right = self.unary()
            if op_tok[1] == "*":
                left = left * right
            else:
                left = left.scale(self._inverse_constant(right, rhs_tok))
        return left

    def _inverse_constant(self, poly, tok):
        zero = (0,) * self.ambient.nvars
        if any(e != zero for e in poly.terms):
            self.error("division by a non-constant expression", tok)
        c = poly.coefficient(zero)
        if self.field.is_zero(c):
            self.error("division by zero", tok)
        return self.field.inv(c)

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            inner = self.unary()
            return -inner if tok[1] == "-" else inner
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            tok = self.peek()
            if tok[0] != "num":
                self.error("exponent must be a non-negative integer literal")
            self.take()
            base = base ** int(tok[1])
        return base

    def atom(self):
        tok = self.take()
        kind, value, _ = tok
        amb, f = self.ambient, self.field
        if kind == "num":
            try:
                c = f.from_fraction(Fraction(int(value)))
            except FieldError as exc:
                self.error(str(exc), tok)
            return Polynomial.constant(amb, c, f)
        if kind == "name":
            if value in self.defs:
                return self.defs[value]
            if value in amb.variables:
                return Polynomial.variable(amb, value, f)
            self.i -= 1
            self.error(f"unknown variable {value!r}")
        if kind == "op" and value == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        self.i -= 1
        self.error("unexpected end of input" if kind == "end" else f"unexpected {value!r}")


def parse(text: str, ambient: Ambient, field: Field = QQ,
          definitions: Mapping[str, Polynomial] | None = None) -> Polynomial:
    """Parse ``text`` into a polynomial on ``ambient`` with coefficients in ``field``."""
    return _Parser(text, ambient, field, definitions).parse()


__all__ = ["ParseError", "parse"]
