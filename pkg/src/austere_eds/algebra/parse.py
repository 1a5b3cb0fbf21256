"""Text grammar for Scalars.

Accepts sums of terms such as ``3/2*x^2*y - (1/2)+(3/4)i*z`` and, more
generally, any expression built from ``+ - * / ^`` and parentheses.  The
identifier ``i`` is the imaginary unit; a factor written directly before
``i`` (``(c/d)i`` or ``3i``) is multiplied by it.
"""
from __future__ import annotations

import re

from gmpy2 import mpq

from .numbers import I
from .poly import Polynomial

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


class ParseError(ValueError):
    pass


def _tokenize(text: str):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"cannot tokenize at {text[pos:]!r}")
        num, ident, op = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif ident is not None:
            out.append(("id", ident))
        else:
            if op not in "+-*/^()":
                raise ParseError(f"unexpected character {op!r}")
            out.append(("op", op))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens):
        self.toks = tokens
        self.pos = 0

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, op):
        tok = self.take()
        if tok != ("op", op):
            raise ParseError(f"expected {op!r}, got {tok[1]!r}")

    def expr(self):
        value = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            _, op = self.take()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            _, op = self.take()
            rhs = self.unary()
            if op == "*":
                value = value * rhs
            else:
                from .scalars import divide
                value = divide(value, rhs)
        return value

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise ParseError("exponent must be a nonnegative integer")
            base = base ** val
        # implicit product with the imaginary unit: "(1/2)i", "3i"
        while self.peek() == ("id", "i"):
            self.take()
            base = base * I
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return mpq(val)
        if kind == "id":
            return I if val == "i" else Polynomial.var(val)
        if (kind, val) == ("op", "("):
            value = self.expr()
            self.expect(")")
            return value
        raise ParseError(f"unexpected token {val!r}")


def parse_expression(text: str):
    """Parse text into a Scalar (number, Polynomial or RationalFunction)."""
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty expression")
    p = _Parser(tokens)
    value = p.expr()
    if p.pos != len(tokens):
        raise ParseError(f"trailing input at token {p.peek()[1]!r}")
    from .scalars import simplify
    return simplify(value)


def parse_polynomial(text: str) -> Polynomial:
    value = parse_expression(text)
    from .ratfunc import RationalFunction
    if isinstance(value, RationalFunction):
        raise ParseError(f"not a polynomial: {text!r}")
    return Polynomial.coerce(value)
