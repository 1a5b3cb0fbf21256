"""The universal coefficient domain and its helpers.

A Scalar is one of ``mpq``, :class:`GaussianRational`, :class:`Polynomial`
or :class:`RationalFunction`.  :func:`simplify` always returns the simplest
of these that represents the value, so ``simplify(x) == 0`` and type
dispatch stay cheap.
"""
from __future__ import annotations

from gmpy2 import mpq

from .numbers import MPQ, GaussianRational, format_number, is_number, to_number
from .poly import Polynomial
from .ratfunc import RationalFunction

SCALAR_TYPES = (MPQ, GaussianRational, Polynomial, RationalFunction)


def simplify(x):
    if isinstance(x, (MPQ, GaussianRational)):
        return x
    if isinstance(x, Polynomial):
        if not x.vars:
            return x.terms.get((), mpq(0))
        return x
    if isinstance(x, RationalFunction):
        if x.den.vars:
            return x
        d = x.den.constant_value()
        return simplify(x.num if d == 1 else x.num / d)
    return to_number(x)


def is_scalar(x) -> bool:
    return isinstance(x, SCALAR_TYPES) or is_number(x)


def is_zero(x) -> bool:
    x = simplify(x)
    if isinstance(x, (MPQ, GaussianRational)):
        return x == 0
    return x.is_zero()


def is_constant(x) -> bool:
    return isinstance(simplify(x), (MPQ, GaussianRational))


def divide(a, b):
    """Exact quotient of Scalars, collapsed to the simplest type."""
    a = simplify(a)
    b = simplify(b)
    if isinstance(b, (MPQ, GaussianRational)):
        if b == 0:
            raise ZeroDivisionError("division by zero")
        inv = 1 / b if isinstance(b, MPQ) else b.inverse()
        return simplify(a * inv)
    na, da = numerator_denominator(a)
    nb, db = numerator_denominator(b)
    return RationalFunction.create(na * db, da * nb)


def scalar_vars(x) -> tuple:
    x = simplify(x)
    if isinstance(x, (Polynomial, RationalFunction)):
        return x.vars
    return ()


def subs(x, mapping: dict):
    x = simplify(x)
    if isinstance(x, (Polynomial, RationalFunction)):
        return simplify(x.subs(mapping))
    return x


def diff(x, var: str):
    x = simplify(x)
    if isinstance(x, (Polynomial, RationalFunction)):
        return simplify(x.diff(var))
    return mpq(0)


def numerator_denominator(x):
    x = simplify(x)
    if isinstance(x, RationalFunction):
        return x.num, x.den
    return Polynomial.coerce(x), Polynomial.const(1)


def conj(x):
    x = simplify(x)
    if isinstance(x, GaussianRational):
        return x.conjugate()
    if isinstance(x, (Polynomial, RationalFunction)):
        return simplify(x.conjugate())
    return x


def format_scalar(x) -> str:
    """Serialize in the coefficient text grammar."""
    x = simplify(x)
    if isinstance(x, (MPQ, GaussianRational)):
        return format_number(x)
    if isinstance(x, Polynomial):
        return str(x)
    return f"({x.num})/({x.den})"


def parse_scalar(text: str):
    from .parse import parse_expression
    return simplify(parse_expression(text))
