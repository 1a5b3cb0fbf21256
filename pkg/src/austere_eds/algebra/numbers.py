"""Exact scalars in the Gaussian rationals Q(i).

Real values are plain ``gmpy2.mpq`` objects; values with a nonzero imaginary
part are :class:`GaussianRational`.  All arithmetic funnels through
:func:`gauss`, which collapses purely real results back to ``mpq`` so the
fast path stays fast.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Integral, Rational

from gmpy2 import mpq, mpz

MPQ = type(mpq(0))
MPZ = type(mpz(0))


def Q(value) -> mpq:
    """Coerce an int, Fraction, mpq or ``"a/b"`` string to ``mpq``."""
    if isinstance(value, MPQ):
        return value
    if isinstance(value, (int, MPZ)):
        return mpq(value)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        return mpq(value.strip())
    if isinstance(value, Rational):
        return mpq(int(value.numerator), int(value.denominator))
    raise TypeError(f"cannot convert {value!r} to a rational")


class GaussianRational:
    """A value ``re + im*i`` with rational parts and ``im != 0``.

    Instances are only created through :func:`gauss`; a zero imaginary part
    yields an ``mpq`` instead.
    """

    __slots__ = ("re", "im")

    def __init__(self, re, im):
        self.re = Q(re)
        self.im = Q(im)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, GaussianRational):
            return gauss(self.re + other.re, self.im + other.im)
        if isinstance(other, (MPQ, int, MPZ)):
            return GaussianRational(self.re + other, self.im)
        if isinstance(other, Fraction):
            return self + Q(other)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if isinstance(other, GaussianRational):
            return gauss(self.re - other.re, self.im - other.im)
        if isinstance(other, (MPQ, int, MPZ)):
            return GaussianRational(self.re - other, self.im)
        if isinstance(other, Fraction):
            return self - Q(other)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (MPQ, int, MPZ, Fraction)):
            return GaussianRational(Q(other) - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            return gauss(self.re * other.re - self.im * other.im,
                         self.re * other.im + self.im * other.re)
        if isinstance(other, (MPQ, int, MPZ)):
            if other == 0:
                return mpq(0)
            return GaussianRational(self.re * other, self.im * other)
        if isinstance(other, Fraction):
            return self * Q(other)
        return NotImplemented

    __rmul__ = __mul__

    def inverse(self):
        n = self.re * self.re + self.im * self.im
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        if isinstance(other, GaussianRational):
            return self * other.inverse()
        if isinstance(other, (MPQ, int, MPZ, Fraction)):
            other = Q(other)
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return GaussianRational(self.re / other, self.im / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (MPQ, int, MPZ, Fraction)):
            return Q(other) * self.inverse()
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, (int, MPZ)):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = mpq(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    # -- comparison -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (MPQ, int, MPZ, Fraction)):
            return False  # im != 0 by construction
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return True

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        return format_number(self)


I = GaussianRational(0, 1)

Number = (MPQ, GaussianRational)


def gauss(re, im=0):
    """Build an element of Q(i), returning ``mpq`` when the value is real."""
    im = Q(im)
    if im == 0:
        return Q(re)
    return GaussianRational(re, im)


def is_number(x) -> bool:
    return isinstance(x, (MPQ, GaussianRational, int, MPZ, Fraction))


def to_number(x):
    """Normalize any exact number to ``mpq`` or :class:`GaussianRational`."""
    if isinstance(x, (MPQ, GaussianRational)):
        return x
    if isinstance(x, (int, MPZ, Fraction, Integral, Rational)):
        return Q(x)
    if isinstance(x, complex):
        raise TypeError("floating complex values are not exact")
    raise TypeError(f"not an exact number: {x!r}")


def real_part(x):
    return x.re if isinstance(x, GaussianRational) else Q(x)


def imag_part(x):
    return x.im if isinstance(x, GaussianRational) else mpq(0)


def conjugate(x):
    return x.conjugate() if isinstance(x, GaussianRational) else x


def is_real(x) -> bool:
    return not isinstance(x, GaussianRational)


def _format_rational(q) -> str:
    q = Q(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_number(x) -> str:
    """Text form: ``a/b`` for reals, ``(a/b)+(c/d)i`` otherwise."""
    if isinstance(x, GaussianRational):
        return f"({_format_rational(x.re)})+({_format_rational(x.im)})i"
    return _format_rational(x)
