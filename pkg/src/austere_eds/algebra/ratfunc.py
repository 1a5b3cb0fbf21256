"""Rational functions over Q(i) in gcd-reduced canonical form.

The multivariate gcd is delegated to sympy's sparse polynomial rings; the
rest (arithmetic, normalization, substitution) is local.
"""
from __future__ import annotations

from sympy.polys.domains import QQ, QQ_I
from sympy.polys.rings import ring

from .numbers import MPQ, GaussianRational, gauss, is_number, to_number
from .poly import Polynomial, _embed, _merge_vars


def _sympy_ring(vars_: tuple, gaussian: bool):
    domain = QQ_I if gaussian else QQ
    R, *_ = ring(",".join(vars_), domain) if vars_ else ring("_unused", domain)
    return R


def _to_sympy(p: Polynomial, vars_: tuple, R, gaussian: bool):
    if vars_:
        terms = _embed(p.terms, p.vars, vars_)
    else:
        terms = {(0,): c for c in p.terms.values()}
    dom = R.domain
    out = {}
    for m, c in terms.items():
        if gaussian:
            if isinstance(c, GaussianRational):
                out[m] = dom(c.re, c.im)
            else:
                out[m] = dom(c, 0)
        else:
            out[m] = c
    return R.from_dict(out)


def _from_sympy(f, vars_: tuple, gaussian: bool) -> Polynomial:
    terms = {}
    for m, c in f.items():
        if gaussian:
            terms[m] = gauss(c.x, c.y)
        else:
            terms[m] = c
    if not vars_:
        return Polynomial.const(terms.get((0,), 0))
    return Polynomial(vars_, terms)


def poly_cofactors(a: Polynomial, b: Polynomial):
    """Return (g, a/g, b/g) with g a gcd of a and b."""
    vars_ = _merge_vars(a.vars, b.vars)
    gaussian = not (a.is_real() and b.is_real())
    R = _sympy_ring(vars_, gaussian)
    fa = _to_sympy(a, vars_, R, gaussian)
    fb = _to_sympy(b, vars_, R, gaussian)
    g, ca, cb = fa.cofactors(fb)
    return (_from_sympy(g, vars_, gaussian), _from_sympy(ca, vars_, gaussian),
            _from_sympy(cb, vars_, gaussian))


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    return poly_cofactors(a, b)[0]


def poly_exquo(a: Polynomial, b: Polynomial) -> Polynomial:
    """Exact quotient a/b; raises ValueError if b does not divide a."""
    if b.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if not b.vars:
        return a / b.constant_value()
    vars_ = _merge_vars(a.vars, b.vars)
    gaussian = not (a.is_real() and b.is_real())
    R = _sympy_ring(vars_, gaussian)
    q, r = divmod(_to_sympy(a, vars_, R, gaussian), _to_sympy(b, vars_, R, gaussian))
    if r:
        raise ValueError("polynomial division is not exact")
    return _from_sympy(q, vars_, gaussian)


def _inv(c):
    return 1 / c if isinstance(c, MPQ) else c.inverse()


class RationalFunction:
    """numerator/denominator with coprime parts and a monic denominator."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Polynomial, den: Polynomial, *, _canonical=False):
        if not _canonical:
            num = Polynomial.coerce(num)
            den = Polynomial.coerce(den)
            if den.is_zero():
                raise ZeroDivisionError("zero denominator")
            if num.is_zero():
                den = Polynomial.const(1)
            elif den.vars:
                g, num, den = poly_cofactors(num, den)
            lc = den.leading()[1]
            if lc != 1:
                inv = _inv(lc)
                num = num.scale(inv)
                den = den.scale(inv)
        self.num = num
        self.den = den
        self._hash = None

    @staticmethod
    def create(num, den=1):
        """Build and collapse to the simplest Scalar type."""
        from .scalars import simplify
        return simplify(RationalFunction(num, den))

    @property
    def numerator(self) -> Polynomial:
        return self.num

    @property
    def denominator(self) -> Polynomial:
        return self.den

    @property
    def vars(self) -> tuple:
        return _merge_vars(self.num.vars, self.den.vars)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    # -- arithmetic -------------------------------------------------------
    @staticmethod
    def _parts(x):
        if isinstance(x, RationalFunction):
            return x.num, x.den
        if isinstance(x, Polynomial):
            return x, Polynomial.const(1)
        if is_number(x):
            return Polynomial.const(x), Polynomial.const(1)
        return None

    def __add__(self, other):
        parts = self._parts(other)
        if parts is None:
            return NotImplemented
        n2, d2 = parts
        if d2 == self.den:
            return RationalFunction.create(self.num + n2, self.den)
        return RationalFunction.create(self.num * d2 + n2 * self.den, self.den * d2)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _canonical=True)

    def __sub__(self, other):
        parts = self._parts(other)
        if parts is None:
            return NotImplemented
        return self + RationalFunction.create(-parts[0], parts[1])

    def __rsub__(self, other):
        parts = self._parts(other)
        if parts is None:
            return NotImplemented
        return (-self) + other

    def __mul__(self, other):
        parts = self._parts(other)
        if parts is None:
            return NotImplemented
        n2, d2 = parts
        return RationalFunction.create(self.num * n2, self.den * d2)

    __rmul__ = __mul__

    def __truediv__(self, other):
        parts = self._parts(other)
        if parts is None:
            return NotImplemented
        n2, d2 = parts
        if n2.is_zero():
            raise ZeroDivisionError("division by zero")
        return RationalFunction.create(self.num * d2, self.den * n2)

    def __rtruediv__(self, other):
        parts = self._parts(other)
        if parts is None:
            return NotImplemented
        if self.num.is_zero():
            raise ZeroDivisionError("division by zero")
        return RationalFunction.create(parts[0] * self.den, parts[1] * self.num)

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return RationalFunction.create(self.den ** (-k), self.num ** (-k))
        return RationalFunction(self.num ** k, self.den ** k, _canonical=True)

    # -- comparison -------------------------------------------------------
    def __eq__(self, other):
        parts = self._parts(other)
        if parts is None:
            return NotImplemented
        return self.num * parts[1] == parts[0] * self.den

    def __hash__(self):
        if self._hash is None:
            if self.den == 1:
                self._hash = hash(self.num)
            else:
                self._hash = hash((self.num, self.den))
        return self._hash

    def __bool__(self):
        return not self.num.is_zero()

    # -- calculus and substitution ---------------------------------------
    def diff(self, var: str):
        dn = self.num.diff(var)
        dd = self.den.diff(var)
        return RationalFunction.create(dn * self.den - self.num * dd, self.den * self.den)

    def subs(self, mapping: dict):
        n = self.num.subs(mapping)
        d = self.den.subs(mapping)
        if d == 0:
            raise ZeroDivisionError("substitution makes the denominator vanish")
        from .scalars import divide
        return divide(n, d)

    def evaluate(self, point: dict):
        d = self.den.evaluate(point)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at the point")
        n = self.num.evaluate(point)
        return n * _inv(d) if d != 1 else n

    def conjugate(self):
        return RationalFunction.create(self.num.conjugate(), self.den.conjugate())

    def __repr__(self):
        return f"RationalFunction({self})"

    def __str__(self):
        return f"({self.num})/({self.den})"
