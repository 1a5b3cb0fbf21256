"""Sparse multivariate polynomials over Q(i).

A :class:`Polynomial` keeps a sorted tuple of the variables that actually
occur and a dict from exponent tuples to nonzero coefficients.  Because the
representation is canonical, equality and hashing are structural.
"""
from __future__ import annotations

import re
from functools import lru_cache
from itertools import product as _iproduct

from gmpy2 import mpq

from .numbers import (MPQ, MPZ, GaussianRational, Q, conjugate, format_number,
                      is_number, to_number)

_CHUNK = re.compile(r"(\d+)")


@lru_cache(maxsize=None)
def var_key(name: str):
    """Natural sort key so that ``g1_2 < g1_10``."""
    return tuple((0, int(c), "") if c.isdigit() else (1, 0, c)
                 for c in _CHUNK.split(name) if c)


def sort_vars(names) -> tuple:
    return tuple(sorted(set(names), key=var_key))


def _merge_vars(a: tuple, b: tuple) -> tuple:
    if a == b:
        return a
    return sort_vars(a + b)


def _embed(terms: dict, old: tuple, new: tuple) -> dict:
    if old == new:
        return terms
    pos = [new.index(v) for v in old]
    n = len(new)
    out = {}
    for mon, c in terms.items():
        e = [0] * n
        for p, k in zip(pos, mon):
            e[p] = k
        out[tuple(e)] = c
    return out


def _prune(vars_: tuple, terms: dict):
    """Drop variables that no longer occur."""
    if not vars_:
        return vars_, terms
    used = [False] * len(vars_)
    for mon in terms:
        for i, k in enumerate(mon):
            if k:
                used[i] = True
    if all(used):
        return vars_, terms
    keep = [i for i, u in enumerate(used) if u]
    new_vars = tuple(vars_[i] for i in keep)
    new_terms = {tuple(mon[i] for i in keep): c for mon, c in terms.items()}
    return new_vars, new_terms


class Polynomial:
    """Immutable sparse polynomial with Gaussian-rational coefficients."""

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars_=(), terms=None, *, _canonical=False):
        if terms is None:
            terms = {}
        if not _canonical:
            vars_ = tuple(vars_)
            svars = sort_vars(vars_)
            if len(svars) != len(vars_):
                raise ValueError("duplicate variable names")
            clean = {}
            for mon, c in terms.items():
                mon = tuple(int(k) for k in mon)
                if len(mon) != len(vars_):
                    raise ValueError("exponent vector does not match variable count")
                if any(k < 0 for k in mon):
                    raise ValueError("negative exponent")
                c = to_number(c)
                if c != 0:
                    clean[mon] = clean.get(mon, 0) + c
                    if clean[mon] == 0:
                        del clean[mon]
            terms = _embed(clean, vars_, svars)
            vars_, terms = _prune(svars, terms)
        self.vars = vars_
        self.terms = terms
        self._hash = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def _make(cls, vars_, terms):
        vars_, terms = _prune(vars_, terms)
        return cls(vars_, terms, _canonical=True)

    @classmethod
    def var(cls, name: str) -> "Polynomial":
        return cls((name,), {(1,): mpq(1)}, _canonical=True)

    @classmethod
    def const(cls, c) -> "Polynomial":
        c = to_number(c)
        return cls((), {(): c} if c != 0 else {}, _canonical=True)

    @classmethod
    def coerce(cls, x) -> "Polynomial":
        if isinstance(x, Polynomial):
            return x
        if is_number(x):
            return cls.const(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to Polynomial")

    # -- basic queries ----------------------------------------------------
    @property
    def variables(self) -> tuple:
        return self.vars

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.vars

    def constant_value(self):
        if self.vars:
            raise ValueError("polynomial is not constant")
        return self.terms.get((), mpq(0))

    def constant_term(self):
        return self.terms.get((0,) * len(self.vars), mpq(0))

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def degree(self, var: str) -> int:
        if var not in self.vars:
            return 0 if self.terms else -1
        i = self.vars.index(var)
        return max(m[i] for m in self.terms)

    def __len__(self):
        return len(self.terms)

    def is_real(self) -> bool:
        return not any(isinstance(c, GaussianRational) for c in self.terms.values())

    def coefficients(self):
        return list(self.terms.values())

    # -- arithmetic -------------------------------------------------------
    def _binary_terms(self, other: "Polynomial"):
        vars_ = _merge_vars(self.vars, other.vars)
        return (vars_, _embed(self.terms, self.vars, vars_),
                _embed(other.terms, other.vars, vars_))

    def __add__(self, other):
        if is_number(other):
            if other == 0:
                return self
            other = Polynomial.const(other)
        elif not isinstance(other, Polynomial):
            return NotImplemented
        vars_, a, b = self._binary_terms(other)
        out = dict(a)
        for m, c in b.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = s + c
                if s == 0:
                    del out[m]
                else:
                    out[m] = s
        return Polynomial._make(vars_, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.vars, {m: -c for m, c in self.terms.items()}, _canonical=True)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if is_number(other):
            return self + (-to_number(other))
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        if is_number(other):
            return (-self) + other
        return NotImplemented

    def scale(self, c) -> "Polynomial":
        c = to_number(c)
        if c == 0:
            return Polynomial()
        if c == 1:
            return self
        return Polynomial(self.vars, {m: v * c for m, v in self.terms.items()}, _canonical=True)

    def __mul__(self, other):
        if is_number(other):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        if not other.vars:
            return self.scale(other.constant_value()) if other.terms else Polynomial()
        if not self.vars:
            return other.scale(self.constant_value()) if self.terms else Polynomial()
        vars_, a, b = self._binary_terms(other)
        out = {}
        get = out.get
        for ma, ca in a.items():
            for mb, cb in b.items():
                m = tuple(x + y for x, y in zip(ma, mb))
                s = get(m)
                out[m] = ca * cb if s is None else s + ca * cb
        out = {m: c for m, c in out.items() if c != 0}
        return Polynomial._make(vars_, out)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, (int, MPZ)) or k < 0:
            return NotImplemented
        result = Polynomial.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, other):
        if is_number(other):
            other = to_number(other)
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self.scale(1 / other if isinstance(other, MPQ) else other.inverse())
        from .ratfunc import RationalFunction
        if isinstance(other, (Polynomial, RationalFunction)):
            from .scalars import divide
            return divide(self, other)
        return NotImplemented

    def __rtruediv__(self, other):
        if is_number(other):
            from .scalars import divide
            return divide(other, self)
        return NotImplemented

    # -- comparison -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.vars == other.vars and self.terms == other.terms
        if is_number(other):
            other = to_number(other)
            if other == 0:
                return not self.terms
            return not self.vars and self.terms.get(()) == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if not self.vars:
                c = self.terms.get((), mpq(0))
                self._hash = hash(c)
            else:
                self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # -- calculus and substitution ---------------------------------------
    def diff(self, var: str) -> "Polynomial":
        if var not in self.vars:
            return Polynomial()
        i = self.vars.index(var)
        out = {}
        for m, c in self.terms.items():
            k = m[i]
            if k:
                nm = m[:i] + (k - 1,) + m[i + 1:]
                out[nm] = c * k
        return Polynomial._make(self.vars, out)

    def subs(self, mapping: dict):
        """Substitute Scalars for variables; returns a Scalar."""
        from .scalars import simplify
        hit = [v for v in self.vars if v in mapping]
        if not hit:
            return simplify(self)
        idx = {v: self.vars.index(v) for v in hit}
        keep = [i for i, v in enumerate(self.vars) if v not in mapping]
        keep_vars = tuple(self.vars[i] for i in keep)
        # group by the substituted exponents to share powers
        powers: dict = {}

        def power(v, k):
            key = (v, k)
            if key not in powers:
                powers[key] = mapping[v] ** k if k != 1 else mapping[v]
            return powers[key]

        groups: dict = {}
        for m, c in self.terms.items():
            sub_key = tuple(m[idx[v]] for v in hit)
            rest = tuple(m[i] for i in keep)
            groups.setdefault(sub_key, {})[rest] = c
        total = 0
        for sub_key, rest_terms in groups.items():
            part = Polynomial._make(keep_vars, rest_terms)
            factor = 1
            for v, k in zip(hit, sub_key):
                if k:
                    factor = factor * power(v, k)
            total = total + simplify(part) * factor
        return simplify(total)

    def evaluate(self, point: dict):
        """Evaluate at exact numbers for every variable."""
        total = mpq(0)
        vals = [to_number(point[v]) for v in self.vars]
        for m, c in self.terms.items():
            t = c
            for x, k in zip(vals, m):
                if k:
                    t = t * x ** k
            total = total + t
        return total

    def conjugate(self) -> "Polynomial":
        return Polynomial(self.vars, {m: conjugate(c) for m, c in self.terms.items()},
                          _canonical=True)

    def real_imag(self):
        """Split into real and imaginary parts (both real polynomials)."""
        re_t, im_t = {}, {}
        for m, c in self.terms.items():
            if isinstance(c, GaussianRational):
                re_t[m] = c.re
                im_t[m] = c.im
            else:
                re_t[m] = c
        return Polynomial(self.vars, re_t), Polynomial(self.vars, im_t)

    # -- normalization ----------------------------------------------------
    def leading(self):
        """Leading (monomial, coefficient) in graded reverse lex."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        m = max(self.terms, key=_grevlex_key)
        return m, self.terms[m]

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        _, c = self.leading()
        return self.scale(1 / c if isinstance(c, MPQ) else c.inverse())

    def primitive(self) -> "Polynomial":
        """Scale a real polynomial to integer coefficients with gcd 1 and positive lead."""
        if not self.terms or not self.is_real():
            return self.monic()
        from math import gcd, lcm
        den = 1
        for c in self.terms.values():
            den = lcm(den, int(c.denominator))
        nums = [int(c * den) for c in self.terms.values()]
        g = 0
        for n in nums:
            g = gcd(g, n)
        p = self.scale(mpq(den, g))
        if p.leading()[1] < 0:
            p = -p
        return p

    # -- display ----------------------------------------------------------
    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        return format_polynomial(self)

    # -- helpers for order-specific code ----------------------------------
    def as_dict(self, order_vars: tuple) -> dict:
        """Exponent dict with respect to a caller-supplied variable order."""
        missing = [v for v in self.vars if v not in order_vars]
        if missing:
            raise ValueError(f"variables {missing} not in ordering")
        return _embed(self.terms, self.vars, tuple(order_vars)) if self.vars != tuple(order_vars) \
            else dict(self.terms)

    @classmethod
    def from_dict(cls, order_vars: tuple, terms: dict) -> "Polynomial":
        return cls(tuple(order_vars), terms)


def _grevlex_key(m):
    return (sum(m), tuple(-k for k in reversed(m)))


def var(name: str) -> Polynomial:
    return Polynomial.var(name)


def variables(names: str):
    return [Polynomial.var(n) for n in names.replace(",", " ").split()]


def format_polynomial(p: Polynomial) -> str:
    if not p.terms:
        return "0"
    items = sorted(p.terms.items(), key=lambda t: _grevlex_key(t[0]), reverse=True)
    parts = []
    for m, c in items:
        factors = [p.vars[i] + (f"^{k}" if k > 1 else "") for i, k in enumerate(m) if k]
        neg = False
        if isinstance(c, GaussianRational):
            cs = "(" + format_number(c) + ")"
        else:
            if c < 0:
                neg = True
                c = -c
            cs = format_number(c)
        if factors and cs == "1":
            body = "*".join(factors)
        else:
            body = "*".join([cs] + factors)
        parts.append((neg, body))
    out = ("-" if parts[0][0] else "") + parts[0][1]
    for neg, body in parts[1:]:
        out += (" - " if neg else " + ") + body
    return out


def monomials_of_degree(vars_: tuple, d: int):
    """All exponent tuples of total degree d (used for enumeration oracles)."""
    n = len(vars_)
    for e in _iproduct(range(d + 1), repeat=n):
        if sum(e) == d:
            yield e
