"""Exterior algebra over a finite coframe with structure-equation-driven d.

A :class:`Coframe` names the generating 1-forms and the scalar coordinates.
A scalar is *free* when its differential is one of the generators (named
``d<scalar>``) and *dependent* when its differential is a prescribed 1-form.
A :class:`StructureModel` installs d of every generator and of every
dependent scalar, which is all :func:`d` needs.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from gmpy2 import mpq

from .algebra.numbers import MPQ, GaussianRational
from .algebra.poly import Polynomial
from .algebra.ratfunc import RationalFunction
from .algebra.scalars import (diff, divide, format_scalar, is_zero, parse_scalar,
                              scalar_vars, simplify, subs)

CONST = (MPQ, GaussianRational)


class Coframe:
    """Ordered generator names plus tagged scalar coordinates."""

    def __init__(self, generators, free_scalars=(), dependent_scalars=()):
        self.generators = tuple(generators)
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("generator names must be unique")
        self.index = {g: k for k, g in enumerate(self.generators)}
        self.free_scalars = tuple(free_scalars)
        self.dependent_scalars = tuple(dependent_scalars)
        for s in self.free_scalars:
            if self.differential_name(s) not in self.index:
                raise ValueError(f"free scalar {s!r} needs generator {self.differential_name(s)!r}")
        overlap = set(self.free_scalars) & set(self.dependent_scalars)
        if overlap:
            raise ValueError(f"scalars declared both free and dependent: {sorted(overlap)}")

    @staticmethod
    def differential_name(scalar: str) -> str:
        return "d" + scalar

    @property
    def scalars(self) -> tuple:
        return self.free_scalars + self.dependent_scalars

    def scalar_kind(self, name: str) -> str | None:
        if name in self.free_scalars:
            return "free"
        if name in self.dependent_scalars:
            return "dependent"
        return None

    def __len__(self):
        return len(self.generators)

    def gen(self, name: str) -> "Form":
        return Form(self, {(self.index[name],): mpq(1)}, _canonical=True)

    def __getitem__(self, name: str) -> "Form":
        return self.gen(name)

    def one(self) -> "Form":
        return Form(self, {(): mpq(1)}, _canonical=True)

    def zero(self, degree: int = 0) -> "Form":
        return Form(self, {}, degree=degree, _canonical=True)

    def scalar(self, c) -> "Form":
        c = simplify(c)
        return Form(self, {} if is_zero(c) else {(): c}, degree=0, _canonical=True)

    def __eq__(self, other):
        return (isinstance(other, Coframe) and self.generators == other.generators
                and self.free_scalars == other.free_scalars
                and self.dependent_scalars == other.dependent_scalars)

    def __hash__(self):
        return hash((self.generators, self.free_scalars, self.dependent_scalars))

    def __repr__(self):
        return (f"Coframe({len(self.generators)} generators, {len(self.free_scalars)} free, "
                f"{len(self.dependent_scalars)} dependent scalars)")


def _sort_sign(idx: tuple):
    """Sort an index tuple; return (sorted, sign) or (None, 0) on a repeat."""
    lst = list(idx)
    sign = 1
    n = len(lst)
    for i in range(1, n):
        j = i
        while j > 0 and lst[j - 1] > lst[j]:
            lst[j - 1], lst[j] = lst[j], lst[j - 1]
            sign = -sign
            j -= 1
        if j > 0 and lst[j - 1] == lst[j]:
            return None, 0
    return tuple(lst), sign


def _merge(a: tuple, b: tuple):
    """Wedge two sorted index tuples: (merged, sign) or (None, 0)."""
    if not a:
        return b, 1
    if not b:
        return a, 1
    # count inversions between a and b
    out = []
    sign = 1
    i = j = 0
    la = len(a)
    while i < la and j < len(b):
        if a[i] < b[j]:
            out.append(a[i])
            i += 1
        elif a[i] > b[j]:
            out.append(b[j])
            if (la - i) % 2:
                sign = -sign
            j += 1
        else:
            return None, 0
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out), sign


class Form:
    """A homogeneous exterior form: sorted index tuples mapped to Scalars."""

    __slots__ = ("coframe", "terms", "degree")

    def __init__(self, coframe: Coframe, terms: dict, degree: int | None = None,
                 *, _canonical=False):
        if not _canonical:
            clean: dict = {}
            for idx, c in terms.items():
                idx = tuple(coframe.index[i] if isinstance(i, str) else i for i in idx)
                sidx, sign = _sort_sign(idx)
                if sidx is None:
                    continue
                c = simplify(c)
                if sign < 0:
                    c = simplify(-c)
                clean[sidx] = simplify(clean[sidx] + c) if sidx in clean else c
            terms = {k: v for k, v in clean.items() if not is_zero(v)}
        degs = {len(k) for k in terms}
        if len(degs) > 1:
            raise ValueError(f"form mixes degrees {sorted(degs)}")
        if degs:
            d = degs.pop()
            if degree is not None and degree != d:
                raise ValueError("degree does not match terms")
            degree = d
        self.coframe = coframe
        self.terms = terms
        self.degree = 0 if degree is None else degree

    # -- structure --------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def _check(self, other: "Form"):
        if other.coframe is not self.coframe and other.coframe != self.coframe:
            raise ValueError("forms live on different coframes")

    def generators_used(self) -> set:
        out = set()
        for idx in self.terms:
            out.update(idx)
        return {self.coframe.generators[k] for k in out}

    def coefficient(self, *names) -> object:
        """Coefficient of the wedge of the named generators (any order)."""
        idx = tuple(self.coframe.index[n] for n in names)
        sidx, sign = _sort_sign(idx)
        if sidx is None:
            return mpq(0)
        c = self.terms.get(sidx, mpq(0))
        return c if sign > 0 else simplify(-c)

    def named_terms(self):
        gens = self.coframe.generators
        return [(tuple(gens[k] for k in idx), c) for idx, c in self.terms.items()]

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Form):
            if isinstance(other, int) and other == 0:
                return self  # lets sum() start from 0
            return NotImplemented
        self._check(other)
        if self.terms and other.terms and self.degree != other.degree:
            raise ValueError("cannot add forms of different degree")
        out = dict(self.terms)
        for k, v in other.terms.items():
            if k in out:
                s = simplify(out[k] + v)
                if is_zero(s):
                    del out[k]
                else:
                    out[k] = s
            else:
                out[k] = v
        deg = self.degree if self.terms else other.degree
        return Form(self.coframe, out, degree=deg, _canonical=True)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        return Form(self.coframe, {k: simplify(-v) for k, v in self.terms.items()},
                    degree=self.degree, _canonical=True)

    def __sub__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "Form":
        c = simplify(c)
        if is_zero(c):
            return Form(self.coframe, {}, degree=self.degree, _canonical=True)
        out = {}
        for k, v in self.terms.items():
            s = simplify(v * c)
            if not is_zero(s):
                out[k] = s
        return Form(self.coframe, out, degree=self.degree, _canonical=True)

    def __mul__(self, c):
        if isinstance(c, Form):
            return self.wedge(c)
        return self.scale(c)

    def __rmul__(self, c):
        return self.scale(c)

    def __truediv__(self, c):
        c = simplify(c)
        return Form(self.coframe, {k: divide(v, c) for k, v in self.terms.items()},
                    degree=self.degree)

    def wedge(self, other: "Form") -> "Form":
        self._check(other)
        out: dict = {}
        for ka, va in self.terms.items():
            for kb, vb in other.terms.items():
                k, sign = _merge(ka, kb)
                if k is None:
                    continue
                t = va * vb
                if sign < 0:
                    t = -t
                if k in out:
                    out[k] = out[k] + t
                else:
                    out[k] = t
        clean = {}
        for k, v in out.items():
            v = simplify(v)
            if not is_zero(v):
                clean[k] = v
        return Form(self.coframe, clean, degree=self.degree + other.degree, _canonical=True)

    def __eq__(self, other):
        if isinstance(other, Form):
            if self.coframe != other.coframe:
                return False
            return (self - other).is_zero()
        if not self.terms:
            try:
                return is_zero(simplify(other))
            except TypeError:
                return NotImplemented
        return NotImplemented

    def __hash__(self):
        return hash((self.degree, frozenset(self.terms.items())))

    def map_coefficients(self, fn) -> "Form":
        out = {}
        for k, v in self.terms.items():
            s = simplify(fn(v))
            if not is_zero(s):
                out[k] = s
        return Form(self.coframe, out, degree=self.degree, _canonical=True)

    def scalar_value(self):
        if self.degree != 0:
            raise ValueError("not a 0-form")
        return self.terms.get((), mpq(0))

    def scalar_variables(self) -> set:
        out = set()
        for v in self.terms.values():
            out.update(scalar_vars(v))
        return out

    def __repr__(self):
        return f"Form({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        gens = self.coframe.generators
        parts = []
        for idx in sorted(self.terms):
            c = format_scalar(self.terms[idx])
            body = "^".join(gens[k] for k in idx)
            if not body:
                parts.append(c)
            elif c == "1":
                parts.append(body)
            elif c == "-1":
                parts.append("-" + body)
            else:
                parts.append(f"({c})*{body}")
        return " + ".join(parts)

    # -- serialization ----------------------------------------------------
    def to_json(self) -> list:
        gens = self.coframe.generators
        return [{"indices": list(idx), "generators": [gens[k] for k in idx],
                 "coefficient": format_scalar(self.terms[idx])}
                for idx in sorted(self.terms)]

    @classmethod
    def from_json(cls, coframe: Coframe, data: list, degree: int | None = None) -> "Form":
        terms = {}
        for item in data:
            if "generators" in item:
                idx = tuple(coframe.index[g] for g in item["generators"])
            else:
                idx = tuple(int(k) for k in item["indices"])
            terms[idx] = parse_scalar(str(item["coefficient"]))
        return cls(coframe, terms, degree=degree)


def wedge(*forms: Form) -> Form:
    if not forms:
        raise ValueError("wedge needs at least one form")
    out = forms[0]
    for f in forms[1:]:
        out = out.wedge(f)
    return out


def linear_combination(coframe: Coframe, pairs) -> Form:
    """Sum of coefficient * generator from (coefficient, generator-name) pairs."""
    terms: dict = {}
    for c, name in pairs:
        k = (coframe.index[name],)
        terms[k] = simplify(terms.get(k, 0) + simplify(c))
    return Form(coframe, {k: v for k, v in terms.items() if not is_zero(v)}, degree=1,
                _canonical=True)


@dataclass
class StructureModel:
    """A coframe with d of every generator and every dependent scalar."""

    coframe: Coframe
    d_of_generator: dict
    d_of_scalar: dict = field(default_factory=dict)
    name: str = ""
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        cf = self.coframe
        for g in cf.generators:
            if g not in self.d_of_generator:
                raise ValueError(f"missing structure equation for {g!r}")
            if self.d_of_generator[g].degree != 2 and self.d_of_generator[g]:
                raise ValueError(f"d({g}) must be a 2-form")
        for s in cf.dependent_scalars:
            if s not in self.d_of_scalar:
                raise ValueError(f"missing differential for dependent scalar {s!r}")
        declared = set(cf.scalars)
        for s, f in self.d_of_scalar.items():
            unknown = f.scalar_variables() - declared
            if unknown:
                raise ValueError(f"d({s}) uses undeclared scalars {sorted(unknown)}")

    def d_scalar(self, c) -> Form:
        """Differential of a Scalar coefficient."""
        cf = self.coframe
        c = simplify(c)
        out = Form(cf, {}, degree=1, _canonical=True)
        if isinstance(c, CONST):
            return out
        terms: dict = {}
        for v in scalar_vars(c):
            dv = diff(c, v)
            if is_zero(dv):
                continue
            kind = cf.scalar_kind(v)
            if kind == "free":
                k = (cf.index[cf.differential_name(v)],)
                terms[k] = simplify(terms.get(k, 0) + dv)
            elif kind == "dependent":
                for k, w in self.d_of_scalar[v].terms.items():
                    terms[k] = simplify(terms.get(k, 0) + dv * w)
            else:
                raise ValueError(f"scalar {v!r} is not declared in the coframe")
        return Form(cf, {k: v for k, v in terms.items() if not is_zero(v)}, degree=1,
                    _canonical=True)


def d(f: Form, model: StructureModel) -> Form:
    """Exterior derivative driven by the model's structure equations."""
    cf = model.coframe
    if f.coframe != cf:
        raise ValueError("form is not over the model's coframe")
    gens = cf.generators
    result = Form(cf, {}, degree=f.degree + 1, _canonical=True)
    acc: dict = {}

    def add(form: Form, coef=None):
        for k, v in form.terms.items():
            t = v if coef is None else v * coef
            acc[k] = acc[k] + t if k in acc else t

    for idx, c in f.terms.items():
        dc = model.d_scalar(c)
        if dc:
            add(dc.wedge(Form(cf, {idx: mpq(1)}, _canonical=True)))
        for pos, k in enumerate(idx):
            dg = model.d_of_generator[gens[k]]
            if not dg:
                continue
            left = Form(cf, {idx[:pos]: mpq(1)}, _canonical=True)
            right = Form(cf, {idx[pos + 1:]: mpq(1)}, _canonical=True)
            piece = left.wedge(dg).wedge(right)
            add(piece, c if pos % 2 == 0 else simplify(-c))
    clean = {}
    for k, v in acc.items():
        v = simplify(v)
        if not is_zero(v):
            clean[k] = v
    return Form(cf, clean, degree=result.degree, _canonical=True)


class Reducer:
    """Substitution that eliminates designated generators using ideal 1-forms.

    The ideal forms are triangularized in order: each is first rewritten with
    the generators already solved, then solved for its own designated
    generator.  Afterwards every solved generator maps to a 1-form free of
    all solved generators.
    """

    def __init__(self, ideal: list, solve_for: list):
        if len(ideal) != len(solve_for):
            raise ValueError("one designated generator per ideal form is required")
        self.solved: dict = {}
        if not ideal:
            self.coframe = None
            return
        cf = ideal[0].coframe
        self.coframe = cf
        for form, name in zip(ideal, solve_for):
            if form.degree != 1:
                raise ValueError("ideal forms must be 1-forms")
            k = cf.index[name]
            if k in self.solved:
                raise ValueError(f"generator {name!r} designated twice")
            form = self._substitute(form)
            c = form.terms.get((k,))
            if c is None or is_zero(c):
                raise ValueError(f"ideal form cannot be solved for {name!r} (zero coefficient)")
            rhs = {}
            for (j,), v in form.terms.items():
                if j != k:
                    rhs[j] = simplify(divide(-v, c))
            # back-substitute into earlier solutions
            for j, expr in self.solved.items():
                a = expr.get(k)
                if a is None:
                    continue
                new = dict(expr)
                del new[k]
                for t, v in rhs.items():
                    s = simplify(new.get(t, 0) + a * v)
                    if is_zero(s):
                        new.pop(t, None)
                    else:
                        new[t] = s
                self.solved[j] = new
            self.solved[k] = rhs

    def _substitute(self, form: Form) -> Form:
        if not self.solved or not any(k in self.solved for idx in form.terms for k in idx):
            return form
        cf = form.coframe
        acc: dict = {}
        for idx, c in form.terms.items():
            # expand the product of (generator or its replacement)
            partial = {(): c}
            for k in idx:
                repl = self.solved.get(k)
                factor = {(k,): mpq(1)} if repl is None else {(j,): v for j, v in repl.items()}
                nxt: dict = {}
                for pk, pv in partial.items():
                    for (j,), fv in factor.items():
                        mk, sign = _merge(pk, (j,))
                        if mk is None:
                            continue
                        t = pv * fv
                        if sign < 0:
                            t = -t
                        nxt[mk] = nxt[mk] + t if mk in nxt else t
                partial = nxt
            for k2, v in partial.items():
                acc[k2] = acc[k2] + v if k2 in acc else v
        clean = {}
        for k, v in acc.items():
            v = simplify(v)
            if not is_zero(v):
                clean[k] = v
        return Form(cf, clean, degree=form.degree, _canonical=True)

    def __call__(self, form: Form) -> Form:
        return self._substitute(form)

    def solution(self, name: str) -> Form:
        """The 1-form that the designated generator is replaced by."""
        cf = self.coframe
        k = cf.index[name]
        return Form(cf, {(j,): v for j, v in self.solved[k].items()}, degree=1, _canonical=True)


def reduce_mod(f: Form, ideal: list, solve_for: list) -> Form:
    """Normal form of ``f`` modulo the algebraic ideal of the given 1-forms."""
    return Reducer(ideal, solve_for)(f)


def substitute_scalars(f: Form, assignments: dict) -> Form:
    """Coefficient-wise substitution of Scalars for scalar names."""
    assignments = {k: simplify(v) for k, v in assignments.items()}
    return f.map_coefficients(lambda c: subs(c, assignments))
