"""Buchberger's algorithm over Q(i).

Pairs are pruned with the Gebauer-Moeller update (which applies both the
coprime-leading-term criterion and the chain criterion) and selected by the
normal strategy (smallest lcm first).  Work is counted in reduction steps; a
run that exceeds its budget raises :class:`BudgetExceeded`.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass

from .numbers import MPQ
from .poly import Polynomial, sort_vars

DEFAULT_BUDGET = 200_000


class BudgetExceeded(RuntimeError):
    """Raised when a computation runs past its step budget."""

    def __init__(self, what: str, budget: int):
        super().__init__(f"budget exceeded: {what} used more than {budget} steps")
        self.budget = budget


@dataclass(frozen=True)
class TermOrder:
    """A monomial order on an exponent vector.

    ``kind`` is ``"grevlex"``, ``"lex"`` or ``"block"``.  A block order
    compares the first ``split`` variables by grevlex and breaks ties with
    grevlex on the rest, so it eliminates the first block.
    """

    kind: str = "grevlex"
    split: int = 0

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "block"):
            raise ValueError(f"unknown term order {self.kind!r}")
        if self.kind == "block" and self.split < 0:
            raise ValueError("block split must be nonnegative")

    def key(self, m: tuple) -> tuple:
        """Integer tuple increasing with the monomial."""
        if self.kind == "lex":
            return m
        if self.kind == "grevlex":
            return (sum(m),) + tuple(-k for k in reversed(m))
        a, b = m[:self.split], m[self.split:]
        return ((sum(a),) + tuple(-k for k in reversed(a))
                + (sum(b),) + tuple(-k for k in reversed(b)))


GREVLEX = TermOrder("grevlex")
LEX = TermOrder("lex")


def block_order(split: int) -> TermOrder:
    return TermOrder("block", split)


def _inv(c):
    return 1 / c if isinstance(c, MPQ) else c.inverse()


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _coprime(a, b):
    return all(not (x and y) for x, y in zip(a, b))


class _Poly:
    """Internal polynomial: terms dict plus cached leading monomial."""

    __slots__ = ("terms", "lm", "lkey")

    def __init__(self, terms: dict, key):
        self.terms = terms
        if terms:
            self.lm = max(terms, key=key)
            self.lkey = key(self.lm)
        else:
            self.lm = None
            self.lkey = None


class _Engine:
    def __init__(self, order: TermOrder, budget: int | None):
        self.order = order
        self.key = order.key
        self.budget = budget
        self.steps = 0

    def tick(self, what="groebner"):
        self.steps += 1
        if self.budget is not None and self.steps > self.budget:
            raise BudgetExceeded(what, self.budget)

    def monic(self, terms: dict) -> _Poly:
        if not terms:
            return _Poly({}, self.key)
        p = _Poly(terms, self.key)
        c = terms[p.lm]
        if c != 1:
            inv = _inv(c)
            p.terms = {m: v * inv for m, v in terms.items()}
        return p

    def reduce(self, terms: dict, basis: list, full=True) -> dict:
        """Normal form of ``terms`` modulo ``basis`` (list of monic _Poly)."""
        key = self.key
        work = dict(terms)
        heap = [tuple(-k for k in key(m)) + (m,) for m in work]
        heapq.heapify(heap)
        rem = {}
        while heap:
            item = heapq.heappop(heap)
            m = item[-1]
            c = work.pop(m, None)
            if c is None:
                continue
            for g in basis:
                if _divides(g.lm, m):
                    self.tick()
                    shift = tuple(x - y for x, y in zip(m, g.lm))
                    for gm, gc in g.terms.items():
                        if gm == g.lm:
                            continue
                        nm = tuple(x + y for x, y in zip(gm, shift))
                        old = work.get(nm)
                        if old is None:
                            work[nm] = -c * gc
                            heapq.heappush(heap, tuple(-k for k in key(nm)) + (nm,))
                        else:
                            v = old - c * gc
                            if v == 0:
                                del work[nm]
                            else:
                                work[nm] = v
                    break
            else:
                rem[m] = c
                if not full:
                    rem.update(work)
                    return rem
        return rem

    def spoly(self, f: _Poly, g: _Poly) -> dict:
        lcm = _lcm(f.lm, g.lm)
        sf = tuple(x - y for x, y in zip(lcm, f.lm))
        sg = tuple(x - y for x, y in zip(lcm, g.lm))
        out = {}
        for m, c in f.terms.items():
            out[tuple(x + y for x, y in zip(m, sf))] = c
        for m, c in g.terms.items():
            nm = tuple(x + y for x, y in zip(m, sg))
            v = out.get(nm, 0) - c
            if v == 0:
                out.pop(nm, None)
            else:
                out[nm] = v
        return out

    def buchberger(self, polys: list) -> list:
        basis: list = []  # every polynomial ever added, by index
        G: list = []  # indices of the current (non-redundant) basis
        pairs: list = []
        for terms in polys:
            p = self.monic(terms)
            if p.lm is None:
                continue
            if not any(p.lm):
                return [self.monic({p.lm: 1})]
            basis.append(p)
            G, pairs = self._update(basis, G, pairs, len(basis) - 1)
        while pairs:
            # normal selection: smallest lcm
            best = min(range(len(pairs)), key=lambda t: self.key(pairs[t][2]))
            i, j, _ = pairs.pop(best)
            self.tick()
            h = self.reduce(self.spoly(basis[i], basis[j]), [basis[k] for k in G])
            if not h:
                continue
            hp = self.monic(h)
            if not any(hp.lm):
                return [hp]
            basis.append(hp)
            G, pairs = self._update(basis, G, pairs, len(basis) - 1)
        return self._interreduce([basis[k] for k in G])

    def _update(self, basis, G, pairs, h):
        lh = basis[h].lm
        C = [(g, _lcm(basis[g].lm, lh)) for g in G]
        D = []
        while C:
            g, l = C.pop()
            if _coprime(basis[g].lm, lh) or (
                    not any(_divides(l2, l) for _, l2 in C)
                    and not any(_divides(l2, l) for _, l2 in D)):
                D.append((g, l))
        E = [(g, h, l) for g, l in D if not _coprime(basis[g].lm, lh)]
        kept = []
        for i, j, l in pairs:
            if (_divides(lh, l) and _lcm(basis[i].lm, lh) != l
                    and _lcm(basis[j].lm, lh) != l):
                continue
            kept.append((i, j, l))
        kept.extend(E)
        newG = [g for g in G if not _divides(lh, basis[g].lm)]
        newG.append(h)
        return newG, kept

    def _interreduce(self, G: list) -> list:
        G = sorted(G, key=lambda p: p.lkey)
        # drop elements whose leading monomial is divisible by another's
        minimal = []
        for p in G:
            if not any(_divides(q.lm, p.lm) for q in minimal):
                minimal.append(p)
        out = []
        for idx, p in enumerate(minimal):
            others = [q for k, q in enumerate(minimal) if k != idx]
            lead = {p.lm: p.terms[p.lm]}
            tail = {m: c for m, c in p.terms.items() if m != p.lm}
            red = self.reduce(tail, others)
            red.update(lead)
            out.append(self.monic(red))
        out.sort(key=lambda p: p.lkey, reverse=True)
        return out


def _prepare(gens, variables):
    gens = [Polynomial.coerce(g) for g in gens]
    if variables is None:
        names = []
        for g in gens:
            names.extend(g.vars)
        variables = sort_vars(names)
    variables = tuple(variables)
    return gens, variables


def groebner(gens, order: TermOrder = GREVLEX, variables=None,
             budget: int | None = DEFAULT_BUDGET) -> list:
    """Reduced Groebner basis of the ideal generated by ``gens``.

    ``variables`` fixes the variable order the term order acts on; by default
    it is the natural sort of all occurring variables.
    """
    gens, variables = _prepare(gens, variables)
    if not gens:
        raise ValueError("groebner needs at least one generator")
    eng = _Engine(order, budget)
    result = eng.buchberger([g.as_dict(variables) for g in gens if not g.is_zero()])
    return [Polynomial(variables, p.terms) for p in result if p.terms]


def normal_form(p, basis, order: TermOrder = GREVLEX, variables=None):
    p = Polynomial.coerce(p)
    basis, variables = _prepare(list(basis) + [p], variables)
    basis = basis[:-1]
    eng = _Engine(order, None)
    internal = [eng.monic(b.as_dict(variables)) for b in basis if not b.is_zero()]
    return Polynomial(variables, eng.reduce(p.as_dict(variables), internal))


def ideal_membership(p, basis, order: TermOrder = GREVLEX, variables=None) -> bool:
    """True iff ``p`` reduces to zero modulo the Groebner basis ``basis``."""
    return normal_form(p, basis, order, variables).is_zero()


def is_unit_ideal(basis) -> bool:
    return any(b.is_constant() and not b.is_zero() for b in basis)


def eliminate(gens, drop, budget: int | None = DEFAULT_BUDGET,
              keep_order=None) -> list:
    """Generators of the elimination ideal after removing ``drop``."""
    gens, variables = _prepare(gens, None)
    drop = [v for v in sort_vars(drop)]
    for v in drop:
        if v not in variables:
            raise ValueError(f"variable {v!r} does not occur in the generators")
    rest = [v for v in variables if v not in drop] if keep_order is None else list(keep_order)
    order = block_order(len(drop))
    G = groebner(gens, order, variables=tuple(drop) + tuple(rest), budget=budget)
    dropset = set(drop)
    return [g for g in G if not (set(g.vars) & dropset)]


def reduces_to_zero_both_ways(a: list, b: list, order: TermOrder = GREVLEX) -> bool:
    """Ideal equality test between two Groebner bases (same order)."""
    return (all(ideal_membership(p, b, order) for p in a)
            and all(ideal_membership(p, a, order) for p in b))


def ideal_contains(big_generators, small_generators, order: TermOrder = GREVLEX,
                   budget: int | None = DEFAULT_BUDGET) -> bool:
    """True iff every small generator lies in the ideal of the big ones."""
    big = [Polynomial.coerce(b) for b in big_generators]
    small = [Polynomial.coerce(s) for s in small_generators]
    names = set()
    for p in big + small:
        names.update(p.vars)
    variables = sort_vars(names)
    G = groebner(big, order, variables=variables, budget=budget)
    return all(ideal_membership(s, G, order, variables) for s in small)


def saturate(gens, by, budget: int | None = DEFAULT_BUDGET, aux: str = "_sat_t") -> list:
    """Generators of I : f^infinity via the Rabinowitsch trick."""
    gens = [Polynomial.coerce(g) for g in gens]
    f = Polynomial.coerce(by)
    t = Polynomial.var(aux)
    return eliminate(gens + [t * f - 1], [aux], budget=budget)
