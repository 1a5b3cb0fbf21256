"""Linear Pfaffian systems with independence condition.

A system lives on a :class:`StructureModel`.  Its ideal 1-forms are each
solved for a designated generator; the independence forms are the
``omega`` generators; every other generator is *free* (a tableau form).
A restriction to a locus in the scalars is stored as a substitution for
the solved scalars plus relation 1-forms (the differentials of the defining
equations) that are solved for further generators, so derivatives are
computed upstairs and pulled back.

The 2-forms of the system are d of the ideal forms reduced modulo the
ideal and the relations.  A reduced 2-form splits into a linear part
(free ^ omega), torsion (omega ^ omega) and a quadratic part (free ^ free);
a system is linear when every quadratic part vanishes.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from functools import cached_property

from gmpy2 import mpq

from .algebra.groebner import DEFAULT_BUDGET, GREVLEX, groebner, saturate
from .algebra.linalg import (ExactMatrix, _back_reduce, clear_row_denominators, echelon,
                             minors_ideal, nullspace, random_point, rank_at, rank_generic)
from .algebra.numbers import MPQ, GaussianRational
from .algebra.parse import parse_polynomial
from .algebra.poly import Polynomial, sort_vars, var_key
from .algebra.ratfunc import RationalFunction
from .algebra.scalars import (diff, divide, format_scalar, is_constant, is_zero,
                              numerator_denominator, scalar_vars, simplify, subs)
from .austere import SymSpace
from .exterior import Coframe, Form, Reducer, StructureModel, d, substitute_scalars

CONST = (MPQ, GaussianRational)
ZERO, ONE = mpq(0), mpq(1)


def _is_const(v) -> bool:
    return isinstance(simplify(v), CONST)


def _cost(v) -> tuple:
    """Preference for a pivot coefficient: constants first, then small."""
    v = simplify(v)
    if isinstance(v, CONST):
        return (0, 0)
    if isinstance(v, Polynomial):
        return (1, len(v.terms))
    return (2, len(v.num.terms) + len(v.den.terms))


@dataclass
class TwoFormParts:
    """A reduced system 2-form split by generator kind.

    ``linear[(rho, k)]`` is the coefficient of rho ^ omega^k,
    ``torsion[(k, l)]`` (k < l) that of omega^k ^ omega^l and
    ``quadratic[(rho, sigma)]`` that of rho ^ sigma.
    """

    source: int
    linear: dict
    torsion: dict
    quadratic: dict

    @property
    def is_linear(self) -> bool:
        return not self.quadratic


class PfaffSystem:
    """A Pfaffian system with independence condition (immutable)."""

    def __init__(self, model: StructureModel, ideal, solve_for, independence, *,
                 added=(), relations=(), substitution=None, label: str = ""):
        self.model = model
        self.ideal = tuple(ideal)
        self.solve_for = tuple(solve_for)
        self.independence = tuple(independence)
        self.added = tuple(added)
        self.relations = tuple(relations)  # (Form, generator name)
        self.substitution = dict(substitution or {})
        self.label = label
        if len(self.ideal) != len(self.solve_for):
            raise ValueError("one designated generator per ideal form is required")
        cf = model.coframe
        for name in self.independence:
            if name not in cf.index:
                raise ValueError(f"unknown independence generator {name!r}")
        taken = set(self.solve_for) | {g for _, g in self.relations}
        bad = taken & set(self.independence)
        if bad:
            raise ValueError(f"independence generators cannot be solved for: {sorted(bad)}")
        # building the reducer validates solvability of the designations
        self.reducer

    # -- structure ------------------------------------------------------------
    @property
    def coframe(self) -> Coframe:
        return self.model.coframe

    @property
    def n(self) -> int:
        return len(self.independence)

    @cached_property
    def reducer(self) -> Reducer:
        forms = [self._subs(f) for f in self.ideal] + [f for f, _ in self.relations]
        names = list(self.solve_for) + [g for _, g in self.relations]
        return Reducer(forms, names)

    @cached_property
    def free_generators(self) -> tuple:
        taken = set(self.solve_for) | {g for _, g in self.relations} | set(self.independence)
        return tuple(g for g in self.coframe.generators if g not in taken)

    def _subs(self, f: Form) -> Form:
        return substitute_scalars(f, self.substitution) if self.substitution else f

    def reduce(self, f: Form) -> Form:
        """Pull back to the locus and reduce modulo the ideal."""
        return self.reducer(self._subs(f))

    def d(self, f: Form) -> Form:
        """Exterior derivative computed upstairs, then pulled back and reduced."""
        return self.reduce(d(f, self.model))

    @cached_property
    def two_forms(self) -> tuple:
        return tuple(self.d(f) for f in self.ideal)

    @cached_property
    def parts(self) -> tuple:
        return tuple(self.split(f, k) for k, f in enumerate(self.two_forms))

    def split(self, form: Form, source: int = -1) -> TwoFormParts:
        gens = self.coframe.generators
        ind = {g: k for k, g in enumerate(self.independence, start=1)}
        free = set(self.free_generators)
        lin, tor, quad = {}, {}, {}
        for idx, c in form.terms.items():
            if len(idx) != 2:
                raise ValueError("expected a 2-form")
            a, b = gens[idx[0]], gens[idx[1]]
            if a in ind and b in ind:
                tor[(ind[a], ind[b])] = c
            elif a in ind and b in free:
                lin[(b, ind[a])] = simplify(-c)
            elif a in free and b in ind:
                lin[(a, ind[b])] = c
            elif a in free and b in free:
                quad[(a, b)] = c
            else:
                raise ValueError(f"reduced 2-form still contains solved generator {a} or {b}")
        return TwoFormParts(source, lin, tor, quad)

    @cached_property
    def is_linear(self) -> bool:
        return all(p.is_linear for p in self.parts)

    @property
    def linear_parts(self) -> list:
        return [p for p in self.parts if p.is_linear]

    def scalars(self) -> tuple:
        cf = self.coframe
        return tuple(s for s in cf.scalars if s not in self.substitution)

    def __repr__(self):
        return (f"PfaffSystem({self.label or self.model.name}: {len(self.ideal)} forms, "
                f"{len(self.free_generators)} free generators)")

    # -- serialization ----------------------------------------------------------
    def to_json(self) -> dict:
        spec = self.model.metadata.get("spec")
        return {"model": spec, "ideal": [f.to_json() for f in self.ideal],
                "solve_for": list(self.solve_for), "independence": list(self.independence)}


# -- construction ---------------------------------------------------------------

def standard_system(model, space: SymSpace, with_params: bool | None = None) -> PfaffSystem:
    """{theta^a, eta^a_i - S^a_ij omega^j}; normal directions beyond the
    dimension of the space get S = 0 (first normal space smaller than r)."""
    n, r = model.metadata["n"], model.metadata["r"]
    if space.n != n:
        raise ValueError(f"space has matrix size {space.n}, model has n={n}")
    if space.dim > r:
        raise ValueError(f"space dimension {space.dim} exceeds the normal rank r={r}")
    declared = set(model.coframe.scalars)
    used = set()
    for S in space.basis:
        for row in S:
            for v in row:
                used.update(scalar_vars(v))
    if used - declared:
        raise ValueError(f"matrix entries use scalars not in the model: {sorted(used - declared)}")
    if with_params is False and used:
        raise ValueError("with_params=False but the matrices contain parameters")
    cf = model.coframe
    ideal, names = [], []
    for a in range(1, r + 1):
        ideal.append(cf.gen(f"theta{a}"))
        names.append(f"theta{a}")
    for a in range(1, r + 1):
        S = space.basis[a - 1] if a <= space.dim else None
        for i in range(1, n + 1):
            f = cf.gen(f"eta{a}_{i}")
            if S is not None:
                for j in range(1, n + 1):
                    v = S[i - 1][j - 1]
                    if not is_zero(v):
                        f = f - cf.gen(f"omega{j}").scale(v)
            ideal.append(f)
            names.append(f"eta{a}_{i}")
    return PfaffSystem(model, ideal, names, [f"omega{i}" for i in range(1, n + 1)],
                       label=f"standard system ({space.label or 'custom'} space)")


def _choose_generator(form: Form, candidates) -> str:
    """Free generator with the simplest coefficient; ties go to the one
    latest in the coframe."""
    cf = form.coframe
    best, best_key = None, None
    for name in candidates:
        c = form.terms.get((cf.index[name],))
        if c is None or is_zero(c):
            continue
        key = (_cost(c), -cf.index[name])
        if best_key is None or key < best_key:
            best, best_key = name, key
    if best is None:
        raise ValueError(f"form {form} involves no free generator")
    return best


def augment(sys: PfaffSystem, extra, solve_for=None) -> PfaffSystem:
    """Adjoin 1-forms to the ideal (they may make the system nonlinear)."""
    extra = list(extra)
    if not extra:
        return sys
    ideal, names = list(sys.ideal), list(sys.solve_for)
    added = list(sys.added)
    current = sys
    for k, f in enumerate(extra):
        if solve_for is not None:
            name = solve_for[k]
        else:
            name = _choose_generator(current.reduce(f), current.free_generators)
        ideal.append(f)
        names.append(name)
        added.append(len(ideal) - 1)
        current = PfaffSystem(sys.model, ideal, names, sys.independence, added=added,
                              relations=sys.relations, substitution=sys.substitution,
                              label=sys.label)
    current.label = sys.label + " (augmented)"
    return current


def _solve_scalar(p, designated, candidates):
    """Solve polynomial p = 0 for one scalar; returns (name, value)."""
    if designated is not None:
        target = designated
        if p.degree(target) != 1:
            raise ValueError(f"equation {p} is not linear in {target!r}")
    else:
        target = None
        for v in sorted(p.vars, key=var_key, reverse=True):
            if v in candidates and p.degree(v) == 1:
                target = v
                break
        if target is None:
            raise ValueError(f"equation {p} cannot be solved for any scalar")
    coeff = p.diff(target)
    if coeff.is_zero():
        raise ValueError(f"equation {p} is not solvable for {target!r}")
    rest = p - coeff * Polynomial.var(target)
    return target, divide(-rest, coeff)


def restrict(sys: PfaffSystem, equations, solve_for=None) -> PfaffSystem:
    """Pull the system back to the locus where the equations hold."""
    equations = [parse_polynomial(e) if isinstance(e, str) else Polynomial.coerce(e)
                 for e in equations]
    if not equations:
        return sys
    if solve_for is not None and len(solve_for) != len(equations):
        raise ValueError("one designated scalar per equation")
    cf = sys.coframe
    sub = dict(sys.substitution)
    relations = list(sys.relations)
    current = sys
    for k, eq in enumerate(equations):
        p = numerator_denominator(subs(eq, sub))[0] if sub else eq
        if p.is_zero():
            continue
        candidates = [s for s in cf.scalars if s not in sub]
        name, value = _solve_scalar(p, None if solve_for is None else solve_for[k], candidates)
        if name not in cf.scalars:
            raise ValueError(f"{name!r} is not a scalar of the model")
        sub = {s: simplify(subs(v, {name: value})) for s, v in sub.items()}
        sub[name] = value
        relations = [(substitute_scalars(f, {name: value}), g) for f, g in relations]
        # differential of the equation, pulled back and reduced
        probe = PfaffSystem(sys.model, sys.ideal, sys.solve_for, sys.independence,
                            added=sys.added, relations=relations, substitution=sub,
                            label=sys.label)
        dp = probe.reduce(sys.model.d_scalar(eq))
        dp = Form(cf, {i: c for i, c in dp.terms.items()}, degree=1)
        if dp.is_zero():
            current = probe
            continue
        free = probe.free_generators
        if cf.scalar_kind(name) == "free" and cf.differential_name(name) in free \
                and (cf.index[cf.differential_name(name)],) in dp.terms:
            gen = cf.differential_name(name)
        else:
            gen = _choose_generator(dp, free)
        relations.append((dp, gen))
        current = PfaffSystem(sys.model, sys.ideal, sys.solve_for, sys.independence,
                              added=sys.added, relations=relations, substitution=sub,
                              label=sys.label)
    current = PfaffSystem(sys.model, sys.ideal, sys.solve_for, sys.independence,
                          added=sys.added, relations=relations, substitution=sub,
                          label=sys.label + " (restricted)")
    return current


def specialize(sys: PfaffSystem, point: dict) -> PfaffSystem:
    """Same system evaluated pointwise at fixed scalar values (no relations):
    only the algebraic data at the point is meaningful."""
    point = {k: simplify(v) for k, v in point.items()}
    sub = {s: simplify(subs(v, point)) for s, v in sys.substitution.items()}
    sub.update(point)
    return _PointSystem(sys, sub)


class _PointSystem(PfaffSystem):
    """View of a system whose 2-form coefficients are evaluated at a point."""

    def __init__(self, base: PfaffSystem, point: dict):
        self.base = base
        self.point = point
        super().__init__(base.model, base.ideal, base.solve_for, base.independence,
                         added=base.added, relations=base.relations,
                         substitution=base.substitution, label=base.label + " (at a point)")

    @cached_property
    def two_forms(self) -> tuple:
        return tuple(substitute_scalars(f, self.point) for f in self.base.two_forms)

    def reduce(self, f: Form) -> Form:
        return substitute_scalars(self.base.reduce(f), self.point)


# -- integral elements ---------------------------------------------------------------

def _fresh(prefix: str, count: int, taken) -> list:
    taken = set(taken)
    stem = prefix
    while any(f"{stem}{k}" in taken for k in range(1, count + 1)):
        stem += "_"
    return [f"{stem}{k}" for k in range(1, count + 1)]


@dataclass(frozen=True)
class Affine:
    """const + sum coeffs[t] * t with Scalar coefficients (kept unexpanded)."""

    coeffs: dict
    const: object = ZERO

    def coefficient(self, t: str):
        return self.coeffs.get(t, ZERO)

    def is_zero(self) -> bool:
        return not self.coeffs and is_zero(self.const)

    def scaled(self, c) -> "Affine":
        return Affine({t: simplify(c * v) for t, v in self.coeffs.items()}, simplify(c * self.const))

    def to_scalar(self):
        """Single Scalar over a common denominator."""
        parts = [(Polynomial.var(t), v) for t, v in self.coeffs.items()]
        dens = [numerator_denominator(v)[1] for _, v in parts] + \
            [numerator_denominator(self.const)[1]]
        common = Polynomial.const(1)
        for den in dens:
            if not den.is_constant():
                from .algebra.ratfunc import poly_cofactors
                _, a, _ = poly_cofactors(common, den)
                common = a * den
        total = simplify(self.const * common)
        for var_, v in parts:
            total = total + simplify(v * common) * var_
        return divide(simplify(total), common)


@dataclass
class IntegralElementSpace:
    """Integral elements rho = sum_k P[rho, k] omega^k at a generic point.

    ``values[(rho, k)]`` is affine in the parameters.  ``dimension`` is the
    tableau dimension: free generators that never enter the 2-forms (the
    complement of the span of the pi-forms) are not counted.
    """

    free_generators: tuple
    n: int
    parameters: list
    torsion: list
    raw_dimension: int
    pi_rank: int
    pivot_polynomials: list
    unknowns: list = field(default_factory=list, repr=False)
    pivots: list = field(default_factory=list, repr=False)

    @cached_property
    def values(self) -> dict:
        """P[rho, k] as Affine expressions in the parameters."""
        rhs = len(self.unknowns)
        reduced = _back_reduce(self.pivots)
        pivot_cols = {c for c, _ in reduced}
        free_cols = [j for j in range(rhs) if j not in pivot_cols]
        name = dict(zip(free_cols, self.parameters))
        out = {self.unknowns[j]: Affine({name[j]: ONE}) for j in free_cols}
        for c, r in reduced:
            coeffs, const = {}, ZERO
            for j, a in r.items():
                if j == c:
                    continue
                if j == rhs:
                    const = simplify(-a)
                else:
                    coeffs[name[j]] = simplify(-a)
            out[self.unknowns[c]] = Affine(coeffs, const)
        return out

    def value(self, rho: str, k: int):
        """P[rho, k] as a single Scalar."""
        return self.values[(rho, k)].to_scalar()

    @property
    def excess(self) -> int:
        return len(self.free_generators) - self.pi_rank

    @property
    def dimension(self) -> int:
        return self.raw_dimension - self.n * self.excess

    @property
    def has_torsion(self) -> bool:
        return bool(self.torsion)

    def assignment(self, coframe: Coframe, independence) -> dict:
        out = {}
        for rho in self.free_generators:
            f = coframe.zero(1)
            for k in range(1, self.n + 1):
                v = self.values[(rho, k)]
                if not v.is_zero():
                    f = f + coframe.gen(independence[k - 1]).scale(v.to_scalar())
            out[rho] = f
        return out

    def to_json(self) -> dict:
        return {"dimension": self.dimension, "raw_dimension": self.raw_dimension,
                "pi_rank": self.pi_rank, "parameters": len(self.parameters),
                "torsion": [format_scalar(t) for t in self.torsion]}


def _equations(sys: PfaffSystem, parts):
    """Rows of the integral-element system: one per (2-form, k < l)."""
    free = sys.free_generators
    n = sys.n
    col = {(rho, k): j for j, (rho, k) in enumerate((r, k) for r in free
                                                      for k in range(1, n + 1))}
    rhs = len(col)
    rows = []
    for part in parts:
        for k in range(1, n + 1):
            for l in range(k + 1, n + 1):
                row = {}
                # rho ^ omega^l with rho = P[rho, k] omega^k gives +P[rho, k]
                # rho ^ omega^k gives -P[rho, l] on omega^k ^ omega^l
                for (rho, m), c in part.linear.items():
                    if m == l:
                        j = col[(rho, k)]
                        row[j] = simplify(row.get(j, ZERO) + c)
                    elif m == k:
                        j = col[(rho, l)]
                        row[j] = simplify(row.get(j, ZERO) - c)
                t = part.torsion.get((k, l))
                if t is not None:
                    row[rhs] = t
                row = {j: v for j, v in row.items() if not is_zero(v)}
                if row:
                    rows.append(row)
    return rows, col, rhs


def pi_matrix_rows(sys: PfaffSystem, parts=None, flag=None) -> list:
    """The pi-forms as rows over the free generators.

    Row (part, m) holds the 1-form multiplying the m-th flag vector; with
    ``flag`` = G the flag covectors are omega = G omega'.
    """
    parts = sys.linear_parts if parts is None else parts
    free = {g: j for j, g in enumerate(sys.free_generators)}
    n = sys.n
    blocks = [[] for _ in range(n)]
    for part in parts:
        per_k = [{} for _ in range(n)]
        for (rho, k), c in part.linear.items():
            per_k[k - 1][free[rho]] = c
        for m in range(n):
            if flag is None:
                row = per_k[m]
            else:
                row = {}
                for k in range(n):
                    g = flag[k][m]
                    if g == 0:
                        continue
                    for j, c in per_k[k].items():
                        row[j] = simplify(row.get(j, ZERO) + g * c)
                row = {j: v for j, v in row.items() if not is_zero(v)}
            if row:
                blocks[m].append(row)
    return blocks


def _parts_at(sys: PfaffSystem, point):
    parts = sys.linear_parts
    if not point:
        return parts
    out = []
    for p in parts:
        out.append(TwoFormParts(p.source, {k: subs(v, point) for k, v in p.linear.items()},
                                {k: subs(v, point) for k, v in p.torsion.items()}, {}))
    return out


def integral_element_space(sys: PfaffSystem, point: dict | None = None,
                           prefix: str = "t", budget: int | None = None) -> IntegralElementSpace:
    """Solve for integral elements over the fraction field of the scalars
    (or at a point).  For a nonlinear system this is the space of its
    linear part."""
    parts = _parts_at(sys, point)
    rows, col, rhs = _equations(sys, parts)
    E = echelon(rows, rhs + 1, protected=frozenset([rhs]), budget=budget)
    pivot_polys = []
    for c, r in E.pivots:
        p = r[c]
        if not isinstance(p, CONST):
            pivot_polys.append(numerator_denominator(p)[0])
    torsion = []
    for r in E.residual:
        t = r.get(rhs)
        if t is not None and not is_zero(t):
            torsion.append(numerator_denominator(t)[0])
    pivot_cols = {c for c, _ in E.pivots}
    names = _fresh(prefix, rhs - E.rank, sys.coframe.scalars)
    pi_blocks = pi_matrix_rows(sys, parts)
    pi_rows = [r for b in pi_blocks for r in b]
    pi_rank = echelon(pi_rows, len(sys.free_generators)).rank if pi_rows else 0
    return IntegralElementSpace(sys.free_generators, sys.n, names, torsion, rhs - E.rank,
                                pi_rank, pivot_polys, list(col), E.pivots)


def _affine_sum(terms) -> Affine:
    coeffs, const = {}, ZERO
    for c, a in terms:
        for t, v in a.coeffs.items():
            coeffs[t] = coeffs.get(t, ZERO) + c * v
        const = const + c * a.const
    coeffs = {t: simplify(v) for t, v in coeffs.items()}
    return Affine({t: v for t, v in coeffs.items() if not is_zero(v)}, simplify(const))


def element_values(sys: PfaffSystem, space: IntegralElementSpace, form: Form) -> dict:
    """omega^k coefficient of a 1-form on the generic integral element, as
    Affine expressions in the parameters (k = 1..n)."""
    f = sys.reduce(form)
    cf = sys.coframe
    free = set(space.free_generators)
    ind = {g: k for k, g in enumerate(sys.independence, start=1)}
    terms = {k: [] for k in range(1, sys.n + 1)}
    for (j,), c in f.terms.items():
        name = cf.generators[j]
        if name in free:
            for k in range(1, sys.n + 1):
                terms[k].append((c, space.values[(name, k)]))
        elif name in ind:
            terms[ind[name]].append((c, Affine({}, ONE)))
        else:
            raise ValueError(f"generator {name} is neither free nor independent")
    return {k: _affine_sum(v) for k, v in terms.items()}


def evaluate_on_elements(sys: PfaffSystem, space: IntegralElementSpace, form: Form) -> Form:
    """Restrict a 1-form to the generic integral element (a form in omega
    with coefficients affine in the parameters)."""
    cf = sys.coframe
    out = cf.zero(1)
    for k, a in element_values(sys, space, form).items():
        if not a.is_zero():
            out = out + cf.gen(sys.independence[k - 1]).scale(a.to_scalar())
    return out


def vanishes_on_elements(sys: PfaffSystem, form: Form, space=None) -> bool:
    space = space or integral_element_space(sys)
    return all(a.is_zero() for a in element_values(sys, space, form).values())


# -- Cartan characters -------------------------------------------------------------

@dataclass
class CharacterVector:
    characters: list
    flag: str
    dim_integral_elements: int
    coordinate_characters: list | None = None

    @property
    def cartan_bound(self) -> int:
        return sum(k * s for k, s in enumerate(self.characters, start=1))

    @property
    def involutive(self) -> bool:
        return self.dim_integral_elements == self.cartan_bound

    def __getitem__(self, k: int) -> int:
        """1-based access: chars[1] is s_1."""
        return self.characters[k - 1]

    def to_json(self) -> dict:
        out = {"characters": [str(s) for s in self.characters], "flag": self.flag,
               "dim_integral_elements": str(self.dim_integral_elements),
               "cartan_bound": str(self.cartan_bound), "involutive": self.involutive}
        if self.coordinate_characters is not None:
            out["coordinate_characters"] = [str(s) for s in self.coordinate_characters]
        return out


def _cumulative_ranks(blocks, ncols: int) -> list:
    """Ranks of the row spans of blocks[0], blocks[0:2], ... (incremental
    elimination over the fraction field)."""
    pivots: list = []  # (col, row normalized to pivot 1)
    out = []
    for block in blocks:
        for row in block:
            row = dict(row)
            for c, prow in pivots:
                a = row.get(c)
                if a is None:
                    continue
                for j, v in prow.items():
                    nv = simplify(row.get(j, ZERO) - a * v)
                    if is_zero(nv):
                        row.pop(j, None)
                    else:
                        row[j] = nv
            if not row:
                continue
            c = min(row, key=lambda j: (_cost(row[j]), j))
            p = row[c]
            inv_row = {j: simplify(divide(v, p)) for j, v in row.items()}
            pivots.append((c, inv_row))
        out.append(len(pivots))
    return out


def random_flag(n: int, rng: random.Random) -> list:
    while True:
        G = [[mpq(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(n)] for _ in range(n)]
        from .algebra.linalg import determinant
        if determinant(G) != 0:
            return G


def characters_for_flag(sys: PfaffSystem, flag=None, point=None) -> list:
    parts = _parts_at(sys, point)
    blocks = pi_matrix_rows(sys, parts, flag)
    cum = _cumulative_ranks(blocks, len(sys.free_generators))
    return [cum[0]] + [cum[k] - cum[k - 1] for k in range(1, len(cum))]


def _scalar_vars_of_parts(parts) -> list:
    names = set()
    for p in parts:
        for v in list(p.linear.values()) + list(p.torsion.values()):
            names.update(scalar_vars(v))
    return sorted(names, key=var_key)


def cartan_characters(sys: PfaffSystem, seed: int = 0, point: dict | None = None,
                      space: IntegralElementSpace | None = None,
                      samples: int = 2) -> CharacterVector:
    """Characters along a randomized rational flag (asserted) and along the
    coordinate flag (reported, exact over the fraction field), with Cartan's
    test against the exact integral-element dimension.

    Randomized-flag ranks are taken at random rational values of the
    remaining scalars; each is a lower bound for the generic rank, so the
    maximum over the samples is used, and equality in Cartan's test
    certifies the generic characters.
    """
    rng = random.Random(seed)
    flag = random_flag(sys.n, rng)
    parts = _parts_at(sys, point)
    names = _scalar_vars_of_parts(parts)
    nfree = len(sys.free_generators)
    best = None
    for _ in range(samples if names else 1):
        pt = dict(point or {})
        if names:
            while True:
                vals = random_point(names, rng)
                try:
                    sample_parts = _parts_at(sys, {**pt, **vals})
                    break
                except ZeroDivisionError:
                    continue
        else:
            sample_parts = parts
        cum = _cumulative_ranks(pi_matrix_rows(sys, sample_parts, flag), nfree)
        best = cum if best is None else [max(a, b) for a, b in zip(best, cum)]
    chars = [best[0]] + [best[k] - best[k - 1] for k in range(1, len(best))]
    coord = characters_for_flag(sys, None, point)
    space = space or integral_element_space(sys, point)
    return CharacterVector(chars, "randomized", space.dimension, coord)


# -- forced 1-forms and torsion ---------------------------------------------------------

def forced_one_forms(sys: PfaffSystem, space: IntegralElementSpace | None = None) -> list:
    """1-forms in the free generators (plus omega offsets) that vanish on
    every admissible integral element."""
    space = space or integral_element_space(sys)
    free = sys.free_generators
    n = sys.n
    params = space.parameters
    # homogeneous directions: coefficient of each parameter in P[rho, k]
    rows = []
    for k in range(1, n + 1):
        for t in params:
            row = {}
            for j, rho in enumerate(free):
                c = space.values[(rho, k)].coefficient(t)
                if not is_zero(c):
                    row[j] = c
            if row:
                rows.append(row)
    kernel = nullspace(ExactMatrix(rows, len(free))) if rows else \
        [[ONE if i == j else ZERO for i in range(len(free))] for j in range(len(free))]
    cf = sys.coframe
    out = []
    for vec in kernel:
        vec = _normalize_vector(vec)
        f = cf.zero(1)
        for j, c in enumerate(vec):
            if not is_zero(c):
                f = f + cf.gen(free[j]).scale(c)
        # subtract the value on the particular element
        for k in range(1, n + 1):
            off = ZERO
            for j, c in enumerate(vec):
                if not is_zero(c):
                    off = off + c * space.values[(free[j], k)].const
            off = simplify(off)
            if not is_zero(off):
                f = f - cf.gen(sys.independence[k - 1]).scale(off)
        out.append(f)
    return out


def _normalize_vector(vec):
    """Clear denominators and make the first nonzero entry 1 when constant."""
    row = clear_row_denominators({j: v for j, v in enumerate(vec) if not is_zero(v)})
    first = min(row)
    lead = row[first]
    if isinstance(lead, CONST):
        row = {j: simplify(v / lead if isinstance(lead, MPQ) else v * lead.inverse())
               for j, v in row.items()}
    return [row.get(j, ZERO) for j in range(len(vec))]


def in_span(sys: PfaffSystem, forms, target: Form) -> bool:
    """Is the reduced target a fraction-field combination of the forms?"""
    cf = sys.coframe
    vecs = [sys.reduce(f).terms for f in forms]
    t = sys.reduce(target).terms
    keys = sorted({k for v in vecs for k in v} | set(t))
    index = {k: j for j, k in enumerate(keys)}
    base = [{index[k]: c for k, c in v.items()} for v in vecs]
    r0 = echelon(base, len(keys)).rank if base else 0
    r1 = echelon(base + [{index[k]: c for k, c in t.items()}], len(keys)).rank
    return r0 == r1


def span_rank(sys: PfaffSystem, forms) -> int:
    vecs = [sys.reduce(f).terms for f in forms]
    keys = sorted({k for v in vecs for k in v})
    index = {k: j for j, k in enumerate(keys)}
    return echelon([{index[k]: c for k, c in v.items()} for v in vecs], len(keys)).rank


@dataclass
class TorsionConditions:
    polynomials: list
    groebner_basis: list

    @property
    def empty(self) -> bool:
        return not self.polynomials

    @property
    def inconsistent(self) -> bool:
        return any(g.is_constant() and not g.is_zero() for g in self.groebner_basis)

    def to_json(self) -> dict:
        return {"polynomials": [str(p) for p in self.polynomials],
                "groebner_basis": [str(p) for p in self.groebner_basis]}


def torsion_locus(sys: PfaffSystem, space: IntegralElementSpace | None = None,
                  budget: int | None = DEFAULT_BUDGET, nonzero=()) -> TorsionConditions:
    """Scalar conditions for integral elements to exist.

    The residual rows of the elimination give polynomials valid where the
    non-constant pivots do not vanish; the ideal is saturated by those
    pivots, and by the ``nonzero`` polynomials (open conditions on the
    domain such as g11 != 0), before the reduced Groebner basis is reported.
    """
    space = space or integral_element_space(sys)
    polys = []
    seen = set()
    for t in space.torsion:
        p = Polynomial.coerce(t).primitive()
        if p not in seen:
            seen.add(p)
            polys.append(p)
    if not polys:
        return TorsionConditions([], [])
    gb = groebner(polys, GREVLEX, budget=budget)
    pivots = [Polynomial.coerce(p) for p in space.pivot_polynomials]
    pivots += [parse_polynomial(p) if isinstance(p, str) else Polynomial.coerce(p) for p in nonzero]
    if pivots and not any(g.is_constant() for g in gb):
        prod = Polynomial.const(1)
        for p in {q.primitive() for q in pivots}:
            prod = prod * p
        gb = groebner(saturate(gb, prod, budget=budget), GREVLEX, budget=budget)
    gb = [g.primitive() for g in gb]
    return TorsionConditions(polys, gb)


# -- characteristic variety ------------------------------------------------------------

XI = ("xi1", "xi2", "xi3", "xi4")


def polar_matrix(sys: PfaffSystem, xi=None, point=None) -> ExactMatrix:
    """Rows pi_j xi_k - pi_k xi_j (j < k) for every linear 2-form, expressed
    over the free generators."""
    n = sys.n
    xi = [Polynomial.var(f"xi{k}") for k in range(1, n + 1)] if xi is None else \
        [simplify(v) for v in xi]
    parts = _parts_at(sys, point)
    blocks = pi_matrix_rows(sys, parts)
    # regroup per part: pi_matrix_rows drops empty rows, so rebuild per part
    free = {g: j for j, g in enumerate(sys.free_generators)}
    rows = []
    for part in parts:
        per_k = [{} for _ in range(n)]
        for (rho, k), c in part.linear.items():
            per_k[k - 1][free[rho]] = c
        for j in range(n):
            for k in range(j + 1, n):
                row = {}
                for col, c in per_k[j].items():
                    row[col] = simplify(row.get(col, ZERO) + c * xi[k])
                for col, c in per_k[k].items():
                    row[col] = simplify(row.get(col, ZERO) - c * xi[j])
                row = {c: v for c, v in row.items() if not is_zero(v)}
                rows.append(row)
    return ExactMatrix(rows, len(free))


@dataclass
class CharVarietyReport:
    generic_polar_rank: int
    expected_full_rank: int
    sample_ranks: list
    drop_locus: list = field(default_factory=list)  # (conditions, chart, ideal)

    @property
    def empty(self) -> bool:
        return self.generic_polar_rank == self.expected_full_rank

    def to_json(self) -> dict:
        return {"generic_polar_rank": str(self.generic_polar_rank),
                "expected_full_rank": str(self.expected_full_rank),
                "sample_ranks": [str(r) for r in self.sample_ranks],
                "drop_locus": [{"conditions": c, "chart": ch, "ideal": [str(p) for p in I]}
                               for c, ch, I in self.drop_locus]}


def _distinct_primes(count: int, rng: random.Random) -> list:
    primes = [p for p in range(2, 200) if all(p % q for q in range(2, int(p ** 0.5) + 1))]
    return rng.sample(primes, count)


def characteristic_variety(sys: PfaffSystem, seed: int = 0, point: dict | None = None,
                           samples: int = 3) -> CharVarietyReport:
    """Generic polar rank (symbolic xi and scalars) plus ranks at random xi
    with distinct prime coordinates."""
    M = polar_matrix(sys, point=point)
    expected = integral_element_space(sys, point).pi_rank
    generic = rank_generic(M, seed=seed)
    rng = random.Random(seed)
    ranks = []
    scal = [v for v in M.variables() if not v.startswith("xi")]
    for _ in range(samples):
        pt = {f"xi{k}": mpq(p) for k, p in enumerate(_distinct_primes(sys.n, rng), start=1)}
        Mx = M.subs(pt)
        ranks.append(rank_generic(Mx, seed=rng.randint(0, 10 ** 6)) if scal else
                     echelon(Mx.rows, Mx.ncols).rank)
    return CharVarietyReport(generic, expected, ranks)


def rank_drop_ideal(M: ExactMatrix, target: int, chart: str, budget: int | None = 20_000):
    """Ideal of the locus where rank M < target, on the affine chart where
    the variable ``chart`` equals 1.

    Constant pivots are eliminated first (they are units everywhere); the
    locus is then cut out by the minors of the remaining block of size
    target minus the number of constant pivots.  Returns (ideal, constant
    pivot count, remaining block).
    """
    M = M.subs({chart: ONE})
    rows = [dict(r) for r in M.rows if r]
    rows = [clear_row_denominators(r) for r in rows]
    npiv = 0
    while True:
        hit = None
        for i, r in enumerate(rows):
            for j, v in r.items():
                if isinstance(v, CONST) and v != 0:
                    hit = (i, j)
                    break
            if hit:
                break
        if hit is None:
            break
        i, j = hit
        prow = rows.pop(i)
        p = prow[j]
        inv = 1 / p if isinstance(p, MPQ) else p.inverse()
        prow = {c: simplify(v * inv) for c, v in prow.items()}
        new = []
        for r in rows:
            a = r.get(j)
            if a is not None:
                r = dict(r)
                for c, v in prow.items():
                    nv = simplify(r.get(c, ZERO) - a * v)
                    if is_zero(nv):
                        r.pop(c, None)
                    else:
                        r[c] = nv
            if r:
                new.append(r)
        rows = new
        npiv += 1
    need = target - npiv
    if need <= 0:
        return [], npiv, None
    cols = sorted({c for r in rows for c in r})
    index = {c: k for k, c in enumerate(cols)}
    N = ExactMatrix([{index[c]: v for c, v in r.items()} for r in rows], len(cols))
    if need > min(N.nrows, N.ncols):
        return [Polynomial.const(0)], npiv, N
    return minors_ideal(N, need, budget=budget), npiv, N


# -- quadratic obstructions and prolongation ----------------------------------------------

def quadratic_obstructions(sys: PfaffSystem, space: IntegralElementSpace | None = None,
                           point: dict | None = None, distinct: bool = False) -> list:
    """omega^k ^ omega^l coefficients of d(added forms) on the generic
    element of the linear part, as polynomials in the element parameters
    (numerators; zero coefficients dropped, duplicates kept unless
    ``distinct``)."""
    space = space or integral_element_space(sys, point)
    n = sys.n
    out, seen = [], set()
    for idx in sys.added:
        form = sys.two_forms[idx]
        if point:
            form = substitute_scalars(form, point)
        part = sys.split(form, idx)
        P = _ScalarValues(space)
        for k in range(1, n + 1):
            for l in range(k + 1, n + 1):
                v = part.torsion.get((k, l), ZERO)
                for (rho, m), c in part.linear.items():
                    if m == l:
                        v = v + c * P[(rho, k)]
                    elif m == k:
                        v = v - c * P[(rho, l)]
                for (a, b), c in part.quadratic.items():
                    v = v + c * (P[(a, k)] * P[(b, l)] - P[(a, l)] * P[(b, k)])
                v = simplify(v)
                if is_zero(v):
                    continue
                p = numerator_denominator(v)[0].primitive()
                if distinct and p in seen:
                    continue
                seen.add(p)
                out.append(p)
    return out


class _ScalarValues:
    """Lazy Scalar view of the element values."""

    def __init__(self, space: IntegralElementSpace):
        self.space = space
        self.cache: dict = {}

    def __getitem__(self, key):
        if key not in self.cache:
            self.cache[key] = self.space.values[key].to_scalar()
        return self.cache[key]


def prolong(sys: PfaffSystem, space: IntegralElementSpace | None = None,
            prefix: str = "P") -> PfaffSystem:
    """First prolongation: the element parameters become free scalars and
    every free generator rho is set equal to its value P[rho] . omega."""
    space = space or integral_element_space(sys, prefix=prefix)
    if space.torsion:
        raise ValueError("the system has torsion; restrict to the torsion locus first")
    old = sys.model
    cf = old.coframe
    params = list(space.parameters)
    gens = list(cf.generators) + [Coframe.differential_name(t) for t in params]
    new_cf = Coframe(gens, free_scalars=list(cf.free_scalars) + params,
                     dependent_scalars=cf.dependent_scalars)

    def lift(f: Form) -> Form:
        return Form(new_cf, dict(f.terms), degree=f.degree, _canonical=True)

    dgen = {g: lift(old.d_of_generator[g]) for g in cf.generators}
    for t in params:
        dgen[Coframe.differential_name(t)] = new_cf.zero(2)
    dscal = {s: lift(f) for s, f in old.d_of_scalar.items()}
    meta = dict(old.metadata)
    meta["prolonged_from"] = old.name
    model = StructureModel(new_cf, dgen, dscal, name=old.name + " (prolonged)", metadata=meta)
    ideal = [lift(f) for f in sys.ideal]
    names = list(sys.solve_for)
    for rho in sys.free_generators:
        f = new_cf.gen(rho)
        for k in range(1, sys.n + 1):
            v = space.values[(rho, k)]
            if not v.is_zero():
                f = f - new_cf.gen(sys.independence[k - 1]).scale(v.to_scalar())
        ideal.append(f)
        names.append(rho)
    relations = [(lift(f), g) for f, g in sys.relations]
    return PfaffSystem(model, ideal, names, sys.independence, added=(),
                       relations=relations, substitution=sys.substitution,
                       label=sys.label + " (prolonged)")


# -- JSON input ----------------------------------------------------------------------------

def system_from_json(data) -> PfaffSystem:
    """Build a system from {model, ideal | space, independence, ...}.

    ``model`` is a frame-bundle spec; either ``space`` (a SymSpace, giving
    the standard system) or ``ideal`` (form serializations with
    ``solve_for``) defines the ideal; optional ``augment`` and
    ``restrict`` lists are applied in that order.
    """
    from .frames import FrameBundleSpec, semi_orthonormal_bundle
    if isinstance(data, str):
        data = json.loads(data)
    if not isinstance(data, dict) or "model" not in data:
        raise ValueError("system JSON needs a 'model' object")
    model = semi_orthonormal_bundle(FrameBundleSpec.from_json(data["model"]))
    cf = model.coframe
    if "space" in data:
        sys = standard_system(model, SymSpace.from_json(data["space"]))
    elif "ideal" in data:
        ideal = [Form.from_json(cf, f, degree=1) for f in data["ideal"]]
        names = data.get("solve_for")
        if names is None:
            names = [_choose_generator(f, [g for g in cf.generators
                                           if not g.startswith("omega")]) for f in ideal]
        independence = data.get("independence", [f"omega{i}" for i in range(1, model.n + 1)])
        sys = PfaffSystem(model, ideal, names, independence, label="user system")
    else:
        raise ValueError("system JSON needs 'space' or 'ideal'")
    if data.get("augment"):
        sys = augment(sys, [Form.from_json(cf, f, degree=1) for f in data["augment"]])
    if data.get("restrict"):
        sys = restrict(sys, data["restrict"])
    return sys
