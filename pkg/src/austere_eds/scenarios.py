"""Scenario registry and runner.

A scenario declares its claims up front (label, expected value, provenance
tag, anchor) and a builder that computes them.  The runner records each
claim as pass, fail or skipped (step budget exceeded) and produces a
deterministic report.
"""
from __future__ import annotations

import random
import time
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable

from gmpy2 import mpq

from .algebra.groebner import (DEFAULT_BUDGET, BudgetExceeded, eliminate, groebner,
                               ideal_contains, is_unit_ideal, saturate)
from .algebra.linalg import ExactMatrix, echelon, rank_at, random_point
from .algebra.numbers import GaussianRational, I
from .algebra.parse import parse_polynomial
from .algebra.poly import Polynomial
from .algebra.scalars import (divide, format_scalar, is_zero, numerator_denominator, simplify,
                              subs)
from .austere import (CASE_TAGS, J, R, SymSpace, T_MAP, U_MAP, anticommutator, case_representative,
                      classify_pair, full_symmetric_space, is_austere, is_zero_matrix,
                      k_map_nullspace, kahler_exception_space, lambda3_of, mat_mul, mat_scale,
                      mat_transpose, maximal_basis, pair_space, prolongation, rho, rho_bar,
                      rho_bar_inverse, rho_inverse, type_a_basis, type_b_matrix, type_c_basis)
from .exterior import substitute_scalars
from .frames import FrameBundleSpec, semi_orthonormal_bundle, special_orthogonal_model
from .pfaffian import (_ScalarValues, ZERO, _equations, augment, cartan_characters,
                       characteristic_variety, forced_one_forms, in_span, integral_element_space,
                       polar_matrix, prolong, quadratic_obstructions, rank_drop_ideal, restrict,
                       span_rank, standard_system, torsion_locus, vanishes_on_elements)
from . import geometry, identities

TAGS = ("PAPER", "TRIVIAL", "DERIVED")
RECORDED = "(recorded)"


class UnknownScenario(KeyError):
    pass


class ParameterError(ValueError):
    pass


@dataclass(frozen=True)
class ClaimSpec:
    label: str
    expected: str | Callable  # a string, RECORDED, or a function of the parameters
    tag: str
    anchor: str
    full_only: bool = False

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValueError(f"claim {self.label!r}: unknown provenance tag {self.tag!r}")


@dataclass
class ClaimResult:
    label: str
    expected: str
    tag: str
    anchor: str
    status: str = "pending"
    computed: str = ""
    detail: str = ""

    def to_json(self) -> dict:
        out = {"label": self.label, "status": self.status, "expected": self.expected,
               "computed": self.computed, "tag": self.tag, "anchor": self.anchor}
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class Report:
    scenario: str
    seed: int
    params: dict
    claims: list
    wall_time: float = 0.0

    @property
    def status(self) -> str:
        if any(c.status == "fail" for c in self.claims):
            return "fail"
        if any(c.status == "skipped" for c in self.claims):
            return "skipped"
        return "pass"

    @property
    def ok(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        """Deterministic: wall time is deliberately left out."""
        return {"scenario": self.scenario, "status": self.status, "seed": self.seed,
                "params": {k: str(v) for k, v in sorted(self.params.items())},
                "claims": [c.to_json() for c in self.claims]}

    def to_text(self) -> str:
        lines = [f"scenario {self.scenario}: {self.status.upper()}  "
                 f"(seed {self.seed}, {self.wall_time:.2f} s)"]
        if self.params:
            lines.append("  params: " + ", ".join(f"{k}={v}" for k, v in sorted(self.params.items())))
        for c in self.claims:
            lines.append(f"  [{c.status:>7}] {c.label} [{c.tag}]")
            lines.append(f"            expected: {c.expected}")
            lines.append(f"            computed: {c.computed}")
            if c.detail:
                lines.append(f"            detail:   {c.detail}")
            lines.append(f"            anchor:   {c.anchor}")
        return "\n".join(lines)


@dataclass(frozen=True)
class Scenario:
    name: str
    description: str
    cost_class: str
    claims: tuple
    builder: Callable
    params: dict = field(default_factory=dict)

    def expected(self, spec: ClaimSpec, params: dict) -> str:
        return spec.expected(params) if callable(spec.expected) else spec.expected


class _ClaimContext:
    """``with ctx.claim(label) as c: c.set(value, ok)``; exceptions inside the
    block mark only this claim (budget -> skipped, anything else -> fail)."""

    def __init__(self, result: ClaimResult):
        self.result = result

    def set(self, computed, ok: bool | None = None, detail: str = ""):
        text = computed if isinstance(computed, str) else _fmt(computed)
        r = self.result
        r.computed = text
        if r.expected == RECORDED:
            passed = True if ok is None else ok
        else:
            passed = (text == r.expected) if ok is None else ok
        r.status = "pass" if passed else "fail"
        r.detail = detail

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc is None:
            if self.result.status == "pending":
                self.result.status = "fail"
                self.result.detail = "claim block finished without a value"
            return False
        if isinstance(exc, BudgetExceeded):
            self.result.status, self.result.detail = "skipped", str(exc)
            return True
        if isinstance(exc, Exception):
            self.result.status = "fail"
            self.result.detail = f"{type(exc).__name__}: {exc}"
            return True
        return False


class Context:
    def __init__(self, scenario: Scenario, seed: int, budget: int | None, params: dict, full: bool):
        self.scenario = scenario
        self.seed = seed
        self.budget = budget if budget is not None else DEFAULT_BUDGET
        self.params = params
        self.full = full
        self.rng = random.Random(seed)
        self.results: dict = {}
        for spec in scenario.claims:
            if spec.full_only and not full:
                continue
            self.results[spec.label] = ClaimResult(spec.label, scenario.expected(spec, params),
                                                   spec.tag, spec.anchor)

    def active(self, label: str) -> bool:
        return label in self.results

    def claim(self, label: str) -> _ClaimContext:
        if label not in self.results:
            raise KeyError(f"scenario {self.scenario.name} declares no claim {label!r}")
        return _ClaimContext(self.results[label])


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    if v is None:
        return "none"
    if isinstance(v, (int, str)):
        return str(v)
    try:
        return format_scalar(v)
    except Exception:
        return str(v)


def _chars(ch) -> str:
    """Characters without trailing zeros, e.g. 's1=24, s2=10'."""
    s = list(ch.characters)
    while len(s) > 1 and s[-1] == 0:
        s.pop()
    return ", ".join(f"s{k}={v}" for k, v in enumerate(s, start=1))


def _polys(text_list) -> list:
    return [parse_polynomial(t) for t in text_list]


def _same_ideal(G, target, budget) -> bool:
    return (ideal_contains(G, target, budget=budget)
            and ideal_contains(target, list(G), budget=budget))


# ----------------------------------------------------------------------------------------
# builders shared by several scenarios

def _type_a_systems(r: int):
    M = semi_orthonormal_bundle(FrameBundleSpec(n=4, r=r))
    S = standard_system(M, maximal_basis("A"))
    ph = M.phi
    psi = [(ph(2, 1) - ph(4, 3)).scale(mpq(1, 2)), (ph(3, 2) - ph(4, 1)).scale(mpq(1, 2))]
    plus = augment(S, psi)
    return M, S, psi, plus


def _type_c_lambda1_one():
    """The type C system with lambda1 = 1, lambda2 = l2 free and lambda3 = -1."""
    M = semi_orthonormal_bundle(FrameBundleSpec(n=4, r=3, params=("l2",)))
    return M, standard_system(M, maximal_basis("C", lambdas=(1, "l2")))


def _k2_system(tag: str, params: tuple):
    M = semi_orthonormal_bundle(FrameBundleSpec(n=4, r=2, params=params))
    S = standard_system(M, pair_space(case_representative(tag)))
    ph = M.phi
    return M, augment(S, [ph(2, 1) - ph(4, 3), ph(3, 2) - ph(4, 1)])


def _identity_metric(scalars) -> dict:
    return {s: (mpq(1) if s[1] == s[2] else mpq(0))
            for s in scalars if s.startswith("g") and len(s) == 3}


# ----------------------------------------------------------------------------------------
# scenario builders

def _lemma_prolong_bc(ctx: Context):
    for label, space in (("dim prolongation of Q_B", maximal_basis("B")),
                         ("dim prolongation of Q_C (symbolic lambda)", maximal_basis("C")),
                         ("dim prolongation of Q_A", maximal_basis("A")),
                         ("dim prolongation of S2(R4)", full_symmetric_space(4))):
        with ctx.claim(label) as c:
            c.set(prolongation(space).dimension)


def _austere_maximal_spaces(ctx: Context):
    A, B = maximal_basis("A"), maximal_basis("B")
    with ctx.claim("Q_A basis anticommutes with J") as c:
        c.set(f"{A.dim} matrices, {sum(is_zero_matrix(anticommutator(S, J)) for S in A.basis)} anticommute",
              ok=A.dim == 6 and all(is_zero_matrix(anticommutator(S, J)) for S in A.basis))
    with ctx.claim("Q_B traceless-block elements anticommute with R") as c:
        scalar_free = [S for S in B.basis if is_zero(S[0][0])]
        n = sum(is_zero_matrix(anticommutator(S, R)) for S in scalar_free)
        c.set(f"{B.dim} matrices, {len(scalar_free)} with m=0, {n} anticommute",
              ok=B.dim == 5 and len(scalar_free) == 4 and n == 4)
    with ctx.claim("Q_C at lambda1=lambda2=0: ranks <= 2, no common kernel") as c:
        mats = type_c_basis(0, 0, lambda3_of(0, 0))
        ranks = [echelon([{j: v for j, v in enumerate(row) if not is_zero(v)} for row in S], 4).rank
                 for S in mats]
        stacked = echelon([{j: v for j, v in enumerate(row) if not is_zero(v)}
                           for S in mats for row in S], 4).rank
        c.set(f"ranks {ranks}, common kernel dimension {4 - stacked}",
              ok=max(ranks) <= 2 and stacked == 4)
    for label, space in (("Q_A is austere", A), ("Q_B is austere", B),
                         ("Q_C with the lambda relation is austere", maximal_basis("C"))):
        with ctx.claim(label) as c:
            c.set(bool(is_austere(space)))
    with ctx.claim("span{I} is not austere (certificate trace)") as c:
        res = is_austere(SymSpace(4, (((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)),)))
        cert = res.certificate["name"] if res.certificate else "none"
        c.set(f"austere={_fmt(res.austere)}, certificate {cert}")
    with ctx.claim("Q_C with free lambda3 fails; certificate divisible by the lambda relation") as c:
        res = is_austere(maximal_basis("C", free_lambda3=True))
        rel = parse_polynomial("l1*l2*l3 + l1 + l2 + l3")
        cert = parse_polynomial(res.certificate["polynomial"]) if res.certificate else None
        divisible = cert is not None and ideal_contains([rel], [cert], budget=ctx.budget)
        c.set(f"austere={_fmt(res.austere)}, certificate {res.certificate['name'] if cert else 'none'}"
              f", divisible={_fmt(divisible)}", ok=(not res.austere) and divisible)
    with ctx.claim("lambda3 at lambda1=2, lambda2=1/2") as c:
        c.set(lambda3_of(mpq(2), mpq(1, 2)))


def _kmap_kahler(ctx: Context):
    with ctx.claim("K-map common nullspace of the zero space") as c:
        c.set(k_map_nullspace(SymSpace(4, ())).dimension)
    with ctx.claim("K-map common nullspace of Q_x (x=2) is nonzero") as c:
        x = ctx.params["x"]
        dim = k_map_nullspace(kahler_exception_space(x)).dimension
        c.set(f"dimension {dim}", ok=dim > 0)
    with ctx.claim("K-map common nullspace of Q_A") as c:
        c.set(k_map_nullspace(maximal_basis("A")).dimension)
    for name, T in (("T", T_MAP), ("U", U_MAP)):
        with ctx.claim(f"complex-structure 3-form identity for {name}") as c:
            res = identities.xi_identity_residual(T)
            c.set(f"{sum(not f.is_zero() for f in res)} nonzero components",
                  ok=all(f.is_zero() for f in res))


def _typeA_torsion(ctx: Context):
    M, S, psi, plus = _type_a_systems(6)
    with ctx.claim("torsion of the unaugmented type A system") as c:
        c.set(f"{len(torsion_locus(S, budget=ctx.budget).polynomials)} conditions")
    with ctx.claim("forced forms of the type A system contain phi2_1-phi4_3, phi3_2-phi4_1") as c:
        ff = forced_one_forms(S)
        ok = all(in_span(S, ff, p) for p in psi)
        c.set(f"{len(ff)} forced forms; both contained={_fmt(ok)}", ok=ok)
    target = _polys(["g13 - g22 - g46 + g55", "g16 - 2*g25 + g34"])
    tl = None
    with ctx.claim("torsion of the augmented system") as c:
        tl = torsion_locus(plus, budget=ctx.budget)
        c.set("{" + ", ".join(str(g) for g in tl.groebner_basis) + "}",
              ok=_same_ideal(tl.groebner_basis, target, ctx.budget))
    with ctx.claim("independent pi-forms on the torsion locus") as c:
        before = integral_element_space(plus).pi_rank
        F = restrict(plus, target)
        after = integral_element_space(F).pi_rank
        c.set(f"{after} (from {before})", ok=after == 34 and before - after == 2)


def _prop_charA(ctx: Context):
    M, S, psi, plus = _type_a_systems(6)
    F = restrict(plus, torsion_locus(plus, budget=ctx.budget).groebner_basis)
    ie = integral_element_space(F)
    ch = cartan_characters(F, seed=ctx.seed, space=ie)
    with ctx.claim("characters (randomized flag)") as c:
        c.set(_chars(ch), detail=f"coordinate flag: {ch.coordinate_characters}")
    with ctx.claim("integral-element fiber dimension") as c:
        c.set(ie.dimension)
    with ctx.claim("Cartan's test") as c:
        c.set("involutive" if ch.involutive else "not involutive")
    with ctx.claim("fiber dimension at a random point of the torsion locus") as c:
        pt = random_point([s for s in F.scalars()], ctx.rng)
        c.set(integral_element_space(F, point=pt).dimension)


def _typeA_highcodim(ctx: Context):
    r = ctx.params["r"]
    M, S, psi, plus = _type_a_systems(r)
    F = restrict(plus, torsion_locus(plus, budget=ctx.budget).groebner_basis)
    ie = integral_element_space(F)
    ch = cartan_characters(F, seed=ctx.seed, space=ie)
    with ctx.claim("characters (randomized flag)") as c:
        c.set(_chars(ch))
    with ctx.claim("Cartan's test") as c:
        c.set("involutive" if ch.involutive else "not involutive",
              detail=f"dimension {ie.dimension}")


def _typeA_holomorphic(ctx: Context):
    with ctx.claim("second half of the type A basis is minus the first times J") as c:
        B = type_a_basis()
        ok = [B[a + 3] == mat_scale(mat_mul(B[a], J), -1) for a in range(3)]
        c.set(_fmt(ok), ok=all(ok))
    M, S, psi, plus = _type_a_systems(6)
    F = restrict(plus, torsion_locus(plus, budget=ctx.budget).groebner_basis)
    ie = integral_element_space(F)
    k = M.kappa
    with ctx.claim("normal-connection J-commutation relations vanishing on a generic element") as c:
        rels = [k(a + 3, b + 3) - k(a, b) for a in range(1, 4) for b in range(1, 4)]
        rels += [k(a + 3, b) + k(a, b + 3) for a in range(1, 4) for b in range(1, 4)]
        vanish = sum(vanishes_on_elements(F, f, ie) for f in rels)
        c.set(f"{vanish} of {len(rels)}")


def _type_b_space(delta: int):
    names, basis = [], []
    for a in range(1, delta + 1):
        nm = [f"m{a}", f"b{a}_11", f"b{a}_12", f"b{a}_21", f"b{a}_22"]
        names += nm
        basis.append(type_b_matrix(*[Polynomial.var(x) for x in nm]))
    return names, SymSpace(4, tuple(basis), params=tuple(names), label="B")


def _prop_sixteen(ctx: Context):
    for delta in (5, 1, 2, 3, 4):
        names, space = _type_b_space(delta)
        M = semi_orthonormal_bundle(FrameBundleSpec(n=4, r=delta, params=tuple(names)))
        with ctx.claim(f"fiber dimension, normal rank {delta}") as c:
            c.set(integral_element_space(standard_system(M, space)).dimension)


def _type_b_normalized():
    basis = (type_b_matrix(0, 1, 0, 0, 0), type_b_matrix(0, 0, 1, 0, 0),
             type_b_matrix(0, 0, 0, 1, 0), type_b_matrix(0, 0, 0, 0, 1),
             type_b_matrix(1, 0, 0, 0, 0))
    M = semi_orthonormal_bundle(FrameBundleSpec(n=4, r=5))
    S = standard_system(M, SymSpace(4, basis, label="B normalized"))
    k, ph = M.kappa, M.phi
    psi = [k(5, 1) + ph(3, 1).scale(2), k(5, 2) + ph(4, 1).scale(2), k(5, 3) + ph(3, 2).scale(2),
           k(5, 4) + ph(4, 2).scale(2), k(5, 5),
           k(1, 2) - k(4, 3) + ph(4, 3).scale(2), k(1, 3) - k(4, 2) + ph(2, 1).scale(2),
           k(2, 1) - k(3, 4) - ph(4, 3).scale(2), k(3, 1) - k(2, 4) - ph(2, 1).scale(2),
           k(1, 1) - k(2, 2) - k(3, 3) + k(4, 4), k(1, 4) + k(2, 3) + k(3, 2) + k(4, 1)]
    return M, S, psi


def _typeB_forced(ctx: Context):
    M, S, psi = _type_b_normalized()
    ie = integral_element_space(S)
    with ctx.claim("fiber dimension") as c:
        c.set(ie.dimension)
    ff = forced_one_forms(S, ie)
    with ctx.claim("number of forced 1-forms") as c:
        c.set(len(ff))
    with ctx.claim("forced forms span the listed psi_1..psi_11") as c:
        a, b, u = span_rank(S, ff), span_rank(S, psi), span_rank(S, ff + psi)
        c.set(f"ranks {a}, {b}, union {u}", ok=a == b == u == 11)
    with ctx.claim("augmented system is nonlinear") as c:
        c.set(not augment(S, psi).is_linear)


def _typeB_nonexistence(ctx: Context):
    M, S, psi = _type_b_normalized()
    aug = augment(S, psi)
    Id = _identity_metric(M.coframe.scalars)
    ie = integral_element_space(aug, point=Id)
    q = quadratic_obstructions(aug, ie, point=Id)
    with ctx.claim("number of quadratic obstructions") as c:
        ieg = integral_element_space(aug)
        c.set(len(quadratic_obstructions(aug, ieg)), detail=f"{len(q)} at g = I")
    with ctx.claim("Groebner basis of the obstructions at g = I") as c:
        G = groebner(q, budget=ctx.budget)
        c.set("{" + ", ".join(str(g) for g in G) + "}")
    if ctx.active("elimination ideal contains g11+g55 and g22+g44"):
        with ctx.claim("elimination ideal contains g11+g55 and g22+g44") as c:
            ieg = integral_element_space(aug)
            qg = quadratic_obstructions(aug, ieg, distinct=True)
            occurring = {v for q in qg for v in q.vars}
            E = eliminate(qg, [t for t in ieg.parameters if t in occurring], budget=ctx.budget)
            ok = ideal_contains(E, _polys(["g11 + g55", "g22 + g44"]), budget=ctx.budget)
            c.set(f"{len(E)} generators; contains both={_fmt(ok)}", ok=ok)


def _type_c_system():
    M = semi_orthonormal_bundle(FrameBundleSpec(n=4, r=3, params=("l1", "l2", "l3"),
                                                constraints=("l1*l2*l3+l1+l2+l3",)))
    return M, standard_system(M, maximal_basis("C"))


def _typeC_characters(ctx: Context):
    M, S = _type_c_system()
    ie = integral_element_space(S)
    ch = cartan_characters(S, seed=ctx.seed, space=ie)
    with ctx.claim("independent pi-forms") as c:
        c.set(ie.pi_rank)
    with ctx.claim("characters (randomized flag)") as c:
        c.set(_chars(ch))
    with ctx.claim("integral-element fiber dimension") as c:
        c.set(ie.dimension)
    with ctx.claim("Cartan's test") as c:
        c.set("involutive" if ch.involutive else "not involutive",
              detail=f"dimension {ie.dimension} < bound {ch.cartan_bound}")
    with ctx.claim("fiber dimension at a random admissible lambda") as c:
        c.set(integral_element_space(S, point=_admissible_lambda(ctx.rng)).dimension)
    with ctx.claim("prolonged system at lambda=(2,1/2): fiber dimension") as c:
        Mc = semi_orthonormal_bundle(FrameBundleSpec(n=4, r=3))
        Sc = standard_system(Mc, maximal_basis("C", lambdas=(2, mpq(1, 2))))
        P = prolong(Sc)
        c.set(integral_element_space(P).dimension)


def _admissible_lambda(rng: random.Random) -> dict:
    """Random rational lambda1, lambda2 with all three lambdas outside {0, 1, -1}."""
    bad = {mpq(0), mpq(1), mpq(-1)}
    while True:
        l1 = mpq(rng.randint(-40, 40), rng.randint(1, 13))
        l2 = mpq(rng.randint(-40, 40), rng.randint(1, 13))
        if l1 in bad or l2 in bad or 1 + l1 * l2 == 0:
            continue
        l3 = lambda3_of(l1, l2)
        if l3 not in bad:
            return {"l1": l1, "l2": l2}


def _typeC_char_variety(ctx: Context):
    M, S = _type_c_system()
    cv = characteristic_variety(S, seed=ctx.seed)
    with ctx.claim("generic polar rank (symbolic lambda, xi)") as c:
        c.set(cv.generic_polar_rank, detail=f"full rank {cv.expected_full_rank}")
    with ctx.claim("polar rank at random distinct-prime xi") as c:
        c.set(_fmt(cv.sample_ranks), ok=all(r == cv.expected_full_rank for r in cv.sample_ranks))
    Mx = polar_matrix(S)
    i = GaussianRational(0, 1)
    lam = mpq(3, 7)
    with ctx.claim("rank at lambda1=1 on and off the complex lines") as c:
        on = rank_at(Mx, {"l1": mpq(1), "l2": lam, "xi1": 1, "xi2": 1, "xi3": i, "xi4": -i})
        off = rank_at(Mx, {"l1": mpq(1), "l2": lam, "xi1": 1, "xi2": 2, "xi3": 3, "xi4": 5})
        c.set(f"on {on}, off {off}", ok=(on, off) == (16, 17))
    for fix, other, target in (("l1", "l2", ["xi4 + xi2*xi3", "xi3^2 + 1"]),
                               ("l2", "l1", ["xi4 + xi2*xi3", "xi2^2 + 1"])):
        label = f"rank-16 locus at {fix}=1 (chart xi1=1)"
        with ctx.claim(label) as c:
            Mp = Mx.subs({fix: mpq(1), other: lam})
            Iq, npiv, _ = rank_drop_ideal(Mp, 17, "xi1", budget=None)
            G = groebner(Iq, budget=ctx.budget)
            ok = _same_ideal(G, _polys(target), ctx.budget)
            c.set("{" + ", ".join(str(g) for g in G) + "}", ok=ok)


def _psi_notone(M, lam):
    ph, k = M.phi, M.kappa
    return [ph(2, 1) + ph(4, 3), ph(4, 1) + ph(3, 2),
            ph(4, 1).scale(divide(4, lam - 1)) + k(1, 2),
            ph(2, 1).scale(divide(4, lam + 1)) + k(3, 2)]


def _obstructions_on_elements(sys, ie, forms) -> list:
    """Numerators of the omega^a ^ omega^b coefficients of d(form) on the
    generic integral element of sys (the linear part)."""
    P = _ScalarValues(ie)
    out = []
    for f in forms:
        part = sys.split(sys.reduce(sys.d(f)))
        for a in range(1, 5):
            for b in range(a + 1, 5):
                v = part.torsion.get((a, b), ZERO)
                for (rho_, m), cc in part.linear.items():
                    if m == b:
                        v = v + cc * P[(rho_, a)]
                    elif m == a:
                        v = v - cc * P[(rho_, b)]
                for (x, y), cc in part.quadratic.items():
                    v = v + cc * (P[(x, a)] * P[(y, b)] - P[(x, b)] * P[(y, a)])
                v = simplify(v)
                if not is_zero(v):
                    out.append(numerator_denominator(v)[0])
    return out


def _prop_notone(ctx: Context):
    M, N1 = _type_c_lambda1_one()
    lam = Polynomial.var("l2")
    ie = integral_element_space(N1)
    ch = cartan_characters(N1, seed=ctx.seed, space=ie)
    with ctx.claim("characters (randomized flag)") as c:
        c.set(_chars(ch))
    with ctx.claim("integral-element fiber dimension") as c:
        c.set(ie.dimension)
    with ctx.claim("Cartan's test") as c:
        c.set("involutive" if ch.involutive else "not involutive")
    ff = forced_one_forms(N1, ie)
    psi = _psi_notone(M, lam)
    with ctx.claim("number of forced 1-forms") as c:
        c.set(len(ff))
    with ctx.claim("forced forms span psi_1..psi_4 with 4/(lambda-1), 4/(lambda+1)") as c:
        a, b, u = span_rank(N1, ff), span_rank(N1, psi), span_rank(N1, ff + psi)
        c.set(f"ranks {a}, {b}, union {u}", ok=a == b == u == 4)
    aug = augment(N1, psi)
    dpsi1 = aug.two_forms[len(N1.ideal)]
    with ctx.claim("d psi_1 modulo the ideal (identity metric)") as c:
        Id = _identity_metric(M.coframe.scalars)
        w = M.omega
        val = aug.reduce(substitute_scalars(dpsi1, Id))
        expected = (w(3).wedge(w(4)) + w(1).wedge(w(2))).scale(-lam)
        c.set(str(val), ok=(val - expected).is_zero())
    with ctx.claim("d psi_1 modulo the ideal (symbolic metric)") as c:
        c.set(str(aug.reduce(dpsi1)))
    # lambda = 0
    N0 = restrict(N1, ["l2"])
    ie0 = integral_element_space(N0)
    polys = _obstructions_on_elements(N0, ie0, _psi_notone(M, mpq(0)))
    params = set(ie0.parameters)
    quad = [p for p in polys if _degree_in(p, params) >= 2]
    with ctx.claim("lambda=0: quadratic obstructions") as c:
        c.set(len(quad), detail=f"{len(polys) - len(quad)} further conditions free of quadratic terms")
    with ctx.claim("lambda=0: Groebner basis of the quadratics") as c:
        G = groebner(quad, budget=ctx.budget)
        shown = "{" + ", ".join(str(g) for g in G[:3]) + (", ..." if len(G) > 3 else "") + "}"
        c.set("{1}" if is_unit_ideal(G) else shown, detail=f"{len(G)} basis elements")
    # lambda = +-1
    for sign, label in ((1, "lambda=1"), (-1, "lambda=-1")):
        N = restrict(N1, [f"l2 - {sign}" if sign > 0 else "l2 + 1"])
        ieN = integral_element_space(N)
        ffN = forced_one_forms(N, ieN)
        with ctx.claim(f"{label}: number of forced 1-forms") as c:
            c.set(len(ffN))
        if sign == 1:
            A = augment(N, ffN)
            w = M.omega
            with ctx.claim("lambda=1: d phi3_2 modulo the ideal (identity metric)") as c:
                Id = _identity_metric(M.coframe.scalars)
                val = A.reduce(substitute_scalars(A.d(M.phi(3, 2)), Id))
                expected = w(3).wedge(w(2)).scale(2)
                c.set(str(val), ok=(val - expected).is_zero(),
                      detail=f"symbolic metric: {A.reduce(A.d(M.phi(3, 2)))}")
            with ctx.claim("lambda=1: torsion forces g33 = 0 (no integral elements)") as c:
                ok = in_span(N, ffN, M.phi(3, 2))
                tl = torsion_locus(A, budget=ctx.budget)
                forced = ideal_contains(tl.groebner_basis, _polys(["g33"]), budget=ctx.budget)
                c.set(f"phi3_2 forced={_fmt(ok)}, g33 in torsion ideal={_fmt(forced)}",
                      ok=ok and forced)


def _degree_in(p: Polynomial, names: set) -> int:
    idx = [k for k, v in enumerate(p.variables) if v in names]
    return max((sum(m[k] for k in idx) for m in p.terms), default=0)


def _prop_heliC(ctx: Context):
    def linear_system(lambdas):
        M = semi_orthonormal_bundle(FrameBundleSpec(n=4, r=3))
        S = standard_system(M, maximal_basis("C", lambdas=lambdas))
        rows, col, rhs = _equations(S, S.linear_parts)
        rows = [{j: v for j, v in r.items() if j != rhs} for r in rows]
        return rows, rhs

    rows, ncols = linear_system((2, mpq(1, 2)))
    with ctx.claim("size of the homogeneous system at lambda=(2,1/2,-5/4)") as c:
        c.set(f"{len(rows)}x{ncols}")
    with ctx.claim("nullspace dimension at lambda=(2,1/2,-5/4)") as c:
        c.set(ncols - echelon(rows, ncols).rank)
    with ctx.claim("block structure at lambda=(2,1/2,-5/4)") as c:
        blocks = _blocks(rows, ncols)
        desc = [f"{len(br)}x{len(bc)} rank {echelon(_reindex(br, bc), len(bc)).rank}"
                for br, bc in blocks]
        ok = len(blocks) == 4 and all(len(bc) == 15 and
                                      echelon(_reindex(br, bc), 15).rank == 15 for br, bc in blocks)
        c.set("; ".join(desc), ok=ok)
    with ctx.claim("nullspace at random admissible lambda samples") as c:
        out = []
        for _ in range(ctx.params["samples"]):
            pt = _admissible_lambda(ctx.rng)
            r, n = linear_system((pt["l1"], pt["l2"]))
            out.append((f"({format_scalar(pt['l1'])}, {format_scalar(pt['l2'])})",
                        n - echelon(r, n).rank))
        c.set("; ".join(f"lambda {l}: {d}" for l, d in out), ok=all(d == 0 for _, d in out))
    # lambda3 = 0 branch, lambda2 = -lambda1 constant
    M = semi_orthonormal_bundle(FrameBundleSpec(n=4, r=3, constant_params=("l1",)))
    l = Polynomial.var("l1")
    S = standard_system(M, maximal_basis("C", lambdas=(l, -l)))
    ie = integral_element_space(S)
    with ctx.claim("lambda3=0: fiber dimension") as c:
        c.set(ie.dimension)
    ph, k = M.phi, M.kappa
    mor = [ph(2, 1) - ph(4, 3).scale(l), ph(3, 1) + ph(4, 2).scale(l), k(1, 2) + k(2, 1),
           k(2, 2) - k(1, 1), k(3, 1) - ph(4, 2), k(3, 2) - ph(4, 3), k(3, 3)]
    with ctx.claim("lambda3=0: forced forms are the seven listed forms") as c:
        ff = forced_one_forms(S, ie)
        a, b, u = span_rank(S, ff), span_rank(S, mor), span_rank(S, ff + mor)
        c.set(f"{len(ff)} forced (rank {a}); listed rank {b}; union {u}",
              ok=a == b == u == 7)
    with ctx.claim("lambda3=0: derived conditions force g11 = g22 = 0") as c:
        A = augment(S, mor)
        q = quadratic_obstructions(A, integral_element_space(A))
        G = saturate(q, l * (l * l - 1) * (l * l + 1), budget=ctx.budget)
        ok = ideal_contains(G, _polys(["g11", "g22"]), budget=ctx.budget)
        c.set(f"g11, g22 in the saturated ideal={_fmt(ok)}", ok=ok)


def _blocks(rows, ncols):
    parent = list(range(ncols))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for r in rows:
        ks = list(r)
        for kk in ks[1:]:
            parent[find(kk)] = find(ks[0])
    cols, rws = defaultdict(list), defaultdict(list)
    for j in range(ncols):
        cols[find(j)].append(j)
    for r in rows:
        if r:
            rws[find(next(iter(r)))].append(r)
    return [(rws[key], cols[key]) for key in sorted(cols)]


def _reindex(rows, cols):
    idx = {c: k for k, c in enumerate(cols)}
    return [{idx[j]: v for j, v in r.items()} for r in rows]


def _k2_case_1a(ctx: Context):
    with ctx.claim("case labels of the six normal-form representatives") as c:
        reps = [("1.a", dict(x=1, y=1)), ("1.b", {}), ("2.a", dict(u=1, x=2, y=3)),
                ("2.b", dict(x=1, y=1)), ("2.c", dict(y=1, p=2)), ("2.d", dict(u=1, x=1, y=2, p=3))]
        got = [classify_pair(case_representative(t, **v)).tag for t, v in reps]
        c.set(", ".join(got), ok=got == [t for t, _ in reps])
    M, plus = _k2_system("1.a", ("x", "y"))
    with ctx.claim("torsion (x^2+y^2 nonzero)") as c:
        tl = torsion_locus(plus, budget=ctx.budget, nonzero=["x^2 + y^2"])
        c.set("{" + ", ".join(str(g) for g in tl.groebner_basis) + "}",
              ok=_same_ideal(tl.groebner_basis, _polys(["g11 - g22", "g12"]), ctx.budget))
    V = restrict(plus, ["g11 - g22", "g12"])
    ie = integral_element_space(V)
    ch = cartan_characters(V, seed=ctx.seed, space=ie)
    with ctx.claim("characters on the torsion locus") as c:
        c.set(_chars(ch))
    with ctx.claim("Cartan's test") as c:
        c.set("involutive" if ch.involutive else "not involutive")
    with ctx.claim("kappa1_1-kappa2_2 and kappa2_1+kappa1_2 vanish on elements") as c:
        k = M.kappa
        c.set(all(vanishes_on_elements(V, f, ie) for f in (k(1, 1) - k(2, 2), k(2, 1) + k(1, 2))))
    with ctx.claim("[Phi, C] vanishes on elements") as c:
        bad = identities.commutator_on_elements(V, ie, M, identities.block_complex_structure())
        c.set(f"{len(bad)} nonzero entries", ok=not bad)


def _k2_case_2a(ctx: Context):
    M, plus = _k2_system("2.a", ("u", "x", "y"))
    with ctx.claim("torsion (g11 nonzero)") as c:
        tl = torsion_locus(plus, budget=ctx.budget, nonzero=["g11"])
        c.set("{" + ", ".join(str(g) for g in tl.groebner_basis) + "}",
              ok=_same_ideal(tl.groebner_basis,
                             _polys(["u - 2*x*y", "g12 - (x^2 - y^2)*g11"]), ctx.budget))
    V = restrict(plus, ["u - 2*x*y", "g12 - (x^2 - y^2)*g11"], solve_for=["u", "g12"])
    ie = integral_element_space(V)
    with ctx.claim("system on the torsion locus is not involutive") as c:
        ch = cartan_characters(V, seed=ctx.seed, space=ie)
        c.set("involutive" if ch.involutive else "not involutive",
              detail=f"{_chars(ch)}; dimension {ie.dimension}")
    with ctx.claim("integral elements of the prolongation force x = y = 0") as c:
        PV = prolong(V, ie)
        iev = integral_element_space(PV)
        G = groebner(saturate(list(iev.torsion), Polynomial.var("g11"), budget=ctx.budget),
                     budget=ctx.budget)
        ok = ideal_contains(G, _polys(["x", "y"]), budget=ctx.budget)
        c.set("{" + ", ".join(str(g) for g in G) + "}", ok=ok)
    V1 = restrict(plus, ["u", "x", "y", "g12"])
    ie1 = integral_element_space(V1)
    P1 = prolong(V1, ie1)
    ie2 = integral_element_space(P1)
    ch2 = cartan_characters(P1, seed=ctx.seed, space=ie2)
    with ctx.claim("prolonged system on u=x=y=g12=0: characters") as c:
        c.set(_chars(ch2), detail=f"before prolonging: {_chars(cartan_characters(V1, seed=ctx.seed, space=ie1))}")
    with ctx.claim("prolonged system on u=x=y=g12=0: Cartan's test") as c:
        c.set("involutive" if ch2.involutive else "not involutive")


def _k2_case_2b(ctx: Context):
    M, plus = _k2_system("2.b", ("x", "y"))
    with ctx.claim("torsion") as c:
        tl = torsion_locus(plus, budget=ctx.budget)
        c.set("{" + ", ".join(str(g) for g in tl.groebner_basis) + "}",
              ok=_same_ideal(tl.groebner_basis, _polys(["g11 - g22", "g12"]), ctx.budget))
    V = restrict(plus, ["g11 - g22", "g12"])
    ie = integral_element_space(V)
    ch = cartan_characters(V, seed=ctx.seed, space=ie)
    with ctx.claim("characters on the torsion locus") as c:
        c.set(_chars(ch))
    with ctx.claim("Cartan's test") as c:
        c.set("involutive" if ch.involutive else "not involutive")
    with ctx.claim("ruling relations for phi2_1, phi4_3, phi3_2, phi4_1") as c:
        res = identities.ruling_relations(V, ie, M)
        bad = [k for k, v in res.items() if not v.is_zero()]
        c.set("all zero" if not bad else "nonzero: " + ", ".join(bad), ok=not bad)
    with ctx.claim("pullbacks of the (1,0)-forms are multiples of omega2 + i omega4") as c:
        res = identities.gamma_pullback_residuals(V, ie, M)
        bad = [m for m, v in res.items() if not v.is_zero()]
        c.set("all zero" if not bad else f"nonzero for m in {bad}", ok=not bad)


def _cmissing(ctx: Context):
    M, S = _type_c_lambda1_one()
    coeffs = identities.cmissing_coefficients(S, M)
    with ctx.claim("four-form combinations equal 1/2 (phi2_1+phi4_3) ^ omega^3") as c:
        c.set("coefficients " + _fmt(coeffs),
              ok=all(x is not None and x == mpq(1, 2) for x in coeffs))
    with ctx.claim("all four combinations are proportional to (phi2_1+phi4_3) ^ omega^3") as c:
        c.set("coefficients " + _fmt(coeffs), ok=all(x is not None for x in coeffs))


def _so6(ctx: Context):
    M = special_orthogonal_model(6)
    with ctx.claim("d beta = Upsilon ^ beta") as c:
        res = identities.beta_structure_residuals(M)
        c.set(f"{sum(not f.is_zero() for f in res)} nonzero components",
              ok=all(f.is_zero() for f in res))
    with ctx.claim("Upsilon is skew-hermitian") as c:
        c.set(identities.is_skew_hermitian(identities.upsilon(M)))
    with ctx.claim("d^2 = 0 on every shipped model") as c:
        specs = [FrameBundleSpec(n=4, r=3), FrameBundleSpec(n=4, r=2, metric="identity"),
                 FrameBundleSpec(n=4, r=3, params=("l1", "l2", "l3"),
                                 constraints=("l1*l2*l3+l1+l2+l3",)),
                 FrameBundleSpec(n=4, r=3, params=("l2",)),
                 FrameBundleSpec(n=4, r=3, constant_params=("l1",)),
                 FrameBundleSpec(n=4, r=2, params=("u", "x", "y")),
                 FrameBundleSpec(n=4, r=5), FrameBundleSpec(n=4, r=6)]
        bad = {}
        for spec in specs:
            fails = identities.d_squared_failures(semi_orthonormal_bundle(spec))
            if fails:
                bad[str(spec)] = fails
        fails = identities.d_squared_failures(M)
        if fails:
            bad["SO(6)"] = fails
        c.set(f"{len(specs) + 1} models, {len(bad)} with failures", ok=not bad)
    with ctx.claim("complex equivariance on random pairs") as c:
        n = ctx.params["pairs"]
        bad = 0
        for _ in range(n):
            Mg, S = _random_complex_linear(ctx.rng), _random_anticommuting(ctx.rng)
            lhs = rho_bar(mat_mul(mat_mul(Mg, S), mat_transpose(Mg)))
            U = rho(Mg)
            rhs = mat_mul(mat_mul(U, rho_bar(S)), mat_transpose(U))
            bad += not all(is_zero(simplify(a - b)) for ra, rb in zip(lhs, rhs)
                           for a, b in zip(ra, rb))
        c.set(f"{n - bad} of {n} pairs", ok=bad == 0)


def _rand_gauss(rng: random.Random):
    return GaussianRational(mpq(rng.randint(-9, 9), rng.randint(1, 5)),
                            mpq(rng.randint(-9, 9), rng.randint(1, 5)))


def _random_complex_linear(rng: random.Random):
    """A random real 4x4 matrix commuting with J (a complex 2x2 matrix)."""
    return rho_inverse([[_rand_gauss(rng) for _ in range(2)] for _ in range(2)])


def _random_anticommuting(rng: random.Random):
    """A random symmetric 4x4 matrix anticommuting with J."""
    a, b, d = (_rand_gauss(rng) for _ in range(3))
    return rho_bar_inverse([[a, b], [b, d]])


def _helicoid_numeric(ctx: Context):
    lambdas = [float(x) for x in ctx.params["lambdas"].split(",")]
    pts, tol = ctx.params["points"], ctx.params["tol"]
    rep = geometry.check_surface(geometry.helicoid(lambdas), pts, tol, ctx.seed)
    with ctx.claim("helicoid is austere at seeded points") as c:
        c.set(f"residual {rep.residual:.3e} at {pts} points", ok=rep.passed)
    with ctx.claim("affine 4-plane has zero second fundamental form") as c:
        d = geometry.sample_fundamental_forms(geometry.flat(), 3, ctx.seed)
        worst = max(float(abs(x.S).max()) if x.S.size else 0.0 for x in d)
        c.set(f"max entry {worst:.3e}", ok=worst <= tol)
    with ctx.claim("one-parameter helicoid has normal rank 1") as c:
        d = geometry.sample_fundamental_forms(geometry.helicoid([1.0]), 5, ctx.seed)
        ranks = sorted({x.normal_rank for x in d})
        c.set(_fmt(ranks), ok=ranks == [1])
    with ctx.claim("normal rank constant across helicoid points") as c:
        c.set(_fmt(sorted(set(rep.normal_ranks))), ok=len(set(rep.normal_ranks)) == 1)
    with ctx.claim("non-austere graph fails with residual > 1e-3") as c:
        bad = geometry.check_surface(geometry.quadric_graph(), 3, tol, ctx.seed)
        c.set(f"residual {bad.residual:.3e}", ok=(not bad.passed) and bad.residual > 1e-3)
    with ctx.claim("austere check invariant under an ambient rotation") as c:
        import numpy as np
        Q, _ = np.linalg.qr(np.random.default_rng(ctx.seed).normal(size=(7, 7)))
        rot = geometry.check_surface(geometry.helicoid(lambdas).rotated(Q), pts, tol, ctx.seed)
        c.set(f"residual {rot.residual:.3e}", ok=rot.passed == rep.passed)
    with ctx.claim("equal-parameter helicoid has a common linear factor") as c:
        d = geometry.sample_fundamental_forms(geometry.helicoid([2.0, 2.0, 2.0]), 3, ctx.seed)
        ok = all(geometry.common_linear_factor(x)[0] for x in d)
        c.set(ok)


def _segre_numeric(ctx: Context):
    tol = ctx.params["tol"]
    rep = geometry.segre_type_a_check(ctx.params["n"], ctx.params["points"], ctx.seed, tol)
    with ctx.claim("Segre chart: second fundamental form anticommutes with J") as c:
        c.set(f"residual {rep.residual:.3e}", ok=rep.passed)
    with ctx.claim("complex plane passes") as c:
        r = geometry.segre_type_a_check(points=5, seed=ctx.seed, tol=tol,
                                        immersion=geometry.complex_plane())
        c.set(f"residual {r.residual:.3e}", ok=r.passed)
    with ctx.claim("anti-holomorphic graph fails") as c:
        r = geometry.segre_type_a_check(points=5, seed=ctx.seed, tol=tol,
                                        immersion=geometry.antiholomorphic_graph())
        c.set(f"residual {r.residual:.3e}", ok=not r.passed)


# ----------------------------------------------------------------------------------------
# registry

def _c(label, expected, tag, anchor, full_only=False) -> ClaimSpec:
    return ClaimSpec(label, expected, tag, anchor, full_only)


SCENARIOS: tuple = (
    Scenario("lemma_prolong_bc", "Prolongations of the maximal austere spaces", "fast", (
        _c("dim prolongation of Q_B", "0", "PAPER", "prolongation of type B vanishes"),
        _c("dim prolongation of Q_C (symbolic lambda)", "0", "PAPER", "prolongation of type C vanishes"),
        _c("dim prolongation of Q_A", "8", "PAPER", "prolongation of type A has dimension 8"),
        _c("dim prolongation of S2(R4)", "20", "TRIVIAL", "dimension of cubic forms in 4 variables"),
    ), _lemma_prolong_bc),
    Scenario("austere_maximal_spaces", "Bases and austerity of Q_A, Q_B, Q_C", "fast", (
        _c("Q_A basis anticommutes with J", "6 matrices, 6 anticommute", "PAPER",
           "type A elements anticommute with the complex structure"),
        _c("Q_B traceless-block elements anticommute with R", "5 matrices, 4 with m=0, 4 anticommute",
           "PAPER", "type B block part anticommutes with the reflection"),
        _c("Q_C at lambda1=lambda2=0: ranks <= 2, no common kernel",
           "ranks [2, 2, 2], common kernel dimension 0", "DERIVED", "type C degenerate parameters"),
        _c("Q_A is austere", "true", "PAPER", "classification of maximal austere spaces"),
        _c("Q_B is austere", "true", "PAPER", "classification of maximal austere spaces"),
        _c("Q_C with the lambda relation is austere", "true", "PAPER",
           "classification of maximal austere spaces"),
        _c("span{I} is not austere (certificate trace)", "austere=false, certificate trace",
           "TRIVIAL", "trace obstruction"),
        _c("Q_C with free lambda3 fails; certificate divisible by the lambda relation",
           "austere=false, certificate e3, divisible=true", "DERIVED", "lambda relation"),
        _c("lambda3 at lambda1=2, lambda2=1/2", "-5/4", "DERIVED", "solved lambda relation"),
    ), _austere_maximal_spaces),
    Scenario("kmap_kahler", "K-map hypothesis, exceptional 2-planes and the 3-form identity", "fast", (
        _c("K-map common nullspace of the zero space", "8", "TRIVIAL", "K-map domain dimension"),
        _c("K-map common nullspace of Q_x (x=2) is nonzero", "positive dimension", "PAPER",
           "exceptional 2-planes fail the K-map hypothesis"),
        _c("K-map common nullspace of Q_A", "0", "DERIVED", "type A satisfies the K-map hypothesis"),
        _c("complex-structure 3-form identity for T", "0 nonzero components", "PAPER",
           "3-form identity for the K-map complex structures"),
        _c("complex-structure 3-form identity for U", "0 nonzero components", "PAPER",
           "3-form identity for the K-map complex structures"),
    ), _kmap_kahler, {"x": mpq(2)}),
    Scenario("typeA_torsion_gk6", "Torsion of the augmented maximal type A system", "fast", (
        _c("torsion of the unaugmented type A system", "0 conditions", "DERIVED",
           "unaugmented type A system is torsion free"),
        _c("forced forms of the type A system contain phi2_1-phi4_3, phi3_2-phi4_1", "both contained",
           "PAPER", "connection takes values in u(2)"),
        _c("torsion of the augmented system", "{g13 - g22 - g46 + g55, g16 - 2*g25 + g34}", "PAPER",
           "two integrability conditions of the augmented type A system"),
        _c("independent pi-forms on the torsion locus", "34, two fewer than before", "PAPER",
           "two pi-forms become dependent on the torsion locus"),
    ), _typeA_torsion),
    Scenario("prop_charA", "Characters of the maximal type A system on its torsion locus", "fast", (
        _c("characters (randomized flag)", "s1=24, s2=10", "PAPER", "type A characters"),
        _c("integral-element fiber dimension", "44", "PAPER", "type A integral elements"),
        _c("Cartan's test", "involutive", "PAPER", "type A involutivity"),
        _c("fiber dimension at a random point of the torsion locus", "44", "DERIVED",
           "generic-point re-verification"),
    ), _prop_charA),
    Scenario("typeA_highcodim", "Type A in higher codimension r", "fast", (
        _c("characters (randomized flag)", lambda p: f"s1={4 * p['r']}, s2={2 * p['r'] - 2}",
           "PAPER", "type A characters in codimension r"),
        _c("Cartan's test", "involutive", "PAPER", "type A involutivity in codimension r"),
    ), _typeA_highcodim, {"r": 7}),
    Scenario("typeA_holomorphic_constraints",
             "Complex-linearity relations of the normal connection for holomorphic type A", "fast", (
        _c("second half of the type A basis is minus the first times J", "[true, true, true]", "DERIVED",
           "type A basis and the complex structure"),
        _c("normal-connection J-commutation relations vanishing on a generic element", "0 of 18",
           "DERIVED", "holomorphic constraints are not implied by the system"),
    ), _typeA_holomorphic),
    Scenario("prop_sixteen", "Type B integral-element fiber dimension for normal rank 1..5", "fast", (
        _c("fiber dimension, normal rank 5", "16", "PAPER", "type B fiber dimension 16"),
        _c("fiber dimension, normal rank 1", RECORDED, "DERIVED", "type B fiber dimension, recorded"),
        _c("fiber dimension, normal rank 2", RECORDED, "DERIVED", "type B fiber dimension, recorded"),
        _c("fiber dimension, normal rank 3", RECORDED, "DERIVED", "type B fiber dimension, recorded"),
        _c("fiber dimension, normal rank 4", RECORDED, "DERIVED", "type B fiber dimension, recorded"),
    ), _prop_sixteen),
    Scenario("typeB_forced_forms", "Forced 1-forms of the normalized type B system", "fast", (
        _c("fiber dimension", "16", "PAPER", "type B fiber dimension 16"),
        _c("number of forced 1-forms", "11", "PAPER", "eleven forced forms for type B"),
        _c("forced forms span the listed psi_1..psi_11", "ranks 11, 11, union 11", "PAPER",
           "eleven forced forms for type B"),
        _c("augmented system is nonlinear", "true", "PAPER", "augmented type B system is nonlinear"),
    ), _typeB_forced),
    Scenario("typeB_delta5_nonexistence", "No type B austere 4-folds with normal rank 5", "slow", (
        _c("number of quadratic obstructions", "66", "PAPER", "66 quadratic obstructions"),
        _c("Groebner basis of the obstructions at g = I", "{1}", "PAPER",
           "obstructions exclude a positive definite metric"),
        _c("elimination ideal contains g11+g55 and g22+g44", "contains both", "PAPER",
           "eliminated obstructions force g11+g55 = g22+g44 = 0", full_only=True),
    ), _typeB_nonexistence),
    Scenario("typeC_characters", "Characters of the type C system", "fast", (
        _c("independent pi-forms", "17", "PAPER", "17 independent pi-forms for type C"),
        _c("characters (randomized flag)", "s1=12, s2=5", "PAPER", "type C characters"),
        _c("integral-element fiber dimension", "8", "PAPER", "type C integral elements"),
        _c("Cartan's test", "not involutive", "PAPER", "type C is not involutive"),
        _c("fiber dimension at a random admissible lambda", "8", "DERIVED",
           "generic-point re-verification"),
        _c("prolonged system at lambda=(2,1/2): fiber dimension", RECORDED, "DERIVED",
           "prolongation at constant lambda, recorded"),
    ), _typeC_characters),
    Scenario("typeC_char_variety", "Characteristic variety of the type C system", "fast", (
        _c("generic polar rank (symbolic lambda, xi)", "17", "PAPER", "type C polar matrix has full rank"),
        _c("polar rank at random distinct-prime xi", "[17, 17, 17]", "DERIVED",
           "polar rank stability"),
        _c("rank at lambda1=1 on and off the complex lines", "on 16, off 17", "PAPER",
           "rank drops to 16 at lambda1 = 1"),
        _c("rank-16 locus at l1=1 (chart xi1=1)", "the ideal <xi4 + xi2*xi3, xi3^2 + 1>", "PAPER",
           "pair of complex lines at lambda1 = 1"),
        _c("rank-16 locus at l2=1 (chart xi1=1)", "the ideal <xi4 + xi2*xi3, xi2^2 + 1>", "PAPER",
           "pair of complex lines at lambda2 = 1"),
    ), _typeC_char_variety),
    Scenario("prop_notone", "Type C with lambda1 = 1", "fast", (
        _c("characters (randomized flag)", "s1=12, s2=4", "PAPER", "lambda1 = 1 characters"),
        _c("integral-element fiber dimension", "12", "PAPER", "lambda1 = 1 integral elements"),
        _c("Cartan's test", "not involutive", "PAPER", "lambda1 = 1 is not involutive"),
        _c("number of forced 1-forms", "4", "PAPER", "four forced forms at lambda1 = 1"),
        _c("forced forms span psi_1..psi_4 with 4/(lambda-1), 4/(lambda+1)",
           "ranks 4, 4, union 4", "PAPER", "four forced forms at lambda1 = 1"),
        _c("d psi_1 modulo the ideal (identity metric)", "-l2*omega1^omega2 - l2*omega3^omega4", "PAPER",
           "exterior derivative of the first forced form"),
        _c("d psi_1 modulo the ideal (symbolic metric)", RECORDED, "DERIVED",
           "exterior derivative of the first forced form, general metric"),
        _c("lambda=0: quadratic obstructions", "12", "PAPER", "12 quadratics at lambda = 0"),
        _c("lambda=0: Groebner basis of the quadratics", "{1}", "PAPER",
           "lambda = 0 quadratics have no common zero"),
        _c("lambda=1: number of forced 1-forms", "7", "PAPER", "seven more forms at lambda = 1"),
        _c("lambda=-1: number of forced 1-forms", "7", "PAPER", "seven more forms at lambda = -1"),
        _c("lambda=1: d phi3_2 modulo the ideal (identity metric)", "2*omega3^omega2", "PAPER",
           "nonvanishing 2-form at lambda = 1"),
        _c("lambda=1: torsion forces g33 = 0 (no integral elements)", "phi3_2 forced, g33 in the torsion ideal", "PAPER",
           "nonvanishing 2-form at lambda = 1"),
    ), _prop_notone),
    Scenario("prop_heliC", "Rigidity of constant-lambda type C and the lambda3 = 0 branch", "fast", (
        _c("size of the homogeneous system at lambda=(2,1/2,-5/4)", "72x60", "PAPER",
           "72 equations in 60 unknowns"),
        _c("nullspace dimension at lambda=(2,1/2,-5/4)", "0", "PAPER", "only the zero solution"),
        _c("block structure at lambda=(2,1/2,-5/4)", "four blocks with 15 columns, each of rank 15", "PAPER",
           "four nonsingular 15 x 15 blocks"),
        _c("nullspace at random admissible lambda samples", "0 for every sample", "DERIVED",
           "only the zero solution for generic lambda"),
        _c("lambda3=0: fiber dimension", "2", "PAPER", "lambda3 = 0 fiber dimension two"),
        _c("lambda3=0: forced forms are the seven listed forms", "7 forced forms spanning the listed ones", "PAPER",
           "seven forced forms at lambda3 = 0"),
        _c("lambda3=0: derived conditions force g11 = g22 = 0", "g11, g22 in the saturated ideal", "PAPER",
           "contradiction g11 = g22 = 0"),
    ), _prop_heliC, {"samples": 2}),
    Scenario("k2_case_1a", "Case labels and the complex-dependent nonsingular case", "fast", (
        _c("case labels of the six normal-form representatives", "1.a, 1.b, 2.a, 2.b, 2.c, 2.d",
           "PAPER", "normal forms of the six cases"),
        _c("torsion (x^2+y^2 nonzero)", "the ideal <g11 - g22, g12>", "PAPER", "case 1.a integrability conditions"),
        _c("characters on the torsion locus", "s1=4, s2=2", "PAPER", "case 1.a characters"),
        _c("Cartan's test", "involutive", "PAPER", "case 1.a involutivity"),
        _c("kappa1_1-kappa2_2 and kappa2_1+kappa1_2 vanish on elements", "true", "DERIVED",
           "normal connection is complex linear"),
        _c("[Phi, C] vanishes on elements", "0 nonzero entries", "PAPER",
           "complex structure is parallel"),
    ), _k2_case_1a),
    Scenario("k2_case_2a", "The case with a singular real element", "fast", (
        _c("torsion (g11 nonzero)", "the ideal <u - 2*x*y, g12 - (x^2 - y^2)*g11>", "PAPER", "case 2.a integrability conditions"),
        _c("system on the torsion locus is not involutive", "not involutive", "PAPER",
           "case 2.a pullback is not involutive"),
        _c("integral elements of the prolongation force x = y = 0", "ideal contains x and y", "PAPER",
           "integral elements only on u = x = y = 0"),
        _c("prolonged system on u=x=y=g12=0: characters", "s1=4", "PAPER",
           "involutive after one prolongation"),
        _c("prolonged system on u=x=y=g12=0: Cartan's test", "involutive", "PAPER",
           "involutive after one prolongation"),
    ), _k2_case_2a),
    Scenario("k2_case_2b", "The case with a common isotropic line (ruled submanifolds)", "fast", (
        _c("torsion", "the ideal <g11 - g22, g12>", "PAPER", "case 2.b integrability conditions"),
        _c("characters on the torsion locus", "s1=8", "PAPER", "case 2.b characters"),
        _c("Cartan's test", "involutive", "PAPER", "case 2.b involutivity"),
        _c("ruling relations for phi2_1, phi4_3, phi3_2, phi4_1", "all zero", "PAPER",
           "connection forms along the ruling"),
        _c("pullbacks of the (1,0)-forms are multiples of omega2 + i omega4", "all zero", "PAPER",
           "Gauss map to the Grassmannian is holomorphic"),
    ), _k2_case_2b),
    Scenario("cmissing_identities", "Four-form identities for type C with lambda1 = 1", "fast", (
        _c("four-form combinations equal 1/2 (phi2_1+phi4_3) ^ omega^3", "coefficients [1/2, 1/2, 1/2, 1/2]", "PAPER",
           "four-form identities at lambda1 = 1"),
        _c("all four combinations are proportional to (phi2_1+phi4_3) ^ omega^3", "a constant for each combination",
           "DERIVED", "four-form identities at lambda1 = 1"),
    ), _cmissing),
    Scenario("so6_beta_structure", "SO(6) Maurer-Cartan model, d^2 = 0 and complex equivariance", "fast", (
        _c("d beta = Upsilon ^ beta", "0 nonzero components", "PAPER", "structure equations of beta"),
        _c("Upsilon is skew-hermitian", "true", "PAPER", "Upsilon is u(3)-valued"),
        _c("d^2 = 0 on every shipped model", "no model with failures", "DERIVED", "structure equations are closed"),
        _c("complex equivariance on random pairs", "every pair", "PAPER",
           "complex model is equivariant"),
    ), _so6, {"pairs": 100}),
    Scenario("helicoid_numeric", "Generalized helicoids are austere (floating point)", "fast", (
        _c("helicoid is austere at seeded points", "residual <= tol", "PAPER", "generalized helicoids are austere"),
        _c("affine 4-plane has zero second fundamental form", "max entry <= tol", "TRIVIAL", "flat immersion"),
        _c("one-parameter helicoid has normal rank 1", "[1]", "DERIVED", "helicoid normal rank"),
        _c("normal rank constant across helicoid points", "a single rank", "DERIVED",
           "normal rank lower semicontinuity spot check"),
        _c("non-austere graph fails with residual > 1e-3", "residual > 1e-3", "DERIVED",
           "mean curvature of a convex graph"),
        _c("austere check invariant under an ambient rotation", "same verdict as unrotated", "DERIVED",
           "rigid-motion invariance"),
        _c("equal-parameter helicoid has a common linear factor", "true", "DERIVED",
           "simple second fundamental form"),
    ), _helicoid_numeric, {"lambdas": "1,2,3", "points": 10, "tol": 1e-9}),
    Scenario("segre_numeric", "Holomorphic chart of a Segre embedding is of type A", "fast", (
        _c("Segre chart: second fundamental form anticommutes with J", "residual <= tol", "DERIVED",
           "holomorphic submanifolds are of type A"),
        _c("complex plane passes", "residual <= tol", "TRIVIAL", "totally geodesic complex plane"),
        _c("anti-holomorphic graph fails", "residual > tol", "DERIVED", "anti-holomorphic term"),
    ), _segre_numeric, {"n": 1, "points": 10, "tol": 1e-9}),
)

_BY_NAME = {s.name: s for s in SCENARIOS}


def list_scenarios() -> list:
    return [(s.name, s.description, s.cost_class) for s in SCENARIOS]


def get_scenario(name: str) -> Scenario:
    try:
        return _BY_NAME[name]
    except KeyError:
        raise UnknownScenario(name) from None


def coerce_params(scenario: Scenario, overrides: dict | None) -> dict:
    """Merge string or typed overrides into the scenario defaults, type-checked
    against the default values."""
    params = dict(scenario.params)
    for key, raw in (overrides or {}).items():
        if key not in params:
            known = ", ".join(sorted(params)) or "none"
            raise ParameterError(f"scenario {scenario.name} has no parameter {key!r} (known: {known})")
        default = params[key]
        try:
            if isinstance(raw, str):
                if isinstance(default, bool):
                    raise ValueError("boolean parameters are not supported")
                if isinstance(default, int):
                    value = int(raw)
                elif isinstance(default, float):
                    value = float(raw)
                elif isinstance(default, type(mpq(0))):
                    value = mpq(raw)
                else:
                    value = raw
            else:
                value = raw
        except (ValueError, ZeroDivisionError) as exc:
            raise ParameterError(f"parameter {key!r} expects {type(default).__name__}: {exc}") from None
        if not isinstance(value, type(default)) and not (isinstance(default, float) and isinstance(value, int)):
            raise ParameterError(f"parameter {key!r} expects {type(default).__name__}")
        params[key] = value
    _validate(scenario, params)
    return params


def _validate(scenario: Scenario, params: dict):
    if scenario.name == "typeA_highcodim" and params["r"] < 6:
        raise ParameterError("typeA_highcodim needs r >= 6")
    if scenario.name == "helicoid_numeric":
        try:
            lam = [float(x) for x in params["lambdas"].split(",")]
        except ValueError:
            raise ParameterError("lambdas must be a comma-separated list of numbers") from None
        if not lam or len(lam) >= 4 or any(x <= 0 for x in lam):
            raise ParameterError("helicoid needs 1 to 3 positive lambdas")
    for key in ("points", "samples", "pairs"):
        if key in params and params[key] < 1:
            raise ParameterError(f"{key} must be positive")


def run(name: str, seed: int = 0, budget: int | None = None, params: dict | None = None,
        full: bool = False) -> Report:
    scenario = get_scenario(name)
    values = coerce_params(scenario, params)
    ctx = Context(scenario, seed, budget, values, full)
    start = time.perf_counter()
    error = None
    try:
        scenario.builder(ctx)
    except BudgetExceeded as exc:
        error = ("skipped", str(exc))
    except Exception as exc:  # a builder failure fails its unevaluated claims
        error = ("fail", f"{type(exc).__name__}: {exc}")
    for r in ctx.results.values():
        if r.status == "pending":
            r.status, r.detail = error or ("fail", "claim was not evaluated")
    return Report(name, seed, values, list(ctx.results.values()), time.perf_counter() - start)


def _run_star(args):
    return run(*args)


def run_many(names, seed: int = 0, budget: int | None = None, params: dict | None = None,
             full: bool = False, parallel: bool = False) -> list:
    """Run several scenarios; reports are returned sorted by name.  Parameter
    overrides apply to every scenario that declares them."""
    jobs = []
    for n in names:
        sc = get_scenario(n)
        own = {k: v for k, v in (params or {}).items() if k in sc.params}
        coerce_params(sc, own)
        jobs.append((n, seed, budget, own, full))
    if parallel and len(jobs) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor() as pool:
            reports = list(pool.map(_run_star, jobs))
    else:
        reports = [_run_star(j) for j in jobs]
    return sorted(reports, key=lambda r: r.scenario)
