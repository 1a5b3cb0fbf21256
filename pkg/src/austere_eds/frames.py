"""Structure models for the semi-orthonormal frame bundle and SO(N).

Generator naming (upper index first):

* ``omega{i}``, ``theta{a}``: canonical forms;
* ``phi{i}_{j}`` for i > j: the skew tangent connection, phi^j_i = -phi^i_j;
* ``eta{a}_{i}``: the mixed connection forms;
* ``kappa{a}_{b}``: the normal connection (all a, b for a symbolic metric,
  only a > b when the metric is the identity and kappa is skew);
* ``d{p}``: differential of a free parameter p.

The metric coefficients on the normal vectors are dependent scalars
``g{a}{b}`` (a <= b) with dg = g kappa + kappa^T g.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from gmpy2 import mpq

from .algebra.parse import parse_polynomial
from .algebra.poly import Polynomial
from .algebra.scalars import divide, numerator_denominator, simplify, subs
from .exterior import Coframe, Form, StructureModel


@dataclass(frozen=True)
class FrameBundleSpec:
    """Description of a semi-orthonormal frame bundle model.

    ``params`` become free scalars (with generator ``d<name>``) and
    ``constant_params`` become scalars with zero differential.  Each
    constraint polynomial is solved for the last parameter it is linear in,
    and that parameter is replaced by the resulting rational function.
    """

    n: int = 4
    r: int = 1
    metric: str = "symbolic"
    params: tuple = ()
    constraints: tuple = ()
    constant_params: tuple = ()

    def __post_init__(self):
        if self.n < 1 or self.r < 1:
            raise ValueError("n and r must be positive")
        if self.metric not in ("symbolic", "identity"):
            raise ValueError("metric must be 'symbolic' or 'identity'")
        object.__setattr__(self, "params", tuple(self.params))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        object.__setattr__(self, "constant_params", tuple(self.constant_params))
        declared = set(self.params) | set(self.constant_params)
        for c in self.constraints:
            extra = set(parse_polynomial(c).vars) - declared
            if extra:
                raise ValueError(f"constraint {c!r} uses undeclared names {sorted(extra)}")

    @classmethod
    def from_json(cls, data) -> "FrameBundleSpec":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(n=int(data.get("n", 4)), r=int(data["r"]),
                   metric=data.get("metric", "symbolic"),
                   params=tuple(data.get("params", ())),
                   constraints=tuple(data.get("constraints", ())),
                   constant_params=tuple(data.get("constant_params", ())))

    def to_json(self) -> dict:
        return {"n": self.n, "r": self.r, "metric": self.metric, "params": list(self.params),
                "constraints": list(self.constraints),
                "constant_params": list(self.constant_params)}


def g_name(a: int, b: int, r: int) -> str:
    a, b = min(a, b), max(a, b)
    return f"g{a}{b}" if r < 10 else f"g{a}_{b}"


def solve_constraints(params, constraints) -> dict:
    """Solve each constraint for the lexicographically last parameter in which
    it is linear; returns name -> rational function."""
    solved: dict = {}
    for text in constraints:
        p = parse_polynomial(text)
        if solved:
            p = numerator_denominator(p.subs(solved))[0]
        target = None
        for v in sorted(p.vars, reverse=True):
            if v in solved:
                continue
            if p.degree(v) == 1:
                target = v
                break
        if target is None:
            raise ValueError(f"constraint {text!r} is not linear in any parameter")
        coeff = p.diff(target)
        rest = p - coeff * Polynomial.var(target)
        value = divide(-rest, coeff)
        solved = {k: subs(v, {target: value}) for k, v in solved.items()}
        solved[target] = value
    return solved


class FrameModel(StructureModel):
    """StructureModel with index helpers for the frame bundle."""

    def omega(self, i):
        return self.coframe.gen(f"omega{i}")

    def theta(self, a):
        return self.coframe.gen(f"theta{a}")

    def eta(self, a, i):
        return self.coframe.gen(f"eta{a}_{i}")

    def phi(self, i, j):
        cf = self.coframe
        if i == j:
            return cf.zero(1)
        if i > j:
            return cf.gen(f"phi{i}_{j}")
        return -cf.gen(f"phi{j}_{i}")

    def kappa(self, a, b):
        cf = self.coframe
        if self.metadata["metric"] == "symbolic":
            return cf.gen(f"kappa{a}_{b}")
        if a == b:
            return cf.zero(1)
        if a > b:
            return cf.gen(f"kappa{a}_{b}")
        return -cf.gen(f"kappa{b}_{a}")

    def g(self, a, b):
        if self.metadata["metric"] == "identity":
            return mpq(1) if a == b else mpq(0)
        return Polynomial.var(g_name(a, b, self.metadata["r"]))

    @property
    def n(self) -> int:
        return self.metadata["n"]

    @property
    def r(self) -> int:
        return self.metadata["r"]

    @property
    def solved_parameters(self) -> dict:
        return self.metadata.get("solved_parameters", {})

    def d(self, f: Form) -> Form:
        from .exterior import d
        return d(f, self)


def semi_orthonormal_bundle(spec: FrameBundleSpec) -> FrameModel:
    n, r = spec.n, spec.r
    symbolic = spec.metric == "symbolic"
    gens = [f"omega{i}" for i in range(1, n + 1)]
    gens += [f"theta{a}" for a in range(1, r + 1)]
    gens += [f"phi{i}_{j}" for i in range(1, n + 1) for j in range(1, i)]
    gens += [f"eta{a}_{i}" for a in range(1, r + 1) for i in range(1, n + 1)]
    if symbolic:
        gens += [f"kappa{a}_{b}" for a in range(1, r + 1) for b in range(1, r + 1)]
    else:
        gens += [f"kappa{a}_{b}" for a in range(1, r + 1) for b in range(1, a)]
    solved = solve_constraints(spec.params + spec.constant_params, spec.constraints)
    free = [p for p in spec.params if p not in solved]
    constant = [p for p in spec.constant_params if p not in solved]
    gens += [Coframe.differential_name(p) for p in free]
    gnames = [g_name(a, b, r) for a in range(1, r + 1) for b in range(a, r + 1)] if symbolic else []
    cf = Coframe(gens, free_scalars=free, dependent_scalars=gnames + constant)

    meta = {"n": n, "r": r, "metric": spec.metric, "spec": spec.to_json(),
            "solved_parameters": solved}
    # a throwaway model gives access to the index helpers while building
    zero2 = {g: cf.zero(2) for g in gens}
    helper = FrameModel(cf, zero2, {s: cf.zero(1) for s in gnames + constant}, metadata=meta)
    om, th, et, ph, ka, gg = (helper.omega, helper.theta, helper.eta, helper.phi,
                              helper.kappa, helper.g)
    N = range(1, n + 1)
    R = range(1, r + 1)
    dgen: dict = {}
    for i in N:
        f = cf.zero(2)
        for j in N:
            f = f - ph(i, j).wedge(om(j))
        for a in R:
            for b in R:
                f = f + et(b, i).wedge(th(a)).scale(gg(b, a))
        dgen[f"omega{i}"] = f
    for a in R:
        f = cf.zero(2)
        for i in N:
            f = f - et(a, i).wedge(om(i))
        for b in R:
            f = f - ka(a, b).wedge(th(b))
        dgen[f"theta{a}"] = f
    for i in N:
        for j in range(1, i):
            f = cf.zero(2)
            for k in N:
                f = f - ph(i, k).wedge(ph(k, j))
            for a in R:
                for b in R:
                    f = f + et(a, i).wedge(et(b, j)).scale(gg(a, b))
            dgen[f"phi{i}_{j}"] = f
    for a in R:
        for i in N:
            f = cf.zero(2)
            for k in N:
                f = f - et(a, k).wedge(ph(k, i))
            for b in R:
                f = f - ka(a, b).wedge(et(b, i))
            dgen[f"eta{a}_{i}"] = f
    for a in R:
        for b in (R if symbolic else range(1, a)):
            f = cf.zero(2)
            for i in N:
                for c in R:
                    f = f + et(a, i).wedge(et(c, i)).scale(gg(c, b))
            for c in R:
                f = f - ka(a, c).wedge(ka(c, b))
            dgen[f"kappa{a}_{b}"] = f
    for p in free:
        dgen[Coframe.differential_name(p)] = cf.zero(2)
    dscal: dict = {}
    for a in R:
        for b in range(a, r + 1):
            if not symbolic:
                continue
            f = cf.zero(1)
            for c in R:
                f = f + ka(c, b).scale(gg(a, c)) + ka(c, a).scale(gg(c, b))
            dscal[g_name(a, b, r)] = f
    for p in constant:
        dscal[p] = cf.zero(1)
    name = f"semi-orthonormal frame bundle n={n} r={r} ({spec.metric} metric)"
    return FrameModel(cf, dgen, dscal, name=name, metadata=meta)


class OrthogonalModel(StructureModel):
    def psi(self, i, j):
        cf = self.coframe
        if i == j:
            return cf.zero(1)
        if i > j:
            return cf.gen(f"psi{i}_{j}")
        return -cf.gen(f"psi{j}_{i}")


def special_orthogonal_model(N: int) -> OrthogonalModel:
    """Maurer-Cartan model of SO(N): generators psi^i_j (i > j), d psi = -psi^psi."""
    if N < 2:
        raise ValueError("N must be at least 2")
    gens = [f"psi{i}_{j}" for i in range(1, N + 1) for j in range(1, i)]
    cf = Coframe(gens)
    helper = OrthogonalModel(cf, {g: cf.zero(2) for g in gens})
    dgen = {}
    for i in range(1, N + 1):
        for j in range(1, i):
            f = cf.zero(2)
            for k in range(1, N + 1):
                f = f - helper.psi(i, k).wedge(helper.psi(k, j))
            dgen[f"psi{i}_{j}"] = f
    return OrthogonalModel(cf, dgen, name=f"Maurer-Cartan model of SO({N})",
                           metadata={"N": N})
