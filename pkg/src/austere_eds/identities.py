"""Exact identities among forms on the shipped structure models.

Each function returns something directly checkable: a residual form, a
list of failures, or a proportionality constant.
"""
from __future__ import annotations

from functools import reduce

from gmpy2 import mpq

from .algebra.numbers import I
from .algebra.scalars import conj, divide, is_zero, simplify
from .austere import J
from .exterior import Coframe, Form, StructureModel, d
from .pfaffian import PfaffSystem, IntegralElementSpace, evaluate_on_elements

HALF = mpq(1, 2)


def proportionality(lhs: Form, rhs: Form):
    """The scalar c with lhs = c * rhs, or None when they are not proportional."""
    if rhs.is_zero():
        return mpq(0) if lhs.is_zero() else None
    key = next(iter(rhs.terms))
    c = simplify(divide(lhs.terms.get(key, mpq(0)), rhs.terms[key]))
    return c if (lhs - rhs.scale(c)).is_zero() else None


# -- d^2 = 0 ---------------------------------------------------------------------

def d_squared_failures(model: StructureModel) -> list:
    """Generators and scalars whose second exterior derivative is nonzero."""
    cf = model.coframe
    bad = [g for g in cf.generators if not d(d(cf.gen(g), model), model).is_zero()]
    bad += [s for s, f in model.d_of_scalar.items() if not d(f, model).is_zero()]
    return bad


# -- the complex-structure identity behind the K-map ------------------------------------

def xi_identity_residual(T) -> Form:
    """sum_k (-omega omega^T J + J omega omega^T)_jk ^ (T omega)_k for each j,
    wedged into one list of 3-forms over omega^1..omega^4 (all should vanish)."""
    cf = Coframe([f"omega{i}" for i in range(1, 5)])
    w = [cf.gen(f"omega{i}") for i in range(1, 5)]
    out = []
    for j in range(4):
        total = cf.zero(3)
        for k in range(4):
            A = cf.zero(2)
            for m in range(4):
                A = A - w[j].wedge(w[m]).scale(J[m][k]) + w[m].wedge(w[k]).scale(J[j][m])
            for l in range(4):
                if not is_zero(T[k][l]):
                    total = total + A.wedge(w[l]).scale(T[k][l])
        out.append(total)
    return out


# -- SO(6): the (1,0)-forms of SO(6)/U(3) ---------------------------------------------------

def beta_forms(model) -> list:
    """beta^1..beta^3 built from the Maurer-Cartan forms psi(i, j)."""
    p = model.psi

    def hol(i, j1, j2):
        return p(i, j1) - p(i, j2).scale(I)

    return [hol(4, 1, 2) + hol(3, 1, 2).scale(I),
            hol(6, 1, 2) + hol(5, 1, 2).scale(I),
            hol(6, 3, 4) + hol(5, 3, 4).scale(I)]


def upsilon(model) -> list:
    """The 3 x 3 matrix of 1-forms with d beta = upsilon ^ beta."""
    p = model.psi
    U = [[(p(2, 1) + p(4, 3)).scale(2 * I),
          p(5, 3) - p(5, 4).scale(I) + p(6, 4) + p(6, 3).scale(I),
          (p(5, 1) - p(5, 2).scale(I) + p(6, 1).scale(I) + p(6, 2)).scale(-1)],
         [p(5, 3).scale(-1) - p(5, 4).scale(I) - p(6, 4) + p(6, 3).scale(I),
          (p(2, 1) + p(6, 5)).scale(2 * I),
          p(3, 1) - p(3, 2).scale(I) + p(4, 1).scale(I) + p(4, 2)],
         [p(5, 1) + p(5, 2).scale(I) - p(6, 1).scale(I) + p(6, 2),
          (p(3, 1) + p(3, 2).scale(I) - p(4, 1).scale(I) + p(4, 2)).scale(-1),
          (p(4, 3) + p(6, 5)).scale(2 * I)]]
    return [[e.scale(HALF) for e in row] for row in U]


def beta_structure_residuals(model) -> list:
    """d beta^l - sum_m upsilon_lm ^ beta^m for l = 1..3."""
    beta, U = beta_forms(model), upsilon(model)
    out = []
    for l in range(3):
        rhs = model.coframe.zero(2)
        for m in range(3):
            rhs = rhs + U[l][m].wedge(beta[m])
        out.append(d(beta[l], model) - rhs)
    return out


def is_skew_hermitian(U) -> bool:
    n = len(U)
    return all((U[a][b] + U[b][a].map_coefficients(conj)).is_zero()
               for a in range(n) for b in range(n))


# -- four-form identities for the lambda1 = 1 type C system --------------------------------

# (terms (row index, omega pair), omega triple) for the four combinations
CMISSING_COMBINATIONS = (
    ([(0, (3, 4)), (2, (4, 1)), (3, (2, 4))], (1, 3, 4)),
    ([(0, (2, 3)), (1, (4, 2)), (2, (1, 2))], (1, 2, 3)),
    ([(1, (3, 4)), (2, (3, 1)), (3, (2, 3))], (3, 2, 4)),
    ([(0, (1, 3)), (1, (4, 1)), (3, (1, 2))], (2, 1, 4)),
)


def cmissing_coefficients(system: PfaffSystem, model) -> list:
    """For each combination of the first-normal 2-forms Omega_i wedged with
    omega pairs, the constant c with the sum equal to
    c (phi2_1 + phi4_3) ^ omega^a ^ omega^b ^ omega^c modulo the ideal
    (None if no such constant exists)."""
    r = model.r
    omegas = [system.reduce(system.two_forms[r + i]) for i in range(4)]
    w = model.omega

    def W(*ix):
        return reduce(lambda x, y: x.wedge(y), [w(i) for i in ix])

    psi = model.phi(2, 1) + model.phi(4, 3)
    out = []
    for terms, triple in CMISSING_COMBINATIONS:
        lhs = system.coframe.zero(4)
        for i, (a, b) in terms:
            lhs = lhs + omegas[i].wedge(W(a, b))
        out.append(proportionality(system.reduce(lhs), system.reduce(psi.wedge(W(*triple)))))
    return out


# -- constancy of the complex structure in case 1.a ---------------------------------------------

def connection_matrix(model) -> list:
    """[[phi, -eta^T g], [eta, kappa]] as a 6 x 6 (n + r) matrix of 1-forms."""
    n, r = model.n, model.r
    cf = model.coframe
    N = n + r
    Phi = [[cf.zero(1) for _ in range(N)] for _ in range(N)]
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                Phi[i - 1][j - 1] = model.phi(i, j)
    for a in range(1, r + 1):
        for i in range(1, n + 1):
            Phi[n + a - 1][i - 1] = model.eta(a, i)
            total = cf.zero(1)
            for b in range(1, r + 1):
                total = total - model.eta(b, i).scale(model.g(b, a))
            Phi[i - 1][n + a - 1] = total
        for b in range(1, r + 1):
            Phi[n + a - 1][n + b - 1] = model.kappa(a, b)
    return Phi


def commutator_on_elements(system: PfaffSystem, space: IntegralElementSpace, model, C) -> list:
    """Entries of [Phi, C] that do not vanish on the generic integral element."""
    Phi = connection_matrix(model)
    N = len(Phi)
    cf = system.coframe
    bad = []
    for i in range(N):
        for j in range(N):
            e = cf.zero(1)
            for m in range(N):
                if not is_zero(C[m][j]):
                    e = e + Phi[i][m].scale(C[m][j])
                if not is_zero(C[i][m]):
                    e = e - Phi[m][j].scale(C[i][m])
            if not evaluate_on_elements(system, space, e).is_zero():
                bad.append((i + 1, j + 1))
    return bad


def block_complex_structure(r: int = 2) -> list:
    """diag(J, [[0, 1], [-1, 0]]) on R^(4 + r) for r = 2."""
    N = 4 + r
    C = [[0] * N for _ in range(N)]
    for i in range(4):
        for j in range(4):
            C[i][j] = J[i][j]
    C[4][5], C[5][4] = 1, -1
    return C


# -- case 2.b: ruling forms and pullbacks to SO(6) ------------------------------------------

def ruling_values(system: PfaffSystem, space: IntegralElementSpace, model) -> dict:
    """phi2_1, phi4_3, phi3_2, phi4_1 on the generic integral element."""
    ev = lambda f: evaluate_on_elements(system, space, f)
    ph = model.phi
    return {"phi2_1": ev(ph(2, 1)), "phi4_3": ev(ph(4, 3)),
            "phi3_2": ev(ph(3, 2)), "phi4_1": ev(ph(4, 1))}


def ruling_functions(values: dict):
    """u1, u2 with phi2_1 = u1 omega^2 + u2 omega^4 (None if phi2_1 has
    omega^1 or omega^3 components)."""
    f = values["phi2_1"]
    if not (is_zero(f.coefficient("omega1")) and is_zero(f.coefficient("omega3"))):
        return None
    return f.coefficient("omega2"), f.coefficient("omega4")


def ruling_relations(system, space, model) -> dict:
    """Residuals of phi2_1 = phi4_3 = u1 w2 + u2 w4 and
    phi3_2 = phi4_1 = u1 w4 - u2 w2."""
    v = ruling_values(system, space, model)
    uu = ruling_functions(v)
    if uu is None:
        return {"phi2_1 in span(omega2, omega4)": v["phi2_1"]}
    u1, u2 = uu
    w2, w4 = model.omega(2), model.omega(4)
    first = w2.scale(u1) + w4.scale(u2)
    second = w4.scale(u1) - w2.scale(u2)
    return {"phi2_1 - phi4_3": v["phi2_1"] - v["phi4_3"],
            "phi4_3 - (u1 w2 + u2 w4)": v["phi4_3"] - first,
            "phi3_2 - phi4_1": v["phi3_2"] - v["phi4_1"],
            "phi4_1 - (u1 w4 - u2 w2)": v["phi4_1"] - second}


def gamma_pullback_residuals(system, space, model) -> dict:
    """Pullbacks of psi^m_1 - i psi^m_2 (m = 3..6) under the lifted Gauss map
    minus their claimed multiples of omega^2 + i omega^4; the lift swaps
    frame indices 2 and 3 and divides the normals by r = sqrt(g11), so the
    r factor is dropped from both sides of the last two."""
    ev = lambda f: evaluate_on_elements(system, space, f)
    ph, eta = model.phi, model.eta
    u1, u2 = ruling_functions(ruling_values(system, space, model))
    z = model.omega(2) + model.omega(4).scale(I)
    phi23 = ph(3, 2).scale(-1)
    pulled = {3: ev(ph(2, 1)) - ev(phi23).scale(I),
              4: ev(ph(4, 1)) - ev(ph(4, 3)).scale(I),
              5: ev(eta(1, 1)) - ev(eta(1, 3)).scale(I),
              6: ev(eta(2, 1)) - ev(eta(2, 3)).scale(I)}
    claimed = {3: z.scale(simplify(u1 - I * u2)),
               4: z.scale(simplify(-(u2 + I * u1))),
               5: z,
               6: z.scale(I)}
    return {m: pulled[m] - claimed[m] for m in pulled}
