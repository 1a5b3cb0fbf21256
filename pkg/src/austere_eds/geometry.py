"""Floating-point checks on explicit immersions.

Every immersion carries closed-form first and second partial derivatives;
floating point enters only through evaluation, orthonormalization and
eigenvalue solves.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable

import numpy as np

DEFAULT_TOL = 1e-9
CONDITION_GUARD = 1e6


class RankDeficient(ValueError):
    """The Jacobian is (numerically) rank deficient at the point."""


@dataclass(frozen=True)
class Immersion:
    """x in R^n mapped into R^m with value, Jacobian (m, n) and Hessian (m, n, n)."""

    n: int
    m: int
    value: Callable[[np.ndarray], np.ndarray]
    jacobian: Callable[[np.ndarray], np.ndarray]
    hessian: Callable[[np.ndarray], np.ndarray]
    name: str = ""

    def rotated(self, Q: np.ndarray) -> "Immersion":
        """Compose with an ambient orthogonal map."""
        return Immersion(self.n, self.m, lambda x: Q @ self.value(x),
                         lambda x: Q @ self.jacobian(x),
                         lambda x: np.einsum("ab,bkl->akl", Q, self.hessian(x)),
                         self.name + " (rotated)")


@dataclass
class SecondFundamentalData:
    point: np.ndarray
    tangent: np.ndarray  # (m, n) orthonormal columns
    normal: np.ndarray  # (m, m - n) orthonormal columns
    S: np.ndarray  # (m - n, n, n)
    normal_rank: int
    condition: float
    coords: np.ndarray | None = None  # e_i = Jacobian @ coords[:, i]


# -- immersions ----------------------------------------------------------------

def helicoid(lambdas, n: int = 4) -> Immersion:
    """(x0, ..., x_{n-1}) -> (x0, x1 cos(l1 x0), x1 sin(l1 x0), ..., x_s cos(l_s x0),
    x_s sin(l_s x0), x_{s+1}, ..., x_{n-1})."""
    lam = np.asarray(list(lambdas), dtype=float)
    s = len(lam)
    if s >= n:
        raise ValueError("need fewer rotation speeds than the dimension")
    if np.any(lam <= 0):
        raise ValueError("rotation speeds must be positive")
    m = n + s

    def value(x):
        out = [x[0]]
        for k in range(s):
            out += [x[k + 1] * np.cos(lam[k] * x[0]), x[k + 1] * np.sin(lam[k] * x[0])]
        out += list(x[s + 1:])
        return np.array(out, dtype=float)

    def jacobian(x):
        J = np.zeros((m, n))
        J[0, 0] = 1.0
        for k in range(s):
            c, sn, l, r = np.cos(lam[k] * x[0]), np.sin(lam[k] * x[0]), lam[k], x[k + 1]
            J[1 + 2 * k, 0] = -r * l * sn
            J[1 + 2 * k, k + 1] = c
            J[2 + 2 * k, 0] = r * l * c
            J[2 + 2 * k, k + 1] = sn
        for j in range(s + 1, n):
            J[s + j, j] = 1.0
        return J

    def hessian(x):
        H = np.zeros((m, n, n))
        for k in range(s):
            c, sn, l, r = np.cos(lam[k] * x[0]), np.sin(lam[k] * x[0]), lam[k], x[k + 1]
            H[1 + 2 * k, 0, 0] = -r * l * l * c
            H[2 + 2 * k, 0, 0] = -r * l * l * sn
            H[1 + 2 * k, 0, k + 1] = H[1 + 2 * k, k + 1, 0] = -l * sn
            H[2 + 2 * k, 0, k + 1] = H[2 + 2 * k, k + 1, 0] = l * c
        return H

    return Immersion(n, m, value, jacobian, hessian, f"helicoid{tuple(lam.tolist())}")


def quadric_graph(n: int = 4) -> Immersion:
    """Graph of z = |x|^2 in R^{n+1} (mean curvature never zero)."""

    def value(x):
        return np.concatenate([x, [x @ x]])

    def jacobian(x):
        return np.vstack([np.eye(n), 2 * x[None, :]])

    def hessian(x):
        H = np.zeros((n + 1, n, n))
        H[n] = 2 * np.eye(n)
        return H

    return Immersion(n, n + 1, value, jacobian, hessian, "graph of |x|^2")


def flat(n: int = 4, m: int = 7) -> Immersion:
    E = np.eye(m, n)
    return Immersion(n, m, lambda x: E @ x, lambda x: E.copy(),
                     lambda x: np.zeros((m, n, n)), "affine subspace")


@dataclass(frozen=True)
class ComplexMonomial:
    """coef * z^p * w^q, or its complex conjugate when ``anti``."""

    coef: complex
    p: int
    q: int
    anti: bool = False

    def _d(self, a: int, b: int, z: complex, w: complex) -> complex:
        # a-th z derivative and b-th w derivative of coef z^p w^q
        if a > self.p or b > self.q:
            return 0j
        fa = np.prod(range(self.p - a + 1, self.p + 1)) if a else 1
        fb = np.prod(range(self.q - b + 1, self.q + 1)) if b else 1
        return self.coef * fa * fb * z ** (self.p - a) * w ** (self.q - b)


def complex_surface(components, name: str = "") -> Immersion:
    """Map C^2 -> C^N, (z, w) -> (h_1, ..., h_N), each h a sum of monomials.

    Real coordinates are (Re z, Re w, Im z, Im w), so the complex structure
    sends the first two coordinate directions to the last two.  Output
    coordinates are (Re h_1, ..., Re h_N, Im h_1, ..., Im h_N).
    """
    comps = [list(c) if isinstance(c, (list, tuple)) else [c] for c in components]
    N = len(comps)
    # derivative of z (var 0) or w (var 1) along each real coordinate
    var = (0, 1, 0, 1)
    eps = (1, 1, 1j, 1j)

    def cvals(x, order):
        z, w = complex(x[0], x[2]), complex(x[1], x[3])
        out = []
        for mons in comps:
            if order == 0:
                v = sum(_mono_value(mo, 0, 0, z, w) for mo in mons)
            elif order == 1:
                v = np.array([sum(_mono_deriv(mo, (var[k],), (eps[k],), z, w) for mo in mons)
                              for k in range(4)])
            else:
                v = np.array([[sum(_mono_deriv(mo, (var[k], var[l]), (eps[k], eps[l]), z, w)
                                   for mo in mons) for l in range(4)] for k in range(4)])
            out.append(v)
        return np.array(out)

    def split(a):
        return np.concatenate([a.real, a.imag], axis=0)

    return Immersion(4, 2 * N, lambda x: split(cvals(x, 0)), lambda x: split(cvals(x, 1)),
                     lambda x: split(cvals(x, 2)), name)


def _mono_value(mo: ComplexMonomial, a, b, z, w):
    v = mo._d(a, b, z, w)
    return np.conj(v) if mo.anti else v


def _mono_deriv(mo: ComplexMonomial, vars_, eps, z, w):
    a = sum(1 for v in vars_ if v == 0)
    b = len(vars_) - a
    v = mo._d(a, b, z, w) * np.prod(eps)
    return np.conj(v) if mo.anti else v


def segre_chart(n: int = 1) -> Immersion:
    """Affine chart of CP^1 x (rational normal curve of degree n) in CP^{2n+1}:
    (z, w) -> (z, w, w^2, ..., w^n, z w, z w^2, ..., z w^n)."""
    if n < 1:
        raise ValueError("n must be positive")
    comps = [ComplexMonomial(1, 1, 0)] + [ComplexMonomial(1, 0, k) for k in range(1, n + 1)]
    comps += [ComplexMonomial(1, 1, k) for k in range(1, n + 1)]
    return complex_surface(comps, f"Segre chart n={n}")


def complex_plane() -> Immersion:
    return complex_surface([ComplexMonomial(1, 1, 0), ComplexMonomial(1, 0, 1),
                            ComplexMonomial(0, 0, 0)], "complex plane")


def antiholomorphic_graph() -> Immersion:
    """(z, w) -> (z, w, conj(z)^2): not a complex submanifold."""
    return complex_surface([ComplexMonomial(1, 1, 0), ComplexMonomial(1, 0, 1),
                            ComplexMonomial(1, 2, 0, anti=True)], "graph of conj(z)^2")


# -- second fundamental form ----------------------------------------------------------

def _orthonormal_complement(T: np.ndarray) -> np.ndarray:
    m, n = T.shape
    Q, _ = np.linalg.qr(np.hstack([T, np.eye(m)]))
    return Q[:, n:m]


def second_fundamental_form(imm: Immersion, point, tangent=None,
                            guard: float = CONDITION_GUARD) -> SecondFundamentalData:
    """S^a_ij = nu_a . II(e_i, e_j) in an orthonormal tangent frame.

    ``tangent`` optionally fixes the orthonormal frame (columns in R^m
    spanning the tangent space); otherwise the partials are orthonormalized.
    """
    x = np.asarray(point, dtype=float)
    J = imm.jacobian(x)
    gram = J.T @ J
    cond = np.linalg.cond(gram)
    if not np.isfinite(cond) or cond > guard:
        raise RankDeficient(f"Gram matrix condition number {cond:.3g} exceeds {guard:g}")
    if tangent is None:
        E, _ = np.linalg.qr(J)
    else:
        E = np.asarray(tangent, dtype=float)
    C = np.linalg.lstsq(J, E, rcond=None)[0]  # e_i = J C[:, i]
    if np.linalg.norm(J @ C - E) > 1e-8 * max(1.0, np.linalg.norm(E)):
        raise ValueError("supplied frame is not tangent")
    N = _orthonormal_complement(E)
    H = imm.hessian(x)
    II = np.einsum("akl,ki,lj->aij", H, C, C)
    S = np.einsum("ab,aij->bij", N, II)
    S = 0.5 * (S + S.transpose(0, 2, 1))
    return SecondFundamentalData(x, E, N, S, normal_rank(S), float(cond), C)


def normal_rank(S: np.ndarray, rtol: float = 1e-8) -> int:
    if S.size == 0:
        return 0
    flat_ = S.reshape(S.shape[0], -1)
    sv = np.linalg.svd(flat_, compute_uv=False)
    if sv.size == 0 or sv[0] == 0:
        return 0
    return int(np.sum(sv > rtol * max(1.0, sv[0])))


# -- austere test ------------------------------------------------------------------------

def odd_symmetric_residual(M: np.ndarray) -> float:
    """max |e_k(eigenvalues)| over odd k."""
    ev = np.linalg.eigvalsh(0.5 * (M + M.T))
    # elementary symmetric functions from the characteristic polynomial
    coeffs = np.poly(ev)  # x^n - e1 x^{n-1} + e2 x^{n-2} - ...
    res = 0.0
    for k in range(1, len(ev) + 1, 2):
        res = max(res, abs(coeffs[k]))
    return float(res)


@dataclass
class AustereCheck:
    passed: bool
    residual: float
    tested: int

    def __bool__(self):
        return self.passed


def austere_check(data: SecondFundamentalData, samples: int = 10, tol: float = DEFAULT_TOL,
                  seed: int = 0) -> AustereCheck:
    """Odd elementary symmetric functions of the eigenvalues of the basis
    matrices, their pairwise sums and random unit combinations."""
    S = data.S
    mats = list(S)
    mats += [S[a] + S[b] for a, b in combinations(range(len(S)), 2)]
    rng = np.random.default_rng(seed)
    for _ in range(samples if len(S) else 0):
        c = rng.normal(size=len(S))
        c /= np.linalg.norm(c)
        mats.append(np.einsum("a,aij->ij", c, S))
    worst = max((odd_symmetric_residual(M) for M in mats), default=0.0)
    return AustereCheck(worst <= tol, worst, len(mats))


def random_points(n: int, count: int, seed: int, scale: float = 2.0) -> np.ndarray:
    return np.random.default_rng(seed).uniform(-scale, scale, size=(count, n))


def sample_fundamental_forms(imm: Immersion, count: int, seed: int,
                             frame: Callable | None = None, attempts: int = 20) -> list:
    """Second fundamental data at ``count`` seeded random points; points
    failing the condition guard are resampled."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        for _ in range(attempts):
            x = rng.uniform(-2.0, 2.0, size=imm.n)
            try:
                tangent = frame(imm, x) if frame else None
                out.append(second_fundamental_form(imm, x, tangent))
                break
            except RankDeficient:
                continue
        else:
            raise RankDeficient("no well-conditioned sample point found")
    return out


@dataclass
class SurfaceReport:
    surface: str
    seed: int
    points: int
    tol: float
    passed: bool
    residual: float
    normal_ranks: list

    def to_json(self) -> dict:
        return {"surface": self.surface, "seed": self.seed, "points": self.points,
                "tol": self.tol, "passed": self.passed, "residual": f"{self.residual:.3e}",
                "normal_ranks": self.normal_ranks}


def check_surface(imm: Immersion, points: int = 10, tol: float = DEFAULT_TOL,
                  seed: int = 0, samples: int = 10) -> SurfaceReport:
    worst, ok, ranks = 0.0, True, []
    for k, data in enumerate(sample_fundamental_forms(imm, points, seed)):
        res = austere_check(data, samples, tol, seed + k)
        worst = max(worst, res.residual)
        ok = ok and res.passed
        ranks.append(data.normal_rank)
    return SurfaceReport(imm.name, seed, points, tol, ok, worst, ranks)


def common_linear_factor(data: SecondFundamentalData, tol: float = 1e-8) -> tuple:
    """Is there a covector l with every S^a vanishing on ker l x ker l?

    Returns (found, residual, l).
    """
    S = data.S
    n = S.shape[1]
    if not np.any(np.abs(S) > tol):
        return True, 0.0, np.eye(n)[0]
    # l lies in the image of every S^a
    blocks = []
    for M in S:
        U, sv, _ = np.linalg.svd(M)
        r = int(np.sum(sv > tol * max(1.0, sv[0])))
        blocks.append(U[:, r:].T)
    A = np.vstack(blocks) if blocks else np.zeros((0, n))
    if A.shape[0] == 0:
        return False, float("inf"), None
    _, sv, Vt = np.linalg.svd(A)
    best, best_l = float("inf"), None
    for l in Vt[::-1][:max(1, n - np.linalg.matrix_rank(A, tol))]:
        P = np.eye(n) - np.outer(l, l)
        res = max(float(np.max(np.abs(P @ M @ P))) for M in S)
        if res < best:
            best, best_l = res, l
    return best <= tol, best, best_l


# -- type A (complex) check ---------------------------------------------------------------

def complex_frame(imm: Immersion, x) -> np.ndarray:
    """Orthonormal frame e1, e2, J e1, J e2 of a complex surface chart
    (hermitian Gram-Schmidt on the holomorphic partials)."""
    Jac = imm.jacobian(np.asarray(x, dtype=float))
    half = imm.m // 2
    vz = Jac[:half, 0] + 1j * Jac[half:, 0]
    vw = Jac[:half, 1] + 1j * Jac[half:, 1]
    u1 = vz / np.linalg.norm(vz)
    u2 = vw - np.vdot(u1, vw) * u1
    nrm = np.linalg.norm(u2)
    if nrm < 1e-12:
        raise RankDeficient("complex partials are dependent")
    u2 = u2 / nrm

    def real(v):
        return np.concatenate([v.real, v.imag])

    return np.column_stack([real(u1), real(u2), real(1j * u1), real(1j * u2)])


COMPLEX_STRUCTURE = np.array([[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]], float)


@dataclass
class SegreReport:
    surface: str
    passed: bool
    residual: float
    points: int
    seed: int

    def to_json(self) -> dict:
        return {"surface": self.surface, "passed": self.passed,
                "residual": f"{self.residual:.3e}", "points": self.points, "seed": self.seed}


def ambient_complex_structure(m: int) -> np.ndarray:
    """Multiplication by i on C^N written in (Re, Im) coordinates."""
    N = m // 2
    Z, I = np.zeros((N, N)), np.eye(N)
    return np.block([[Z, -I], [I, Z]])


def j_anticommutation_residual(data: SecondFundamentalData) -> float:
    """Failure of the second fundamental form to be J-linear.

    If the tangent space is not invariant under the ambient complex
    structure the residual is the size of the non-invariant part; otherwise
    it is max |S J - J^T S| with J written in the tangent frame (S J + J S
    in a frame with J e1 = e3, J e2 = e4).
    """
    E = data.tangent
    Ja = ambient_complex_structure(E.shape[0])
    JE = Ja @ E
    off = JE - E @ (E.T @ JE)
    leak = float(np.max(np.abs(off)))
    if leak > 1e-8:
        return leak
    Jf = E.T @ JE
    return max((float(np.max(np.abs(M @ Jf - Jf.T @ M))) for M in data.S), default=0.0)


def adapted_frame(imm: Immersion, x) -> np.ndarray:
    """The complex frame when the tangent space is J-invariant, otherwise
    the orthonormalized partials."""
    E = complex_frame(imm, x)
    J = imm.jacobian(np.asarray(x, dtype=float))
    C = np.linalg.lstsq(J, E, rcond=None)[0]
    if np.linalg.norm(J @ C - E) > 1e-8:
        return np.linalg.qr(J)[0]
    return E


def segre_type_a_check(n: int = 1, points: int = 10, seed: int = 0, tol: float = DEFAULT_TOL,
                       immersion: Immersion | None = None) -> SegreReport:
    """S J + J S = 0 for every normal direction at seeded chart points."""
    imm = immersion or segre_chart(n)
    worst = 0.0
    for data in sample_fundamental_forms(imm, points, seed, frame=adapted_frame):
        worst = max(worst, j_anticommutation_residual(data))
    return SegreReport(imm.name, worst <= tol, worst, points, seed)
