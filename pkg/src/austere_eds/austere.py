"""Spaces of symmetric 4x4 matrices: maximal austere spaces, the austere
test, prolongation, the Kahler K-map and the normalization of 2-dimensional
subspaces of the type A space.

Matrices are tuples of row tuples of Scalars.  Complex 2x2 symmetric pairs
are classified by exact invariant tests that do not depend on the chosen
basis of the real span or on the unitary action.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations

from gmpy2 import mpq

from .algebra.linalg import ExactMatrix, determinant, echelon, nullspace
from .algebra.numbers import I, GaussianRational, MPQ
from .algebra.poly import Polynomial, sort_vars
from .algebra.ratfunc import RationalFunction, poly_gcd
from .algebra.scalars import (conj, divide, format_scalar, is_constant, is_zero,
                              numerator_denominator, parse_scalar, scalar_vars, simplify)

ONE, ZERO = mpq(1), mpq(0)


# -- small matrix helpers ---------------------------------------------------

def matrix(rows) -> tuple:
    return tuple(tuple(simplify(v) for v in r) for r in rows)


def zeros(n: int, m: int | None = None) -> tuple:
    return tuple(tuple(ZERO for _ in range(m or n)) for _ in range(n))


def unit_symmetric(n: int, entries: dict) -> tuple:
    """Symmetric matrix from {(i, j): value} with 1-based indices."""
    rows = [[ZERO] * n for _ in range(n)]
    for (i, j), v in entries.items():
        rows[i - 1][j - 1] = v
        rows[j - 1][i - 1] = v
    return matrix(rows)


def diag(*values) -> tuple:
    n = len(values)
    return matrix([[values[i] if i == j else ZERO for j in range(n)] for i in range(n)])


def mat_add(a, b):
    return matrix([[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)])


def mat_sub(a, b):
    return matrix([[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)])


def mat_scale(a, c):
    return matrix([[x * c for x in r] for r in a])


def mat_mul(a, b):
    m = len(b[0])
    return matrix([[sum((r[k] * b[k][j] for k in range(len(b))), ZERO) for j in range(m)]
                   for r in a])


def mat_transpose(a):
    return matrix(list(zip(*a)))


def mat_conj(a):
    return matrix([[conj(x) for x in r] for r in a])


def commutator(a, b):
    return mat_sub(mat_mul(a, b), mat_mul(b, a))


def anticommutator(a, b):
    return mat_add(mat_mul(a, b), mat_mul(b, a))


def is_zero_matrix(a) -> bool:
    return all(is_zero(x) for r in a for x in r)


def is_symmetric(a) -> bool:
    n = len(a)
    return all(len(r) == n for r in a) and all(
        is_zero(simplify(a[i][j] - a[j][i])) for i in range(n) for j in range(i + 1, n))


def format_matrix(a) -> list:
    return [[format_scalar(x) for x in r] for r in a]


# -- fixed matrices -----------------------------------------------------------

# complex structure on R^4 with J e1 = e3, J e2 = e4
J = matrix([[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]])
# the reflection whose anticommutant spans the non-scalar part of type B
R = diag(1, 1, -1, -1)
# the complex structures entering the K-map; U = -J T
T_MAP = matrix([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]])
U_MAP = mat_scale(mat_mul(J, T_MAP), -1)
# the second complex structure used for the exceptional two-dimensional spaces
J_TILDE = matrix([[0, 0, 1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, -1, 0, 0]])


def type_a_basis() -> list:
    return [
        diag(1, 0, -1, 0),
        unit_symmetric(4, {(1, 2): ONE, (3, 4): -ONE}),
        diag(0, 1, 0, -1),
        unit_symmetric(4, {(1, 3): ONE}),
        unit_symmetric(4, {(1, 4): ONE, (2, 3): ONE}),
        unit_symmetric(4, {(2, 4): ONE}),
    ]


def type_b_matrix(m, b11, b12, b21, b22) -> tuple:
    """[[m I, B], [B^T, -m I]] with B = [[b11, b12], [b21, b22]]."""
    return matrix([[m, 0, b11, b12], [0, m, b21, b22],
                   [b11, b21, -m, 0], [b12, b22, 0, -m]])


def type_b_basis() -> list:
    return [type_b_matrix(1, 0, 0, 0, 0), type_b_matrix(0, 1, 0, 0, 0),
            type_b_matrix(0, 0, 1, 0, 0), type_b_matrix(0, 0, 0, 1, 0),
            type_b_matrix(0, 0, 0, 0, 1)]


def lambda3_of(l1, l2):
    """The third helicoid parameter fixed by the austere relation."""
    return divide(-(simplify(l1) + simplify(l2)), ONE + simplify(l1) * simplify(l2))


def type_c_basis(l1, l2, l3) -> list:
    return [unit_symmetric(4, {(1, 2): ONE, (3, 4): l1}),
            unit_symmetric(4, {(1, 3): ONE, (2, 4): l2}),
            unit_symmetric(4, {(1, 4): ONE, (2, 3): l3})]


def _as_scalar(v):
    if isinstance(v, str):
        return parse_scalar(v)
    return simplify(v)


# -- SymSpace -------------------------------------------------------------------

@dataclass(frozen=True)
class SymSpace:
    """A linearly independent list of symmetric n x n matrices."""

    n: int
    basis: tuple
    params: tuple = ()
    coords: tuple | None = None
    label: str = ""

    def __post_init__(self):
        basis = tuple(matrix(b) for b in self.basis)
        object.__setattr__(self, "basis", basis)
        for b in basis:
            if len(b) != self.n or not is_symmetric(b):
                raise ValueError("basis matrices must be symmetric and n x n")
        names = set()
        for b in basis:
            for r in b:
                for v in r:
                    names.update(scalar_vars(v))
        params = tuple(self.params) if self.params else sort_vars(names)
        object.__setattr__(self, "params", params)
        if basis and len(basis) > 1 and _rank(basis) < len(basis):
            raise ValueError("basis matrices are linearly dependent")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def subs(self, mapping: dict) -> "SymSpace":
        from .algebra.scalars import subs
        mapping = {k: _as_scalar(v) for k, v in mapping.items()}
        basis = [[[subs(v, mapping) for v in r] for r in b] for b in self.basis]
        params = tuple(p for p in self.params if p not in mapping)
        return SymSpace(self.n, tuple(basis), params, self.coords, self.label)

    def conjugate_by(self, M) -> "SymSpace":
        """The space M S M^T (M is typically orthogonal)."""
        Mt = mat_transpose(M)
        return SymSpace(self.n, tuple(mat_mul(mat_mul(M, b), Mt) for b in self.basis),
                        self.params, None, self.label)

    def to_json(self) -> dict:
        return {"n": self.n,
                "basis": [[format_scalar(v) for r in b for v in r] for b in self.basis],
                "params": list(self.params)}

    @classmethod
    def from_json(cls, data) -> "SymSpace":
        if isinstance(data, str):
            data = json.loads(data)
        if not isinstance(data, dict) or "n" not in data or "basis" not in data:
            raise ValueError("SymSpace JSON needs keys 'n' and 'basis'")
        n = int(data["n"])
        basis = []
        for entry in data["basis"]:
            if entry and isinstance(entry[0], list):
                rows = [[_as_scalar(str(v)) for v in r] for r in entry]
            else:
                flat = [_as_scalar(str(v)) for v in entry]
                if len(flat) != n * n:
                    raise ValueError(f"basis entry has {len(flat)} values, expected {n * n}")
                rows = [flat[i * n:(i + 1) * n] for i in range(n)]
            basis.append(rows)
        return cls(n, tuple(basis), tuple(data.get("params", ())))


def _flatten(b) -> dict:
    n = len(b)
    return {i * n + j: b[i][j] for i in range(n) for j in range(n) if not is_zero(b[i][j])}


def _rank(basis) -> int:
    n = len(basis[0])
    from .algebra.linalg import rank_generic
    return rank_generic(ExactMatrix([_flatten(b) for b in basis], n * n))


def maximal_basis(kind: str, lambdas=("l1", "l2"), free_lambda3: bool = False) -> SymSpace:
    """Bases of the three maximal austere spaces in dimension 4.

    For kind ``C`` the two entries of ``lambdas`` are names or numbers; the
    third parameter is solved from the austere relation unless
    ``free_lambda3`` asks for an independent symbol ``l3``.
    """
    kind = kind.upper()
    if kind == "A":
        return SymSpace(4, tuple(type_a_basis()), label="A")
    if kind == "B":
        return SymSpace(4, tuple(type_b_basis()), label="B")
    if kind == "C":
        l1, l2 = (_as_scalar(v) for v in lambdas)
        l3 = Polynomial.var("l3") if free_lambda3 else lambda3_of(l1, l2)
        return SymSpace(4, tuple(type_c_basis(l1, l2, l3)), label="C")
    raise ValueError(f"unknown maximal type {kind!r}")


def full_symmetric_space(n: int = 4) -> SymSpace:
    basis = [unit_symmetric(n, {(i, j): ONE}) for i in range(1, n + 1) for j in range(i, n + 1)]
    return SymSpace(n, tuple(basis), label="S2")


# -- austere test ------------------------------------------------------------------

def _fresh_names(count: int, taken) -> list:
    taken = set(taken)
    stem = "x"
    while any(f"{stem}{k}" in taken for k in range(1, count + 1)):
        stem += "_"
    return [f"{stem}{k}" for k in range(1, count + 1)]


def generic_combination(space: SymSpace):
    names = _fresh_names(space.dim, space.params)
    M = zeros(space.n)
    for name, b in zip(names, space.basis):
        M = mat_add(M, mat_scale(b, Polynomial.var(name)))
    return M, names


def elementary_symmetric(M, k: int):
    """Sum of the principal k x k minors (k-th elementary symmetric function
    of the eigenvalues)."""
    n = len(M)
    total = ZERO
    for idx in combinations(range(n), k):
        total = simplify(total + determinant([[M[i][j] for j in idx] for i in idx]))
    return total


@dataclass
class AustereResult:
    austere: bool
    certificate: dict | None = None

    def __bool__(self):
        return self.austere

    def to_json(self) -> dict:
        return {"austere": self.austere, "certificate": self.certificate}


def is_austere(space: SymSpace) -> AustereResult:
    """All odd elementary symmetric functions of a generic element vanish."""
    M, names = generic_combination(space)
    for k in range(1, space.n + 1, 2):
        e = elementary_symmetric(M, k)
        if not is_zero(e):
            num, _ = numerator_denominator(e)
            return AustereResult(False, {
                "name": "trace" if k == 1 else f"e{k}", "degree": k,
                "polynomial": str(num), "variables": names})
    return AustereResult(True)


# -- prolongation ------------------------------------------------------------------

@dataclass
class Prolongation:
    dimension: int
    basis: list  # symmetric 3-tensors as nested tuples

    def to_json(self) -> dict:
        return {"dimension": self.dimension,
                "basis": [[[[format_scalar(v) for v in row] for row in mat] for mat in t]
                          for t in self.basis]}


def prolongation(space: SymSpace) -> Prolongation:
    """Symmetric 3-tensors T with every slice T(., ., k) in the space.

    Unknowns c[a, k] give T_ijk = sum_a c[a, k] S^a_ij; the kernel of the
    skew-symmetrization T_ijk - T_ikj is the prolongation.
    """
    n, q = space.n, space.dim
    col = {(a, k): a * n + k for a in range(q) for k in range(n)}
    rows = []
    for i in range(n):
        for j in range(n):
            for k in range(j + 1, n):
                row: dict = {}
                for a, S in enumerate(space.basis):
                    for c, v in ((col[a, k], S[i][j]), (col[a, j], -S[i][k])):
                        if not is_zero(v):
                            row[c] = simplify(row.get(c, ZERO) + v)
                rows.append(row)
    kernel = nullspace(ExactMatrix(rows, q * n))
    tensors = []
    for vec in kernel:
        t = [[[simplify(sum((vec[col[a, k]] * S[i][j] for a, S in enumerate(space.basis)),
                            ZERO)) for k in range(n)] for j in range(n)] for i in range(n)]
        tensors.append(t)
    return Prolongation(len(kernel), tensors)


# -- Kahler K-map ----------------------------------------------------------------

@dataclass
class KMapResult:
    dimension: int
    witness: list | None

    def to_json(self) -> dict:
        return {"dimension": self.dimension,
                "witness": None if self.witness is None else [format_scalar(v) for v in self.witness]}


def k_map(S) -> tuple:
    """The 4 x 8 matrix ([S, T] | [S, U])."""
    a, b = commutator(S, T_MAP), commutator(S, U_MAP)
    return tuple(ra + rb for ra, rb in zip(a, b))


def k_map_nullspace(space: SymSpace) -> KMapResult:
    rows = []
    for S in space.basis:
        for r in k_map(S):
            rows.append({j: v for j, v in enumerate(r) if not is_zero(v)})
    kernel = nullspace(ExactMatrix(rows, 8))
    return KMapResult(len(kernel), kernel[0] if kernel else None)


def kahler_exception_space(x=mpq(2)) -> SymSpace:
    """The span of S_x = diag(1, x, -1, -x) and its exceptional partner.

    The partner is the symmetric matrix J~ S_x R (entries 13 = 1 and
    24 = -x); it is the unique direction on which K restricted to the
    kernel of K(S_x) degenerates.
    """
    x = _as_scalar(x)
    Sx = diag(1, x, -1, -x)
    return SymSpace(4, (Sx, mat_mul(mat_mul(J_TILDE, Sx), R)), label="Q_x")


# -- the complex model of the type A space -----------------------------------------

def _re_im(v):
    v = simplify(v)
    if isinstance(v, GaussianRational):
        return v.re, v.im
    if isinstance(v, MPQ):
        return v, ZERO
    if isinstance(v, Polynomial):
        re, im = v.real_imag()
        return simplify(re), simplify(im)
    num, den = numerator_denominator(v)
    if not den.is_real():
        raise ValueError("cannot split a rational function with complex denominator")
    re, im = num.real_imag()
    return divide(re, den), divide(im, den)


def rho_bar(S) -> tuple:
    """[[A, B], [B, -A]] -> A - i B."""
    S = matrix(S)
    A = [[S[i][j] for j in range(2)] for i in range(2)]
    B = [[S[i][j + 2] for j in range(2)] for i in range(2)]
    for i in range(2):
        for j in range(2):
            if not (is_zero(simplify(S[i + 2][j] - B[i][j]))
                    and is_zero(simplify(S[i + 2][j + 2] + A[i][j]))):
                raise ValueError("matrix is not of the form [[A, B], [B, -A]]")
    return matrix([[A[i][j] - I * B[i][j] for j in range(2)] for i in range(2)])


def rho_bar_inverse(sigma) -> tuple:
    """2x2 complex symmetric sigma -> the real 4x4 matrix [[A, B], [B, -A]]."""
    rows = [[ZERO] * 4 for _ in range(4)]
    for i in range(2):
        for j in range(2):
            a, negb = _re_im(sigma[i][j])
            b = simplify(-negb)
            rows[i][j], rows[i][j + 2] = a, b
            rows[i + 2][j], rows[i + 2][j + 2] = b, simplify(-a)
    return matrix(rows)


def rho(M) -> tuple:
    """[[E, F], [-F, E]] -> E + i F."""
    M = matrix(M)
    E = [[M[i][j] for j in range(2)] for i in range(2)]
    F = [[M[i][j + 2] for j in range(2)] for i in range(2)]
    for i in range(2):
        for j in range(2):
            if not (is_zero(simplify(M[i + 2][j] + F[i][j]))
                    and is_zero(simplify(M[i + 2][j + 2] - E[i][j]))):
                raise ValueError("matrix does not commute with J")
    return matrix([[E[i][j] + I * F[i][j] for j in range(2)] for i in range(2)])


def rho_inverse(U) -> tuple:
    rows = [[ZERO] * 4 for _ in range(4)]
    for i in range(2):
        for j in range(2):
            e, f = _re_im(U[i][j])
            rows[i][j], rows[i][j + 2] = e, f
            rows[i + 2][j], rows[i + 2][j + 2] = simplify(-f), e
    return matrix(rows)


def cayley(K):
    """(I - K)^{-1} (I + K): orthogonal when K is skew, exact over Q."""
    n = len(K)
    Id = diag(*([ONE] * n))
    return mat_mul(inverse(mat_sub(Id, K)), mat_add(Id, K))


def inverse(M):
    n = len(M)
    rows = [{**{j: M[i][j] for j in range(n)}, n + i: ONE} for i in range(n)]
    E = echelon(rows, 2 * n, protected=frozenset(range(n, 2 * n)), reduce_back=True)
    if E.rank < n:
        raise ZeroDivisionError("matrix is singular")
    out = [None] * n
    for col, r in E.pivots:
        p = r[col]
        out[col] = [simplify(divide(r.get(n + j, ZERO), p)) for j in range(n)]
    return matrix(out)


# -- classification of two-dimensional subspaces ----------------------------------

CASE_TAGS = ("1.a", "1.b", "2.a", "2.b", "2.c", "2.d")


@dataclass(frozen=True)
class ComplexSymPair:
    S: tuple
    T: tuple

    def __post_init__(self):
        S, T = matrix(self.S), matrix(self.T)
        if len(S) != 2 or len(T) != 2 or not is_symmetric(S) or not is_symmetric(T):
            raise ValueError("S and T must be symmetric 2x2 matrices")
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "T", T)

    @property
    def is_constant(self) -> bool:
        return all(is_constant(v) for M in (self.S, self.T) for r in M for v in r)

    def real_matrices(self):
        return rho_bar_inverse(self.S), rho_bar_inverse(self.T)

    def to_json(self) -> dict:
        return {"S": format_matrix(self.S), "T": format_matrix(self.T)}

    @classmethod
    def from_json(cls, data) -> "ComplexSymPair":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            S = [[_as_scalar(str(v)) for v in r] for r in data["S"]]
            T = [[_as_scalar(str(v)) for v in r] for r in data["T"]]
        except (KeyError, TypeError) as exc:
            raise ValueError("pair JSON needs 2x2 arrays 'S' and 'T'") from exc
        return cls(S, T)


@dataclass
class CaseLabel:
    tag: str
    pair: ComplexSymPair | None = None
    parameters: dict = field(default_factory=dict)
    reasons: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"tag": self.tag,
                "normal_form": None if self.pair is None else self.pair.to_json(),
                "parameters": {k: format_scalar(v) for k, v in self.parameters.items()},
                "reasons": list(self.reasons)}


def _entries(M):
    return [M[0][0], M[0][1], M[1][1]]


def _real_vector(M):
    out = []
    for v in _entries(M):
        out.extend(_re_im(v))
    return out


def _real_span_rank(S, T) -> int:
    vs = [_real_vector(S), _real_vector(T)]
    return echelon([{j: v for j, v in enumerate(r) if not is_zero(v)} for r in vs], 6).rank


def _complex_dependent(S, T) -> bool:
    a, b = _entries(S), _entries(T)
    return all(is_zero(simplify(a[i] * b[j] - a[j] * b[i])) for i in range(3) for j in range(i + 1, 3))


def _det2(M):
    return simplify(M[0][0] * M[1][1] - M[0][1] * M[1][0])


def _has_real_singular(S, T) -> bool:
    """Does det(a S + b T) vanish for some real (a, b) != (0, 0)?

    The determinant is a binary quadratic form with complex coefficients; a
    real zero is a common real root of its real and imaginary parts.
    """
    a, b = Polynomial.var("_a"), Polynomial.var("_b")
    M = mat_add(mat_scale(S, a), mat_scale(T, b))
    p = Polynomial.coerce(_det2(M))
    re, im = p.real_imag()
    forms = [f for f in (re, im) if not f.is_zero()]
    if not forms:
        return True
    g = forms[0]
    for f in forms[1:]:
        g = poly_gcd(g, f)
    if g.is_constant():
        return False
    # a nonconstant real binary form of degree 1 always has a real zero;
    # a quadratic one has a real zero iff its discriminant is >= 0
    if g.total_degree() == 1:
        return True
    caa = simplify(g.subs({"_a": ONE, "_b": ZERO}))
    cbb = simplify(g.subs({"_a": ZERO, "_b": ONE}))
    cab = simplify(g.subs({"_a": ONE, "_b": ONE}) - caa - cbb)
    return cab * cab - 4 * caa * cbb >= 0


def _common_isotropic(S, T) -> bool:
    """Do z^T S z and z^T T z share a nonzero complex zero (resultant test)?"""
    a0, a1, a2 = S[0][0], 2 * S[0][1], S[1][1]
    b0, b1, b2 = T[0][0], 2 * T[0][1], T[1][1]
    # resultant of a0 u^2 + a1 u v + a2 v^2 and b0 u^2 + b1 u v + b2 v^2
    res = determinant([[a0, a1, a2, 0], [0, a0, a1, a2], [b0, b1, b2, 0], [0, b0, b1, b2]])
    return is_zero(res)


def _is_normal(M) -> bool:
    Mh = mat_transpose(mat_conj(M))
    return is_zero_matrix(commutator(M, Mh))


def _simultaneously_diagonalizable(S, T) -> bool:
    """Unitary congruence to a diagonal pair: the products X conj(Y) over
    X, Y in {S, T} must form a commuting family of normal matrices."""
    prods = [mat_mul(X, mat_conj(Y)) for X in (S, T) for Y in (S, T)]
    if not all(_is_normal(P) for P in prods):
        return False
    return all(is_zero_matrix(commutator(P, Q)) for P, Q in combinations(prods, 2))


def _is_imag(v) -> bool:
    re, _ = _re_im(v)
    return is_zero(re)


def _is_real(v) -> bool:
    _, im = _re_im(v)
    return is_zero(im)


def match_normal_form(pair: ComplexSymPair):
    """(tag, parameters) when the pair literally has a displayed normal form."""
    S, T = pair.S, pair.T
    eq = lambda u, v: is_zero(simplify(_as_scalar(u) - _as_scalar(v)))
    s11, s12, s22 = _entries(S)
    t11, t12, t22 = _entries(T)
    # case 1: diag(1, x + i y) and i times it
    if eq(s11, 1) and eq(s12, 0) and all(eq(t, I * s) for t, s in zip(_entries(T), _entries(S))):
        x, y = _re_im(s22)
        return ("1.b" if is_zero(s22) else "1.a"), {"x": x, "y": y}
    # case 2.a: [[1, x + i y], [x + i y, i u]], [[0, 0], [0, 1]]
    if eq(s11, 1) and eq(t11, 0) and eq(t12, 0) and eq(t22, 1) and _is_imag(s22):
        x, y = _re_im(s12)
        return "2.a", {"u": _re_im(s22)[1], "x": x, "y": y}
    # case 2.b: [[0, 1], [1, i x]], [[0, i], [i, y - x]]
    if (eq(s11, 0) and eq(s12, 1) and eq(t11, 0) and eq(t12, I) and _is_imag(s22)
            and _is_real(t22)):
        x = _re_im(s22)[1]
        return "2.b", {"x": x, "y": simplify(t22 + x)}
    # case 2.c: diag(1, i y), diag(i, p - y)
    if (eq(s11, 1) and eq(s12, 0) and eq(t11, I) and eq(t12, 0) and _is_imag(s22)
            and _is_real(t22)):
        y = _re_im(s22)[1]
        return "2.c", {"p": simplify(t22 + y), "y": y}
    # case 2.d: [[1, u], [u, x + i y]], [[i, i u], [i u, p - y + i x]]
    if eq(s11, 1) and eq(t11, I) and _is_real(s12) and eq(t12, I * s12):
        x, y = _re_im(s22)
        tr, ti = _re_im(t22)
        if is_zero(simplify(ti - x)):
            return "2.d", {"p": simplify(tr + y), "u": s12, "x": x, "y": y}
    return None


def classify_pair(pair: ComplexSymPair) -> CaseLabel:
    """Decide the case of the real span of S and T."""
    S, T = pair.S, pair.T
    match = match_normal_form(pair)
    if not pair.is_constant:
        if match is None:
            return CaseLabel("indeterminate", None, {}, ["parametric input off the normal forms"])
        tag, params = match
        return CaseLabel(tag, pair, params, ["matches the displayed normal form"])
    if _real_span_rank(S, T) < 2:
        raise ValueError("S and T do not span a real 2-dimensional space")
    reasons = []
    if _complex_dependent(S, T):
        reasons.append("complex-linearly dependent")
        full = not is_zero(_det2(S))
        reasons.append("nonsingular" if full else "singular")
        tag = "1.a" if full else "1.b"
    elif _has_real_singular(S, T):
        reasons += ["complex-linearly independent", "real span contains a singular matrix"]
        tag = "2.a"
    elif _common_isotropic(S, T):
        reasons += ["complex-linearly independent", "common isotropic line"]
        tag = "2.b"
    elif _simultaneously_diagonalizable(S, T):
        reasons += ["complex-linearly independent", "simultaneously diagonalizable"]
        tag = "2.c"
    else:
        reasons += ["complex-linearly independent", "generic"]
        tag = "2.d"
    if match is not None and match[0] == tag:
        return CaseLabel(tag, pair, match[1], reasons)
    return CaseLabel(tag, None, {}, reasons)


def case_representative(tag: str, **values) -> ComplexSymPair:
    """The displayed normal form of a case with the given parameter values
    (names or numbers; missing parameters become symbols)."""
    v = {k: _as_scalar(values.get(k, k)) for k in ("x", "y", "u", "p")}
    x, y, u, p = v["x"], v["y"], v["u"], v["p"]
    if tag in ("1.a", "1.b"):
        if tag == "1.b":
            x = y = ZERO
        S = diag(1, x + I * y)
        return ComplexSymPair(S, mat_scale(S, I))
    if tag == "2.a":
        z = x + I * y
        return ComplexSymPair(matrix([[1, z], [z, I * u]]), matrix([[0, 0], [0, 1]]))
    if tag == "2.b":
        return ComplexSymPair(matrix([[0, 1], [1, I * x]]), matrix([[0, I], [I, y - x]]))
    if tag == "2.c":
        return ComplexSymPair(diag(1, I * y), diag(I, p - y))
    if tag == "2.d":
        return ComplexSymPair(matrix([[1, u], [u, x + I * y]]),
                              matrix([[I, I * u], [I * u, p - y + I * x]]))
    raise ValueError(f"unknown case {tag!r}")


def pair_space(pair: ComplexSymPair) -> SymSpace:
    S, T = pair.real_matrices()
    return SymSpace(4, (S, T))
