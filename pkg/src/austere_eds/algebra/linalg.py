"""Exact sparse linear algebra over the fraction field of the parameters.

Matrices are stored as lists of sparse rows (dicts column -> Scalar).  The
elimination clears denominators row by row, pivots on constant entries
whenever possible (Markowitz cost as a tie-breaker), and falls back to
fraction-free row combinations ``p*row_k - a*row_r`` for polynomial pivots,
removing row content as it goes.  No generic rank is ever guessed from a
specialization unless the specialization already reaches full rank, which
is a certificate.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from math import comb, lcm

from gmpy2 import mpq

from .numbers import MPQ, GaussianRational, gauss, is_number, to_number
from .poly import Polynomial
from .ratfunc import RationalFunction, poly_cofactors, poly_gcd
from .scalars import divide, is_zero, numerator_denominator, scalar_vars, simplify
from .groebner import BudgetExceeded

CONST = (MPQ, GaussianRational)


def _inv(c):
    return 1 / c if isinstance(c, MPQ) else c.inverse()


class ExactMatrix:
    """Immutable matrix of Scalars held as sparse rows."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, rows, ncols: int | None = None):
        sparse = []
        for r in rows:
            if isinstance(r, dict):
                d = {}
                for c, v in r.items():
                    v = simplify(v)
                    if not is_zero(v):
                        d[c] = v
                sparse.append(d)
            else:
                r = list(r)
                if ncols is None:
                    ncols = len(r)
                elif len(r) != ncols:
                    raise ValueError("ragged matrix rows")
                sparse.append({c: simplify(v) for c, v in enumerate(r) if not is_zero(v)})
        if ncols is None:
            ncols = 0
        for d in sparse:
            if d and max(d) >= ncols:
                raise ValueError("column index out of range")
        self.nrows = len(sparse)
        self.ncols = ncols
        self.rows = tuple(sparse)

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls([{i: mpq(1)} for i in range(n)], n)

    @classmethod
    def zeros(cls, m: int, n: int) -> "ExactMatrix":
        return cls([{} for _ in range(m)], n)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i].get(j, mpq(0))

    def to_lists(self):
        return [[r.get(j, mpq(0)) for j in range(self.ncols)] for r in self.rows]

    def transpose(self) -> "ExactMatrix":
        cols = [{} for _ in range(self.ncols)]
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                cols[j][i] = v
        return ExactMatrix(cols, self.nrows)

    def variables(self) -> tuple:
        names = set()
        for r in self.rows:
            for v in r.values():
                names.update(scalar_vars(v))
        from .poly import sort_vars
        return sort_vars(names)

    def is_constant(self) -> bool:
        return all(isinstance(v, CONST) for r in self.rows for v in r.values())

    def subs(self, mapping: dict) -> "ExactMatrix":
        from .scalars import subs
        return ExactMatrix([{j: subs(v, mapping) for j, v in r.items()} for r in self.rows],
                           self.ncols)

    def __mul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        out = []
        for r in self.rows:
            acc = {}
            for k, a in r.items():
                for j, b in other.rows[k].items():
                    acc[j] = acc.get(j, 0) + a * b
            out.append(acc)
        return ExactMatrix(out, other.ncols)

    def apply(self, vec) -> list:
        return [simplify(sum((v * vec[j] for j, v in r.items()), mpq(0))) for r in self.rows]

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and all(
            is_zero(simplify(a.get(j, 0)) - simplify(b.get(j, 0)))
            for a, b in zip(self.rows, other.rows) for j in set(a) | set(b))

    def __repr__(self):
        return f"ExactMatrix({self.nrows}x{self.ncols})"


# -- row utilities --------------------------------------------------------

def clear_row_denominators(row: dict) -> dict:
    """Scale a row by a common denominator so every entry is a Polynomial
    or number, then make it primitive when all entries are rational."""
    dens = []
    for v in row.values():
        if isinstance(v, RationalFunction):
            dens.append(v.den)
    if dens:
        common = dens[0]
        for d in dens[1:]:
            g, a, _ = poly_cofactors(common, d)
            common = a * d
        row = {j: simplify(v * common) for j, v in row.items()}
    if row and all(isinstance(v, MPQ) for v in row.values()):
        den = 1
        for v in row.values():
            den = lcm(den, int(v.denominator))
        if den != 1:
            row = {j: v * den for j, v in row.items()}
    return row


def _size(v) -> int:
    if isinstance(v, CONST):
        return 0
    if isinstance(v, Polynomial):
        return len(v.terms) * (1 + v.total_degree())
    return 10 ** 6


def _row_content(row: dict):
    """gcd of the polynomial entries of a row (None when trivially 1)."""
    g = None
    for v in row.values():
        if isinstance(v, CONST):
            return None
        g = v if g is None else poly_gcd(g, v)
        if not g.vars:
            return None
    return g


def _divide_row(row: dict, g: Polynomial) -> dict:
    from .ratfunc import poly_exquo
    return {j: simplify(poly_exquo(v, g)) for j, v in row.items()}


@dataclass
class Echelon:
    """Result of an elimination.

    ``pivots`` lists (column, row) pairs in elimination order; every row is
    zero in the pivot columns of earlier pivots.  ``residual`` holds the rows
    that became zero outside the protected columns (for inhomogeneous solves
    these carry the consistency conditions).
    """

    ncols: int
    pivots: list
    residual: list

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def pivot_columns(self) -> list:
        return [c for c, _ in self.pivots]


def echelon(rows, ncols: int, protected=frozenset(), budget: int | None = None,
            reduce_back: bool = False) -> Echelon:
    """Eliminate over the fraction field, never pivoting in ``protected``."""
    work = [clear_row_denominators({j: simplify(v) for j, v in r.items() if not is_zero(v)})
            for r in rows]
    work = [r for r in work if r]
    protected = frozenset(protected)
    pivots = []
    residual = []
    steps = 0
    # column occupancy for Markowitz costs
    while work:
        active = []
        for r in work:
            if any(j not in protected for j in r):
                active.append(r)
            else:
                residual.append(r)
        work = active
        if not work:
            break
        colcount: dict = {}
        for r in work:
            for j in r:
                if j not in protected:
                    colcount[j] = colcount.get(j, 0) + 1
        best = None
        best_cost = None
        for idx, r in enumerate(work):
            rl = len(r)
            for j, v in r.items():
                if j in protected:
                    continue
                cost = (_size(v), (rl - 1) * (colcount[j] - 1), j)
                if best_cost is None or cost < best_cost:
                    best_cost = cost
                    best = (idx, j)
            if best_cost is not None and best_cost[0] == 0 and best_cost[1] == 0:
                break
        idx, col = best
        prow = work.pop(idx)
        p = prow[col]
        const_pivot = isinstance(p, CONST)
        if const_pivot and p != 1:
            inv = _inv(p)
            prow = {j: simplify(v * inv) for j, v in prow.items()}
            p = mpq(1)
        pivots.append((col, prow))
        new_work = []
        for r in work:
            a = r.get(col)
            if a is None:
                new_work.append(r)
                continue
            steps += 1
            if budget is not None and steps > budget:
                raise BudgetExceeded("elimination", budget)
            if const_pivot:
                out = dict(r)
                for j, v in prow.items():
                    w = out.get(j)
                    t = a * v
                    nv = simplify(-t if w is None else w - t)
                    if is_zero(nv):
                        out.pop(j, None)
                    else:
                        out[j] = nv
            else:
                out = {}
                for j in set(r) | set(prow):
                    nv = simplify(p * r.get(j, 0) - a * prow.get(j, 0))
                    if not is_zero(nv):
                        out[j] = nv
                g = _row_content(out)
                if g is not None:
                    out = _divide_row(out, g)
            out.pop(col, None)
            if out:
                new_work.append(out)
        work = new_work
    if reduce_back:
        pivots = _back_reduce(pivots)
    return Echelon(ncols, pivots, residual)


def _back_reduce(pivots):
    """Make each pivot column zero in every other pivot row (over the fraction field)."""
    rows = [(c, {j: v for j, v in r.items()}) for c, r in pivots]
    for k in range(len(rows) - 1, -1, -1):
        col, r = rows[k]
        p = r[col]
        r = {j: divide(v, p) for j, v in r.items()}
        rows[k] = (col, r)
        for t in range(k):
            c2, r2 = rows[t]
            a = r2.get(col)
            if a is None:
                continue
            out = dict(r2)
            for j, v in r.items():
                nv = simplify(out.get(j, 0) - a * v)
                if is_zero(nv):
                    out.pop(j, None)
                else:
                    out[j] = nv
            rows[t] = (c2, out)
    return rows


# -- random specialization -------------------------------------------------

def random_point(variables, rng: random.Random, bound: int = 97) -> dict:
    return {v: mpq(rng.randint(-bound, bound), rng.randint(1, bound)) for v in variables}


def _eval(v, point):
    if isinstance(v, CONST):
        return v
    return v.evaluate(point)


def specialize_rows(rows, point: dict):
    return [{j: _eval(v, point) for j, v in r.items()} for r in rows]


def numeric_rank(rows, ncols: int) -> int:
    return echelon(rows, ncols).rank


# -- public operations -----------------------------------------------------

def rank_generic(M: ExactMatrix, seed: int = 0, budget: int | None = None) -> int:
    """Rank over the fraction field of the entry parameters."""
    if M.is_constant():
        return echelon(M.rows, M.ncols).rank
    full = min(M.nrows, M.ncols)
    variables = M.variables()
    rng = random.Random(seed)
    for _ in range(3):
        point = random_point(variables, rng)
        try:
            r = numeric_rank(specialize_rows(M.rows, point), M.ncols)
        except ZeroDivisionError:
            continue
        if r == full:
            return r  # a specialization can only lower the rank
        break
    return echelon(M.rows, M.ncols, budget=budget).rank


def rank_at(M: ExactMatrix, point: dict) -> int:
    """Rank after substituting exact values for every parameter."""
    return numeric_rank(specialize_rows(M.rows, point), M.ncols)


def nullspace_from_echelon(E: Echelon) -> list:
    pivot_cols = set(E.pivot_columns)
    free = [j for j in range(E.ncols) if j not in pivot_cols]
    basis = []
    for f in free:
        x = {f: mpq(1)}
        for col, row in reversed(E.pivots):
            s = mpq(0)
            for j, v in row.items():
                if j != col and j in x:
                    s = s + v * x[j]
            s = simplify(s)
            if not is_zero(s):
                x[col] = simplify(divide(-s, row[col]))
        basis.append([x.get(j, mpq(0)) for j in range(E.ncols)])
    return basis


def nullspace(M: ExactMatrix, budget: int | None = None) -> list:
    """Basis of the right kernel over the fraction field."""
    return nullspace_from_echelon(echelon(M.rows, M.ncols, budget=budget))


def determinant(rows: list) -> object:
    """Bareiss fraction-free determinant of a square list-of-lists."""
    n = len(rows)
    if n == 0:
        return mpq(1)
    a = [[simplify(v) for v in r] for r in rows]
    sign = 1
    prev = mpq(1)
    for k in range(n - 1):
        if is_zero(a[k][k]):
            swap = next((i for i in range(k + 1, n) if not is_zero(a[i][k])), None)
            if swap is None:
                return mpq(0)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = simplify(a[i][j] * a[k][k] - a[i][k] * a[k][j])
                a[i][j] = _exact_div(num, prev)
        prev = a[k][k]
    det = a[n - 1][n - 1]
    return simplify(det if sign == 1 else -det)


def _exact_div(num, den):
    if isinstance(den, CONST):
        return simplify(num * _inv(den)) if den != 1 else num
    if isinstance(num, CONST):
        if num == 0:
            return num
    from .ratfunc import poly_exquo
    if isinstance(num, Polynomial) and isinstance(den, Polynomial):
        return simplify(poly_exquo(num, den))
    return divide(num, den)


def minors_ideal(M: ExactMatrix, k: int, budget: int | None = 20_000) -> list:
    """All nonzero k-by-k minors (entries must be polynomial)."""
    if k > min(M.nrows, M.ncols) or k < 1:
        raise ValueError("minor size out of range")
    for r in M.rows:
        for v in r.values():
            if isinstance(v, RationalFunction):
                raise ValueError("clear denominators before taking minors")
    count = comb(M.nrows, k) * comb(M.ncols, k)
    if budget is not None and count > budget:
        raise BudgetExceeded(f"minors_ideal ({count} minors)", budget)
    dense = M.to_lists()
    seen = set()
    out = []
    for rs in combinations(range(M.nrows), k):
        sub_rows = [dense[i] for i in rs]
        if any(all(is_zero(sub_rows[t][j]) for j in range(M.ncols)) for t in range(k)):
            continue
        for cs in combinations(range(M.ncols), k):
            d = determinant([[row[j] for j in cs] for row in sub_rows])
            if is_zero(d):
                continue
            p = Polynomial.coerce(d).primitive()
            if p not in seen:
                seen.add(p)
                out.append(p)
    return out
