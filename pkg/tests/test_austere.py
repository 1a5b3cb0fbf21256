import random

from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from austere_eds.algebra.numbers import GaussianRational
from austere_eds.algebra.scalars import is_zero
from austere_eds.austere import (J, R, ComplexSymPair, SymSpace, anticommutator, case_representative,
                                 cayley, classify_pair, full_symmetric_space, is_austere,
                                 is_zero_matrix, k_map_nullspace, kahler_exception_space,
                                 mat_add, mat_mul, mat_scale, mat_transpose, maximal_basis,
                                 prolongation, rho, rho_bar, rho_inverse, type_a_basis)

I = GaussianRational(0, 1)


def test_type_a_anticommutes_with_j():
    A = maximal_basis("A")
    assert A.dim == 6
    assert all(is_zero_matrix(anticommutator(S, J)) for S in A.basis)


def test_type_b_block_part_anticommutes_with_r():
    B = maximal_basis("B")
    assert B.dim == 5
    blocks = [S for S in B.basis if is_zero(S[0][0])]
    assert len(blocks) == 4 and all(is_zero_matrix(anticommutator(S, R)) for S in blocks)


def test_austere_examples():
    assert is_austere(maximal_basis("A"))
    assert is_austere(maximal_basis("B"))
    assert is_austere(maximal_basis("C"))
    ident = SymSpace(4, ([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],))
    res = is_austere(ident)
    assert not res and res.certificate["name"] == "trace"


def test_prolongation_examples():
    assert prolongation(maximal_basis("B")).dimension == 0
    assert prolongation(maximal_basis("C")).dimension == 0
    assert prolongation(maximal_basis("A")).dimension == 8
    assert prolongation(full_symmetric_space(4)).dimension == 20


def test_k_map_examples():
    assert k_map_nullspace(SymSpace(4, ())).dimension == 8
    assert k_map_nullspace(kahler_exception_space()).dimension > 0
    assert k_map_nullspace(maximal_basis("A")).dimension == 0


def test_rho_bar_examples():
    assert rho_bar(type_a_basis()[0]) == ((1, 0), (0, 0))
    zero = tuple(tuple(mpq(0) for _ in range(4)) for _ in range(4))
    assert all(is_zero(v) for r in rho_bar(zero) for v in r)


def test_classify_examples():
    assert classify_pair(case_representative("1.a", x=2, y=-1)).tag == "1.a"
    assert classify_pair(case_representative("1.b")).tag == "1.b"
    assert classify_pair(case_representative("2.a", u=0, x=0, y=0)).tag == "2.a"
    assert classify_pair(case_representative("2.b", x=1, y=1)).tag == "2.b"


# -- properties -----------------------------------------------------------------------

def _random_skew(rng, n=4):
    K = [[mpq(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = mpq(rng.randint(-5, 5), rng.randint(1, 4))
            K[i][j], K[j][i] = v, -v
    return K


def _random_orthogonal(rng):
    return cayley(_random_skew(rng))


def _random_unitary(rng):
    """Cayley transform of a random skew-hermitian 2x2 matrix, via its real form."""
    a, d = (mpq(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(2))
    b = GaussianRational(rng.randint(-4, 4), rng.randint(1, 4))
    skh = [[a * I, b], [-GaussianRational(b.re, -b.im), d * I]]
    return rho(cayley(rho_inverse(skh)))


@settings(max_examples=15, deadline=None)
@given(st.sampled_from("ABC"), st.integers(0, 10 ** 6))
def test_austere_invariant_under_orthogonal_conjugation(kind, seed):
    space = maximal_basis(kind)
    Q = _random_orthogonal(random.Random(seed))
    assert is_austere(space.conjugate_by(Q)).austere == is_austere(space).austere


@settings(max_examples=10, deadline=None)
@given(st.sampled_from("AB"), st.integers(0, 10 ** 6))
def test_prolongation_invariant(kind, seed):
    rng = random.Random(seed)
    space = maximal_basis(kind)
    dim = prolongation(space).dimension
    assert prolongation(space.conjugate_by(_random_orthogonal(rng))).dimension == dim
    b = list(space.basis)
    c = mpq(rng.randint(1, 5), rng.randint(1, 5))
    b[0] = mat_add(b[0], mat_scale(b[1], c))
    b[1] = mat_scale(b[1], rng.randint(1, 4))
    assert prolongation(SymSpace(4, tuple(b))).dimension == dim


REPS = [("1.a", dict(x=1, y=2)), ("1.b", {}), ("2.a", dict(u=1, x=2, y=3)),
        ("2.b", dict(x=1, y=1)), ("2.c", dict(y=1, p=2)), ("2.d", dict(u=1, x=1, y=2, p=3))]


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(REPS), st.integers(0, 10 ** 6))
def test_classify_invariant_under_unitary_action(rep, seed):
    tag, values = rep
    pair = case_representative(tag, **values)
    U = _random_unitary(random.Random(seed))
    Ut = mat_transpose(U)
    moved = ComplexSymPair(mat_mul(mat_mul(U, pair.S), Ut), mat_mul(mat_mul(U, pair.T), Ut))
    assert classify_pair(moved).tag == tag


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(REPS), st.integers(0, 10 ** 6))
def test_classify_invariant_under_real_basis_change(rep, seed):
    tag, values = rep
    pair = case_representative(tag, **values)
    rng = random.Random(seed)
    while True:
        a, b, c, d = (rng.randint(-4, 4) for _ in range(4))
        if a * d - b * c:
            break
    S2 = mat_add(mat_scale(pair.S, a), mat_scale(pair.T, b))
    T2 = mat_add(mat_scale(pair.S, c), mat_scale(pair.T, d))
    assert classify_pair(ComplexSymPair(S2, T2)).tag == tag

