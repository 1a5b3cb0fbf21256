from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from austere_eds.austere import maximal_basis
from austere_eds.exterior import Coframe, StructureModel
from austere_eds.frames import FrameBundleSpec, semi_orthonormal_bundle
from austere_eds.pfaffian import (PfaffSystem, augment, cartan_characters, characteristic_variety,
                                  forced_one_forms, integral_element_space, polar_matrix, prolong,
                                  quadratic_obstructions, restrict, standard_system,
                                  system_from_json)
from austere_eds.scenarios import _k2_system, _type_b_normalized, _type_c_lambda1_one, _type_c_system


def _frobenius(extra=()):
    cf = Coframe([f"omega{i}" for i in range(1, 5)] + ["pi1", *extra])
    model = StructureModel(cf, {g: cf.zero(2) for g in cf.generators}, name="flat")
    return PfaffSystem(model, [cf.gen("pi1")], ["pi1"], [f"omega{i}" for i in range(1, 5)])


def test_frobenius_system():
    F = _frobenius()
    ie = integral_element_space(F)
    assert ie.dimension == 0 and not ie.torsion
    assert forced_one_forms(F, ie) == []


def test_frobenius_prolongs_to_frobenius():
    P = prolong(_frobenius())
    assert integral_element_space(P).dimension == 0


def test_zero_tableau_has_zero_polar_rank():
    cv = characteristic_variety(_frobenius())
    assert cv.generic_polar_rank == 0 and cv.sample_ranks == [0, 0, 0]


def test_closed_form_adds_no_obstructions():
    F = _frobenius(extra=("pi2",))
    A = augment(F, [F.coframe.gen("pi2")])
    assert quadratic_obstructions(A) == []


def test_augment_and_restrict_empty_are_identity():
    M, S = _type_c_system()
    assert augment(S, []) is S
    assert restrict(S, []) is S


def test_type_c_dimension_and_pi_rank():
    M, S = _type_c_system()
    ie = integral_element_space(S)
    assert (ie.dimension, ie.pi_rank) == (8, 17)


def test_type_c_lambda1_one_dimension():
    M, S = _type_c_lambda1_one()
    assert integral_element_space(S).dimension == 12


def test_type_b_forced_forms_nonlinear():
    M, S, psi = _type_b_normalized()
    assert len(forced_one_forms(S)) == 11
    assert not augment(S, psi).is_linear


def test_system_json_roundtrip():
    M, S = _type_c_system()
    data = {"model": M.metadata["spec"], "space": maximal_basis("C").to_json()}
    S2 = system_from_json(data)
    assert integral_element_space(S2).dimension == 8


def _shipped_linear_systems():
    yield "typeC", _type_c_system()[1]
    yield "typeC lambda1=1", _type_c_lambda1_one()[1]
    M, V = _k2_system("1.a", ("x", "y"))
    yield "case 1.a", restrict(V, ["g11 - g22", "g12"])
    M, V = _k2_system("2.b", ("x", "y"))
    yield "case 2.b", restrict(V, ["g11 - g22", "g12"])
    M = semi_orthonormal_bundle(FrameBundleSpec(n=4, r=3))
    yield "typeC constant", standard_system(M, maximal_basis("C", lambdas=(3, mpq(1, 5))))


SYSTEMS = list(_shipped_linear_systems())


@settings(max_examples=10, deadline=None)
@given(st.sampled_from(SYSTEMS), st.integers(0, 10 ** 6))
def test_cartan_bound(named, seed):
    _, S = named
    ch = cartan_characters(S, seed=seed)
    assert ch.dim_integral_elements <= ch.cartan_bound
    assert ch.involutive == (ch.dim_integral_elements == ch.cartan_bound)
    s = ch.characters
    assert all(s[k] >= s[k + 1] for k in range(len(s) - 1))


@settings(max_examples=5, deadline=None)
@given(st.sampled_from(SYSTEMS[:2] + SYSTEMS[3:]))
def test_forced_forms_do_not_change_dimension(named):
    _, S = named
    ie = integral_element_space(S)
    ff = forced_one_forms(S, ie)
    if ff:
        assert integral_element_space(augment(S, ff)).dimension == ie.dimension


@settings(max_examples=4, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_polar_rank_stable(seed):
    _, S = SYSTEMS[0]
    cv = characteristic_variety(S, seed=seed)
    assert len(cv.sample_ranks) >= 3
    assert set(cv.sample_ranks) == {cv.generic_polar_rank}


def test_polar_matrix_shape():
    _, S = SYSTEMS[0]
    M = polar_matrix(S)
    assert M.ncols == len(S.free_generators)
