import numpy as np
from hypothesis import given, settings, strategies as st

from austere_eds import geometry as geo


def _graph_x1_squared():
    def value(x):
        return np.concatenate([x, [x[0] ** 2]])

    def jacobian(x):
        J = np.vstack([np.eye(4), np.zeros((1, 4))])
        J[4, 0] = 2 * x[0]
        return J

    def hessian(x):
        H = np.zeros((5, 4, 4))
        H[4, 0, 0] = 2.0
        return H

    return geo.Immersion(4, 5, value, jacobian, hessian, "graph of x1^2")


def test_helicoid_without_rotation_is_flat():
    d = geo.second_fundamental_form(geo.helicoid([]), np.array([0.3, -1.0, 2.0, 0.5]))
    assert d.S.size == 0 or np.abs(d.S).max() == 0


def test_flat_has_zero_second_fundamental_form():
    d = geo.second_fundamental_form(geo.flat(), np.array([1.0, 2.0, 3.0, 4.0]))
    assert np.abs(d.S).max() == 0
    res = geo.austere_check(d)
    assert res.passed and res.residual == 0


def test_graph_of_x1_squared_not_traceless():
    d = geo.second_fundamental_form(_graph_x1_squared(), np.array([0.5, 0.0, 0.0, 0.0]))
    assert max(abs(np.trace(S)) for S in d.S) > 1e-3


def test_helicoid_traceless_and_austere():
    rep = geo.check_surface(geo.helicoid([1, 2, 3]), points=10, tol=1e-9, seed=0)
    assert rep.passed and rep.residual < 1e-9
    for d in geo.sample_fundamental_forms(geo.helicoid([1, 2, 3]), 10, 0):
        assert max(abs(np.trace(S)) for S in d.S) < 1e-9


def test_quadric_graph_not_austere():
    rep = geo.check_surface(geo.quadric_graph(), points=3, tol=1e-9, seed=0)
    assert not rep.passed and rep.residual > 1e-3


def test_segre_examples():
    assert geo.segre_type_a_check(1, points=10, seed=0).passed
    assert geo.segre_type_a_check(points=5, seed=0, immersion=geo.complex_plane()).passed
    assert not geo.segre_type_a_check(points=5, seed=0, immersion=geo.antiholomorphic_graph()).passed


lambdas = st.lists(st.floats(0.2, 4.0), min_size=1, max_size=3)


@settings(max_examples=15, deadline=None)
@given(lambdas, st.integers(0, 10 ** 6))
def test_rotation_invariance(lam, seed):
    Q, _ = np.linalg.qr(np.random.default_rng(seed).normal(size=(4 + len(lam),) * 2))
    imm = geo.helicoid(lam)
    a = geo.check_surface(imm, 3, 1e-9, seed)
    b = geo.check_surface(imm.rotated(Q), 3, 1e-9, seed)
    assert a.passed == b.passed


@settings(max_examples=15, deadline=None)
@given(lambdas, st.integers(0, 10 ** 6))
def test_normal_rank_constant(lam, seed):
    ranks = {d.normal_rank for d in geo.sample_fundamental_forms(geo.helicoid(lam), 5, seed)}
    assert len(ranks) == 1


@settings(max_examples=15, deadline=None)
@given(st.floats(0.2, 4.0), st.integers(1, 3), st.integers(0, 10 ** 6))
def test_equal_speeds_share_linear_factor(l, s, seed):
    for d in geo.sample_fundamental_forms(geo.helicoid([l] * s), 3, seed):
        assert geo.common_linear_factor(d)[0]
