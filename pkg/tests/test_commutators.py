import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from specbounds.commutators import (check_T1, chord_slope_residual, commutator_bundle,
                                    quadratic_identity_parts, quadratic_identity_residual,
                                    quadratic_identity_scale, t1_parts, trk_residual,
                                    trk_residuals, trk_scale)
from specbounds.errors import HypothesisViolation
from specbounds.functions import FunctionSpec, make_family
from specbounds.models import MatrixModel, discretize_dirichlet, random_model

SWAP = np.array([[0.0, 1.0], [1.0, 0.0]])


def test_two_by_two_commutators():
    m = MatrixModel(H=np.diag([0.0, 1.0]), G=SWAP)
    b = commutator_bundle(m)
    assert np.array_equal(b.first, [[0.0, -1.0], [1.0, 0.0]])
    assert np.array_equal(b.second, [[2.0, 0.0], [0.0, -2.0]])
    assert trk_residual(m, 0) == 0.0
    assert trk_residual(m, 1) == 0.0


def test_commuting_pair_is_trivial():
    m = MatrixModel(H=np.diag([1.0, 2.0, 3.0]), G=np.diag([4.0, -1.0, 2.0]))
    b = commutator_bundle(m)
    assert not b.first.any() and not b.second.any()
    assert np.all(trk_residuals(m) == 0.0)
    assert quadratic_identity_residual(m, [0, 2], 1.5) == 0.0
    f = make_family("exp", t=1.0)
    lhs, rhs = t1_parts(m, [1], f)
    assert lhs == 0.0 and rhs == 0.0


def test_first_commutator_is_antisymmetric(rng):
    b = commutator_bundle(random_model(12, rng))
    assert np.array_equal(b.first, -b.first.T)
    assert np.allclose(b.second, b.second.T, atol=1e-12 * np.max(np.abs(b.second)))


def test_trk_on_order_50(rng):
    m = random_model(50, rng)
    assert np.max(np.abs(trk_residuals(m))) <= 1e-9 * trk_scale(m)


def test_eigenbasis_matrix_elements(rng):
    m = random_model(20, rng)
    assert commutator_bundle(m).eigenbasis_identity_error(m.decomposition.eigenvectors) <= 1e-12


def test_quadratic_identity_full_index_set(rng):
    m = random_model(15, rng)
    lhs, rhs = quadratic_identity_parts(m, range(15), 0.7)
    assert rhs == 0.0
    assert abs(lhs) <= 1e-10 * quadratic_identity_scale(m, 0.7)


def test_quadratic_identity_order_30(rng):
    m = random_model(30, rng)
    assert abs(quadratic_identity_residual(m, range(5), 0.0)) <= 1e-8 * quadratic_identity_scale(m, 0.0)


def test_quadratic_t1_is_equality(rng):
    m = random_model(25, rng)
    f = make_family("quad", a=-0.3, b=0.2, c=1.0)
    rep = check_T1(m, [0, 3, 7], f)
    assert abs(rep.slack) <= 1e-8 * rep.tolerance / 1e-9


def test_t1_exp_order_20(rng):
    m = random_model(20, rng)
    assert check_T1(m, range(4), make_family("exp", t=1.0)).passed


def test_t1_rejects_convex_derivative(rng):
    m = random_model(6, rng)
    cube = FunctionSpec(lambda x: x**3, lambda x: 3 * x**2, lambda x: 6 * x, lambda x: 6 + 0 * x)
    with pytest.raises(HypothesisViolation, match="H3"):
        check_T1(m, [0], cube)


def test_chord_slope_examples():
    negsq = make_family("quad", a=-1.0, b=0.0, c=0.0)
    assert chord_slope_residual(negsq, 0.0, 1.0) == pytest.approx(0.0, abs=1e-15)
    e = make_family("exp", t=1.0)
    expected = (math.exp(-1) - 1) + 0.5 * (1 + math.exp(-1))
    assert chord_slope_residual(e, 0.0, 1.0) == pytest.approx(expected, rel=1e-14)
    assert expected == pytest.approx(0.0518, abs=1e-4)
    cube = FunctionSpec(lambda x: x**3, lambda x: 3 * x**2, check=False)
    assert chord_slope_residual(cube, -1.0, 1.0) == pytest.approx(-2.0)
    with pytest.raises(ValueError):
        chord_slope_residual(e, 1.0, 1.0)


@given(st.floats(min_value=-5, max_value=5), st.floats(min_value=-5, max_value=5),
       st.floats(min_value=0.1, max_value=2.0))
def test_chord_slope_nonnegative_for_concave_derivative(x, y, t):
    if abs(x - y) < 1e-3:
        return
    f = make_family("exp", t=t)
    lo, hi = min(x, y), max(x, y)
    scale = math.exp(-t * lo) * (1 + t)
    assert chord_slope_residual(f, lo, hi) >= -1e-10 * scale


@given(st.integers(min_value=2, max_value=25), st.integers(min_value=0, max_value=2**31))
def test_trk_property(order, seed):
    m = random_model(order, np.random.default_rng(seed))
    assert np.max(np.abs(trk_residuals(m))) <= 1e-9 * trk_scale(m)


def test_fd_model_trk():
    m = discretize_dirichlet(40)
    assert np.max(np.abs(trk_residuals(m))) <= 1e-9 * trk_scale(m)
