"""Proximal map vs grid search, subdifferential distance, surrogate laws."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from proxsgd.regularizers import L1Regularizer, TrivialSurrogate, soft_threshold

from oracles import grid_prox_1d, soft_scalar

finite_vec = st.lists(st.floats(-50, 50, allow_nan=False), min_size=1, max_size=8).map(np.array)


def test_value_is_weighted_l1():
    reg = L1Regularizer(0.5)
    assert reg.value(np.array([1.0, -2.0, 0.0])) == pytest.approx(1.5)
    assert L1Regularizer(0.0).value(np.array([3.0])) == 0.0


def test_negative_lam_rejected():
    with pytest.raises(ValueError):
        L1Regularizer(-1e-9)


def test_prox_matches_grid_oracle():
    reg = L1Regularizer(0.3)
    rng = np.random.default_rng(17)
    for _ in range(25):
        v = float(rng.normal() * 2)
        t = float(rng.uniform(0.05, 3.0))
        want = grid_prox_1d(v, t, reg.lam)
        got = float(reg.prox(np.array([v]), t)[0])
        assert abs(got - want) < 1e-4


def test_prox_closed_form_identities():
    reg = L1Regularizer(0.25)
    v = np.array([3.0, -0.5, 0.0, 0.4])
    assert np.array_equal(reg.prox(v, 2.0), np.array([2.5, 0.0, 0.0, 0.0]))
    # lam = 0 or t = 0 is the identity
    assert np.array_equal(L1Regularizer(0.0).prox(v, 5.0), v)
    assert np.array_equal(reg.prox(v, 0.0), v)
    with pytest.raises(ValueError):
        reg.prox(v, -1.0)


@given(finite_vec, st.floats(0, 10, allow_nan=False), st.floats(0, 2, allow_nan=False))
@settings(max_examples=80, deadline=None)
def test_prox_equals_residual_of_clip(v, t, lam):
    # independent closed form: prox(v) = v - clip(v, -t*lam, t*lam)
    reg = L1Regularizer(lam)
    want = v - np.clip(v, -t * lam, t * lam)
    assert np.allclose(reg.prox(v, t), want, atol=0, rtol=0)


@given(finite_vec, st.data())
@settings(max_examples=60, deadline=None)
def test_prox_is_nonexpansive(u, data):
    w = np.array(data.draw(st.lists(st.floats(-50, 50, allow_nan=False),
                                    min_size=len(u), max_size=len(u))))
    reg = L1Regularizer(0.7)
    t = data.draw(st.floats(0.01, 5.0))
    lhs = np.linalg.norm(reg.prox(u, t) - reg.prox(w, t))
    assert lhs <= np.linalg.norm(u - w) + 1e-12


def test_soft_threshold_matches_scalar_oracle():
    rng = np.random.default_rng(3)
    for _ in range(50):
        v = float(rng.normal() * 4)
        th = float(rng.uniform(0, 3))
        assert soft_threshold(np.array([v]), th)[0] == soft_scalar(v, th)


# ---------------------------------------------------------------------------
# subdifferential distance

def test_subdiff_dist_inside_interval_is_zero():
    reg = L1Regularizer(0.5)
    assert reg.subdiff_dist(np.array([0.3]), np.array([0.0])) == 0.0
    assert reg.subdiff_dist(np.array([-0.5]), np.array([0.0])) == 0.0


def test_subdiff_dist_outside_interval():
    reg = L1Regularizer(0.5)
    assert reg.subdiff_dist(np.array([0.8]), np.array([0.0])) == pytest.approx(0.3)
    assert reg.subdiff_dist(np.array([-1.2]), np.array([0.0])) == pytest.approx(0.7)


def test_subdiff_dist_at_nonzero_point():
    reg = L1Regularizer(0.5)
    assert reg.subdiff_dist(np.array([0.3]), np.array([2.0])) == pytest.approx(0.8)
    assert reg.subdiff_dist(np.array([0.3]), np.array([-2.0])) == pytest.approx(0.2)


def test_subdiff_dist_vector_combines_in_l2():
    reg = L1Regularizer(0.5)
    g = np.array([0.8, 0.3, 0.3])
    x = np.array([0.0, 2.0, 0.0])
    assert reg.subdiff_dist(g, x) == pytest.approx(np.hypot(0.3, 0.8))


def test_subdiff_dist_zero_exactly_at_prox_optimum():
    # minimizer of 0.5||x-c||^2 + lam||x||_1 is soft_threshold(c, lam);
    # there the composite subdifferential must contain zero exactly
    reg = L1Regularizer(0.6)
    c = np.array([2.0, 0.3, -1.4, -0.2])
    x_star = soft_threshold(c, reg.lam)
    grad = x_star - c
    assert reg.subdiff_dist(grad, x_star) <= 1e-15


def test_subdiff_dist_shape_mismatch():
    with pytest.raises(ValueError):
        L1Regularizer(0.1).subdiff_dist(np.zeros(3), np.zeros(2))


# ---------------------------------------------------------------------------
# surrogate laws

@given(finite_vec, st.data())
@settings(max_examples=40, deadline=None)
def test_trivial_surrogate_laws(x, data):
    anchor = np.array(data.draw(st.lists(st.floats(-50, 50, allow_nan=False),
                                         min_size=len(x), max_size=len(x))))
    base = L1Regularizer(0.4)
    sur = TrivialSurrogate(base)
    # touches the base at the anchor and upper-bounds it everywhere
    assert sur.value(anchor, anchor) == base.value(anchor)
    assert sur.value(x, anchor) >= base.value(x) - 1e-15
    v = np.array(data.draw(st.lists(st.floats(-50, 50, allow_nan=False),
                                    min_size=len(x), max_size=len(x))))
    t = data.draw(st.floats(0.0, 3.0))
    assert np.array_equal(sur.prox(v, t, anchor), base.prox(v, t))
