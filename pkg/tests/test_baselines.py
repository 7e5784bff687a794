import numpy as np
import pytest

from addnmf.baselines import (
    GzStepInputs,
    _gz_thetas,
    _direction,
    gz_step_scalar,
    gz_update,
    ls_update,
    solve_ls,
)
from addnmf.config import SolverConfig
from addnmf.matrix import objective
from oracles import random_instance


def test_ls_hand_example():
    w, h = ls_update(np.array([[3.0]]), np.array([[1.0]]), np.array([[1.0]]))
    assert h[0, 0] == 3.0
    assert w[0, 0] == 1.0


def test_ls_fixed_point_is_exact():
    rng = np.random.default_rng(0)
    w = rng.integers(1, 10, (6, 3)).astype(float)
    h = rng.integers(1, 10, (3, 5)).astype(float)
    w1, h1 = ls_update(w @ h, w, h)
    np.testing.assert_array_equal(w1, w)
    np.testing.assert_array_equal(h1, h)


def test_ls_near_fixed_point_with_real_factors():
    rng = np.random.default_rng(1)
    w, h = rng.uniform(0.1, 1, (6, 3)), rng.uniform(0.1, 1, (3, 5))
    w1, h1 = ls_update(w @ h, w, h)
    np.testing.assert_allclose(w1, w, rtol=1e-12)
    np.testing.assert_allclose(h1, h, rtol=1e-12)


def test_ls_matches_multiplicative_form():
    rng = np.random.default_rng(2)
    v, w, h = random_instance(rng, 6, 5, 2)
    h_ref = h * (w.T @ v) / (w.T @ w @ h)
    w_ref = w * (v @ h_ref.T) / (w @ h_ref @ h_ref.T)
    w1, h1 = ls_update(v, w, h)
    np.testing.assert_allclose(h1, h_ref, rtol=1e-12)
    np.testing.assert_allclose(w1, w_ref, rtol=1e-12)


def test_ls_decreases_objective():
    rng = np.random.default_rng(3)
    v, w, h = random_instance(rng, 6, 5, 2)
    w, h = ls_update(v, w, h)
    f1 = objective(v, w, h)
    for _ in range(99):
        w, h = ls_update(v, w, h)
        assert (w >= 0).all() and (h >= 0).all()
    assert objective(v, w, h) < f1


def test_ls_monotone_trace():
    rng = np.random.default_rng(4)
    v, w0, h0 = random_instance(rng, 12, 9, 3)
    _, trace = solve_ls(v, w0, h0, SolverConfig(algorithm="ls", max_sweeps=300, tol_delta=0))
    f = [t.objective for t in trace]
    assert all(b <= a * (1 + 1e-9) for a, b in zip(f, f[1:]))


def test_ls_zero_denominator_is_safe():
    v = np.array([[1.0, 2.0], [3.0, 4.0]])
    w = np.array([[0.0], [0.0]])
    h = np.array([[1.0, 1.0]])
    w1, h1 = ls_update(v, w, h)
    assert np.isfinite(w1).all() and np.isfinite(h1).all()


def test_gz_scalar_hand_example():
    assert gz_step_scalar(np.array([[1.0]]), np.array([2.0]), np.array([1.0])) == 1.0


def test_gz_scalar_accepts_named_inputs():
    inputs = GzStepInputs(np.array([[1.0]]), np.array([2.0]), np.array([1.0]))
    assert gz_step_scalar(*inputs) == 1.0


def test_gz_scalar_zero_gradient():
    a = np.array([[1.0, 0.0], [0.0, 2.0], [1.0, 1.0]])
    x = np.array([1.0, 2.0])
    assert gz_step_scalar(a, a @ x, x) == 0.0


@pytest.mark.parametrize("seed", range(10))
def test_gz_scalar_keeps_feasibility(seed):
    rng = np.random.default_rng(seed)
    a, b, x = rng.random((4, 3)), rng.uniform(-2, 2, 4), rng.uniform(0.1, 1, 3)
    theta = gz_step_scalar(a, b, x)
    q = a.T @ (b - a @ x)
    d = x / (a.T @ a @ x) * q
    assert theta >= 0
    assert (x + theta * d >= 0).all()
    if (d < 0).any():
        assert (x + theta * d > 0).all()


def test_gz_scalar_shape_check():
    with pytest.raises(ValueError):
        gz_step_scalar(np.ones((2, 3)), np.ones(3), np.ones(3))
    with pytest.raises(ValueError):
        gz_step_scalar(np.ones((2, 2)), np.ones(2), -np.ones(2))


def test_gz_vectorized_thetas_match_scalar():
    rng = np.random.default_rng(5)
    v, w, h = random_instance(rng, 7, 6, 3)
    g, q, p = _direction(v, w, h)
    thetas = _gz_thetas(g, q, p, h)
    for j in range(6):
        assert thetas[j] == pytest.approx(gz_step_scalar(w, v[:, j], h[:, j]), rel=1e-9)


def test_gz_with_unit_steps_is_ls():
    rng = np.random.default_rng(6)
    v, w, h = random_instance(rng, 6, 5, 2)
    wg, hg = gz_update(v, w, h, theta_hook=lambda t, which: np.ones_like(t))
    wl, hl = ls_update(v, w, h)
    assert np.array_equal(wg, wl) and np.array_equal(hg, hl)


def test_gz_hook_sees_both_halves():
    rng = np.random.default_rng(7)
    v, w, h = random_instance(rng, 6, 5, 2)
    seen = []
    gz_update(v, w, h, theta_hook=lambda t, which: seen.append((which, t.size)) or t)
    assert seen == [("h", 5), ("w", 6)]


def test_gz_fixed_point():
    rng = np.random.default_rng(8)
    w = rng.integers(1, 10, (6, 2)).astype(float)
    h = rng.integers(1, 10, (2, 5)).astype(float)
    w1, h1 = gz_update(w @ h, w, h)
    np.testing.assert_array_equal(w1, w)
    np.testing.assert_array_equal(h1, h)


def test_gz_nonnegative():
    rng = np.random.default_rng(9)
    v, w, h = random_instance(rng, 10, 8, 3)
    for _ in range(50):
        w, h = gz_update(v, w, h)
        assert (w >= 0).all() and (h >= 0).all()


def test_gz_beats_ls_in_most_trials():
    wins = 0
    for seed in range(20):
        rng = np.random.default_rng(100 + seed)
        v, w, h = random_instance(rng, 6, 5, 2)
        wins += objective(v, *gz_update(v, w, h)) <= objective(v, *ls_update(v, w, h))
    assert wins >= 10
