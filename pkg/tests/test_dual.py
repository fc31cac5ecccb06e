"""Dual algebra: G/F assembly, factorization, recovery, value, gradient."""

import numpy as np
import pytest

from dvs.dual import (
    MU_MIN,
    dual_gradient,
    dual_value,
    f_vector,
    factorize_g,
    g_matrix,
    in_dual_cone,
    recover_y,
    total_complementary,
)
from dvs.lift import encode_y, lift
from dvs.model import BinaryQP, DiscreteQP, DualPoint, binary_objective
from dvs.solver import initial_point

# Reference dual solution for the second shipped instance (rounded to two
# decimals in the source material, like the problem data itself).
EX2_TAU = np.array([-19.99, -20.12, -18.13, -18.37, -14.32,
                    -17.13, -18.46, -19.73, -17.65, -16.55])
EX2_MU = np.array([9.51, 0.97, 21.93, 53.36, 74.34,
                   9.95, 0.21, 20.53, 51.01, 71.35,
                   8.68, 0.77, 19.68, 48.03, 66.94,
                   8.30, 1.77, 21.91, 52.13, 72.27,
                   6.40, 1.54, 17.39, 41.19, 57.04,
                   7.57, 1.98, 21.10, 49.77, 68.90,
                   9.15, 0.16, 18.79, 46.72, 65.34,
                   9.82, 0.09, 19.90, 49.63, 69.45,
                   8.76, 0.13, 17.92, 44.60, 62.39,
                   6.26, 4.03, 24.60, 55.48, 76.04])


def one_block_qp(B, h):
    K = len(h)
    return BinaryQP(K=K, B=np.asarray(B, float), h=np.asarray(h, float),
                    D=np.zeros((0, K)), b=np.zeros(0),
                    H=np.ones((1, K)), blocks=((0, K),),
                    U_flat=np.arange(K, dtype=float))


def test_g_matrix_form(example1):
    q = lift(example1)
    mu = np.arange(1.0, 16.0)
    G = g_matrix(q, mu)
    expected = q.B.copy()
    expected[np.diag_indices_from(expected)] += 2.0 * mu
    assert np.array_equal(G, expected)


def test_f_vector_form(example1):
    q = lift(example1)
    rng = np.random.default_rng(0)
    d = DualPoint(sigma=rng.random(4), tau=rng.random(5), mu=rng.random(15))
    F = f_vector(q, d)
    expected = q.h - q.D.T @ d.sigma - q.H.T @ d.tau + d.mu
    assert np.allclose(F, expected, atol=1e-12)


def test_factorize_positive_definite_route():
    q = one_block_qp(np.diag([1.0, 4.0]), np.zeros(2))
    fact = factorize_g(q, np.array([1.0, 1.0]))
    assert fact.positive_definite
    assert 0.0 < fact.min_eig <= 3.0  # true smallest eigenvalue is 3
    rhs = np.array([6.0, 12.0])
    assert np.allclose(fact.apply_pinv(rhs), [2.0, 2.0])


def test_factorize_indefinite_route():
    q = one_block_qp(np.diag([-5.0, 4.0]), np.zeros(2))
    fact = factorize_g(q, np.array([1.0, 1.0]))
    assert not fact.positive_definite
    assert fact.min_eig == pytest.approx(-3.0)


def test_recover_y_consistent_singular_system():
    # G = diag(1, 0) is singular; F = (1, 0) lies in its range.
    q = one_block_qp(np.diag([1.0, 0.0]), np.zeros(2))
    fact = factorize_g(q, np.zeros(2))
    y, residual = recover_y(fact, np.array([1.0, 0.0]))
    assert np.allclose(y, [1.0, 0.0])
    assert residual <= 1e-14


def test_recover_y_flags_out_of_range_component():
    q = one_block_qp(np.diag([1.0, 0.0]), np.zeros(2))
    fact = factorize_g(q, np.zeros(2))
    y, residual = recover_y(fact, np.array([1.0, 1.0]))
    assert np.allclose(y, [1.0, 0.0])
    assert residual == pytest.approx(1.0 / np.sqrt(2.0))


def test_dual_value_at_reference_point(example2):
    q = lift(example2)
    d = DualPoint(sigma=np.zeros(5), tau=EX2_TAU, mu=EX2_MU)
    assert in_dual_cone(q, d)
    assert dual_value(q, d) == pytest.approx(45.54, abs=0.5)
    # the reference primal value at x = ones, for comparison
    y = encode_y(example2, np.ones(10))
    assert binary_objective(q, y) == pytest.approx(45.535, abs=1e-9)


def test_stationary_point_value_identity(example2):
    # Xi(y, d) minimized over y at y = G^+F, where it equals P_dual(d).
    q = lift(example2)
    d = DualPoint(sigma=np.zeros(5), tau=EX2_TAU, mu=EX2_MU)
    fact = factorize_g(q, d.mu)
    y, _ = recover_y(fact, f_vector(q, d))
    assert total_complementary(q, y, d) == pytest.approx(
        dual_value(q, d), abs=1e-9)
    rng = np.random.default_rng(1)
    for _ in range(10):
        z = y + 0.1 * rng.standard_normal(q.K)
        assert total_complementary(q, z, d) >= total_complementary(q, y, d)


def test_dual_gradient_matches_finite_differences(example1):
    q = lift(example1)
    d0 = initial_point(q)
    rng = np.random.default_rng(7)
    for _ in range(5):
        d = DualPoint(sigma=rng.random(q.m),
                      tau=rng.standard_normal(q.n),
                      mu=d0.mu * (1.0 + rng.random(q.K)))
        gs, gt, gm = dual_gradient(q, d)
        analytic = np.concatenate([gs, gt, gm])

        def value_at(w):
            return dual_value(q, DualPoint(sigma=w[:q.m],
                                           tau=w[q.m:q.m + q.n],
                                           mu=w[q.m + q.n:]))

        w0 = np.concatenate([d.sigma, d.tau, d.mu])
        fd = np.empty_like(w0)
        for i in range(w0.size):
            h = 1e-6 * max(1.0, abs(w0[i]))
            wp, wm = w0.copy(), w0.copy()
            wp[i] += h
            wm[i] -= h
            fd[i] = (value_at(wp) - value_at(wm)) / (2.0 * h)
        rel = np.abs(fd - analytic) / np.maximum(1.0, np.abs(analytic))
        assert rel.max() <= 1e-5


def test_weak_duality_sampling(example1):
    q = lift(example1)
    d0 = initial_point(q)
    rng = np.random.default_rng(11)
    checked = 0
    for _ in range(300):
        choice = rng.integers(0, 3, size=q.n)
        y = np.zeros(q.K)
        for i, (s, _) in enumerate(q.blocks):
            y[s + choice[i]] = 1.0
        if np.any(q.D @ y > q.b):
            continue
        d = DualPoint(sigma=rng.random(q.m),
                      tau=rng.standard_normal(q.n),
                      mu=d0.mu * (1.0 + rng.random(q.K)))
        assert in_dual_cone(q, d)
        assert dual_value(q, d) <= binary_objective(q, y) + 1e-6
        checked += 1
    assert checked > 100


def test_in_dual_cone_rejections(example1):
    q = lift(example1)
    d0 = initial_point(q)
    assert in_dual_cone(q, d0)
    bad_sigma = DualPoint(sigma=np.array([-1e-3, 0, 0, 0]),
                          tau=d0.tau, mu=d0.mu)
    assert not in_dual_cone(q, bad_sigma)
    mu = d0.mu.copy()
    mu[0] = MU_MIN / 10.0
    assert not in_dual_cone(q, DualPoint(sigma=d0.sigma, tau=d0.tau, mu=mu))
    # an indefinite Q makes B indefinite, so the minimal mu leaves G non-PD
    p_ind = DiscreteQP(Q=[[0.0, 1.0], [1.0, 0.0]], c=[0.0, 0.0],
                       A=[[1.0, 1.0]], b=[10.0], U=[[0.0, 1.0], [0.0, 1.0]])
    q_ind = lift(p_ind)
    tiny = np.full(q_ind.K, MU_MIN)
    assert not factorize_g(q_ind, tiny).positive_definite
    assert not in_dual_cone(
        q_ind, DualPoint(sigma=np.zeros(1), tau=np.zeros(2), mu=tiny))
