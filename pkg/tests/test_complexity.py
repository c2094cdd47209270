from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hamcube.complexity import (
    ComplexityEstimate,
    PointSet,
    d_star,
    gaussian_mean_width,
    greedy_net,
    k_support_norm,
    k_support_norms,
    localized_width,
    q_k,
)


def brute_force_k_norm(x, k):
    """sup over all k-subsets of the root of the squared entry sum."""
    best = 0.0
    for combo in combinations(range(len(x)), k):
        best = max(best, np.sqrt(sum(x[i] ** 2 for i in combo)))
    return best


def exact_min_net_size(points, theta):
    """Exhaustive set-cover minimum; only usable for tiny instances."""
    count = len(points)
    d = np.linalg.norm(points[:, None, :] - points[None, :, :], axis=-1)
    cov = d < theta
    for size in range(1, count + 1):
        for combo in combinations(range(count), size):
            if cov[list(combo)].any(axis=0).all():
                return size
    return count


def test_point_set_validation():
    with pytest.raises(ValueError):
        PointSet(np.zeros((0, 3)))
    with pytest.raises(ValueError):
        PointSet(np.array([[1.0, np.inf]]))
    ps = PointSet(np.ones(4))
    assert ps.count == 1 and ps.n == 4
    assert np.isclose(ps.radius(), 2.0)


def test_k_support_trivial_cases():
    x = np.array([3.0, -1.0, 2.0, 0.5])
    assert np.isclose(k_support_norm(x, 4), np.linalg.norm(x))
    assert np.isclose(k_support_norm(x, 1), 3.0)


def test_k_support_matches_brute_force():
    rng = np.random.default_rng(10)
    for _ in range(20):
        x = rng.standard_normal(8)
        for k in range(1, 9):
            assert abs(k_support_norm(x, k) - brute_force_k_norm(x, k)) < 1e-12


def test_k_support_out_of_range():
    with pytest.raises(ValueError):
        k_support_norm(np.ones(4), 0)
    with pytest.raises(ValueError):
        k_support_norm(np.ones(4), 5)


def test_k_support_rowwise_agrees():
    rng = np.random.default_rng(11)
    rows = rng.standard_normal((6, 10))
    for k in [1, 3, 10]:
        batch = k_support_norms(rows, k)
        for i in range(6):
            assert np.isclose(batch[i], k_support_norm(rows[i], k))


@given(st.integers(min_value=2, max_value=12), st.integers(min_value=0, max_value=2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_k_support_monotone_in_k(n, seed):
    x = np.random.default_rng(seed).standard_normal(n)
    vals = [k_support_norm(x, k) for k in range(1, n + 1)]
    assert all(a <= b + 1e-12 for a, b in zip(vals, vals[1:]))
    assert vals[-1] <= np.linalg.norm(x) + 1e-12


@given(st.floats(min_value=0.01, max_value=100.0), st.integers(min_value=0, max_value=2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_k_support_homogeneous(c, seed):
    x = np.random.default_rng(seed).standard_normal(6)
    assert np.isclose(k_support_norm(c * x, 3), c * k_support_norm(x, 3), rtol=1e-10)


def test_width_singleton_basis_vector():
    e1 = np.zeros(16)
    e1[0] = 1.0
    est = gaussian_mean_width(PointSet(e1), trials=10_000, seed=0)
    assert abs(est.value - np.sqrt(2 / np.pi)) < 3 * est.std_error


def test_width_of_origin_is_zero():
    est = gaussian_mean_width(PointSet(np.zeros(5)), trials=100, seed=0)
    assert est.value == 0.0


def test_width_cross_pattern_against_high_trial_oracle():
    pts = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
    est = gaussian_mean_width(PointSet(pts), trials=20_000, seed=1)
    g = np.random.default_rng(999).standard_normal((1_000_000, 2))
    oracle = np.abs(g).max(axis=1).mean()
    assert abs(est.value - oracle) < 3 * est.std_error + 0.003


def test_width_deterministic_per_seed():
    pts = np.random.default_rng(12).standard_normal((5, 8))
    a = gaussian_mean_width(PointSet(pts), trials=500, seed=4)
    b = gaussian_mean_width(PointSet(pts), trials=500, seed=4)
    c = gaussian_mean_width(PointSet(pts), trials=500, seed=5)
    assert a.value == b.value and a.std_error == b.std_error
    assert a.value != c.value


def test_width_scaling_shares_randomness():
    pts = np.random.default_rng(13).standard_normal((6, 10))
    base = gaussian_mean_width(PointSet(pts), trials=300, seed=2)
    scaled = gaussian_mean_width(PointSet(2.5 * pts), trials=300, seed=2)
    assert np.isclose(scaled.value, 2.5 * base.value, rtol=1e-12)


def test_width_finite_max_bound():
    rng = np.random.default_rng(14)
    pts = rng.standard_normal((40, 24))
    ps = PointSet(pts)
    est = gaussian_mean_width(ps, trials=4000, seed=3)
    bound = np.sqrt(2 * np.log(2 * ps.count)) * ps.radius()
    assert est.value <= bound + 3 * est.std_error


def test_width_rejects_tiny_trial_count():
    with pytest.raises(ValueError):
        gaussian_mean_width(PointSet(np.ones(3)), trials=1)


def test_localized_width_empty_intersection():
    pts = np.array([[0.0, 0.0], [10.0, 0.0]])
    est = localized_width(PointSet(pts), theta=0.5, trials=100, seed=0)
    assert est.value == 0.0 and est.std_error == 0.0


def test_localized_width_two_close_points():
    # Difference set is {d, -d, 0}, so the width is E|<G, d>| =
    # sqrt(2/pi) * ||d||; the estimate carries the squared value.
    theta = 0.8
    d = theta / 2
    pts = np.array([[0.0, 0.0, 0.0], [d, 0.0, 0.0]])
    est = localized_width(PointSet(pts), theta=theta, trials=20_000, seed=6)
    expected = (np.sqrt(2 / np.pi) * d) ** 2
    assert abs(est.value - expected) < 3 * est.std_error


def test_localized_width_matches_materialized_oracle():
    rng = np.random.default_rng(15)
    pts = rng.standard_normal((10, 12))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    theta = 1.2
    est = localized_width(PointSet(pts), theta=theta, trials=20_000, seed=7)

    diffs = [np.zeros(12)]
    for i in range(10):
        for j in range(10):
            if i != j and np.linalg.norm(pts[i] - pts[j]) <= theta:
                diffs.append(pts[i] - pts[j])
    diffs = np.array(diffs)
    g = np.random.default_rng(888).standard_normal((200_000, 12))
    sups = np.abs(diffs @ g.T).max(axis=0)
    w = sups.mean()
    se = sups.std(ddof=1) / np.sqrt(len(sups))
    assert abs(est.value - w * w) < 3 * (est.std_error + 2 * w * se)


def test_localized_width_requires_positive_theta():
    with pytest.raises(ValueError):
        localized_width(PointSet(np.ones((2, 2))), theta=0.0)


def test_net_collapses_when_theta_huge():
    pts = np.random.default_rng(16).standard_normal((12, 4))
    net = greedy_net(PointSet(pts), theta=1e6)
    assert net.count == 1


def test_net_is_everything_when_theta_tiny():
    pts = np.random.default_rng(17).standard_normal((9, 6))
    net = greedy_net(PointSet(pts), theta=1e-9)
    assert net.count == 9


def test_net_matches_exact_cover_on_line():
    theta = 1.0
    pts = np.zeros((20, 3))
    pts[:, 0] = np.arange(20) * (theta / 2)
    net = greedy_net(PointSet(pts), theta=theta)
    assert net.count == exact_min_net_size(pts, theta)


def test_net_covers_strictly_and_is_subset():
    rng = np.random.default_rng(18)
    pts = rng.standard_normal((60, 5))
    theta = 1.5
    net = greedy_net(PointSet(pts), theta=theta)
    d = np.linalg.norm(pts[:, None, :] - net.points[None, :, :], axis=-1)
    assert (d.min(axis=1) < theta).all()
    point_rows = {tuple(row) for row in pts}
    assert all(tuple(row) in point_rows for row in net.points)


def test_d_star_singleton():
    e1 = np.zeros(8)
    e1[0] = 3.0
    val = d_star(PointSet(e1), trials=10_000, seed=8)
    assert abs(val - 2 / np.pi) < 0.03


def test_q_k_formula_at_k_equals_m():
    width, big_r, m, rho = 2.0, 1.5, 64, 0.3
    expected = rho * np.sqrt(width**2 + big_r**2 * m)
    assert np.isclose(q_k(width, big_r, m, m, rho), expected, rtol=1e-12)


def test_q_k_homogeneous_in_rho():
    v1 = q_k(1.0, 1.0, 4, 32, 0.5)
    v2 = q_k(1.0, 1.0, 4, 32, 1.0)
    assert np.isclose(v2, 2 * v1, rtol=1e-12)


def test_q_k_domain_errors():
    with pytest.raises(ValueError):
        q_k(1.0, 0.0, 1, 4, 0.5)
    with pytest.raises(ValueError):
        q_k(1.0, 1.0, 5, 4, 0.5)
    with pytest.raises(ValueError):
        q_k(1.0, 1.0, 1, 4, -1.0)


def test_estimate_fields():
    est = gaussian_mean_width(PointSet(np.ones(2)), trials=50, seed=9)
    assert isinstance(est, ComplexityEstimate)
    assert est.trials == 50 and est.seed == 9
    assert est.std_error >= 0.0
