import math

import numpy as np
import pytest

from contrastive_lens import cpca
from contrastive_lens.errors import ValidationError
from contrastive_lens.linalg import center_columns, covariance

RNG = np.random.default_rng


def quad_dataset(a: float, b: float) -> np.ndarray:
    """Four points whose 1/n covariance is exactly diag(a^2, b^2)."""
    return np.array([[a, b], [a, -b], [-a, b], [-a, -b]])


# target covariance diag(3, 1), background covariance diag(2, 0.1)
TARGET = quad_dataset(np.sqrt(3.0), 1.0)
BACKGROUND = quad_dataset(np.sqrt(2.0), np.sqrt(0.1))


def principal_angle_1d(u, v):
    return np.arccos(min(1.0, abs(float(u.ravel() @ v.ravel()))))


class TestContrastiveMatrix:
    def test_entrywise(self):
        c = cpca.contrastive_matrix(np.diag([3.0, 1.0]), np.diag([2.0, 0.1]), 2.0)
        np.testing.assert_allclose(c, np.diag([-1.0, 0.8]))

    def test_alpha_zero_returns_cx(self):
        cx = covariance(center_columns(RNG(0).standard_normal((20, 4)))[0])
        np.testing.assert_array_equal(cpca.contrastive_matrix(cx, np.eye(4), 0.0), cx)

    def test_self_cancellation(self):
        cx = covariance(center_columns(RNG(1).standard_normal((20, 3)))[0])
        np.testing.assert_allclose(cpca.contrastive_matrix(cx, cx, 1.0), np.zeros((3, 3)), atol=1e-15)

    def test_rejects_negative_alpha(self):
        with pytest.raises(ValidationError):
            cpca.contrastive_matrix(np.eye(2), np.eye(2), -0.5)

    def test_rejects_dim_mismatch(self):
        with pytest.raises(ValidationError):
            cpca.contrastive_matrix(np.eye(2), np.eye(3), 1.0)


class TestFit:
    def test_low_alpha_selects_first_axis(self):
        model = cpca.fit(TARGET, BACKGROUND, 0.5, 1)
        assert principal_angle_1d(model.subspace.basis, np.array([1.0, 0.0])) <= 1e-12
        np.testing.assert_allclose(model.eigenvalues, [2.0], atol=1e-12)
        np.testing.assert_allclose(model.variance_pairs[0], [3.0, 2.0], atol=1e-12)

    def test_high_alpha_selects_second_axis(self):
        model = cpca.fit(TARGET, BACKGROUND, 2.0, 1)
        assert principal_angle_1d(model.subspace.basis, np.array([0.0, 1.0])) <= 1e-12
        np.testing.assert_allclose(model.eigenvalues, [0.8], atol=1e-12)
        np.testing.assert_allclose(model.variance_pairs[0], [1.0, 0.1], atol=1e-12)

    def test_alpha_zero_is_pca(self):
        from contrastive_lens.alpha_select import principal_angles
        from contrastive_lens.linalg import Subspace

        rng = RNG(7)
        for _ in range(5):
            t = rng.standard_normal((30, 6))
            b = rng.standard_normal((25, 6))
            model = cpca.fit(t, b, 0.0, 2)
            centered = t - t.mean(axis=0)
            _, _, vh = np.linalg.svd(centered, full_matrices=False)  # independent PCA oracle
            angles = principal_angles(model.subspace, Subspace(basis=vh[:2].T.copy()))
            assert np.max(angles) <= 1e-8

    def test_eigenvalue_identity(self):
        rng = RNG(8)
        t, b = rng.standard_normal((40, 5)), rng.standard_normal((35, 5))
        model = cpca.fit(t, b, 1.7, 3)
        cx = covariance(center_columns(t)[0])
        scale = 1e-8 * (1.0 + np.max(np.abs(cx - 1.7 * covariance(center_columns(b)[0]))))
        for i in range(3):
            lx, ly = model.variance_pairs[i]
            assert abs(model.eigenvalues[i] - (lx - 1.7 * ly)) <= scale

    def test_optimality_certificate(self):
        rng = RNG(9)
        t, b = rng.standard_normal((50, 6)), rng.standard_normal((50, 6))
        alpha = 1.3
        model = cpca.fit(t, b, alpha, 1)
        c = cpca.contrastive_matrix(
            covariance(center_columns(t)[0]), covariance(center_columns(b)[0]), alpha
        )
        v = model.subspace.basis[:, 0]
        top = v @ c @ v
        u = rng.standard_normal((1000, 6))
        u /= np.linalg.norm(u, axis=1, keepdims=True)
        values = np.einsum("ij,jk,ik->i", u, c, u)
        assert np.all(values <= top + 1e-9 * (1.0 + np.max(np.abs(c))))

    def test_variance_pair_monotonicity(self):
        rng = RNG(10)
        t, b = rng.standard_normal((60, 5)), rng.standard_normal((60, 5))
        cx = covariance(center_columns(t)[0])
        tol = 1e-9 * (1.0 + np.max(np.abs(cx)))
        prev = None
        for alpha in np.geomspace(0.05, 50, 25):
            pair = cpca.fit(t, b, alpha, 1).variance_pairs[0]
            if prev is not None:
                assert pair[0] <= prev[0] + tol
                assert pair[1] <= prev[1] + tol
            prev = pair

    def test_scaling_invariance(self):
        from contrastive_lens.alpha_select import principal_angles

        rng = RNG(11)
        t, b = rng.standard_normal((30, 4)), rng.standard_normal((30, 4))
        cx = covariance(center_columns(t)[0])
        cy = covariance(center_columns(b)[0])
        m1 = cpca.fit_covariances(cx, cy, 0.8, 2)
        m2 = cpca.fit_covariances(3.7 * cx, 3.7 * cy, 0.8, 2)
        assert np.max(principal_angles(m1.subspace, m2.subspace)) <= 1e-8

    def test_preconditions(self):
        with pytest.raises(ValidationError):
            cpca.fit(TARGET, BACKGROUND, 1.0, 3)  # k > d
        with pytest.raises(ValidationError):
            cpca.fit(TARGET[:1], BACKGROUND, 1.0, 1)  # n < 2
        with pytest.raises(ValidationError):
            cpca.fit(TARGET, BACKGROUND[:1], 1.0, 1)  # m < 2
        with pytest.raises(ValidationError):
            cpca.fit(np.array([[1.0, np.nan]] * 3), BACKGROUND, 1.0, 1)
        with pytest.raises(ValidationError):
            cpca.fit(TARGET, BACKGROUND, math.inf, 1)


class TestFitInfinite:
    def test_null_space_projection(self):
        # background varies only along e1 -> null space is e2;
        # rows (c,0),(-c,0),(0,e),(0,-e) give covariance diag(c^2/2, e^2/2) = diag(3, 2)
        target = np.array([[np.sqrt(6.0), 0.0], [-np.sqrt(6.0), 0.0], [0.0, 2.0], [0.0, -2.0]])
        background = np.array([[1.0, 0.0], [-1.0, 0.0]])
        model = cpca.fit_infinite(target, background, k=1)
        assert math.isinf(model.alpha)
        assert principal_angle_1d(model.subspace.basis, np.array([0.0, 1.0])) <= 1e-10
        np.testing.assert_allclose(model.variance_pairs[0], [2.0, 0.0], atol=1e-12)

    def test_full_rank_background_errors(self):
        rng = RNG(12)
        with pytest.raises(ValidationError, match="null space dimension 0"):
            cpca.fit_infinite(rng.standard_normal((20, 3)), rng.standard_normal((20, 3)), k=1)

    def test_rank_one_background_in_3d(self):
        rng = RNG(13)
        target = rng.standard_normal((30, 3))
        direction = np.array([1.0, 2.0, -1.0])
        background = np.outer(rng.standard_normal(25), direction)
        model = cpca.fit_infinite(target, background, k=2)
        assert np.all(model.variance_pairs[:, 1] <= 1e-10)

    def test_reports_null_dimension(self):
        rng = RNG(14)
        target = rng.standard_normal((30, 3))
        direction = np.array([1.0, 0.0, 0.0])
        background = np.outer(rng.standard_normal(25), direction)
        with pytest.raises(ValidationError, match="null space dimension 2"):
            cpca.fit_infinite(target, background, k=3)


class TestTransform:
    def test_full_rank_is_isometry(self):
        rng = RNG(15)
        t, b = rng.standard_normal((25, 4)), rng.standard_normal((25, 4))
        model = cpca.fit(t, b, 0.9, 4)
        p = cpca.transform(model, t)
        centered = t - model.target_mean
        orig = np.linalg.norm(centered[:, None] - centered[None, :], axis=2)
        new = np.linalg.norm(p[:, None] - p[None, :], axis=2)
        np.testing.assert_allclose(new, orig, rtol=1e-10, atol=1e-12)

    def test_hand_arithmetic(self):
        model = cpca.fit(TARGET + np.array([1.0, 1.0]), BACKGROUND, 2.0, 1)
        # top component is e2 (positive by sign convention), target mean is (1, 1)
        out = cpca.transform(model, [[1.0, 3.0]])
        np.testing.assert_allclose(out, [[2.0]], atol=1e-12)

    def test_constant_data_maps_to_zero(self):
        target = np.tile([5.0, 7.0], (4, 1))
        model = cpca.fit(target, BACKGROUND, 0.7, 1)
        np.testing.assert_allclose(cpca.transform(model, target), np.zeros((4, 1)), atol=1e-14)

    def test_background_mean_flag(self):
        rng = RNG(16)
        t = rng.standard_normal((20, 3)) + 5.0
        b = rng.standard_normal((20, 3)) - 5.0
        model = cpca.fit(t, b, 1.0, 2)
        shift = (model.target_mean - model.background_mean) @ model.subspace.basis
        np.testing.assert_allclose(
            cpca.transform(model, b, use_background_mean=True),
            cpca.transform(model, b) + shift,
            atol=1e-12,
        )


class TestFeatureWeights:
    def test_axis_component(self):
        model = cpca.fit(TARGET, BACKGROUND, 0.5, 1)  # component = e1
        np.testing.assert_allclose(cpca.feature_weights(model, 0), [1.0, 0.0], atol=1e-20)

    def test_equal_weights(self):
        r = 1.0 / np.sqrt(2.0)
        data = np.array([[r, r], [-r, -r], [2 * r, 2 * r], [-2 * r, -2 * r]])
        model = cpca.fit(data, BACKGROUND, 0.0, 1)
        np.testing.assert_allclose(cpca.feature_weights(model, 0), [1.0, 1.0], atol=1e-12)

    def test_hand_arithmetic(self):
        v = np.array([0.6, 0.8])
        data = np.vstack([v, -v, 2 * v, -2 * v])
        model = cpca.fit(data, BACKGROUND, 0.0, 1)
        np.testing.assert_allclose(cpca.feature_weights(model, 0), [0.5625, 1.0], atol=1e-12)

    def test_max_is_exactly_one(self):
        rng = RNG(17)
        model = cpca.fit(rng.standard_normal((30, 6)), rng.standard_normal((30, 6)), 1.0, 3)
        for c in range(3):
            assert cpca.feature_weights(model, c).max() == 1.0

    def test_component_out_of_range(self):
        model = cpca.fit(TARGET, BACKGROUND, 0.5, 1)
        with pytest.raises(ValidationError):
            cpca.feature_weights(model, 1)


class TestDenoise:
    def test_full_rank_identity(self):
        rng = RNG(18)
        t, b = rng.standard_normal((25, 4)), rng.standard_normal((25, 4))
        model = cpca.fit(t, b, 1.1, 4)
        np.testing.assert_allclose(cpca.denoise(model, t), t, rtol=1e-10, atol=1e-12)

    def test_rank_one_projection(self):
        model = cpca.fit(TARGET, BACKGROUND, 0.5, 1)  # basis e1, means zero
        np.testing.assert_allclose(cpca.denoise(model, [[3.0, 4.0]]), [[3.0, 0.0]], atol=1e-12)

    def test_idempotent(self):
        rng = RNG(19)
        t, b = rng.standard_normal((30, 5)), rng.standard_normal((30, 5))
        model = cpca.fit(t, b, 2.3, 2)
        once = cpca.denoise(model, t)
        twice = cpca.denoise(model, once)
        assert np.max(np.abs(twice - once)) <= 1e-12
