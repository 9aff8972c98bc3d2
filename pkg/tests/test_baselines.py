import numpy as np
import pytest

from oracles import gd_ridge_mse
from paulibound import baselines as bl
from paulibound.axis_bound import LabeledFeatures, exact_scan
from paulibound.errors import ArgumentError, NumericalError
from paulibound.feature_map import config_grid, feature_matrix


class TestRidge:
    def test_constant_labels(self, rng):
        data = LabeledFeatures(rng.normal(size=(10, 4)), np.full(10, 2.5))
        model = bl.ridge_fit(data, 1e-3)
        assert np.allclose(model.weights, 0.0)
        assert model.bias == pytest.approx(2.5)
        assert bl.ridge_train_mse(model, data) == pytest.approx(0.0, abs=1e-20)

    def test_heavy_shrinkage(self, rng):
        data = LabeledFeatures(rng.normal(size=(20, 4)), rng.normal(size=20))
        model = bl.ridge_fit(data, 1e9)
        assert np.abs(model.weights).max() < 1e-8
        assert bl.ridge_train_mse(model, data) == pytest.approx(data.var_y, rel=1e-6)

    def test_matches_gradient_descent(self, rng):
        A = rng.normal(size=(15, 6))
        y = A @ rng.normal(size=6) + 0.5 * rng.normal(size=15)
        data = LabeledFeatures(A, y)
        model = bl.ridge_fit(data, 1e-3)
        assert bl.ridge_train_mse(model, data) == pytest.approx(gd_ridge_mse(A, y, 1e-3), abs=1e-6)

    def test_normal_equations(self, rng):
        A = rng.normal(size=(12, 30))  # wide: d > N
        y = rng.normal(size=12)
        alpha = 1e-3
        w = bl.ridge_fit(LabeledFeatures(A, y), alpha).weights
        Ac, yc = A - A.mean(0), y - y.mean()
        resid = (Ac.T @ Ac / 12 + alpha * np.eye(30)) @ w - Ac.T @ yc / 12
        assert np.linalg.norm(resid) < 1e-8

    def test_alpha_zero_min_norm(self, rng):
        A = rng.normal(size=(8, 20))
        y = rng.normal(size=8)
        data = LabeledFeatures(A, y)
        model = bl.ridge_fit(data, 0.0)
        assert bl.ridge_train_mse(model, data) == pytest.approx(0.0, abs=1e-20)
        lstsq = np.linalg.lstsq(A - A.mean(0), y - y.mean(), rcond=None)[0]
        assert np.allclose(model.weights, lstsq, atol=1e-8)

    def test_zero_weights_give_var_y(self, rng):
        data = LabeledFeatures(rng.normal(size=(9, 3)), rng.normal(size=9))
        model = bl.RidgeModel(np.zeros(3), data.mean_y, 0.0)
        assert bl.ridge_train_mse(model, data) == pytest.approx(data.var_y)

    def test_negative_alpha(self, rng):
        with pytest.raises(ArgumentError):
            bl.ridge_fit(LabeledFeatures(rng.normal(size=(4, 2)), np.arange(4.0)), -1)

    def test_bound_with_default_alpha(self, rng):
        for cfg in config_grid(2)[::11]:
            X = rng.normal(size=(30, 2))
            y = X[:, 0] * X[:, 1] + 0.1 * rng.normal(size=30)
            data = LabeledFeatures(feature_matrix(X, cfg), y)
            best, _ = exact_scan(data)
            mse = bl.ridge_train_mse(bl.ridge_fit(data, 1e-3), data)
            assert mse <= best.mse + 1e-3 * best.w_star**2 + 1e-12
            assert bl.ridge_train_mse(bl.ridge_fit(data, 1e-9), data) <= best.mse + 1e-6


class TestKernelRidge:
    def test_single_point(self):
        model = bl.rbf_kernel_ridge_fit([[0.3]], [2.0], gamma=1.0, alpha=1e-3)
        assert model.predict([[0.3]])[0] == pytest.approx(2.0)

    def test_duplicate_prediction_near_label(self, rng):
        X = rng.uniform(-2, 2, size=(20, 2))
        y = np.cos(X[:, 0]) + X[:, 1]
        model = bl.rbf_kernel_ridge_fit(X, y, gamma=1.0, alpha=1e-6)
        assert np.abs(model.predict(X[:3]) - y[:3]).max() < 1e-2

    def test_sine_fit(self):
        X = np.linspace(-3, 3, 60)[:, None]
        y = np.sin(X[:, 0])
        model = bl.rbf_kernel_ridge_fit(X, y, gamma=1.0, alpha=1e-3)
        mse = bl.kernel_train_mse(model, X, y)
        assert mse < 1e-2
        # a coarse hyperparameter grid confirms gamma=1 sits in the good region
        grid = [bl.kernel_train_mse(bl.rbf_kernel_ridge_fit(X, y, g, a), X, y)
                for g in (0.01, 0.1, 1.0, 10.0) for a in (1e-1, 1e-3)]
        assert mse <= np.median(grid)

    def test_dual_system(self, rng):
        X = rng.normal(size=(10, 3))
        y = rng.normal(size=10)
        m = bl.rbf_kernel_ridge_fit(X, y, gamma=0.5, alpha=1e-2)
        K = bl.rbf_kernel(X, X, 0.5)
        assert np.linalg.norm((K + 10 * 1e-2 * np.eye(10)) @ m.dual_coeffs - (y - y.mean())) < 1e-8

    def test_median_gamma(self):
        X = np.array([[0.0], [1.0], [3.0]])  # squared distances 1, 9, 4
        assert bl.median_gamma(X) == pytest.approx(1 / 4)

    def test_non_pd_raises(self, monkeypatch):
        def fail(_):
            raise np.linalg.LinAlgError("not PD")

        monkeypatch.setattr(bl.np.linalg, "cholesky", fail)
        with pytest.raises(NumericalError):
            bl.rbf_kernel_ridge_fit([[0.0], [1.0]], [0.0, 1.0], gamma=1.0)

    def test_invalid_params(self):
        with pytest.raises(ArgumentError):
            bl.rbf_kernel_ridge_fit([[0.0], [1.0]], [0.0, 1.0], gamma=-1.0)
