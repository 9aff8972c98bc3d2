"""Trained reference models: ridge on the Pauli features, RBF kernel ridge.

Both objectives are written per sample, i.e. ridge minimises
``MSE(w, b) + alpha * ||w||^2`` and kernel ridge solves
``(K + N*alpha*I) c = y - mean(y)``.
"""
from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, DataError, NumericalError

PINV_RTOL = 1e-10
JITTER_STEPS = (1e-10, 1e-8, 1e-6)


@dataclass(frozen=True, eq=False)
class RidgeModel:
    weights: np.ndarray
    bias: float
    alpha: float

    def predict(self, features):
        return np.asarray(features, dtype=np.float64) @ self.weights + self.bias


@dataclass(frozen=True, eq=False)
class KernelModel:
    dual_coeffs: np.ndarray
    bias: float
    gamma: float
    alpha: float
    support_inputs: np.ndarray

    def predict(self, X):
        K = rbf_kernel(np.atleast_2d(np.asarray(X, dtype=np.float64)), self.support_inputs, self.gamma)
        return K @ self.dual_coeffs + self.bias


def ridge_fit(data, alpha):
    """Centered ridge regression via the SVD of the centered feature matrix.

    ``alpha == 0`` gives the minimum-norm least-squares solution, dropping
    singular values below ``PINV_RTOL * s_max``.
    """
    if alpha < 0:
        raise ArgumentError(f"alpha must be non-negative, got {alpha}")
    A, y = data.features, data.labels
    n = A.shape[0]
    mean_a = A.mean(axis=0)
    mean_y = y.mean()
    u, s, vt = np.linalg.svd(A - mean_a, full_matrices=False)
    uty = u.T @ (y - mean_y)
    if alpha == 0:
        keep = s > PINV_RTOL * (s[0] if s.size else 0.0)
        gain = np.where(keep, 1.0 / np.where(keep, s, 1.0), 0.0)
    else:
        gain = s / (s * s + n * alpha)
    w = vt.T @ (gain * uty)
    return RidgeModel(weights=w, bias=float(mean_y - mean_a @ w), alpha=float(alpha))


def ridge_train_mse(model, data):
    resid = data.labels - model.predict(data.features)
    return float(resid @ resid) / data.n_samples


def rbf_kernel(X, Z, gamma):
    sq = (
        np.sum(X * X, axis=1)[:, None]
        + np.sum(Z * Z, axis=1)[None, :]
        - 2.0 * X @ Z.T
    )
    return np.exp(-gamma * np.maximum(sq, 0.0))


def median_gamma(X):
    """Median heuristic: one over the median squared pairwise distance."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[0] < 2:
        return 1.0
    diff = X[:, None, :] - X[None, :, :]
    sq = np.sum(diff * diff, axis=-1)[np.triu_indices(X.shape[0], k=1)]
    med = np.median(sq)
    return 1.0 / med if med > 0 else 1.0


def rbf_kernel_ridge_fit(X, y, gamma=None, alpha=1e-3):
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if X.shape[0] != y.shape[0]:
        raise DataError(f"{X.shape[0]} inputs but {y.shape[0]} labels")
    if gamma is None:
        gamma = median_gamma(X)
    if gamma <= 0 or alpha <= 0:
        raise ArgumentError("gamma and alpha must be positive")
    n = X.shape[0]
    mean_y = float(y.mean())
    system = rbf_kernel(X, X, gamma) + n * alpha * np.eye(n)
    rhs = y - mean_y
    for jitter in (0.0, *JITTER_STEPS):
        try:
            chol = np.linalg.cholesky(system + jitter * np.eye(n))
            break
        except np.linalg.LinAlgError:
            continue
    else:
        raise NumericalError("kernel system is not positive definite even with jitter 1e-6")
    coeffs = np.linalg.solve(chol.T, np.linalg.solve(chol, rhs))
    return KernelModel(coeffs, mean_y, float(gamma), float(alpha), X.copy())


def kernel_train_mse(model, X, y):
    resid = np.asarray(y, dtype=np.float64) - model.predict(X)
    return float(resid @ resid) / resid.shape[0]
