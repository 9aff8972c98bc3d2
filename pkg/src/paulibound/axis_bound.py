"""Closed-form single-axis least squares and the exact all-axes scan.

For a feature column ``a`` and labels ``y`` (population moments throughout)
the best affine fit ``w*a + b`` has

    w = Cov(a, y) / Var(a),   b = mean(y) - w * mean(a),
    MSE = Var(y) - Cov(a, y)**2 / Var(a) = Var(y) * (1 - rho**2).

Columns with ``Var(a) < VAR_FLOOR`` are degenerate: the fit is the constant
``mean(y)`` and the MSE is ``Var(y)``.  The smallest MSE over all columns is
an upper bound on the training MSE of any affine model on the full feature
vector.
"""
import csv
from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import ArgumentError, DataError
from .quantum_core import PauliString

VAR_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class LabeledFeatures:
    """Feature matrix ``A`` (``A[k, i] = a_i(x_k)``) with its labels."""

    features: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        A = np.asarray(self.features, dtype=np.float64)
        y = np.asarray(self.labels, dtype=np.float64).reshape(-1)
        if A.ndim != 2 or A.shape[0] != y.shape[0]:
            raise DataError(f"features {A.shape} and labels {y.shape} do not align")
        if A.shape[0] < 2:
            raise DataError("need at least two samples")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(y))):
            raise DataError("features or labels contain NaN/Inf")
        object.__setattr__(self, "features", A)
        object.__setattr__(self, "labels", y)

    @property
    def n_samples(self):
        return self.features.shape[0]

    @property
    def n_axes(self):
        return self.features.shape[1]

    @property
    def var_y(self):
        return float(np.var(self.labels))

    @property
    def mean_y(self):
        return float(np.mean(self.labels))


@dataclass(frozen=True)
class AxisScore:
    axis: int
    mse: float
    rho_sq: float
    w_star: float
    b_star: float
    degenerate: bool


def empirical_moments(data, i):
    """``(mean_a, var_a, cov_ay)`` of column ``i`` with 1/N normalization."""
    _check_axis(data, i)
    a = data.features[:, i]
    mean_a = a.mean()
    dev = a - mean_a
    var_a = float(dev @ dev) / data.n_samples
    cov = float(dev @ (data.labels - data.mean_y)) / data.n_samples
    return float(mean_a), var_a, cov


def _check_axis(data, i):
    if not 0 <= i < data.n_axes:
        raise ArgumentError(f"axis {i} out of range [0, {data.n_axes})")


def _scores_from_moments(axes, mean, var, cov, var_y, mean_y):
    degenerate = var < VAR_FLOOR
    safe_var = np.where(degenerate, 1.0, var)
    w = np.where(degenerate, 0.0, cov / safe_var)
    explained = np.where(degenerate, 0.0, cov * cov / safe_var)
    mse = np.clip(var_y - explained, 0.0, var_y)
    if var_y > 0:
        rho_sq = np.clip(1.0 - mse / var_y, 0.0, 1.0)
    else:
        rho_sq = np.zeros_like(mse)
    b = mean_y - w * mean
    return [
        AxisScore(int(ax), float(m), float(r), float(ww), float(bb), bool(dg))
        for ax, m, r, ww, bb, dg in zip(axes, mse, rho_sq, w, b, degenerate)
    ]


def score_axes(data, axes=None):
    """Scores for the given column indices (all columns when ``axes`` is None)."""
    if axes is None:
        axes = np.arange(data.n_axes)
        cols = data.features
    else:
        axes = np.asarray(axes, dtype=np.int64).reshape(-1)
        if axes.size and (axes.min() < 0 or axes.max() >= data.n_axes):
            raise ArgumentError(f"axis index out of range [0, {data.n_axes})")
        cols = data.features[:, axes]
    mean, var, cov = backend.kernels().axis_moments(cols, data.labels)
    return _scores_from_moments(axes, mean, var, cov, data.var_y, data.mean_y)


def score_axis(data, i):
    _check_axis(data, i)
    return score_axes(data, [i])[0]


def best_score(scores):
    """Minimum-MSE score; ties go to the smallest axis code."""
    if not scores:
        raise ArgumentError("no scores to choose from")
    return min(scores, key=lambda s: (s.mse, s.axis))


def exact_scan(data):
    """Score every axis; returns ``(best, all_scores)``."""
    scores = score_axes(data)
    return best_score(scores), scores


SCORE_COLUMNS = ("axis_code", "pauli_label", "mse", "rho_sq", "degenerate")


def write_score_csv(scores, path, n_qubits):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SCORE_COLUMNS)
        for s in scores:
            writer.writerow(
                [s.axis, PauliString(s.axis, n_qubits).label, repr(s.mse), repr(s.rho_sq),
                 int(s.degenerate)]
            )
