"""Benchmark datasets: synthetic generators, CSV ingestion, scaling and PCA."""
import csv
import hashlib
import json
import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ArgumentError, DataError

DEFAULT_SAMPLES = 200
DEFAULT_ACTIVE = (0, 1)
JACOBI_TOL = 1e-12
VAR_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class Dataset:
    name: str
    X: np.ndarray
    y: np.ndarray
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        X = np.asarray(self.X, dtype=np.float64)
        y = np.asarray(self.y, dtype=np.float64).reshape(-1)
        if X.ndim != 2 or X.shape[0] != y.shape[0]:
            raise DataError(f"X {X.shape} and y {y.shape} do not align")
        if X.shape[0] < 2:
            raise DataError(f"dataset {self.name!r} needs at least two rows")
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
            raise DataError(f"dataset {self.name!r} contains NaN/Inf")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)

    @property
    def n_samples(self):
        return self.X.shape[0]

    @property
    def n_features(self):
        return self.X.shape[1]


def corr_gauss_covariance(n):
    return 0.3 * np.ones((n, n)) + 0.7 * np.eye(n)


def gen_corr_gauss(n, N=DEFAULT_SAMPLES, seed=0):
    """Correlated Gaussian inputs with target ``exp(-x^T Sigma^-1 x / 2)``."""
    if n < 1 or N < 2:
        raise ArgumentError("need n >= 1 and N >= 2")
    sigma = corr_gauss_covariance(n)
    try:
        chol = np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError:
        raise DataError("feature covariance is not positive definite") from None
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((N, n)) @ chol.T
    # x^T Sigma^-1 x = ||L^-1 x||^2
    white = np.linalg.solve(chol, X.T)
    y = np.exp(-0.5 * np.sum(white * white, axis=0))
    return Dataset(
        "syn_corr_gauss", X, y,
        {"generator": "corr_gauss", "n": n, "N": N, "seed": seed, "rho": 0.3},
    )


def sparse_target(X, active):
    X = np.atleast_2d(X)
    mask = np.zeros(X.shape[1], dtype=bool)
    mask[list(active)] = True
    return np.sin(X[:, mask]).sum(axis=1) + 0.1 * X[:, ~mask].sum(axis=1)


def gen_sparse(n, N=DEFAULT_SAMPLES, active=DEFAULT_ACTIVE, seed=0):
    """Uniform inputs on ``[-pi, pi]^n``; target sums sines of the active set."""
    active = tuple(sorted(set(int(a) for a in active)))
    if not active:
        raise ArgumentError("the active set must be non-empty")
    if active[0] < 0 or active[-1] >= n:
        raise ArgumentError(f"active set {active} outside range(0, {n})")
    if N < 2:
        raise ArgumentError("need N >= 2")
    rng = np.random.default_rng(seed)
    X = rng.uniform(-math.pi, math.pi, size=(N, n))
    return Dataset(
        "syn_sparse", X, sparse_target(X, active),
        {"generator": "sparse", "n": n, "N": N, "seed": seed, "active": list(active),
         "input_range": [-math.pi, math.pi]},
    )


def file_sha256(path):
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def load_csv(path, target_column, name=None):
    """Read a numeric CSV with a header row.

    Rows with an empty cell are dropped and counted in
    ``provenance["dropped_rows"]``; any other non-numeric cell is an error.
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise DataError(f"{path}: empty file")
        header = [h.strip() for h in header]
        if target_column not in header:
            raise DataError(f"{path}: target column {target_column!r} not in header {header}")
        target_idx = header.index(target_column)
        rows, dropped = [], 0
        for line_no, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise DataError(f"{path}:{line_no}: expected {len(header)} cells, got {len(row)}")
            if any(not c.strip() for c in row):
                dropped += 1
                continue
            values = []
            for col, cell in zip(header, row):
                try:
                    values.append(float(cell))
                except ValueError:
                    raise DataError(
                        f"{path}:{line_no}: column {col!r} has non-numeric value {cell!r}"
                    ) from None
            rows.append(values)
    if not rows:
        raise DataError(f"{path}: no complete data rows")
    table = np.array(rows)
    feature_idx = [i for i in range(len(header)) if i != target_idx]
    return Dataset(
        name or str(path).rsplit("/", 1)[-1].rsplit(".", 1)[0],
        table[:, feature_idx],
        table[:, target_idx],
        {"source": str(path), "sha256": file_sha256(path), "target": target_column,
         "columns": [header[i] for i in feature_idx], "dropped_rows": dropped},
    )


def write_csv(dataset, path, target_column="y"):
    """Write ``x0..x{m-1}`` plus the target column; floats use repr round-tripping."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([f"x{j}" for j in range(dataset.n_features)] + [target_column])
        for xs, y in zip(dataset.X, dataset.y):
            writer.writerow([repr(float(v)) for v in xs] + [repr(float(y))])


def manifest(dataset, path=None):
    out = {"name": dataset.name, "n_samples": dataset.n_samples,
           "n_features": dataset.n_features, "provenance": dataset.provenance}
    if path is not None:
        out["sha256"] = file_sha256(path)
    return out


def write_manifest(dataset, path, data_path=None):
    with open(path, "w") as fh:
        json.dump(manifest(dataset, data_path), fh, indent=2, sort_keys=True)
        fh.write("\n")


def prepare(dataset):
    """Z-score every feature column (1/N variance); labels are left as is.

    Columns with variance below ``VAR_FLOOR`` are dropped with a warning.
    """
    mean = dataset.X.mean(axis=0)
    std = dataset.X.std(axis=0)
    keep = std * std >= VAR_FLOOR
    if not keep.all():
        warnings.warn(f"dropping constant feature columns {np.flatnonzero(~keep).tolist()}",
                      stacklevel=2)
    if not keep.any():
        raise DataError(f"dataset {dataset.name!r} has no non-constant feature")
    X = (dataset.X[:, keep] - mean[keep]) / std[keep]
    prov = dict(dataset.provenance, standardized=True)
    if not keep.all():
        prov["dropped_columns"] = np.flatnonzero(~keep).tolist()
    return replace(dataset, X=X, provenance=prov)


def jacobi_eigh(matrix, tol=JACOBI_TOL, max_sweeps=100):
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps until the off-diagonal Frobenius norm is below ``tol`` times the
    matrix norm.  Returns ``(eigenvalues, eigenvectors)`` sorted by
    descending eigenvalue, eigenvectors in columns.
    """
    a = np.array(matrix, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ArgumentError("jacobi_eigh needs a square matrix")
    if not np.allclose(a, a.T, atol=1e-12 * max(1.0, np.abs(a).max())):
        raise ArgumentError("jacobi_eigh needs a symmetric matrix")
    a = 0.5 * (a + a.T)
    m = a.shape[0]
    v = np.eye(m)
    scale = max(np.linalg.norm(a), np.finfo(float).tiny)
    for _ in range(max_sweeps):
        off = math.sqrt(max(0.0, np.sum(a * a) - np.sum(np.diag(a) ** 2)))
        if off <= tol * scale:
            break
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = a[p, q]
                if abs(apq) < 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    # theta**2 would overflow; tan of the angle is 1/(2 theta) to first order
                    t = 0.5 / theta
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rot_p = c * a[:, p] - s * a[:, q]
                rot_q = s * a[:, p] + c * a[:, q]
                a[:, p], a[:, q] = rot_p, rot_q
                rot_p = c * a[p, :] - s * a[q, :]
                rot_q = s * a[p, :] + c * a[q, :]
                a[p, :], a[q, :] = rot_p, rot_q
                a[p, q] = a[q, p] = 0.0
                vp = c * v[:, p] - s * v[:, q]
                vq = s * v[:, p] + c * v[:, q]
                v[:, p], v[:, q] = vp, vq
    else:
        raise DataError("Jacobi eigen-decomposition did not converge")
    values = np.diag(a).copy()
    order = np.argsort(-values, kind="stable")
    values, v = values[order], v[:, order]
    # sign convention: largest-magnitude entry of each eigenvector is positive
    pivots = np.argmax(np.abs(v), axis=0)
    v = v * np.sign(v[pivots, np.arange(m)])
    return values, v


def pca_reduce(dataset, k):
    """Project onto the top-``k`` principal axes of the (1/N) sample covariance."""
    m = dataset.n_features
    if not 1 <= k <= m:
        raise ArgumentError(f"cannot keep {k} components of {m} features")
    centered = dataset.X - dataset.X.mean(axis=0)
    cov = centered.T @ centered / dataset.n_samples
    values, vectors = jacobi_eigh(cov)
    values = np.clip(values, 0.0, None)
    total = values.sum()
    retained = float(values[:k].sum() / total) if total > 0 else 1.0
    prov = dict(dataset.provenance, pca_components=k, retained_variance=retained)
    return replace(dataset, X=centered @ vectors[:, :k], provenance=prov)


def prepare_for_qubits(dataset, n_qubits):
    """Standardize, reduce to ``n_qubits`` columns by PCA when wider, re-standardize."""
    ds = prepare(dataset)
    if ds.n_features > n_qubits:
        ds = prepare(pca_reduce(ds, n_qubits))
    elif ds.n_features < n_qubits:
        raise DataError(
            f"dataset {ds.name!r} has {ds.n_features} usable features, need {n_qubits}"
        )
    return ds
