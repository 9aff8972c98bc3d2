"""Grid sweep, anchor selection and baseline training on the anchor."""
import csv
import hashlib
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .axis_bound import LabeledFeatures, exact_scan
from .baselines import kernel_train_mse, rbf_kernel_ridge_fit, ridge_fit, ridge_train_mse
from .certify import CertifyParams, adaptive_certify
from .errors import ArgumentError, DataError, PauliBoundError
from .feature_map import FeatureMapConfig, config_grid, feature_matrix

RIDGE_ALPHA = 1e-3
CHECK_ALPHA = 1e-9

SWEEP_COLUMNS = (
    "dataset", "config", "mse_axis_exact", "mse_hat", "t_used", "stop_reason",
    "mse_ridge", "mse_kridge", "error",
)
TIMING_COLUMN = "wall_time_ms"


@dataclass(frozen=True)
class SweepRecord:
    config: str
    mse_hat: float
    t_used: int
    stop_reason: str
    mse_axis_exact: float | None = None
    mse_ridge: float | None = None
    mse_kridge: float | None = None
    wall_time_ms: int = 0
    dataset: str = ""
    error: str = ""


def derive_seed(master_seed, config_name):
    """64-bit per-config seed from the master seed and the config string."""
    digest = hashlib.sha256(f"{int(master_seed)}|{config_name}".encode()).digest()
    return int.from_bytes(digest[:8], "little")


def labeled_features(dataset, config):
    return LabeledFeatures(feature_matrix(dataset.X, config), dataset.y)


def _run_config(args):
    dataset, config, params, exact, master_seed = args
    start = time.perf_counter()
    try:
        data = labeled_features(dataset, config)
        cfg_params = replace(params, seed=derive_seed(master_seed, config.name))
        result = adaptive_certify(data, cfg_params)
        mse_exact = exact_scan(data)[0].mse if exact else None
        record = SweepRecord(
            config=config.name, mse_hat=result.mse_hat, t_used=result.t_used,
            stop_reason=result.stop_reason.value, mse_axis_exact=mse_exact,
            dataset=dataset.name,
        )
    except PauliBoundError as exc:
        record = SweepRecord(config=config.name, mse_hat=math.nan, t_used=0,
                             stop_reason="error", dataset=dataset.name,
                             error=f"{type(exc).__name__}: {exc}")
    elapsed = int(round((time.perf_counter() - start) * 1000))
    return replace(record, wall_time_ms=elapsed)


def run_sweep(dataset, params=None, exact=False, n_qubits=None, master_seed=0,
              configs=None, workers=1):
    """Certify every configuration of the grid on a prepared dataset.

    Per-config seeds come from :func:`derive_seed`, so the records do not
    depend on ``workers``; output order is the canonical grid order.
    """
    params = params or CertifyParams()
    n_qubits = n_qubits or dataset.n_features
    if dataset.n_features != n_qubits:
        raise DataError(f"dataset has {dataset.n_features} features, expected {n_qubits}")
    configs = list(configs) if configs is not None else config_grid(n_qubits)
    jobs = [(dataset, cfg, params, exact, master_seed) for cfg in configs]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run_config, jobs))
    return [_run_config(job) for job in jobs]


def select_anchor(records):
    """Record with the smallest ``mse_hat``; ties go to the smaller config string."""
    usable = [r for r in records if not r.error and not math.isnan(r.mse_hat)]
    if not usable:
        raise ArgumentError("no successful sweep records to choose an anchor from")
    return min(usable, key=lambda r: (r.mse_hat, r.config))


def run_anchor_baselines(dataset, config, alpha=RIDGE_ALPHA, gamma=None):
    """Training MSEs ``(ridge on Pauli features, RBF kernel ridge on inputs)``."""
    if isinstance(config, str):
        config = FeatureMapConfig.from_name(config, dataset.n_features)
    data = labeled_features(dataset, config)
    mse_ridge = ridge_train_mse(ridge_fit(data, alpha), data)
    kmodel = rbf_kernel_ridge_fit(dataset.X, dataset.y, gamma=gamma, alpha=alpha)
    return mse_ridge, kernel_train_mse(kmodel, dataset.X, dataset.y)


def bound_chain(dataset, config, params=None):
    """``(ridge MSE at alpha=1e-9, exact axis MSE, certified estimate)`` for one config."""
    if isinstance(config, str):
        config = FeatureMapConfig.from_name(config, dataset.n_features)
    data = labeled_features(dataset, config)
    ridge = ridge_train_mse(ridge_fit(data, CHECK_ALPHA), data)
    exact = exact_scan(data)[0].mse
    params = params or CertifyParams()
    hat = adaptive_certify(data, params).mse_hat
    return ridge, exact, hat


def attach_anchor_baselines(dataset, records, alpha=RIDGE_ALPHA):
    anchor = select_anchor(records)
    mse_ridge, mse_kridge = run_anchor_baselines(dataset, anchor.config, alpha=alpha)
    return [
        replace(r, mse_ridge=mse_ridge, mse_kridge=mse_kridge) if r is anchor else r
        for r in records
    ]


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return "nan" if math.isnan(value) else repr(float(value))
    return str(value)


def write_sweep_csv(records, path_or_file, include_timing=False):
    columns = SWEEP_COLUMNS + ((TIMING_COLUMN,) if include_timing else ())
    own = isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__")
    fh = open(path_or_file, "w", newline="") if own else path_or_file
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for r in records:
            writer.writerow([_fmt(getattr(r, c)) for c in columns])
    finally:
        if own:
            fh.close()


def _parse_float(cell):
    return float(cell) if cell not in ("", None) else None


def read_sweep_csv(path):
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        missing = set(SWEEP_COLUMNS) - set(reader.fieldnames or ())
        if missing:
            raise DataError(f"{path}: not a sweep CSV, missing columns {sorted(missing)}")
        return [
            SweepRecord(
                config=row["config"],
                mse_hat=float(row["mse_hat"]),
                t_used=int(row["t_used"]),
                stop_reason=row["stop_reason"],
                mse_axis_exact=_parse_float(row["mse_axis_exact"]),
                mse_ridge=_parse_float(row["mse_ridge"]),
                mse_kridge=_parse_float(row["mse_kridge"]),
                wall_time_ms=int(row.get(TIMING_COLUMN) or 0),
                dataset=row["dataset"],
                error=row["error"],
            )
            for row in reader
        ]


REPORT_COLUMNS = (
    "dataset", "config", "mse_axis", "mse_hat", "t_used", "stop_reason",
    "mse_ridge", "mse_rbf_kridge",
)


def summarize(records):
    """One anchor row per dataset, in order of first appearance."""
    by_dataset = {}
    for r in records:
        by_dataset.setdefault(r.dataset, []).append(r)
    rows = []
    for name, recs in by_dataset.items():
        anchor = select_anchor(recs)
        rows.append({
            "dataset": name, "config": anchor.config, "mse_axis": anchor.mse_axis_exact,
            "mse_hat": anchor.mse_hat, "t_used": anchor.t_used,
            "stop_reason": anchor.stop_reason, "mse_ridge": anchor.mse_ridge,
            "mse_rbf_kridge": anchor.mse_kridge,
        })
    return rows


def write_report_csv(rows, path_or_file):
    own = isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__")
    fh = open(path_or_file, "w", newline="") if own else path_or_file
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(REPORT_COLUMNS)
        for row in rows:
            writer.writerow([_fmt(row[c]) for c in REPORT_COLUMNS])
    finally:
        if own:
            fh.close()
