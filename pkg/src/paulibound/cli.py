"""Command line interface: ``paulibound {datagen,scan,certify,sweep,report}``.

Exit codes: 0 success, 2 argument error, 3 data error, 4 numerical failure.
"""
import argparse
import json
import os
import sys

from . import bench, data
from .axis_bound import exact_scan, write_score_csv
from .certify import CertifyParams, adaptive_certify
from .errors import ArgumentError, DataError, PauliBoundError
from .feature_map import FeatureMapConfig

SYNTHETIC = ("syn_corr_gauss", "syn_sparse")


def _generate(name, n, n_samples, seed):
    if name == "syn_corr_gauss":
        return data.gen_corr_gauss(n, n_samples, seed)
    return data.gen_sparse(n, n_samples, seed=seed)


def load_dataset(args):
    """Synthetic dataset by name, or a CSV path, prepared to ``n_qubits`` columns."""
    if args.dataset in SYNTHETIC:
        raw = _generate(args.dataset, args.n_qubits, args.n_samples, args.seed)
    elif os.path.exists(args.dataset):
        raw = data.load_csv(args.dataset, args.target)
    else:
        raise DataError(
            f"dataset {args.dataset!r} is neither one of {SYNTHETIC} nor an existing CSV file"
        )
    return data.prepare_for_qubits(raw, args.n_qubits)


def certify_params(args):
    return CertifyParams(
        tau_ratio=args.tau_ratio, delta_total=args.delta, t0=args.t0, b=args.batch,
        t_max=args.t_max, eps_min=args.eps_min, seed=args.seed,
    )


def _out(path):
    return open(path, "w", newline="") if path and path != "-" else sys.stdout


def cmd_datagen(args):
    if args.dataset not in SYNTHETIC:
        raise ArgumentError(f"datagen knows {SYNTHETIC}, got {args.dataset!r}")
    ds = _generate(args.dataset, args.n_qubits, args.n_samples, args.seed)
    out = args.out or f"{ds.name}.csv"
    data.write_csv(ds, out)
    data.write_manifest(ds, os.path.splitext(out)[0] + ".json", out)
    print(f"wrote {out} ({ds.n_samples} rows, {ds.n_features} features)")


def cmd_scan(args):
    ds = load_dataset(args)
    config = FeatureMapConfig.from_name(args.config, args.n_qubits)
    best, scores = exact_scan(bench.labeled_features(ds, config))
    if args.out:
        write_score_csv(scores, args.out, args.n_qubits)
    print(json.dumps({"dataset": ds.name, "config": config.name, "best_axis": best.axis,
                      "mse_axis": best.mse, "rho_sq": best.rho_sq}, indent=2))


def cmd_certify(args):
    ds = load_dataset(args)
    config = FeatureMapConfig.from_name(args.config, args.n_qubits)
    result = adaptive_certify(bench.labeled_features(ds, config), certify_params(args))
    payload = result.to_dict(config.name)
    payload["dataset"] = ds.name
    payload["feature_map"] = config.to_dict()
    text = json.dumps(payload, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    print(text)


def cmd_sweep(args):
    ds = load_dataset(args)
    params = certify_params(args)
    records = bench.run_sweep(ds, params, exact=args.exact, n_qubits=args.n_qubits,
                              master_seed=args.seed, workers=args.workers)
    if not args.no_baselines:
        records = bench.attach_anchor_baselines(ds, records)
    fh = _out(args.out)
    try:
        bench.write_sweep_csv(records, fh, include_timing=args.timing)
    finally:
        if fh is not sys.stdout:
            fh.close()
    if args.out and args.out != "-":
        anchor = bench.select_anchor(records)
        manifest = {
            "dataset": data.manifest(ds), "params": params.__dict__ | {"t_max": args.t_max},
            "exact": args.exact, "anchor": anchor.config, "n_records": len(records),
            "total_wall_time_ms": sum(r.wall_time_ms for r in records),
        }
        with open(os.path.splitext(args.out)[0] + ".json", "w") as mf:
            json.dump(manifest, mf, indent=2, sort_keys=True)
            mf.write("\n")


def cmd_report(args):
    records = []
    for path in args.inputs:
        records.extend(bench.read_sweep_csv(path))
    fh = _out(args.out)
    try:
        bench.write_report_csv(bench.summarize(records), fh)
    finally:
        if fh is not sys.stdout:
            fh.close()


def _add_dataset_args(p):
    p.add_argument("--dataset", required=True,
                   help=f"one of {', '.join(SYNTHETIC)} or a CSV path")
    p.add_argument("--target", default="y", help="target column for CSV datasets")
    p.add_argument("--n-qubits", type=int, default=4)
    p.add_argument("--n-samples", type=int, default=data.DEFAULT_SAMPLES)
    p.add_argument("--seed", type=int, default=0)


def _add_certify_args(p):
    p.add_argument("--tau-ratio", type=float, default=0.95)
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--t0", type=int, default=50)
    p.add_argument("--batch", type=int, default=20)
    p.add_argument("--t-max", type=int, default=None, help="default: 4**n_qubits")
    p.add_argument("--eps-min", type=float, default=0.05)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="paulibound",
        description="Training-free certified Pauli-axis MSE bounds for quantum feature maps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("datagen", help="write a synthetic dataset CSV and manifest")
    _add_dataset_args(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_datagen)

    p = sub.add_parser("scan", help="exact scan over all 4**n Pauli axes for one config")
    _add_dataset_args(p)
    p.add_argument("--config", required=True, help='e.g. "rbf-s1 | prod | Z+ZZ | lin | r=2"')
    p.add_argument("--out", help="score table CSV")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("certify", help="adaptive Monte Carlo bound for one config")
    _add_dataset_args(p)
    _add_certify_args(p)
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="result JSON")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("sweep", help="certify all 108 configs and train baselines on the anchor")
    _add_dataset_args(p)
    _add_certify_args(p)
    p.add_argument("--exact", action="store_true", help="also run the exact scan per config")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--no-baselines", action="store_true")
    p.add_argument("--timing", action="store_true",
                   help="add a wall_time_ms column (makes the CSV non-reproducible)")
    p.add_argument("--out", help="sweep CSV (default stdout)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("report", help="anchor summary table from sweep CSVs")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--out")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except PauliBoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DataError.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
