"""Compare the compiled and pure-Python kernel backends.

    python benchmarks/bench_kernels.py [--repeat 5]

Times state encoding, all-axes expectations and axis moments for a few
problem sizes and checks that both backends produce the same numbers.
"""
import argparse
import time

import numpy as np

from paulibound import backend
from paulibound.feature_map import FeatureMapConfig, build_terms, term_angles
from paulibound.quantum_core import pauli_tables

CASES = [
    (4, 200, "rbf-s1 | prod | Z+ZZ | lin | r=2"),
    (4, 200, "tanh | sum+prod | all_pairs | full | r=2"),
    (6, 200, "id | pi*prod | Y+YY | full | r=2"),
    (8, 50, "id | prod | Z+ZZ | lin | r=2"),
]


def _best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - start)
    return best, out


def run_case(kern, n, N, name, repeat):
    cfg = FeatureMapConfig.from_name(name, n)
    X = np.random.default_rng(0).normal(size=(N, n))
    terms = build_terms(cfg)
    angles = term_angles(np.tanh(X), cfg)
    xm = np.array([t.pauli.xmask for t in terms], dtype=np.int64)
    zm = np.array([t.pauli.zmask for t in terms], dtype=np.int64)
    code_of = pauli_tables(n)[2]
    y = np.sin(X).sum(axis=1)

    t_enc, states = _best_of(lambda: kern.encode_batch(angles, xm, zm, n, cfg.reps), repeat)
    t_exp, (feats, _) = _best_of(lambda: kern.pauli_expectations(states, n, code_of), repeat)
    t_mom, _ = _best_of(lambda: kern.axis_moments(feats, y), repeat)
    return {"encode": t_enc, "expect": t_exp, "moments": t_mom}, feats


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    names = backend.available()
    print(f"backends: {', '.join(names)}")
    header = f"{'n':>2} {'N':>4}  {'config':<42} {'stage':<8}" + "".join(f"{b:>12}" for b in names)
    if len(names) > 1:
        header += f"{'speedup':>10}"
    print(header)
    for n, N, name in CASES:
        timings, outputs = {}, {}
        for b in names:
            previous = backend.use(b)
            timings[b], outputs[b] = run_case(backend.kernels(), n, N, name, args.repeat)
            backend.use(previous)
        for stage in ("encode", "expect", "moments"):
            row = f"{n:>2} {N:>4}  {name:<42} {stage:<8}"
            row += "".join(f"{timings[b][stage] * 1e3:>10.2f}ms" for b in names)
            if len(names) > 1:
                row += f"{timings['python'][stage] / timings['compiled'][stage]:>9.1f}x"
            print(row)
        if len(names) > 1:
            diff = np.abs(outputs["compiled"] - outputs["python"]).max()
            print(f"{'':>8} max |compiled - python| feature difference: {diff:.2e}")


if __name__ == "__main__":
    main()
