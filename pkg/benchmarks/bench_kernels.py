#!/usr/bin/env python3
"""Time the hot kernels on both execution paths (numba JIT vs pure numpy).

The parent process launches one worker per path with RSSIKIT_NO_NUMBA set
accordingly and prints a side-by-side table.  Run from the repository root:

    python benchmarks/bench_kernels.py [--fast]
"""

import argparse
import json
import os
import subprocess
import sys
import time


def _bench(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def run_worker(fast):
    import numpy as np

    from rssikit._accel import USING_NUMBA
    from rssikit.cart import RegressionTree, TreeParams
    from rssikit.dataset import build_dataset
    from rssikit.ensemble import ForestParams, RandomForest
    from rssikit.svr import SupportVectorRegression, SvrParams
    from rssikit.synthfield import FieldModel, generate_walk

    n = 1_000 if fast else 4_000
    n_trees = 10 if fast else 50
    n_svr = 400 if fast else 1_500
    repeats = 2 if fast else 3

    field = FieldModel()
    data = build_dataset(generate_walk(field, n, seed=0), provenance="bench")
    X, y = data.X, data.y

    # warm the JIT so compile time stays out of the numbers
    RegressionTree(TreeParams(max_depth=3)).fit(X[:50], y[:50]).predict(X[:50])
    SupportVectorRegression(SvrParams(max_passes=2), seed=0).fit(X[:50], y[:50])

    results = {"path": "numba" if USING_NUMBA else "numpy"}

    deep = TreeParams(max_depth=1000, min_samples_split=2, min_samples_leaf=1)
    results[f"tree fit ({n} samples, full depth)"] = _bench(
        lambda: RegressionTree(deep).fit(X, y), repeats
    )

    tree = RegressionTree(deep).fit(X, y)
    Xq = np.tile(X, (5, 1))
    results[f"tree predict ({len(Xq)} samples)"] = _bench(
        lambda: tree.predict(Xq), repeats
    )

    fp = ForestParams(n_trees=n_trees, seed=0)
    results[f"forest fit ({n_trees} trees, 1 worker)"] = _bench(
        lambda: RandomForest(fp).fit(X, y, n_workers=1), repeats
    )

    sv_params = SvrParams(c=10.0, epsilon=0.5, kernel="rbf", max_passes=50)
    results[f"svr fit ({n_svr} samples, 50 passes)"] = _bench(
        lambda: SupportVectorRegression(sv_params, seed=0).fit(X[:n_svr], y[:n_svr]),
        repeats,
    )

    print(json.dumps(results))


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--fast", action="store_true", help="smaller problem sizes")
    parser.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()

    if args.worker:
        run_worker(args.fast)
        return

    rows = {}
    for disable in ("0", "1"):
        env = dict(os.environ, RSSIKIT_NO_NUMBA=disable)
        cmd = [sys.executable, os.path.abspath(__file__), "--worker"]
        if args.fast:
            cmd.append("--fast")
        out = subprocess.run(cmd, env=env, capture_output=True, text=True, check=True)
        data = json.loads(out.stdout.strip().splitlines()[-1])
        path = data.pop("path")
        for name, seconds in data.items():
            rows.setdefault(name, {})[path] = seconds

    width = max(len(name) for name in rows)
    print(f"{'kernel'.ljust(width)}  {'numba':>10}  {'numpy':>10}  {'speedup':>8}")
    for name, cols in rows.items():
        ratio = cols["numpy"] / cols["numba"]
        print(
            f"{name.ljust(width)}  {cols['numba']:>9.3f}s  {cols['numpy']:>9.3f}s"
            f"  {ratio:>7.1f}x"
        )


if __name__ == "__main__":
    main()
