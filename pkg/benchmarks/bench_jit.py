#!/usr/bin/env python3
"""Time the numba kernels against the interpreted fallback.

Each mode runs in its own interpreter, since the JIT switch is read at
import time. Writes CSV (mode,task,n,seconds,per_op_us) to stdout or --out.

    python benchmarks/bench_jit.py --n 20000 --ops 20000
"""

import argparse
import csv
import json
import os
import subprocess
import sys
import time

TASKS = ("build", "mutate", "sample", "huffman")


def _worker(n, ops, seed):
    import numpy as np

    import huffcat
    from huffcat import MutableCategorical, optimal_expected_length

    rng = np.random.default_rng(seed)
    weights = rng.random(n) + 1e-12

    # warm-up so compile time is excluded
    warm = MutableCategorical.from_items([(0, 1.0), (1, 2.0)], rotations=True)
    warm.modify(0, 3.0)
    warm.sample_many(np.array([0.5]))
    warm.expected_path_length()
    optimal_expected_length([1.0, 2.0, 3.0])

    out = {"jit": huffcat.JIT_ENABLED}
    t = time.perf_counter()
    tree = MutableCategorical(capacity=2 * n)
    for k, w in enumerate(weights.tolist()):
        tree.add(k, w)
    out["build"] = (n, time.perf_counter() - t)

    targets = rng.integers(0, n, ops).tolist()
    new_w = (rng.random(ops) + 1e-12).tolist()
    t = time.perf_counter()
    for k, w in zip(targets, new_w):
        tree.modify(k, w)
    out["mutate"] = (ops, time.perf_counter() - t)

    us = rng.random(ops * 10) * tree.total_weight
    t = time.perf_counter()
    tree.sample_many(us)
    out["sample"] = (len(us), time.perf_counter() - t)

    reps = 20
    w = tree.weights()
    t = time.perf_counter()
    for _ in range(reps):
        optimal_expected_length(w)
    out["huffman"] = (reps, time.perf_counter() - t)
    return out


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=20_000)
    parser.add_argument("--ops", type=int, default=20_000)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--out", default="-")
    parser.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args(argv)

    if args.worker:
        print(json.dumps(_worker(args.n, args.ops, args.seed)))
        return 0

    results = {}
    for mode, flag in (("numba", "0"), ("python", "1")):
        env = dict(os.environ, HUFFCAT_DISABLE_JIT=flag)
        proc = subprocess.run(
            [sys.executable, __file__, "--worker", "--n", str(args.n), "--ops", str(args.ops),
             "--seed", str(args.seed)],
            env=env, capture_output=True, text=True, check=True,
        )
        results[mode] = json.loads(proc.stdout)

    fh = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["mode", "task", "count", "seconds", "per_op_us"])
    for mode, res in results.items():
        for task in TASKS:
            count, secs = res[task]
            writer.writerow([mode, task, count, f"{secs:.6f}", f"{1e6 * secs / count:.3f}"])
    for task in TASKS:
        speedup = results["python"][task][1] / results["numba"][task][1]
        print(f"# {task}: numba speedup x{speedup:.1f}", file=sys.stderr)
    if fh is not sys.stdout:
        fh.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
