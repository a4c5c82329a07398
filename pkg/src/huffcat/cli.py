"""Command-line driver for the experiments and a quick self-test.

Exit codes: 0 success, 1 bad arguments or config, 2 invariant violation.
The default seed is taken from ``HUFFCAT_SEED`` when set.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import os
import sys

import numpy as np

from .baseline import build_cdf, cdf_sample_indices, leaf_intervals
from .errors import ConfigError, InvariantError
from .oracle import entropy, optimal_expected_length
from .tree import MutableCategorical
from .workload import (
    DeletionConfig,
    SteadyStateConfig,
    WeightDistribution,
    gen_weight,
    measure,
    run_deletion,
    run_steady_state,
)

HEADER = ["op_index", "n", "e_l", "e_opt", "ratio"]

DESK = dict(n=10_000, burnin=25_000, ops=25_000, every=500)
FULL = dict(n=100_000, burnin=250_000, ops=250_000, every=500)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _on_off(text: str) -> bool:
    if text in ("on", "true", "1", "yes"):
        return True
    if text in ("off", "false", "0", "no"):
        return False
    raise argparse.ArgumentTypeError(f"expected on/off, got {text!r}")


def _default_seed() -> int:
    raw = os.environ.get("HUFFCAT_SEED")
    if raw is None:
        return 1
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"HUFFCAT_SEED must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="huffcat", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    dists = [d.value for d in WeightDistribution]

    steady = sub.add_parser("bench-steady", help="steady-state add/delete/modify experiment")
    steady.add_argument("--n", type=int, help="initial categories (desk default 10000)")
    steady.add_argument("--burnin", type=int, help="unmeasured operations")
    steady.add_argument("--ops", type=int, help="measured operations")
    steady.add_argument("--every", type=int, help="operations between checkpoints")
    steady.add_argument("--full", action="store_true",
                        help="use the full 100k / 250k / 250k / 500 protocol")
    steady.add_argument("--dist", choices=dists, default="uniform")
    steady.add_argument("--rotations", type=_on_off, default=False, metavar="{on,off}")
    steady.add_argument("--seed", type=int)
    steady.add_argument("--out", default="-", help="CSV path, '-' for stdout")

    dele = sub.add_parser("bench-deletion", help="mass-deletion experiment")
    dele.add_argument("--initial", type=int, default=1_000_000)
    dele.add_argument("--final", type=int, default=1024)
    dele.add_argument("--dist", choices=dists, default="uniform")
    dele.add_argument("--rotations", type=_on_off, default=False, metavar="{on,off}")
    dele.add_argument("--seed", type=int)
    dele.add_argument("--out", default="-")

    selftest = sub.add_parser("selftest", help="randomized invariant and oracle checks")
    selftest.add_argument("--ops", type=int, default=2000, help="operations per configuration")
    selftest.add_argument("--seed", type=int)
    selftest.add_argument("--out", default="-")
    return parser


@contextlib.contextmanager
def _open_out(path):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def write_rows(fh, rows):
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(HEADER)
    for r in rows:
        writer.writerow([r.op_index, r.n, repr(r.e_l), repr(r.e_opt), repr(r.ratio)])


def write_summary(fh, mean_e_l, mean_e_opt, mean_ratio):
    fh.write(f"# mean_e_l={mean_e_l!r},mean_e_opt={mean_e_opt!r},mean_ratio={mean_ratio!r}\n")


def read_csv(path):
    """Parse a bench CSV back into ``(rows, summary)``."""
    rows, summary = [], {}
    with open(path, newline="") as fh:
        lines = fh.read().splitlines()
    for line in lines:
        if line.startswith("#"):
            for part in line[1:].strip().split(","):
                name, _, val = part.partition("=")
                summary[name] = float(val)
    data = [ln for ln in lines if ln and not ln.startswith("#")]
    for rec in csv.DictReader(data):
        rows.append({k: (int(v) if k in ("op_index", "n") else float(v)) for k, v in rec.items()})
    return rows, summary


def _bench_steady(args):
    scale = FULL if args.full else DESK
    config = SteadyStateConfig(
        n_categories=scale["n"] if args.n is None else args.n,
        burn_in_ops=scale["burnin"] if args.burnin is None else args.burnin,
        measured_ops=scale["ops"] if args.ops is None else args.ops,
        measure_every=scale["every"] if args.every is None else args.every,
        dist=args.dist,
        rotations=args.rotations,
        seed=_default_seed() if args.seed is None else args.seed,
    )
    result = run_steady_state(config)
    with _open_out(args.out) as fh:
        write_rows(fh, result.rows)
        write_summary(fh, result.mean_e_l, result.mean_e_opt, result.mean_ratio)


def _bench_deletion(args):
    config = DeletionConfig(
        initial_categories=args.initial,
        final_categories=args.final,
        dist=args.dist,
        rotations=args.rotations,
        seed=_default_seed() if args.seed is None else args.seed,
    )
    row = run_deletion(config)
    with _open_out(args.out) as fh:
        write_rows(fh, [row])
        write_summary(fh, row.e_l, row.e_opt, row.ratio)


def selftest(ops: int, seed: int):
    """Yield ``(check, ok, detail)`` for a battery of randomized checks."""
    if ops < 1:
        raise ConfigError("--ops must be >= 1")
    rng = np.random.default_rng(seed)
    for dist in WeightDistribution:
        for rotations in (False, True):
            name = f"ops/{dist.value}/{'rot' if rotations else 'plain'}"
            tree = MutableCategorical(rotations=rotations)
            shadow = {}
            next_key = 0
            problem = ""
            for _ in range(ops):
                r = rng.random()
                if r < 0.4 or not shadow:
                    shadow[next_key] = gen_weight(dist, rng)
                    tree.add(next_key, shadow[next_key])
                    next_key += 1
                elif r < 0.7:
                    key = list(shadow)[rng.integers(len(shadow))]
                    del shadow[key]
                    tree.delete(key)
                else:
                    key = list(shadow)[rng.integers(len(shadow))]
                    shadow[key] = gen_weight(dist, rng)
                    tree.modify(key, shadow[key])
                found = tree.validate()
                if found or len(tree) != len(shadow):
                    problem = "; ".join(found) or "size mismatch"
                    break
            yield name, not problem, problem or f"size={len(tree)}"

            if len(tree) == 0:
                continue
            a = tree.expected_path_length("branches")
            b = tree.expected_path_length("depths")
            yield f"e_l_identity/{dist.value}", abs(a - b) <= 1e-9 * max(a, 1e-300), f"{a!r} vs {b!r}"

            row = measure(tree, 0)
            h = entropy(tree.weights())
            e_opt = optimal_expected_length(tree.weights())
            yield f"huffman_bound/{dist.value}", h <= e_opt + 1e-12 and e_opt < h + 1, \
                f"H={h!r} E_opt={e_opt!r} ratio={row.ratio!r}"

            ivs = leaf_intervals(tree)
            table = build_cdf((k, hi - lo) for k, lo, hi in ivs)
            us = rng.random(2000) * tree.total_weight
            by_tree = tree.sample_many(us)
            by_cdf = [table.keys[i] for i in cdf_sample_indices(table, us)]
            mism = sum(x != y for x, y in zip(by_tree, by_cdf))
            yield f"sampler_vs_cdf/{dist.value}", mism == 0, f"{mism} mismatches"


def _selftest(args):
    seed = _default_seed() if args.seed is None else args.seed
    failed = False
    with _open_out(args.out) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["check", "status", "detail"])
        for name, ok, detail in selftest(args.ops, seed):
            writer.writerow([name, "pass" if ok else "FAIL", detail])
            failed |= not ok
    if failed:
        raise InvariantError("self-test failed")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {
        "bench-steady": _bench_steady,
        "bench-deletion": _bench_deletion,
        "selftest": _selftest,
    }[args.command]
    try:
        handler(args)
    except ConfigError as exc:
        print(f"huffcat: {exc}", file=sys.stderr)
        return 1
    except InvariantError as exc:
        print(f"huffcat: invariant violation: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
