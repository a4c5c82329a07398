"""Reference samplers: cumulative table plus binary search, and the exact
interval partition implied by a tree walk."""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from .errors import DuplicateKeyError, EmptyDistributionError, EmptyWeightsError, OutOfRangeError
from .tree import MutableCategorical, check_weight


@dataclass(frozen=True)
class CdfTable:
    keys: tuple
    cumulative: np.ndarray

    @property
    def total(self) -> float:
        return float(self.cumulative[-1])

    def __len__(self):
        return len(self.keys)


def build_cdf(pairs) -> CdfTable:
    """Prefix sums of ``(key, weight)`` pairs in the given order. O(n)."""
    keys = []
    weights = []
    seen = set()
    for key, weight in pairs:
        w = check_weight(weight)
        if key in seen:
            raise DuplicateKeyError(key)
        seen.add(key)
        keys.append(key)
        weights.append(w)
    if not keys:
        raise EmptyWeightsError("need at least one category")
    return CdfTable(tuple(keys), np.cumsum(np.asarray(weights, dtype=np.float64)))


def cdf_sample(table: CdfTable, u: float):
    """Key at the smallest index ``i`` with ``u < cumulative[i]``."""
    u = float(u)
    if not 0.0 <= u < table.cumulative[-1]:
        raise OutOfRangeError(f"u={u!r} outside [0, {table.total!r})")
    return table.keys[bisect.bisect_right(table.cumulative, u)]


def cdf_sample_indices(table: CdfTable, us) -> np.ndarray:
    """Vectorized :func:`cdf_sample`, returning indices into ``table.keys``."""
    us = np.asarray(us, dtype=np.float64)
    if us.size and not (np.all(us >= 0.0) and np.all(us < table.cumulative[-1])):
        raise OutOfRangeError("draws outside the table range")
    return np.searchsorted(table.cumulative, us, side="right")


def leaf_intervals(dist: MutableCategorical) -> list[tuple[Any, float, float]]:
    """Half-open interval of ``[0, total_weight)`` that the tree walk sends
    to each leaf, in left-to-right order.

    The first child of a sum-node owns the low end of the node's interval.
    """
    if len(dist) == 0:
        raise EmptyDistributionError("empty distribution")
    found = []
    stack = [(dist.root, 0.0)]
    while stack:
        node, lo = stack.pop()
        if dist.is_leaf(node):
            found.append((dist.key_at(node), lo, dist.node_value(node)))
            continue
        a, b = dist.children(node)
        stack.append((b, lo + dist.node_value(a)))
        stack.append((a, lo))
    # each upper bound is the next lower bound, so neighbours meet exactly
    out = []
    for (key, lo, _), (_, nxt, _) in zip(found, found[1:]):
        out.append((key, lo, nxt))
    key, lo, w = found[-1]
    out.append((key, lo, lo + w))
    return out


def interval_boundaries(intervals) -> np.ndarray:
    """Sorted lower bounds plus the final upper bound."""
    lo = np.array([iv[1] for iv in intervals], dtype=np.float64)
    return np.append(lo, intervals[-1][2])


def check_coverage(intervals, total: float, rel_tol: float = 1e-9) -> list[str]:
    """Adjacency, positivity and total-width problems in an interval list."""
    problems = []
    if intervals[0][1] != 0.0:
        problems.append(f"first interval starts at {intervals[0][1]!r}")
    for (k1, _, hi), (k2, lo, _) in zip(intervals, intervals[1:]):
        if hi != lo:
            problems.append(f"gap or overlap between {k1!r} and {k2!r}")
    for key, lo, hi in intervals:
        if not hi > lo:
            problems.append(f"empty interval for {key!r}")
    width = math.fsum(hi - lo for _, lo, hi in intervals)
    if abs(width - total) > rel_tol * total:
        problems.append(f"widths sum to {width!r}, total is {total!r}")
    return problems
