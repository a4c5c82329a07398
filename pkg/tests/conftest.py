import itertools
import math
from functools import lru_cache

import numpy as np
import pytest

from huffcat import MutableCategorical, WeightDistribution, gen_weight

DISTS = list(WeightDistribution)


def random_tree(rng, n, dist=WeightDistribution.UNIFORM, rotations=False, churn=0):
    """Tree with ``n`` keys built by adds, then ``churn`` random modify/delete+add steps."""
    tree = MutableCategorical(rotations=rotations)
    for k in range(n):
        tree.add(k, gen_weight(dist, rng))
    keys = list(range(n))
    nxt = n
    for _ in range(churn):
        i = int(rng.integers(len(keys)))
        if rng.random() < 0.5:
            tree.modify(keys[i], gen_weight(dist, rng))
        else:
            tree.delete(keys[i])
            keys[i] = nxt
            tree.add(nxt, gen_weight(dist, rng))
            nxt += 1
    return tree


def brute_force_min_branch_sum(weights):
    """Minimum over all full binary trees of the total internal-node weight.

    Memoized over subsets of leaves: the best tree on a set is the best
    split of that set into two non-empty halves plus the set's own weight.
    """
    w = tuple(float(x) for x in weights)
    n = len(w)

    @lru_cache(maxsize=None)
    def best(mask):
        if mask & (mask - 1) == 0:
            return 0.0
        total = math.fsum(w[i] for i in range(n) if mask >> i & 1)
        low = mask & -mask
        rest = mask ^ low
        result = math.inf
        # sub ranges over subsets of rest; the half holding `low` is low|sub
        sub = rest
        while True:
            a = low | sub
            b = mask ^ a
            if b:
                result = min(result, best(a) + best(b))
            if sub == 0:
                break
            sub = (sub - 1) & rest
        return result + total

    return best((1 << n) - 1)


def enumerate_full_binary_trees(items):
    """Every unordered full binary tree with the given leaves, as nested tuples."""
    items = tuple(items)
    if len(items) == 1:
        yield items[0]
        return
    first, rest = items[0], items[1:]
    for r in range(len(rest)):
        for others in itertools.combinations(rest, r):
            left = (first,) + others
            right = tuple(x for x in rest if x not in others)
            for a in enumerate_full_binary_trees(left):
                for b in enumerate_full_binary_trees(right):
                    yield (a, b)


def weighted_depth(tree, weights, depth=0):
    if not isinstance(tree, tuple):
        return weights[tree] * depth
    return weighted_depth(tree[0], weights, depth + 1) + weighted_depth(tree[1], weights, depth + 1)


def branch_total(structure):
    """Sum of sum-node values in a ``MutableCategorical.structure()`` tuple."""
    if len(structure) == 2:
        return 0.0
    return structure[0] + branch_total(structure[1]) + branch_total(structure[2])


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def tree_from_structure(structure, rotations=False):
    """Build a tree with exactly the given shape, bypassing the add walk.

    Leaves are ``(key, weight)``; sum-nodes are ``(first, second)`` and get
    their value computed.
    """
    from huffcat import _kernels as K

    tree = MutableCategorical(rotations=rotations, capacity=64)

    def place(node, parent):
        while tree._meta[K.TOP] + 1 > tree._value.shape[0]:
            tree._grow()
        i = int(tree._meta[K.TOP])
        tree._meta[K.TOP] += 1
        tree._parent[i] = parent
        if isinstance(node[0], tuple):
            a = place(node[0], i)
            b = place(node[1], i)
            tree._left[i], tree._right[i] = a, b
            tree._value[i] = tree._value[a] + tree._value[b]
        else:
            key, w = node
            tree._value[i] = w
            tree._leaf[key] = i
            tree._key_at[i] = key
        return i

    tree._meta[K.ROOT] = place(structure, K.NIL)
    return tree


ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    def _report(name, ok, detail=""):
        ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
        print(ACCEPTANCE_LINES[-1])
        return ok
    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
