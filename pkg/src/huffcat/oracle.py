"""Optimal (static) Huffman reference quantities for a multiset of weights."""

import heapq
import math

import numpy as np

from . import _kernels as K
from .errors import EmptyWeightsError, InvalidWeightError


def as_weights(weights) -> np.ndarray:
    w = np.asarray(weights, dtype=np.float64).ravel()
    if w.size == 0:
        raise EmptyWeightsError("need at least one weight")
    if not np.all(np.isfinite(w) & (w > 0.0)):
        raise InvalidWeightError("weights must be positive and finite")
    return w


def optimal_expected_length(weights) -> float:
    """Expected branch count per lookup of an optimal Huffman tree.

    Repeatedly merges the two lightest nodes; the sum of all merged values
    divided by the total weight is the weighted mean leaf depth. The result
    does not depend on how ties are broken.
    """
    w = np.sort(as_weights(weights))
    if w.size == 1:
        return 0.0
    return float(K.huffman_branch_sum(w) / math.fsum(w))


def huffman_depths(weights) -> np.ndarray:
    """Leaf depth of each weight in a Huffman tree built with a binary heap.

    Ties are broken by insertion order. Slower than
    :func:`optimal_expected_length`, but yields the actual code lengths.
    """
    w = as_weights(weights)
    n = w.size
    if n == 1:
        return np.zeros(1, dtype=np.int64)
    parent = np.full(2 * n - 1, -1, dtype=np.int64)
    heap = [(float(x), i) for i, x in enumerate(w)]
    heapq.heapify(heap)
    nxt = n
    while len(heap) > 1:
        a, i = heapq.heappop(heap)
        b, j = heapq.heappop(heap)
        parent[i] = parent[j] = nxt
        heapq.heappush(heap, (a + b, nxt))
        nxt += 1
    depth = np.zeros(2 * n - 1, dtype=np.int64)
    # merged nodes get larger ids than their children, so walk ids downwards
    for node in range(2 * n - 3, -1, -1):
        depth[node] = depth[parent[node]] + 1
    return depth[:n]


def entropy(weights) -> float:
    """Shannon entropy in bits of the normalized weights."""
    w = as_weights(weights)
    p = w / math.fsum(w)
    return float(max(0.0, -np.sum(p * np.log2(p))))
