"""Mutable categorical distribution backed by a Huffman-style sum tree."""

from __future__ import annotations

import math
from typing import Any, Hashable, Iterator

import numpy as np

from . import _kernels as K
from .errors import (
    DuplicateKeyError,
    EmptyDistributionError,
    InvalidWeightError,
    KeyNotFoundError,
    OutOfRangeError,
)

REL_TOL = 1e-9


def check_weight(weight) -> float:
    """Return ``weight`` as a float, rejecting anything but positive finite values."""
    try:
        w = float(weight)
    except (TypeError, ValueError):
        raise InvalidWeightError(f"weight must be a real number, got {weight!r}") from None
    if not (w > 0.0 and math.isfinite(w)):
        raise InvalidWeightError(f"weight must be positive and finite, got {weight!r}")
    return w


class MutableCategorical:
    """Categorical distribution over caller-supplied keys.

    Weights are stored un-normalized; the probability of a key is its weight
    over :attr:`total_weight`. Sampling, insertion, deletion and weight
    changes all cost one root-to-leaf path.

    With ``rotations=True`` every mutation also checks each ancestor on the
    modified path for a rotation that lowers the expected lookup depth.

    Not thread-safe: no call may overlap a mutation.
    """

    def __init__(self, rotations: bool = False, capacity: int = 16):
        cap = max(int(capacity), 4)
        self._rotations = bool(rotations)
        self._value = np.zeros(cap, dtype=np.float64)
        self._left = np.full(cap, K.NIL, dtype=np.int64)
        self._right = np.full(cap, K.NIL, dtype=np.int64)
        self._parent = np.full(cap, K.FREE, dtype=np.int64)
        self._free = np.zeros(cap, dtype=np.int64)
        self._meta = np.array([K.NIL, 0, 0], dtype=np.int64)
        self._leaf: dict[Hashable, int] = {}
        self._key_at: list[Any] = [None] * cap
        #: cumulative node visits over all mutations
        self.visits = 0
        #: node visits of the most recent mutation
        self.last_visits = 0

    @classmethod
    def from_items(cls, items, rotations: bool = False) -> MutableCategorical:
        """Build by adding ``(key, weight)`` pairs in order."""
        dist = cls(rotations=rotations)
        for key, weight in items:
            dist.add(key, weight)
        return dist

    @property
    def rotations(self) -> bool:
        return self._rotations

    def __len__(self) -> int:
        return len(self._leaf)

    def size(self) -> int:
        return len(self._leaf)

    def __contains__(self, key) -> bool:
        return key in self._leaf

    def __iter__(self) -> Iterator:
        return iter(self._leaf)

    def __repr__(self) -> str:
        return (
            f"MutableCategorical(size={len(self)}, total_weight={self.total_weight!r}, "
            f"rotations={self._rotations})"
        )

    @property
    def total_weight(self) -> float:
        root = self._meta[K.ROOT]
        return 0.0 if root == K.NIL else float(self._value[root])

    def _grow(self):
        cap = self._value.shape[0]
        self._value = np.concatenate([self._value, np.zeros(cap)])
        self._left = np.concatenate([self._left, np.full(cap, K.NIL, dtype=np.int64)])
        self._right = np.concatenate([self._right, np.full(cap, K.NIL, dtype=np.int64)])
        self._parent = np.concatenate([self._parent, np.full(cap, K.FREE, dtype=np.int64)])
        self._free = np.concatenate([self._free, np.zeros(cap, dtype=np.int64)])
        self._key_at.extend([None] * cap)

    # -- mutation ---------------------------------------------------------

    def _insert(self, key, w: float):
        if self._meta[K.TOP] + 2 > self._value.shape[0]:
            self._grow()
        leaf, visits = K.add_leaf(
            self._value, self._left, self._right, self._parent,
            self._meta, self._free, w, self._rotations,
        )
        self._leaf[key] = int(leaf)
        self._key_at[leaf] = key
        return visits

    def _remove(self, key):
        leaf = self._leaf.pop(key)
        self._key_at[leaf] = None
        return K.delete_leaf(
            self._value, self._left, self._right, self._parent,
            self._meta, self._free, leaf, self._rotations,
        )

    def _account(self, visits):
        self.last_visits = int(visits)
        self.visits += self.last_visits

    def add(self, key, weight):
        """Insert a new category. Raises if ``key`` is already present."""
        w = check_weight(weight)
        if key in self._leaf:
            raise DuplicateKeyError(key)
        self._account(self._insert(key, w))

    def delete(self, key):
        if key not in self._leaf:
            raise KeyNotFoundError(key)
        self._account(self._remove(key))

    __delitem__ = delete

    def modify(self, key, weight):
        """Change a category's weight: a delete followed by a re-add."""
        w = check_weight(weight)
        if key not in self._leaf:
            raise KeyNotFoundError(key)
        visits = self._remove(key)
        visits += self._insert(key, w)
        self._account(visits)

    def __setitem__(self, key, weight):
        if key in self._leaf:
            self.modify(key, weight)
        else:
            self.add(key, weight)

    # -- queries ----------------------------------------------------------

    def weight_of(self, key) -> float:
        try:
            return float(self._value[self._leaf[key]])
        except KeyError:
            raise KeyNotFoundError(key) from None

    __getitem__ = weight_of

    def probability(self, key) -> float:
        return self.weight_of(key) / self.total_weight

    def depth_of(self, key) -> int:
        """Number of branches between the root and ``key``'s leaf."""
        try:
            node = self._leaf[key]
        except KeyError:
            raise KeyNotFoundError(key) from None
        depth = 0
        while self._parent[node] != K.NIL:
            node = self._parent[node]
            depth += 1
        return depth

    def items(self) -> Iterator[tuple[Any, float]]:
        for key, leaf in self._leaf.items():
            yield key, float(self._value[leaf])

    def weights(self) -> np.ndarray:
        """Current leaf weights, in no particular order."""
        top = self._meta[K.TOP]
        live = (self._parent[:top] != K.FREE) & (self._left[:top] == K.NIL)
        return self._value[:top][live].copy()

    def sample(self, u: float):
        """Map ``u`` in ``[0, total_weight)`` to a key by walking the tree.

        At each sum-node ``u`` goes to the first child if it is below that
        child's weight, otherwise the first child's weight is subtracted and
        the walk continues into the second child.
        """
        root = self._meta[K.ROOT]
        if root == K.NIL:
            raise EmptyDistributionError("empty distribution")
        u = float(u)
        if not 0.0 <= u < self._value[root]:
            raise OutOfRangeError(f"u={u!r} outside [0, {self.total_weight!r})")
        leaf = K.sample_leaf(self._value, self._left, self._right, root, u)
        return self._key_at[leaf]

    def sample_many(self, us) -> list:
        """Vectorized :meth:`sample` over an array of draws."""
        root = self._meta[K.ROOT]
        if root == K.NIL:
            raise EmptyDistributionError("empty distribution")
        us = np.ascontiguousarray(us, dtype=np.float64)
        if us.size and not (np.all(us >= 0.0) and np.all(us < self._value[root])):
            raise OutOfRangeError(f"draws outside [0, {self.total_weight!r})")
        leaves = K.sample_leaves(self._value, self._left, self._right, root, us)
        key_at = self._key_at
        return [key_at[i] for i in leaves]

    def sample_random(self, rng: np.random.Generator, size: int | None = None):
        """Draw one key (or ``size`` keys) using ``rng``."""
        root = self._meta[K.ROOT]
        if root == K.NIL:
            raise EmptyDistributionError("empty distribution")
        total = self._value[root]
        below = np.nextafter(total, 0.0)
        if size is None:
            return self.sample(min(rng.random() * total, below))
        us = np.minimum(rng.random(size) * total, below)
        return self.sample_many(us)

    def expected_path_length(self, method: str = "branches") -> float:
        """Expected number of branches per lookup, E[L].

        ``"branches"`` sums the weight below every branch (every non-root
        node, equivalently every sum-node value); ``"depths"`` sums leaf
        weight times depth. Both are divided by the total weight.
        """
        root = self._meta[K.ROOT]
        if root == K.NIL:
            raise EmptyDistributionError("empty distribution")
        top = self._meta[K.TOP]
        if method == "branches":
            s = K.branch_sum(self._value, self._left, self._parent, top)
        elif method == "depths":
            s = K.depth_weighted_sum(self._value, self._left, self._right, root, top)
        else:
            raise ValueError(f"unknown method {method!r}")
        return float(s / self._value[root])

    # -- structure --------------------------------------------------------

    @property
    def root(self) -> int:
        """Pool id of the root node, -1 when empty."""
        return int(self._meta[K.ROOT])

    def is_leaf(self, node: int) -> bool:
        return self._left[node] == K.NIL

    def children(self, node: int) -> tuple[int, int]:
        return int(self._left[node]), int(self._right[node])

    def node_value(self, node: int) -> float:
        return float(self._value[node])

    def key_at(self, node: int):
        return self._key_at[node]

    def structure(self):
        """Nested tuples describing the tree.

        A leaf is ``(key, weight)``; a sum-node is ``(value, first, second)``.
        Returns None for an empty distribution.
        """
        root = self._meta[K.ROOT]
        if root == K.NIL:
            return None

        def build(node):
            if self._left[node] == K.NIL:
                return (self._key_at[node], float(self._value[node]))
            return (
                float(self._value[node]),
                build(self._left[node]),
                build(self._right[node]),
            )

        return build(root)

    def copy(self) -> MutableCategorical:
        new = MutableCategorical.__new__(MutableCategorical)
        new._rotations = self._rotations
        for name in ("_value", "_left", "_right", "_parent", "_free", "_meta"):
            setattr(new, name, getattr(self, name).copy())
        new._leaf = dict(self._leaf)
        new._key_at = list(self._key_at)
        new.visits = self.visits
        new.last_visits = self.last_visits
        return new

    def validate(self) -> list[str]:
        """Check every structural invariant; returns violation messages."""
        v, l, r, p = self._value, self._left, self._right, self._parent
        found, reached = K.check_structure(v, l, r, p, self._meta, REL_TOL)
        out = []
        for code, node in found:
            if code == K.BAD_SUM:
                out.append(
                    f"node {node}: value {v[node]!r} != {v[l[node]]!r} + {v[r[node]]!r}"
                )
            elif code == K.BAD_PARENT:
                out.append(f"node {node}: parent link {p[node]} does not point back")
            elif code == K.HALF_LEAF:
                out.append(f"node {node}: exactly one child")
            elif code == K.ROOT_HAS_PARENT:
                out.append(f"root {node}: has parent {p[node]}")
            elif code == K.DETACHED:
                out.append(f"node {node}: allocated but unreachable from the root")
            elif code == K.CYCLE:
                out.append(f"node {node}: reached twice")

        top = int(self._meta[K.TOP])
        n_leaves = 0
        for key, leaf in self._leaf.items():
            if not 0 <= leaf < top or p[leaf] == K.FREE:
                out.append(f"index {key!r}: points at free slot {leaf}")
            elif not reached[leaf]:
                out.append(f"index {key!r}: leaf {leaf} is detached from the tree")
            elif l[leaf] != K.NIL:
                out.append(f"index {key!r}: node {leaf} is not a leaf")
            elif self._key_at[leaf] != key:
                out.append(f"index {key!r}: leaf {leaf} holds key {self._key_at[leaf]!r}")
            else:
                n_leaves += 1

        mask = reached[:top]
        is_leaf = l[:top] == K.NIL
        tree_leaves = int(np.count_nonzero(mask & is_leaf))
        tree_sums = int(np.count_nonzero(mask & ~is_leaf))
        if tree_leaves != len(self._leaf) or n_leaves != tree_leaves:
            out.append(f"index has {len(self._leaf)} keys but tree has {tree_leaves} leaves")
        if tree_leaves and tree_sums != tree_leaves - 1:
            out.append(f"{tree_leaves} leaves but {tree_sums} sum-nodes")
        if tree_leaves:
            exact = math.fsum(v[:top][mask & is_leaf])
            total = self.total_weight
            if abs(total - exact) > REL_TOL * exact:
                out.append(f"total weight {total!r} != leaf sum {exact!r}")
        return out
