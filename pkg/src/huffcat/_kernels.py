"""Array kernels for the weighted sampling tree.

The tree lives in a node pool of parallel arrays::

    value[i]   weight of leaf i, or the sum of its children for a sum-node
    left[i]    first child (-1 for a leaf)
    right[i]   second child (-1 for a leaf)
    parent[i]  parent id, -1 for the root, FREE for an unused slot

``meta`` holds ``[root, nfree, top]``: the root id (-1 when empty), the depth
of the ``free`` stack of recycled slots, and the high-water mark of the pool.
Callers guarantee ``top + 2 <= len(value)`` before an insertion.

Mutating kernels return the number of nodes they visited so callers can
account for the cost of each operation.
"""

import numpy as np

from ._jit import njit

NIL = -1
FREE = -2

ROOT = 0
NFREE = 1
TOP = 2


@njit
def _alloc(parent, meta, free):
    if meta[NFREE] > 0:
        meta[NFREE] -= 1
        i = free[meta[NFREE]]
    else:
        i = meta[TOP]
        meta[TOP] += 1
    parent[i] = NIL
    return i


@njit
def _release(left, right, parent, meta, free, i):
    left[i] = NIL
    right[i] = NIL
    parent[i] = FREE
    free[meta[NFREE]] = i
    meta[NFREE] += 1


@njit
def _replace_child(left, right, parent, meta, old, new):
    p = parent[old]
    parent[new] = p
    if p == NIL:
        meta[ROOT] = new
    elif left[p] == old:
        left[p] = new
    else:
        right[p] = new


@njit
def try_rotate(value, left, right, parent, p):
    """Rotate a heavy grandchild of ``p`` up one level if that lowers E[L].

    With children ``c`` and ``d = Sum(g, h)`` where ``g`` is the heavier
    grandchild and ``g > c``, the subtree becomes ``Sum(Sum(c, h), g)``.
    The weighted branch sum drops by exactly ``g - c``. When both children
    are sum-nodes the orientation with the larger gain wins. Returns True if
    a rotation was applied.
    """
    a = left[p]
    b = right[p]
    best = 0.0
    c = NIL
    d = NIL
    if left[b] != NIL:
        gain = max(value[left[b]], value[right[b]]) - value[a]
        if gain > best:
            best = gain
            c = a
            d = b
    if left[a] != NIL:
        gain = max(value[left[a]], value[right[a]]) - value[b]
        if gain > best:
            best = gain
            c = b
            d = a
    if d == NIL:
        return False
    g = left[d]
    h = right[d]
    if value[h] > value[g]:
        g, h = h, g
    left[d] = c
    right[d] = h
    parent[c] = d
    parent[h] = d
    value[d] = value[c] + value[h]
    left[p] = d
    right[p] = g
    parent[g] = p
    parent[d] = p
    value[p] = value[d] + value[g]
    return True


@njit
def _fix_upward(value, left, right, parent, node, rotate):
    # recompute sums from node to the root, optionally checking one rotation
    # per ancestor; a rotation never changes the ancestor's own value
    visits = 0
    while node != NIL:
        value[node] = value[left[node]] + value[right[node]]
        if rotate:
            try_rotate(value, left, right, parent, node)
        visits += 1
        node = parent[node]
    return visits


@njit
def add_leaf(value, left, right, parent, meta, free, weight, rotate):
    """Insert a leaf of ``weight``; returns ``(leaf_id, visits)``.

    Descends from the root into the lighter child while the current node is
    a sum-node heavier than ``weight`` (ties between children go to the
    second child), then pairs the stop node with the new leaf under a fresh
    sum-node that takes the stop node's place.
    """
    leaf = _alloc(parent, meta, free)
    value[leaf] = weight
    left[leaf] = NIL
    right[leaf] = NIL
    root = meta[ROOT]
    if root == NIL:
        meta[ROOT] = leaf
        return leaf, 1

    node = root
    visits = 1
    while left[node] != NIL and value[node] > weight:
        a = left[node]
        b = right[node]
        if value[a] < value[b]:
            node = a
        else:
            node = b
        visits += 1

    s = _alloc(parent, meta, free)
    _replace_child(left, right, parent, meta, node, s)
    left[s] = node
    right[s] = leaf
    parent[node] = s
    parent[leaf] = s
    visits += _fix_upward(value, left, right, parent, s, rotate)
    return leaf, visits


@njit
def delete_leaf(value, left, right, parent, meta, free, leaf, rotate):
    """Remove ``leaf`` by splicing its sibling into the parent's place."""
    p = parent[leaf]
    if p == NIL:
        meta[ROOT] = NIL
        _release(left, right, parent, meta, free, leaf)
        return 1
    if left[p] == leaf:
        sib = right[p]
    else:
        sib = left[p]
    g = parent[p]
    _replace_child(left, right, parent, meta, p, sib)
    _release(left, right, parent, meta, free, p)
    _release(left, right, parent, meta, free, leaf)
    return 1 + _fix_upward(value, left, right, parent, g, rotate)


@njit
def _descend(value, left, right, node, u):
    while left[node] != NIL:
        a = left[node]
        if u < value[a]:
            node = a
        else:
            u -= value[a]
            node = right[node]
            # rounding guard: keep the residual inside the chosen child
            if u >= value[node]:
                u = np.nextafter(value[node], 0.0)
    return node


@njit
def sample_leaf(value, left, right, root, u):
    return _descend(value, left, right, root, u)


@njit
def sample_leaves(value, left, right, root, us):
    out = np.empty(us.shape[0], dtype=np.int64)
    for k in range(us.shape[0]):
        out[k] = _descend(value, left, right, root, us[k])
    return out


@njit
def branch_sum(value, left, parent, top):
    """Sum of all sum-node values, i.e. the total weight below every branch."""
    s = 0.0
    for i in range(top):
        if parent[i] != FREE and left[i] != NIL:
            s += value[i]
    return s


@njit
def depth_weighted_sum(value, left, right, root, top):
    """Sum of leaf weight times leaf depth, by explicit traversal."""
    if root == NIL:
        return 0.0
    stack = np.empty(top + 1, dtype=np.int64)
    depth = np.empty(top + 1, dtype=np.int64)
    stack[0] = root
    depth[0] = 0
    sp = 1
    s = 0.0
    while sp > 0:
        sp -= 1
        node = stack[sp]
        d = depth[sp]
        if left[node] == NIL:
            s += value[node] * d
        else:
            stack[sp] = left[node]
            depth[sp] = d + 1
            stack[sp + 1] = right[node]
            depth[sp + 1] = d + 1
            sp += 2
    return s


@njit
def leaf_depths(left, right, root, top):
    """Depth of every pool slot reachable from ``root`` (-1 elsewhere)."""
    out = np.full(top, -1, dtype=np.int64)
    if root == NIL:
        return out
    stack = np.empty(top + 1, dtype=np.int64)
    stack[0] = root
    out[root] = 0
    sp = 1
    while sp > 0:
        sp -= 1
        node = stack[sp]
        if left[node] != NIL:
            out[left[node]] = out[node] + 1
            out[right[node]] = out[node] + 1
            stack[sp] = left[node]
            stack[sp + 1] = right[node]
            sp += 2
    return out


# violation codes reported by check_structure
BAD_SUM = 1
BAD_PARENT = 2
HALF_LEAF = 3
ROOT_HAS_PARENT = 4
DETACHED = 5
CYCLE = 6


@njit
def check_structure(value, left, right, parent, meta, rel_tol):
    """Walk the tree from the root and report ``(code, node)`` violations.

    Also returns the reachability mask so callers can check their own
    references into the pool.
    """
    top = meta[TOP]
    root = meta[ROOT]
    reached = np.zeros(top, dtype=np.bool_)
    out = np.empty((4 * top + 4, 2), dtype=np.int64)
    nv = 0
    if root != NIL:
        if parent[root] != NIL:
            out[nv, 0] = ROOT_HAS_PARENT
            out[nv, 1] = root
            nv += 1
        stack = np.empty(2 * top + 2, dtype=np.int64)
        stack[0] = root
        sp = 1
        while sp > 0:
            sp -= 1
            node = stack[sp]
            if reached[node]:
                out[nv, 0] = CYCLE
                out[nv, 1] = node
                nv += 1
                continue
            reached[node] = True
            a = left[node]
            b = right[node]
            if (a == NIL) != (b == NIL):
                out[nv, 0] = HALF_LEAF
                out[nv, 1] = node
                nv += 1
                continue
            if a == NIL:
                continue
            total = value[a] + value[b]
            if abs(value[node] - total) > rel_tol * abs(value[node]):
                out[nv, 0] = BAD_SUM
                out[nv, 1] = node
                nv += 1
            for c in (a, b):
                if parent[c] != node:
                    out[nv, 0] = BAD_PARENT
                    out[nv, 1] = c
                    nv += 1
                stack[sp] = c
                sp += 1
    for i in range(top):
        if parent[i] != FREE and not reached[i]:
            out[nv, 0] = DETACHED
            out[nv, 1] = i
            nv += 1
    return out[:nv], reached


@njit
def huffman_branch_sum(sorted_weights):
    """Total internal-node weight of an optimal Huffman tree.

    Classic two-queue construction: leaves are consumed in ascending order
    and merged nodes are produced in ascending order, so the two smallest
    live nodes are always at one of the two queue heads.
    """
    n = sorted_weights.shape[0]
    if n < 2:
        return 0.0
    merged = np.empty(n - 1, dtype=np.float64)
    i = 0
    head = 0
    tail = 0
    total = 0.0
    for _ in range(n - 1):
        if i < n and (head >= tail or sorted_weights[i] <= merged[head]):
            x = sorted_weights[i]
            i += 1
        else:
            x = merged[head]
            head += 1
        if i < n and (head >= tail or sorted_weights[i] <= merged[head]):
            y = sorted_weights[i]
            i += 1
        else:
            y = merged[head]
            head += 1
        merged[tail] = x + y
        tail += 1
        total += x + y
    return total
