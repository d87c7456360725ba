"""Hot numeric inner loops with two interchangeable implementations.

Each kernel exists as a numba-compiled function and a pure-numpy
fallback. The active path is chosen at import time: set
``MORALNET_NO_NUMBA=1`` to force the numpy path; it is also used when
numba is not importable. Both paths produce bit-identical results
(weights are integers, so the float64 accumulations are exact), which
``tests/test_graph.py`` asserts and ``benchmarks/bench_kernels.py``
times against each other.
"""

from __future__ import annotations

import os

import numpy as np


def _want_numba() -> bool:
    flag = os.environ.get("MORALNET_NO_NUMBA", "").strip().lower()
    if flag not in ("", "0", "false", "no"):
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


USING_NUMBA = _want_numba()


# ---------------------------------------------------------------- homophily

def _edge_weight_sums_np(src, dst, weight, labels, n_nodes):
    same = np.zeros(n_nodes, dtype=np.float64)
    total = np.zeros(n_nodes, dtype=np.float64)
    w = weight.astype(np.float64)
    np.add.at(total, src, w)
    np.add.at(total, dst, w)
    same_mask = labels[src] == labels[dst]
    np.add.at(same, src[same_mask], w[same_mask])
    np.add.at(same, dst[same_mask], w[same_mask])
    return same, total


def _edge_weight_sums_loop(src, dst, weight, labels, n_nodes):
    same = np.zeros(n_nodes, dtype=np.float64)
    total = np.zeros(n_nodes, dtype=np.float64)
    for e in range(src.shape[0]):
        a = src[e]
        b = dst[e]
        w = np.float64(weight[e])
        total[a] += w
        total[b] += w
        if labels[a] == labels[b]:
            same[a] += w
            same[b] += w
    return same, total


# ------------------------------------------------------------------ k-core

def _k_core_mask_np(src, dst, n_nodes, k):
    alive = np.ones(n_nodes, dtype=np.bool_)
    while True:
        edge_alive = alive[src] & alive[dst]
        deg = np.zeros(n_nodes, dtype=np.int64)
        np.add.at(deg, src[edge_alive], 1)
        np.add.at(deg, dst[edge_alive], 1)
        next_alive = alive & (deg >= k)
        if np.array_equal(next_alive, alive):
            return alive
        alive = next_alive


def _k_core_mask_loop(src, dst, n_nodes, k):
    n_edges = src.shape[0]
    deg = np.zeros(n_nodes, dtype=np.int64)
    for e in range(n_edges):
        deg[src[e]] += 1
        deg[dst[e]] += 1
    # CSR adjacency over both edge directions
    offsets = np.zeros(n_nodes + 1, dtype=np.int64)
    for v in range(n_nodes):
        offsets[v + 1] = offsets[v] + deg[v]
    cursor = offsets[:-1].copy()
    neighbors = np.empty(2 * n_edges, dtype=np.int64)
    for e in range(n_edges):
        a = src[e]
        b = dst[e]
        neighbors[cursor[a]] = b
        cursor[a] += 1
        neighbors[cursor[b]] = a
        cursor[b] += 1

    alive = np.ones(n_nodes, dtype=np.bool_)
    stack = np.empty(n_nodes, dtype=np.int64)
    top = 0
    for v in range(n_nodes):
        if deg[v] < k:
            stack[top] = v
            top += 1
            alive[v] = False
    while top > 0:
        top -= 1
        u = stack[top]
        for idx in range(offsets[u], offsets[u + 1]):
            v = neighbors[idx]
            if alive[v]:
                deg[v] -= 1
                if deg[v] < k:
                    alive[v] = False
                    stack[top] = v
                    top += 1
    return alive


if USING_NUMBA:
    from numba import njit

    edge_weight_sums = njit(cache=True)(_edge_weight_sums_loop)
    k_core_mask = njit(cache=True)(_k_core_mask_loop)
else:
    edge_weight_sums = _edge_weight_sums_np
    k_core_mask = _k_core_mask_np
