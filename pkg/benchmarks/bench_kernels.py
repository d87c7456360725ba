"""Benchmark the compiled graph kernels against the numpy fallbacks.

Runs edge_weight_sums and k_core_mask on a random graph with both
implementations and reports wall time per call. The compiled path needs
numba importable and MORALNET_NO_NUMBA unset; without it only the
fallback is timed.

Usage:
    python3 benchmarks/bench_kernels.py --nodes 20000 --edges 80000 --repeat 5
"""

import argparse
import time

import numpy as np

from moralnet._kernels import (
    USING_NUMBA,
    _edge_weight_sums_loop,
    _edge_weight_sums_np,
    _k_core_mask_loop,
    _k_core_mask_np,
    edge_weight_sums,
    k_core_mask,
)


def make_graph(rng, n_nodes, n_edges):
    src = rng.integers(0, n_nodes, size=n_edges, dtype=np.int64)
    dst = rng.integers(0, n_nodes, size=n_edges, dtype=np.int64)
    keep = src != dst
    src, dst = src[keep], dst[keep]
    weight = rng.integers(1, 10, size=src.size, dtype=np.int64)
    labels = rng.integers(0, 5, size=n_nodes, dtype=np.int64)
    return src, dst, weight, labels


def timeit(fn, args, repeat):
    fn(*args)  # warmup; triggers compilation on the numba path
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--nodes", type=int, default=20000)
    parser.add_argument("--edges", type=int, default=80000)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--k", type=int, default=3, help="core order")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    src, dst, weight, labels = make_graph(rng, args.nodes, args.edges)
    print(
        f"graph: {args.nodes} nodes, {src.size} edges, "
        f"k={args.k}, best of {args.repeat}"
    )
    print(f"selected path: {'numba' if USING_NUMBA else 'numpy fallback'}")

    cases = [
        (
            "edge_weight_sums",
            (src, dst, weight, labels, args.nodes),
            _edge_weight_sums_np,
            _edge_weight_sums_loop if not USING_NUMBA else edge_weight_sums,
        ),
        (
            "k_core_mask",
            (src, dst, args.nodes, args.k),
            _k_core_mask_np,
            _k_core_mask_loop if not USING_NUMBA else k_core_mask,
        ),
    ]
    for name, call_args, fallback, selected in cases:
        t_np = timeit(fallback, call_args, args.repeat)
        if USING_NUMBA:
            t_sel = timeit(selected, call_args, args.repeat)
            ratio = t_np / t_sel if t_sel > 0 else float("inf")
            print(
                f"{name:20s} numpy {t_np * 1e3:8.2f} ms   "
                f"numba {t_sel * 1e3:8.2f} ms   speedup {ratio:5.1f}x"
            )
        else:
            print(
                f"{name:20s} numpy {t_np * 1e3:8.2f} ms   "
                "(numba path unavailable)"
            )


if __name__ == "__main__":
    main()
