"""Cuboid-set statistics: restricted-query counting and benchmarks."""

from __future__ import annotations

import time

import numpy as np

from .delaunay import alpha_edges_of_window
from .geometry import TimedPoint
from .staircase import CuboidSet


def count_restricted(cuboids: CuboidSet, stride, min_steps, min_alpha):
    """How many cuboids can answer at least one restricted query.

    Queries are restricted to stride-aligned windows (start = stride*a + 1,
    end = stride*b), to spans of at least ``min_steps`` strides, and to
    alpha >= ``min_alpha``. A cuboid counts when its box contains at least
    one admissible query point. Returns (count, fraction of all cuboids).
    """
    if stride < 1:
        raise ValueError("stride must be >= 1")
    total = len(cuboids)
    if total == 0:
        return 0, 0.0
    i_min = cuboids.i_min.astype(np.int64)
    i_max = cuboids.i_max.astype(np.int64)
    j_min = cuboids.j_min.astype(np.int64)
    j_max = cuboids.j_max.astype(np.int64)
    # admissible window starts: stride*a + 1 within [i_min, i_max]
    a_lo = np.ceil((i_min - 1) / stride).astype(np.int64)
    a_hi = np.floor((i_max - 1) / stride).astype(np.int64)
    # admissible window ends: stride*b within [j_min, j_max]
    b_lo = np.ceil(j_min / stride).astype(np.int64)
    b_hi = np.floor(j_max / stride).astype(np.int64)
    ok = (
        (a_lo <= a_hi)
        & (b_lo <= b_hi)
        & (b_hi - a_lo >= min_steps)
        & (cuboids.alpha_hi >= min_alpha)
    )
    count = int(ok.sum())
    return count, count / total


def bench_indexed_vs_naive(cuboids, tree, window_sizes, alphas, queries_per_size=3, seed=0):
    """Mean per-query times of the stabbing index against recomputing the
    window triangulation and extracting its alpha-edges from scratch."""
    rng = np.random.default_rng(seed)
    pts = [
        TimedPoint(k + 1, float(cuboids.xs[k]), float(cuboids.ys[k]))
        for k in range(cuboids.n)
    ]
    naive_times = []
    indexed_times = []
    for size in window_sizes:
        if size >= cuboids.n:
            raise ValueError(f"window size {size} exceeds dataset")
        for _ in range(queries_per_size):
            i = int(rng.integers(1, cuboids.n - size + 1))
            j = i + size - 1
            for alpha in alphas:
                t0 = time.perf_counter()
                naive = alpha_edges_of_window(pts, i, j, alpha)
                t1 = time.perf_counter()
                ids = tree.stab(i, j, alpha)
                indexed = {
                    (int(cuboids.edge_a[k]), int(cuboids.edge_b[k]), int(cuboids.side[k]))
                    for k in ids
                }
                t2 = time.perf_counter()
                naive_times.append(t1 - t0)
                indexed_times.append(t2 - t1)
                if indexed != naive:
                    raise AssertionError(
                        f"indexed and naive results differ at ({i},{j},{alpha})"
                    )
    return {
        "naive_mean_s": float(np.mean(naive_times)),
        "indexed_mean_s": float(np.mean(indexed_times)),
        "speedup": float(np.mean(naive_times) / np.mean(indexed_times)),
        "queries": len(naive_times),
    }
