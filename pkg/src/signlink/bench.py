"""Timing of the compiled kernels against their numpy counterparts."""

from __future__ import annotations

import time

import numpy as np

from ._accel import HAVE_NUMBA, backend
from .generators import random_connected_graph
from .kernels import KERNELS
from .spectral import signed_laplacian

# (kernel, nodes, edges) sized so each call takes milliseconds, not minutes
DEFAULT_CASES = (
    ("min_partition_cost", 10, 22),
    ("min_two_cluster", 18, 40),
    ("min_quadratic", 16, 36),
    ("delta_table", 8, 12),
)


def _args(kernel: str, n: int, m: int, seed: int):
    rng = np.random.default_rng(seed)
    g = random_connected_graph(n, m, rng)
    g = g.with_signs(rng.choice(np.array([-1, 1], dtype=np.int8), size=g.m))
    if kernel == "min_quadratic":
        return (signed_laplacian(g),)
    if kernel == "delta_table":
        return (g.n, g.u, g.v)
    return (g.n, g.u, g.v, g.sign)


def _best_time(fn, args, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t)
    return best


def _same(a, b) -> bool:
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    return bool(np.array_equal(np.asarray(a), np.asarray(b)))


def run_benchmark(cases=DEFAULT_CASES, repeat: int = 3, seed: int = 0) -> dict:
    """Best-of-``repeat`` wall time per kernel for both implementations.

    The compiled kernel is called once before timing so compilation (or
    cache loading) is excluded.  ``agree`` records whether both paths
    returned identical results.
    """
    rows = []
    for kernel, n, m in cases:
        fast, slow = KERNELS[kernel]
        args = _args(kernel, n, m, seed)
        row = {"kernel": kernel, "n": n, "m": m}
        ref = slow(*args)
        row["numpy_s"] = _best_time(slow, args, repeat)
        if HAVE_NUMBA:
            out = fast(*args)
            row["numba_s"] = _best_time(fast, args, repeat)
            row["speedup"] = row["numpy_s"] / row["numba_s"] if row["numba_s"] > 0 else None
            row["agree"] = _same(out, ref)
        rows.append(row)
    return {"active_backend": backend(), "numba_available": HAVE_NUMBA, "repeat": repeat, "seed": seed, "kernels": rows}
