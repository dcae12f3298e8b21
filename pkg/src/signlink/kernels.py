"""Exhaustive-search kernels behind the exact oracles.

Every kernel exists twice:

* ``*_numba``: a scalar loop compiled with numba (pruned depth-first search or
  Gray-code enumeration with O(degree) incremental updates);
* ``*_numpy``: a vectorised, chunked numpy evaluation of the same objective.

Both return the *same* optimum and the *same* witness, so the backend choice
(see :mod:`signlink._accel`) never changes results.  Ties are broken towards
the first candidate in the enumeration order, which is lexicographic for
restricted-growth strings and Gray-code order for two-clusterings.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from ._accel import USE_NUMBA, njit

_CHUNK = 1 << 16


def _back_edges(n: int, u: np.ndarray, v: np.ndarray):
    """CSR of edges grouped by their larger endpoint: (ptr, earlier node, edge id)."""
    lo, hi = np.minimum(u, v).astype(np.int64), np.maximum(u, v).astype(np.int64)
    order = np.lexsort((np.arange(len(u)), hi))
    ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(hi, minlength=n), out=ptr[1:])
    return ptr, lo[order], order.astype(np.int64)


# ---------------------------------------------------------------------------
# minimum-cost partition (correlation clustering) over restricted-growth strings


@njit
def _rgs_search(n, bptr, bnode, bsign, init_best):
    best = init_best
    best_labels = np.zeros(n, np.int64)
    if n == 0:
        return 0, best_labels
    labels = np.zeros(n, np.int64)
    cost = np.zeros(n + 1, np.int64)
    ncl = np.zeros(n + 1, np.int64)
    nextc = np.zeros(n + 1, np.int64)
    posback = np.zeros(n, np.int64)
    for k in range(n):
        for t in range(bptr[k], bptr[k + 1]):
            if bsign[t] > 0:
                posback[k] += 1
    ncl[1] = 1
    k = 1
    while k >= 1:
        if k == n:
            if cost[n] < best:
                best = cost[n]
                best_labels[:] = labels
            k -= 1
            continue
        c = nextc[k]
        if c > ncl[k]:
            k -= 1
            continue
        nextc[k] = c + 1
        add = posback[k]
        for t in range(bptr[k], bptr[k + 1]):
            if labels[bnode[t]] == c:
                if bsign[t] > 0:
                    add -= 1
                else:
                    add += 1
        nc = cost[k] + add
        # completions never lower the cost, so a prefix at the incumbent is dead
        if nc >= best:
            continue
        labels[k] = c
        cost[k + 1] = nc
        ncl[k + 1] = ncl[k] if c < ncl[k] else ncl[k] + 1
        k += 1
        nextc[k] = 0
    return best, best_labels


def _initial_bound(sign: np.ndarray) -> int:
    # all-in-one costs #negative, all-singletons costs #positive
    neg = int(np.count_nonzero(sign < 0))
    return min(neg, len(sign) - neg) + 1


def _min_partition_cost_numba(n, u, v, sign):
    bptr, bnode, bedge = _back_edges(n, u, v)
    bsign = np.asarray(sign, dtype=np.int64)[bedge]
    cost, labels = _rgs_search(n, bptr, bnode, bsign, _initial_bound(sign))
    return int(cost), labels


@lru_cache(maxsize=4)
def restricted_growth_strings(n: int) -> np.ndarray:
    """All set partitions of ``n`` items as restricted-growth strings, lexicographic."""
    if n == 0:
        return np.zeros((1, 0), dtype=np.int8)
    rows = np.zeros((1, 1), dtype=np.int8)
    top = np.zeros(1, dtype=np.int8)
    for _ in range(1, n):
        reps = top.astype(np.int64) + 2
        rows = np.repeat(rows, reps, axis=0)
        starts = np.repeat(np.cumsum(reps) - reps, reps)
        new = (np.arange(len(rows)) - starts).astype(np.int8)
        top = np.maximum(np.repeat(top, reps), new)
        rows = np.concatenate([rows, new[:, None]], axis=1)
    rows.setflags(write=False)
    return rows


def _min_partition_cost_numpy(n, u, v, sign):
    rgs = restricted_growth_strings(n)
    if len(u) == 0:
        return 0, rgs[0].astype(np.int64)
    neg = np.asarray(sign) < 0
    best, best_row = None, 0
    for lo in range(0, len(rgs), _CHUNK):
        block = rgs[lo : lo + _CHUNK]
        same = block[:, u] == block[:, v]
        costs = np.count_nonzero(same == neg[None, :], axis=1)
        k = int(np.argmin(costs))
        if best is None or costs[k] < best:
            best, best_row = int(costs[k]), lo + k
    return best, rgs[best_row].astype(np.int64)


# ---------------------------------------------------------------------------
# minimum-cost two-clustering (node 0 pinned to side +1)


@njit
def _gray_two_cluster(n, ptr, inc, sign):
    m = len(sign)
    viol = np.zeros(m, np.bool_)
    cost = 0
    for e in range(m):
        if sign[e] < 0:
            viol[e] = True
            cost += 1
    best = cost
    best_i = 0
    if n <= 1:
        return best, 0
    total = 1 << (n - 1)
    for i in range(1, total):
        k = 1
        t = i
        while (t & 1) == 0:
            t >>= 1
            k += 1
        # flipping node k toggles the status of every incident edge
        for q in range(ptr[k], ptr[k + 1]):
            e = inc[q]
            if viol[e]:
                viol[e] = False
                cost -= 1
            else:
                viol[e] = True
                cost += 1
        if cost < best:
            best = cost
            best_i = i
    return best, best_i ^ (best_i >> 1)


def _sides_from_gray(n: int, code: int) -> np.ndarray:
    sides = np.ones(n, dtype=np.int8)
    if n > 1:
        bits = (code >> np.arange(n - 1)) & 1
        sides[1:] = 1 - 2 * bits
    return sides


def _incidence(n, u, v):
    ends = np.concatenate([u, v]).astype(np.int64)
    eids = np.concatenate([np.arange(len(u)), np.arange(len(u))])
    order = np.lexsort((eids, ends))
    ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(ends, minlength=n), out=ptr[1:])
    return ptr, eids[order].astype(np.int64)


def _min_two_cluster_numba(n, u, v, sign):
    ptr, inc = _incidence(n, u, v)
    cost, code = _gray_two_cluster(n, ptr, inc, np.asarray(sign, dtype=np.int64))
    return int(cost), _sides_from_gray(n, int(code))


def _gray_block_sides(n: int, lo: int, hi: int) -> np.ndarray:
    i = np.arange(lo, hi, dtype=np.int64)
    code = i ^ (i >> 1)
    x = np.ones((hi - lo, n), dtype=np.int8)
    if n > 1:
        x[:, 1:] = 1 - 2 * ((code[:, None] >> np.arange(n - 1)) & 1)
    return x


def _min_two_cluster_numpy(n, u, v, sign):
    total = 1 << max(n - 1, 0)
    sign = np.asarray(sign, dtype=np.int8)
    best, best_i = None, 0
    for lo in range(0, total, _CHUNK):
        hi = min(total, lo + _CHUNK)
        x = _gray_block_sides(n, lo, hi)
        costs = np.count_nonzero(x[:, u] * x[:, v] != sign[None, :], axis=1)
        k = int(np.argmin(costs))
        if best is None or costs[k] < best:
            best, best_i = int(costs[k]), lo + k
    return best, _sides_from_gray(n, best_i ^ (best_i >> 1))


# ---------------------------------------------------------------------------
# min over x in {-1,+1}^n of x'Lx (x_0 = +1 by the x -> -x symmetry)


@njit
def _gray_quadratic(L):
    n = L.shape[0]
    x = np.ones(n, np.int64)
    Lx = np.zeros(n, np.int64)
    for r in range(n):
        for c in range(n):
            Lx[r] += L[r, c]
    q = 0
    for r in range(n):
        q += Lx[r]
    best = q
    best_i = 0
    if n <= 1:
        return best, 0
    total = 1 << (n - 1)
    for i in range(1, total):
        k = 1
        t = i
        while (t & 1) == 0:
            t >>= 1
            k += 1
        xk = x[k]
        q = q - 4 * xk * Lx[k] + 4 * L[k, k]
        x[k] = -xk
        for r in range(n):
            Lx[r] -= 2 * xk * L[r, k]
        if q < best:
            best = q
            best_i = i
    return best, best_i ^ (best_i >> 1)


def _min_quadratic_numba(L):
    L = np.ascontiguousarray(L, dtype=np.int64)
    q, code = _gray_quadratic(L)
    return int(q), _sides_from_gray(L.shape[0], int(code))


def _min_quadratic_numpy(L):
    L = np.asarray(L, dtype=np.float64)
    n = L.shape[0]
    total = 1 << max(n - 1, 0)
    best, best_i = None, 0
    for lo in range(0, total, _CHUNK):
        hi = min(total, lo + _CHUNK)
        x = _gray_block_sides(n, lo, hi).astype(np.float64)
        q = np.einsum("ij,ij->i", x @ L, x)
        k = int(np.argmin(q))
        if best is None or q[k] < best - 0.5:
            best, best_i = float(q[k]), lo + k
    return int(round(best)), _sides_from_gray(n, best_i ^ (best_i >> 1))


# ---------------------------------------------------------------------------
# correlation-clustering index of every labelling of a fixed graph
# (bit e of the labelling index set <=> edge e negative)


@njit
def _delta_table_loop(n, m, bptr, bnode, bedge):
    total = 1 << m
    out = np.zeros(total, np.int64)
    bsign = np.ones(len(bedge), np.int64)
    for idx in range(total):
        neg = 0
        for e in range(m):
            neg += (idx >> e) & 1
        for t in range(len(bedge)):
            bsign[t] = -1 if (idx >> bedge[t]) & 1 else 1
        ub = neg if neg < m - neg else m - neg
        c, _ = _rgs_search(n, bptr, bnode, bsign, ub + 1)
        out[idx] = c
    return out


def _delta_table_numba(n, u, v):
    bptr, bnode, bedge = _back_edges(n, u, v)
    return _delta_table_loop(n, len(u), bptr, bnode, bedge)


def _delta_table_numpy(n, u, v):
    m = len(u)
    rgs = restricted_growth_strings(n)
    same = (rgs[:, u] == rgs[:, v]).astype(np.float32)  # partitions x edges
    total = 1 << m
    out = np.empty(total, dtype=np.int64)
    chunk = max(1, min(total, (1 << 24) // max(len(rgs), 1)))
    for lo in range(0, total, chunk):
        idx = np.arange(lo, min(total, lo + chunk), dtype=np.int64)
        neg = ((idx[:, None] >> np.arange(m)) & 1).astype(np.float32)
        # positive edges violate when split, negative edges when together
        cost = (1.0 - neg) @ (1.0 - same).T + neg @ same.T
        out[lo : lo + len(idx)] = np.rint(cost.min(axis=1)).astype(np.int64)
    return out


# ---------------------------------------------------------------------------

KERNELS = {
    "min_partition_cost": (_min_partition_cost_numba, _min_partition_cost_numpy),
    "min_two_cluster": (_min_two_cluster_numba, _min_two_cluster_numpy),
    "min_quadratic": (_min_quadratic_numba, _min_quadratic_numpy),
    "delta_table": (_delta_table_numba, _delta_table_numpy),
}

_pick = 0 if USE_NUMBA else 1
min_partition_cost = KERNELS["min_partition_cost"][_pick]
min_two_cluster = KERNELS["min_two_cluster"][_pick]
min_quadratic = KERNELS["min_quadratic"][_pick]
delta_table = KERNELS["delta_table"][_pick]
