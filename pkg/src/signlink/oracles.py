"""Exact correlation-clustering oracles and balance tests.

``delta_exact`` is the minimum, over all partitions of the nodes, of the number
of negative within-cluster edges plus positive between-cluster edges;
``delta2_exact`` is the same minimum over partitions with at most two clusters.
Both are exponential-time enumerations guarded by a node-count limit.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from . import kernels
from .errors import SizeLimitError
from .graph import (
    Partition,
    SignedGraph,
    TwoClustering,
    bfs_spanning_forest,
    connected_components,
    tree_lca,
)

DELTA_LIMIT = 12
DELTA2_LIMIT = 24


@dataclass(frozen=True, eq=False)
class ClusteringCost:
    cost: int
    witness: Union[Partition, TwoClustering]


@dataclass(frozen=True)
class BadCycleWitness:
    """Simple cycle ``nodes[0] -> ... -> nodes[-1] -> nodes[0]``.

    ``edges[k]`` joins ``nodes[k]`` and ``nodes[(k + 1) % len(nodes)]``.
    """

    nodes: tuple
    edges: tuple
    negative_count: int


def _labels_of(f) -> np.ndarray:
    if isinstance(f, TwoClustering):
        return np.asarray(f.sides)
    if isinstance(f, Partition):
        return np.asarray(f.labels)
    return np.asarray(f)


def partition_cost(g: SignedGraph, f, edge_subset=None) -> int:
    """Number of sign violations of ``f`` over ``edge_subset`` (default: all edges).

    ``f`` may be a :class:`Partition`, a :class:`TwoClustering` or a raw label
    array.
    """
    lab = _labels_of(f)
    if edge_subset is None:
        u, v, s = g.u, g.v, g.sign
    else:
        ids = np.asarray(sorted(set(int(e) for e in edge_subset)), dtype=np.int64)
        u, v, s = g.u[ids], g.v[ids], g.sign[ids]
    same = lab[u] == lab[v]
    return int(np.count_nonzero(same == (s < 0)))


def _check_limit(n: int, limit: int, what: str) -> None:
    if n > limit:
        raise SizeLimitError(f"{what} enumerates partitions of {n} nodes; limit is {limit}")


def erm_partition(g: SignedGraph, training_edge_ids, limit: int = DELTA_LIMIT) -> ClusteringCost:
    """Partition minimising the violation count on the training edges only.

    Ties go to the first partition in lexicographic restricted-growth order,
    so the result is reproducible.
    """
    _check_limit(g.n, limit, "erm_partition")
    ids = np.asarray(sorted(set(int(e) for e in training_edge_ids)), dtype=np.int64)
    cost, labels = kernels.min_partition_cost(g.n, g.u[ids], g.v[ids], g.sign[ids])
    return ClusteringCost(cost, Partition.from_labels(labels))


def delta_exact(g: SignedGraph, limit: int = DELTA_LIMIT) -> ClusteringCost:
    """Correlation-clustering index with an optimal partition."""
    _check_limit(g.n, limit, "delta_exact")
    cost, labels = kernels.min_partition_cost(g.n, g.u, g.v, g.sign)
    return ClusteringCost(cost, Partition.from_labels(labels))


def delta2_exact(g: SignedGraph, limit: int = DELTA2_LIMIT) -> ClusteringCost:
    """Two-cluster index with an optimal side assignment (empty side allowed)."""
    _check_limit(g.n, limit, "delta2_exact")
    cost, sides = kernels.min_two_cluster(g.n, g.u, g.v, g.sign)
    return ClusteringCost(cost, TwoClustering.from_sides(sides))


def classify_by_partition(f, edge) -> int:
    """+1 if both endpoints of ``edge = (i, j)`` share a cluster, else -1."""
    lab = _labels_of(f)
    i, j = edge[0], edge[1]
    return 1 if lab[i] == lab[j] else -1


def _walk(g: SignedGraph, nodes: list, edges: list) -> BadCycleWitness:
    neg = int(np.count_nonzero(g.sign[np.asarray(edges, dtype=np.int64)] < 0))
    return BadCycleWitness(tuple(int(x) for x in nodes), tuple(int(e) for e in edges), neg)


def is_two_balanced(g: SignedGraph) -> tuple[bool, Optional[BadCycleWitness]]:
    """Parity test for a zero-cost two-clustering.

    On failure the witness is a simple cycle with an odd number of negative
    edges: a conflicting non-tree edge closed by the two tree paths to the
    lowest common ancestor of its endpoints.
    """
    t = bfs_spanning_forest(g)
    conflict = np.flatnonzero(
        ~t.tree_mask & (t.parity[g.u] * t.parity[g.v] != g.sign)
    )
    if conflict.size == 0:
        return True, None
    e = int(conflict[0])
    a, b = int(g.u[e]), int(g.v[e])
    top = tree_lca(t, a, b)
    up_a, x = [a], a
    edges_a = []
    while x != top:
        edges_a.append(int(t.parent_edge[x]))
        x = int(t.parent[x])
        up_a.append(x)
    up_b, y = [b], b
    edges_b = []
    while y != top:
        edges_b.append(int(t.parent_edge[y]))
        y = int(t.parent[y])
        up_b.append(y)
    # a -> ... -> top -> ... -> b, then the conflicting edge back to a
    nodes = up_a + up_b[-2::-1]
    edges = edges_a + edges_b[::-1] + [e]
    return False, _walk(g, nodes, edges)


def is_weakly_balanced(g: SignedGraph) -> tuple[bool, Optional[BadCycleWitness]]:
    """Zero correlation-clustering index test.

    The index is zero exactly when no negative edge joins two nodes of the same
    component of the positive subgraph.  On failure the witness is that
    negative edge closed by a shortest positive path (exactly one negative edge).
    """
    comp = connected_components(g, g.sign > 0).labels
    bad = np.flatnonzero((g.sign < 0) & (comp[g.u] == comp[g.v]))
    if bad.size == 0:
        return True, None
    e = int(bad[0])
    a, b = int(g.u[e]), int(g.v[e])
    prev = {b: (-1, -1)}
    queue = deque([b])
    while queue:
        x = queue.popleft()
        if x == a:
            break
        for y, f in g.adjacency(x):
            if g.sign[f] > 0 and y not in prev:
                prev[y] = (x, f)
                queue.append(y)
    nodes, edges = [a], []
    x = a
    while x != b:
        p, f = prev[x]
        edges.append(f)
        nodes.append(p)
        x = p
    # a -> ... -> b along positive edges, then the negative edge back to a
    edges.append(e)
    return False, _walk(g, nodes, edges)
