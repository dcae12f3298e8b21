"""Spanning-tree active learner for randomly perturbed balanced labelings.

The learner queries the edges of one spanning tree and predicts every other
edge by the sign product along its tree path.  Tree quality is measured by
average stretch; the mistake count is bounded deterministically by the flips
on the tree paths.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import DisconnectedGraphError, ParameterError
from .graph import (
    RootedSpanningForest,
    SignedGraph,
    bfs_spanning_forest,
    is_connected,
    tree_lca,
    wilson_random_spanning_tree,
)

TREE_STRATEGIES = ("bfs", "wilson", "best-of-k")


def path_lengths(t: RootedSpanningForest, edge_ids=None) -> np.ndarray:
    """Tree-path length between the endpoints of each edge in ``edge_ids``."""
    g = t.graph
    ids = np.arange(g.m) if edge_ids is None else np.asarray(edge_ids, dtype=np.int64)
    out = np.empty(len(ids), dtype=np.int64)
    d = t.depth
    for k, e in enumerate(ids.tolist()):
        a, b = int(g.u[e]), int(g.v[e])
        out[k] = d[a] + d[b] - 2 * d[tree_lca(t, a, b)]
    return out


def average_stretch(t: RootedSpanningForest, g: Optional[SignedGraph] = None) -> Fraction:
    """Mean over all edges of the tree-path length that replaces the edge.

    Tree edges count 1; the value is exact.
    """
    g = t.graph if g is None else g
    if g.m == 0:
        return Fraction(0)
    non_tree = np.flatnonzero(~t.tree_mask)
    total = len(t.tree_edges) + int(path_lengths(t, non_tree).sum())
    return Fraction(total, g.m)


def spanning_tree(g: SignedGraph, strategy="bfs", seed=None, k: int = 16) -> RootedSpanningForest:
    """Build a spanning tree of a connected graph.

    ``best-of-k`` returns the lowest-average-stretch tree among the BFS tree
    and ``k`` uniformly random trees seeded from ``seed``.  ``strategy`` may
    also be a callable ``(g, rng) -> RootedSpanningForest``.
    """
    if callable(strategy):
        return strategy(g, np.random.default_rng(seed))
    if strategy == "bfs":
        return bfs_spanning_forest(g, roots=[0] if g.n else None)
    if strategy == "wilson":
        return wilson_random_spanning_tree(g, seed)
    if strategy == "best-of-k":
        if k < 1:
            raise ParameterError("best-of-k needs k >= 1")
        best = bfs_spanning_forest(g, roots=[0] if g.n else None)
        best_s = average_stretch(best, g)
        seeds = np.random.SeedSequence(seed).spawn(k)
        for ss in seeds:
            t = wilson_random_spanning_tree(g, np.random.default_rng(ss))
            s = average_stretch(t, g)
            if s < best_s:
                best, best_s = t, s
        return best
    raise ParameterError(f"unknown tree strategy {strategy!r}; expected one of {TREE_STRATEGIES}")


@dataclass(frozen=True, eq=False)
class TreeLearnerRun:
    tree: RootedSpanningForest
    query: np.ndarray  # tree edge ids
    test: np.ndarray  # non-tree edge ids
    predicted: np.ndarray  # aligned with ``test``
    mistakes: Optional[int]
    flips: Optional[np.ndarray]


def tree_learner_run(
    g: SignedGraph,
    labels=None,
    tree_strategy="bfs",
    seed=None,
    k: int = 16,
    flips=None,
    tree: Optional[RootedSpanningForest] = None,
) -> TreeLearnerRun:
    """Query a spanning tree and predict the rest by path sign products.

    ``labels`` defaults to the graph's own signs; only the tree entries are
    read for prediction, the rest are used to count mistakes.
    """
    if not is_connected(g):
        raise DisconnectedGraphError("the tree learner needs a connected graph")
    truth = np.asarray(g.sign if labels is None else labels, dtype=np.int8)
    if tree is None:
        tree = spanning_tree(g, tree_strategy, seed, k)
    # parity computed from the queried labels only
    h = g.with_signs(np.where(tree.tree_mask, truth, 1))
    parity = _parity(tree, h)
    test = np.flatnonzero(~tree.tree_mask)
    pred = (parity[g.u[test]] * parity[g.v[test]]).astype(np.int8)
    mistakes = int(np.count_nonzero(pred != truth[test]))
    fl = None if flips is None else np.asarray(sorted(set(int(e) for e in flips)), dtype=np.int64)
    return TreeLearnerRun(tree, tree.tree_edges, test, pred, mistakes, fl)


def _parity(t: RootedSpanningForest, h: SignedGraph) -> np.ndarray:
    parity = np.ones(t.n, dtype=np.int8)
    for x in t.order.tolist():
        p = t.parent[x]
        if p >= 0:
            parity[x] = h.sign[t.parent_edge[x]] * parity[p]
    return parity


def flip_bound_rhs(t: RootedSpanningForest, g: Optional[SignedGraph] = None, flips=()) -> int:
    """Number of flips plus, for each non-tree edge, the flips on its tree path."""
    g = t.graph if g is None else g
    flipped = np.zeros(g.m, dtype=bool)
    flipped[np.asarray(list(flips), dtype=np.int64)] = True
    # cnt[x]: flipped tree edges between x and its root
    cnt = np.zeros(g.n, dtype=np.int64)
    for x in t.order.tolist():
        p = t.parent[x]
        if p >= 0:
            cnt[x] = cnt[p] + int(flipped[t.parent_edge[x]])
    total = int(flipped.sum())
    for e in np.flatnonzero(~t.tree_mask).tolist():
        a, b = int(g.u[e]), int(g.v[e])
        total += int(cnt[a] + cnt[b] - 2 * cnt[tree_lca(t, a, b)])
    return total


def expected_mistake_bound(t: RootedSpanningForest, p: float, g: Optional[SignedGraph] = None) -> float:
    """``p * (|E| + sum of tree-path lengths of non-tree edges)`` for independent flips at rate p."""
    g = t.graph if g is None else g
    non_tree = np.flatnonzero(~t.tree_mask)
    return p * (g.m + int(path_lengths(t, non_tree).sum()))
