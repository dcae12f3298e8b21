"""Signed graphs, rooted spanning forests and tree path queries.

Nodes are dense integers ``0..n-1``; edges are identified by their position in
the edge list.  Every structure here is immutable once built.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import (
    ComponentMismatchError,
    DisconnectedGraphError,
    DuplicateEdgeError,
    InvalidSignError,
    NodeIndexError,
    SelfLoopError,
)


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SignedGraph:
    """Undirected simple graph with a +1/-1 label on every edge.

    ``adj_ptr``/``adj_nbr``/``adj_eid`` form a CSR adjacency; the neighbours of
    node ``i`` are listed in increasing edge-id order, so adjacency order is the
    order edges were given.
    """

    n: int
    u: np.ndarray
    v: np.ndarray
    sign: np.ndarray
    adj_ptr: np.ndarray = field(repr=False)
    adj_nbr: np.ndarray = field(repr=False)
    adj_eid: np.ndarray = field(repr=False)

    @property
    def m(self) -> int:
        return len(self.u)

    def __repr__(self) -> str:
        neg = int(np.count_nonzero(self.sign < 0))
        return f"SignedGraph(n={self.n}, m={self.m}, negative={neg})"

    @property
    def edges(self) -> list[tuple[int, int, int]]:
        return list(zip(self.u.tolist(), self.v.tolist(), self.sign.tolist()))

    def degree(self) -> np.ndarray:
        return np.diff(self.adj_ptr)

    def adjacency(self, i: int) -> list[tuple[int, int]]:
        """``(neighbour, edge id)`` pairs of node ``i``."""
        lo, hi = self.adj_ptr[i], self.adj_ptr[i + 1]
        return list(zip(self.adj_nbr[lo:hi].tolist(), self.adj_eid[lo:hi].tolist()))

    @cached_property
    def _pair_index(self) -> dict:
        return {
            (min(a, b), max(a, b)): e
            for e, (a, b) in enumerate(zip(self.u.tolist(), self.v.tolist()))
        }

    def edge_id(self, a: int, b: int) -> int:
        try:
            return self._pair_index[(min(a, b), max(a, b))]
        except KeyError:
            raise KeyError(f"no edge between {a} and {b}") from None

    def has_edge(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self._pair_index

    def other(self, e: int, a: int) -> int:
        return int(self.v[e]) if self.u[e] == a else int(self.u[e])

    def with_signs(self, signs) -> "SignedGraph":
        """Same structure, new labels (the adjacency arrays are shared)."""
        s = np.asarray(signs, dtype=np.int8).copy()
        if s.shape != (self.m,):
            raise ValueError(f"expected {self.m} signs, got shape {s.shape}")
        if not np.all((s == 1) | (s == -1)):
            raise InvalidSignError("signs must be +1 or -1")
        return SignedGraph(self.n, self.u, self.v, _frozen(s), self.adj_ptr, self.adj_nbr, self.adj_eid)

    def edge_subgraph(self, edge_ids) -> tuple["SignedGraph", np.ndarray, np.ndarray]:
        """Subgraph spanned by ``edge_ids`` on the nodes they touch.

        Returns ``(sub, nodes, edges)`` where ``nodes[k]`` / ``edges[k]`` are the
        original ids of local node / edge ``k``.  Local nodes keep their original
        relative order; local edges keep the order of ``edge_ids``.
        """
        edges = np.asarray(edge_ids, dtype=np.int64)
        nodes = np.unique(np.concatenate([self.u[edges], self.v[edges]]))
        local = np.full(self.n, -1, dtype=np.int64)
        local[nodes] = np.arange(len(nodes))
        sub = _assemble(len(nodes), local[self.u[edges]], local[self.v[edges]], self.sign[edges].copy())
        return sub, nodes, edges


def _assemble(n: int, u: np.ndarray, v: np.ndarray, sign: np.ndarray) -> SignedGraph:
    m = len(u)
    ends = np.concatenate([u, v])
    nbrs = np.concatenate([v, u])
    eids = np.concatenate([np.arange(m), np.arange(m)])
    order = np.lexsort((eids, ends))
    ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(ends, minlength=n), out=ptr[1:])
    return SignedGraph(
        n=int(n),
        u=_frozen(u.astype(np.int64)),
        v=_frozen(v.astype(np.int64)),
        sign=_frozen(sign.astype(np.int8)),
        adj_ptr=_frozen(ptr),
        adj_nbr=_frozen(nbrs[order].astype(np.int64)),
        adj_eid=_frozen(eids[order].astype(np.int64)),
    )


def build_graph(n: int, edges) -> SignedGraph:
    """Validate ``(u, v, sign)`` triples and build a :class:`SignedGraph`."""
    if n < 0:
        raise NodeIndexError(f"node count must be non-negative, got {n}")
    arr = np.asarray(edges, dtype=np.int64)
    if arr.size == 0:
        arr = arr.reshape(0, 3)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise ValueError("edges must be a sequence of (u, v, sign) triples")
    u, v, s = arr[:, 0], arr[:, 1], arr[:, 2]

    bad = np.flatnonzero((u < 0) | (u >= n) | (v < 0) | (v >= n))
    if bad.size:
        k = bad[0]
        raise NodeIndexError(f"edge {k} ({u[k]}, {v[k]}) has an endpoint outside 0..{n - 1}")
    bad = np.flatnonzero(u == v)
    if bad.size:
        raise SelfLoopError(f"edge {bad[0]} is a self-loop on node {u[bad[0]]}")
    bad = np.flatnonzero((s != 1) & (s != -1))
    if bad.size:
        raise InvalidSignError(f"edge {bad[0]} has sign {s[bad[0]]}; expected +1 or -1")
    lo, hi = np.minimum(u, v), np.maximum(u, v)
    key = lo * max(n, 1) + hi
    _, first, counts = np.unique(key, return_index=True, return_counts=True)
    if np.any(counts > 1):
        dup_key = key[first[np.argmax(counts > 1)]]
        where = np.flatnonzero(key == dup_key)
        raise DuplicateEdgeError(
            f"edges {where[0]} and {where[1]} both join {lo[where[0]]} and {hi[where[0]]}"
        )
    return _assemble(n, u.copy(), v.copy(), s.copy())


@dataclass(frozen=True, eq=False)
class Partition:
    """Cluster id per node, canonicalised to first-occurrence order."""

    labels: np.ndarray

    @classmethod
    def from_labels(cls, labels) -> "Partition":
        lab = np.asarray(labels, dtype=np.int64)
        _, first, inverse = np.unique(lab, return_index=True, return_inverse=True)
        rank = np.empty(len(first), dtype=np.int64)
        rank[np.argsort(first, kind="stable")] = np.arange(len(first))
        return cls(_frozen(rank[inverse]))

    @property
    def n_clusters(self) -> int:
        return int(self.labels.max()) + 1 if len(self.labels) else 0

    def blocks(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n_clusters)]
        for i, c in enumerate(self.labels.tolist()):
            out[c].append(i)
        return out


@dataclass(frozen=True, eq=False)
class TwoClustering:
    """Side (+1 or -1) per node; either side may be empty."""

    sides: np.ndarray

    @classmethod
    def from_sides(cls, sides) -> "TwoClustering":
        s = np.asarray(sides, dtype=np.int8).copy()
        if not np.all((s == 1) | (s == -1)):
            raise ValueError("sides must be +1 or -1")
        return cls(_frozen(s))

    def as_partition(self) -> Partition:
        return Partition.from_labels(self.sides)


@dataclass(frozen=True, eq=False)
class RootedSpanningForest:
    """Parent pointers plus depth and sign-parity to the root.

    ``parity[v]`` is the product of edge signs on the tree path from ``v`` to
    its root, so the sign product between two nodes of one tree is
    ``parity[i] * parity[j]``.  ``children`` lists are in attachment order.
    """

    graph: SignedGraph
    parent: np.ndarray
    parent_edge: np.ndarray
    root: np.ndarray
    depth: np.ndarray
    parity: np.ndarray
    order: np.ndarray  # parents precede children
    roots: tuple

    @property
    def n(self) -> int:
        return len(self.parent)

    @cached_property
    def tree_edges(self) -> np.ndarray:
        pe = self.parent_edge
        return np.sort(pe[pe >= 0])

    @cached_property
    def tree_mask(self) -> np.ndarray:
        mask = np.zeros(self.graph.m, dtype=bool)
        mask[self.tree_edges] = True
        return _frozen(mask)

    @cached_property
    def children(self) -> list[list[int]]:
        ch: list[list[int]] = [[] for _ in range(self.n)]
        for x in self.order.tolist():
            p = self.parent[x]
            if p >= 0:
                ch[p].append(x)
        return ch


def _forest_from_parents(g: SignedGraph, parent, parent_edge, order, roots) -> RootedSpanningForest:
    n = g.n
    depth = np.zeros(n, dtype=np.int64)
    parity = np.ones(n, dtype=np.int8)
    root = np.arange(n, dtype=np.int64)
    sign = g.sign
    for x in order:
        p = parent[x]
        if p >= 0:
            depth[x] = depth[p] + 1
            parity[x] = sign[parent_edge[x]] * parity[p]
            root[x] = root[p]
    return RootedSpanningForest(
        graph=g,
        parent=_frozen(np.asarray(parent, dtype=np.int64)),
        parent_edge=_frozen(np.asarray(parent_edge, dtype=np.int64)),
        root=_frozen(root),
        depth=_frozen(depth),
        parity=_frozen(parity),
        order=_frozen(np.asarray(order, dtype=np.int64)),
        roots=tuple(int(r) for r in roots),
    )


def _bfs(g: SignedGraph, roots: Sequence[int], allowed: Optional[np.ndarray] = None):
    n = g.n
    parent = np.full(n, -1, dtype=np.int64)
    parent_edge = np.full(n, -1, dtype=np.int64)
    seen = np.zeros(n, dtype=bool)
    ptr, nbr, eid = g.adj_ptr, g.adj_nbr, g.adj_eid
    order: list[int] = []
    used_roots: list[int] = []
    starts = list(roots) + list(range(n))
    for r in starts:
        if seen[r]:
            continue
        seen[r] = True
        used_roots.append(r)
        head = len(order)
        order.append(r)
        while head < len(order):
            x = order[head]
            head += 1
            for k in range(ptr[x], ptr[x + 1]):
                e = eid[k]
                if allowed is not None and not allowed[e]:
                    continue
                y = nbr[k]
                if not seen[y]:
                    seen[y] = True
                    parent[y] = x
                    parent_edge[y] = e
                    order.append(y)
    return parent, parent_edge, order, used_roots


def bfs_spanning_forest(g: SignedGraph, roots: Optional[Sequence[int]] = None) -> RootedSpanningForest:
    """Breadth-first spanning forest.

    Components are rooted at the given ``roots`` first, then at the smallest
    unvisited node.  Neighbours are scanned in adjacency order.
    """
    roots = [] if roots is None else [int(r) for r in roots]
    for r in roots:
        if not 0 <= r < g.n:
            raise NodeIndexError(f"root {r} out of range")
    parent, parent_edge, order, used = _bfs(g, roots)
    return _forest_from_parents(g, parent, parent_edge, order, used)


def forest_from_edges(g: SignedGraph, tree_edge_ids, roots: Optional[Sequence[int]] = None) -> RootedSpanningForest:
    """Orient a given acyclic edge set as a rooted forest (BFS over its edges)."""
    allowed = np.zeros(g.m, dtype=bool)
    allowed[np.asarray(tree_edge_ids, dtype=np.int64)] = True
    roots = [] if roots is None else [int(r) for r in roots]
    parent, parent_edge, order, used = _bfs(g, roots, allowed)
    t = _forest_from_parents(g, parent, parent_edge, order, used)
    if len(t.tree_edges) != int(allowed.sum()):
        raise ValueError("edge set contains a cycle")
    return t


def is_connected(g: SignedGraph) -> bool:
    return g.n <= 1 or connected_components(g).n_clusters == 1


def wilson_random_spanning_tree(g: SignedGraph, rng_seed=None, root: int = 0) -> RootedSpanningForest:
    """Uniformly random spanning tree by loop-erased random walks.

    Every spanning tree of ``g`` is equally likely whatever the root; the
    returned tree is oriented from ``root``.
    """
    if g.n == 0:
        return bfs_spanning_forest(g)
    if not is_connected(g):
        raise DisconnectedGraphError("random spanning tree needs a connected graph")
    rng = np.random.default_rng(rng_seed)
    n = g.n
    ptr, nbr, eid = g.adj_ptr, g.adj_nbr, g.adj_eid
    deg = np.diff(ptr)
    in_tree = np.zeros(n, dtype=bool)
    nxt = np.full(n, -1, dtype=np.int64)
    nxt_edge = np.full(n, -1, dtype=np.int64)
    in_tree[root] = True
    buf = rng.random(1024)
    pos = 0
    for start in range(n):
        x = start
        while not in_tree[x]:
            if pos == len(buf):
                buf = rng.random(1024)
                pos = 0
            k = ptr[x] + int(buf[pos] * deg[x])
            pos += 1
            nxt[x] = nbr[k]
            nxt_edge[x] = eid[k]
            x = nbr[k]
        x = start
        while not in_tree[x]:
            in_tree[x] = True
            x = nxt[x]
    chosen = nxt_edge[nxt_edge >= 0]
    return forest_from_edges(g, chosen, roots=[root])


def check_forest(g: SignedGraph, t: RootedSpanningForest) -> list[str]:
    """Return every violated :class:`RootedSpanningForest` invariant (empty if sound)."""
    problems = []
    n = g.n
    if t.n != n:
        return [f"forest has {t.n} nodes, graph has {n}"]
    for x in range(n):
        p, e = t.parent[x], t.parent_edge[x]
        if p < 0:
            if t.root[x] != x:
                problems.append(f"node {x} has no parent but root {t.root[x]}")
            if t.parity[x] != 1 or t.depth[x] != 0:
                problems.append(f"root {x} has parity {t.parity[x]} depth {t.depth[x]}")
            continue
        if {int(g.u[e]), int(g.v[e])} != {x, int(p)}:
            problems.append(f"parent edge {e} of node {x} does not join it to {p}")
            continue
        if t.parity[x] != g.sign[e] * t.parity[p]:
            problems.append(f"parity of {x} inconsistent with its parent")
        if t.depth[x] != t.depth[p] + 1:
            problems.append(f"depth of {x} inconsistent with its parent")
        if t.root[x] != t.root[p]:
            problems.append(f"root of {x} differs from its parent's")
    # acyclic: following parents must reach a root within n steps
    for x in range(n):
        y, steps = x, 0
        while t.parent[y] >= 0 and steps <= n:
            y, steps = t.parent[y], steps + 1
        if steps > n:
            problems.append(f"parent chain from {x} does not terminate")
            break
    comp = connected_components(g).labels
    if not problems:
        n_roots = int(np.sum(t.parent < 0))
        if n_roots != (comp.max() + 1 if n else 0):
            problems.append(f"{n_roots} roots for {comp.max() + 1} components")
        if np.any(comp[t.root] != comp):
            problems.append("a node is rooted outside its component")
    return problems


@dataclass(frozen=True)
class TreePath:
    i: int
    j: int
    nodes: tuple
    edges: tuple

    def __len__(self) -> int:
        return len(self.edges)


def tree_lca(t: RootedSpanningForest, i: int, j: int) -> int:
    if t.root[i] != t.root[j]:
        raise ComponentMismatchError(f"nodes {i} and {j} are in different trees")
    parent, depth = t.parent, t.depth
    while depth[i] > depth[j]:
        i = parent[i]
    while depth[j] > depth[i]:
        j = parent[j]
    while i != j:
        i, j = parent[i], parent[j]
    return int(i)


def tree_path_edges(t: RootedSpanningForest, i: int, j: int) -> list[int]:
    """Edge ids of the tree path from ``i`` to ``j`` (no component check)."""
    parent, pedge, depth = t.parent, t.parent_edge, t.depth
    up: list[int] = []
    down: list[int] = []
    while depth[i] > depth[j]:
        up.append(pedge[i])
        i = parent[i]
    while depth[j] > depth[i]:
        down.append(pedge[j])
        j = parent[j]
    while i != j:
        up.append(pedge[i])
        down.append(pedge[j])
        i, j = parent[i], parent[j]
    down.reverse()
    return up + down


def tree_path(t: RootedSpanningForest, i: int, j: int) -> TreePath:
    """The unique tree path between ``i`` and ``j``."""
    i, j = int(i), int(j)
    if t.root[i] != t.root[j]:
        raise ComponentMismatchError(f"nodes {i} and {j} are in different trees")
    edges = [int(e) for e in tree_path_edges(t, i, j)]
    nodes = [i]
    g = t.graph
    for e in edges:
        nodes.append(g.other(e, nodes[-1]))
    return TreePath(i, j, tuple(nodes), tuple(edges))


def path_sign_product(t: RootedSpanningForest, i: int, j: int) -> int:
    """Product of edge signs along the tree path between ``i`` and ``j``."""
    if t.root[i] != t.root[j]:
        raise ComponentMismatchError(f"nodes {i} and {j} are in different trees")
    return int(t.parity[i]) * int(t.parity[j])


EdgeFilter = Callable[[int, int, int, int], bool]


def connected_components(g: SignedGraph, edge_filter: "EdgeFilter | np.ndarray | None" = None) -> Partition:
    """Component labelling using only edges kept by ``edge_filter``.

    ``edge_filter`` is either a boolean mask over edge ids or a predicate
    ``(edge_id, u, v, sign) -> bool``.
    """
    if edge_filter is None:
        keep = None
    elif callable(edge_filter):
        keep = np.array(
            [bool(edge_filter(e, int(a), int(b), int(s))) for e, (a, b, s) in enumerate(zip(g.u, g.v, g.sign))],
            dtype=bool,
        )
    else:
        keep = np.asarray(edge_filter, dtype=bool)
    parent, _, order, _ = _bfs(g, [], keep)
    labels = np.empty(g.n, dtype=np.int64)
    c = -1
    for x in order:
        if parent[x] < 0:
            c += 1
        labels[x] = c if parent[x] < 0 else labels[parent[x]]
    return Partition(_frozen(labels))
