"""Circuit-covering active learners.

The selection phase builds a *circuit cover*: every unqueried (test) edge is
the designated edge of exactly one circuit whose remaining edges are all
queried.  The prediction phase multiplies the queried signs along each
circuit.  A wrong label on an edge can only spoil the circuits that contain
it, so the per-edge *load* bounds the damage.

``scccc`` covers a connected graph using one spanning tree, cut into pieces by
:func:`tree_partition`, with the edges leaving each piece grouped into
sheaves by :func:`edge_partition`.  ``cccc`` runs ``scccc`` on batches of at
most ``rho * |V|`` edges.  Selection never reads labels.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Mapping, Optional

import numpy as np

from .errors import DisconnectedGraphError, MissingLabelError, ParameterError
from .graph import RootedSpanningForest, SignedGraph, connected_components, is_connected, tree_lca, tree_path_edges
from .treepredict import spanning_tree

TREE, SHEAF = 0, 1


def _default_check() -> bool:
    return os.environ.get("SIGNLINK_CHECK", "").strip().lower() not in ("", "0", "false", "no")


@dataclass(frozen=True)
class Circuit:
    """A test edge plus the queried path that closes it into a cycle.

    ``path`` runs from ``start`` (an endpoint of ``test_edge``) to the other
    endpoint.
    """

    test_edge: int
    path: tuple
    start: int
    epoch: int
    kind: int


@dataclass(frozen=True)
class Sheaf:
    edges: tuple
    queried: int


@dataclass(eq=False)
class CircuitCover:
    """Query/test split of the edge set together with the circuits and loads.

    Circuit paths are stored in CSR form: the path of circuit ``k`` is
    ``path_edges[path_ptr[k]:path_ptr[k + 1]]``.
    """

    n: int
    m: int
    test_edges: np.ndarray
    path_ptr: np.ndarray
    path_edges: np.ndarray
    path_start: np.ndarray
    circuit_epoch: np.ndarray
    circuit_kind: np.ndarray
    query: np.ndarray
    test: np.ndarray
    load: np.ndarray
    sheaves: list
    epoch_nodes: list  # node ids removed from the tree in each epoch
    epoch_run: np.ndarray  # which scccc run each epoch belongs to
    spanning_queries: int  # queried spanning-forest edges
    params: dict = field(default_factory=dict)
    audit: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.test_edges)

    def circuit(self, k: int) -> Circuit:
        lo, hi = self.path_ptr[k], self.path_ptr[k + 1]
        return Circuit(
            int(self.test_edges[k]),
            tuple(int(e) for e in self.path_edges[lo:hi]),
            int(self.path_start[k]),
            int(self.circuit_epoch[k]),
            int(self.circuit_kind[k]),
        )

    def circuits(self):
        for k in range(len(self)):
            yield self.circuit(k)


# ---------------------------------------------------------------------------
# tree views


class _TreeIndex:
    """Pre/post-order numbering of a rooted forest plus adjacency ranks."""

    def __init__(self, t: RootedSpanningForest):
        g = t.graph
        n = t.n
        children = t.children
        pre: list[int] = []
        post: list[int] = []
        tin = np.zeros(n, dtype=np.int64)
        tout = np.zeros(n, dtype=np.int64)
        for r in t.roots:
            stack = [(r, 0)]
            while stack:
                x, k = stack[-1]
                if k == 0:
                    tin[x] = len(pre)
                    pre.append(x)
                if k < len(children[x]):
                    stack[-1] = (x, k + 1)
                    stack.append((children[x][k], 0))
                else:
                    stack.pop()
                    tout[x] = len(pre)
                    post.append(x)
        self.pre = np.asarray(pre, dtype=np.int64)
        self.post = post
        self.tin = tin
        self.tout = tout
        owner = np.repeat(np.arange(n), np.diff(g.adj_ptr))
        slot_rank = np.arange(len(g.adj_eid)) - g.adj_ptr[owner]
        at_u = g.u[g.adj_eid] == owner
        self.rank_u = np.zeros(g.m, dtype=np.int64)
        self.rank_v = np.zeros(g.m, dtype=np.int64)
        self.rank_u[g.adj_eid[at_u]] = slot_rank[at_u]
        self.rank_v[g.adj_eid[~at_u]] = slot_rank[~at_u]
        self.max_deg = int(np.diff(g.adj_ptr).max()) if n else 0

    def rank_at(self, g: SignedGraph, e: int, x: int) -> int:
        return int(self.rank_u[e] if g.u[e] == x else self.rank_v[e])


@dataclass(eq=False)
class TreeView:
    """The part of a rooted spanning tree still alive during a cover run.

    Whole subtrees are removed, so the alive part is again a tree containing
    ``root``; ``T_v`` below means the alive descendants of ``v``.
    """

    tree: RootedSpanningForest
    alive: np.ndarray
    root: int
    _index: Optional[_TreeIndex] = None

    @classmethod
    def whole(cls, t: RootedSpanningForest, root: Optional[int] = None) -> "TreeView":
        root = t.roots[0] if root is None else root
        if t.root[root] != root:
            raise ParameterError(f"node {root} is not a root of the tree; re-root the tree instead")
        alive = t.root == t.root[root]
        return cls(t, alive.copy(), int(root))

    @property
    def index(self) -> _TreeIndex:
        if self._index is None:
            self._index = _TreeIndex(self.tree)
        return self._index

    def subtree_nodes(self, v: int) -> np.ndarray:
        idx = self.index
        nodes = idx.pre[idx.tin[v] : idx.tout[v]]
        return nodes[self.alive[nodes]]

    def subtree_mask(self, v: int) -> np.ndarray:
        mask = np.zeros(self.tree.n, dtype=bool)
        mask[self.subtree_nodes(v)] = True
        return mask

    def live_nontree_mask(self) -> np.ndarray:
        g = self.tree.graph
        return ~self.tree.tree_mask & self.alive[g.u] & self.alive[g.v]


def cut_edges(view: TreeView, v: int) -> np.ndarray:
    """Edge ids of ``E_G(T_v, T)``: live non-tree edges leaving ``T_v``."""
    g = view.tree.graph
    inside = view.subtree_mask(v)
    live = view.live_nontree_mask()
    return np.flatnonzero(live & (inside[g.u] != inside[g.v]))


def tree_partition(view: TreeView, g: Optional[SignedGraph] = None, theta: float = 1) -> int:
    """Root ``j`` of the first subtree, in depth-first post-order, cut by at least ``theta`` edges.

    A record ``R_x`` of the edges leaving ``T_x`` is built when ``x`` is left
    for the last time: its own live non-tree edges combined with the
    children's records, edges between two parts of ``T_x`` cancelling out.
    The root is returned when no other node reaches ``theta``.
    """
    t = view.tree
    g = t.graph if g is None else g
    alive, tree_mask = view.alive, t.tree_mask
    children = t.children
    records: dict[int, set] = {}
    stack = [(view.root, 0)]
    while stack:
        x, k = stack[-1]
        kids = children[x]
        while k < len(kids) and not alive[kids[k]]:
            k += 1
        if k < len(kids):
            stack[-1] = (x, k + 1)
            stack.append((kids[k], 0))
            continue
        stack.pop()
        rec = {e for y, e in g.adjacency(x) if not tree_mask[e] and alive[y]}
        for c in kids:
            if alive[c]:
                rec ^= records.pop(c)
        if len(rec) >= theta or x == view.root:
            return int(x)
        records[x] = rec
    raise AssertionError("unreachable: the root always stops the visit")


def _sheaf_bounds(count: int, rho: float) -> list[tuple[int, int]]:
    size = math.ceil(rho) + 1
    if count == 0:
        return []
    full = count // size
    if full == 0:
        return [(0, count)]
    bounds = [(k * size, (k + 1) * size) for k in range(full)]
    bounds[-1] = (bounds[-1][0], count)  # remainder joins the last sheaf
    return bounds


def _order_cut(view: TreeView, g: SignedGraph, inside: np.ndarray, edges) -> list[tuple[int, int, int]]:
    """``(edge, inside endpoint, outside endpoint)`` ordered by first visit of the outside endpoint."""
    idx = view.index
    items = []
    for e in edges:
        a, b = int(g.u[e]), int(g.v[e])
        i, j = (a, b) if inside[a] else (b, a)
        items.append((int(idx.tin[j]), idx.rank_at(g, e, j), int(e), i, j))
    items.sort()
    return [(e, i, j) for _, _, e, i, j in items]


def edge_partition(
    view: TreeView,
    q: int,
    g: Optional[SignedGraph] = None,
    rho: float = 1,
    pick: str = "first",
    rng=None,
) -> list[Sheaf]:
    """Split ``E_G(T_q, T)`` into sheaves of ``ceil(rho) + 1`` consecutive edges.

    Edges are ordered by the depth-first visit of ``T \\ T_q`` from the root
    (first visit of the outside endpoint; ties by adjacency order at that
    node).  A short remainder is merged into the last sheaf; a cut smaller
    than one sheaf forms a single undersized sheaf.  One edge per sheaf is
    designated for querying: the first, or a uniformly random one with
    ``pick="random"``.
    """
    t = view.tree
    g = t.graph if g is None else g
    if q == view.root:
        return []
    inside = view.subtree_mask(q)
    ordered = _order_cut(view, g, inside, cut_edges(view, q))
    return _make_sheaves([e for e, _, _ in ordered], rho, pick, rng)


def _make_sheaves(edges: list, rho: float, pick: str, rng) -> list[Sheaf]:
    out = []
    for lo, hi in _sheaf_bounds(len(edges), rho):
        members = tuple(edges[lo:hi])
        if pick == "first":
            k = 0
        elif pick == "random":
            k = int(rng.integers(len(members)))
        else:
            raise ParameterError(f"unknown sheaf pick strategy {pick!r}")
        out.append(Sheaf(members, members[k]))
    return out


class _Fenwick:
    def __init__(self, values):
        self.n = len(values)
        self.tree = [0] * (self.n + 1)
        for i, x in enumerate(values):
            self.add(i, int(x))

    def add(self, i: int, delta: int) -> None:
        i += 1
        tree = self.tree
        while i <= self.n:
            tree[i] += delta
            i += i & (-i)

    def prefix(self, i: int) -> int:
        s = 0
        tree = self.tree
        while i > 0:
            s += tree[i]
            i -= i & (-i)
        return s

    def range(self, lo: int, hi: int) -> int:
        return self.prefix(hi) - self.prefix(lo)


class CoverInvariantError(AssertionError):
    pass


# running totals of audited subtree splits, for test reporting
AUDIT_TOTALS = {"tree_partition_calls": 0, "tree_partition_failures": 0}


def _audit_partition(view: TreeView, g: SignedGraph, theta: float, j: int, audit: dict) -> None:
    """Recompute every cut inside ``T_j`` from scratch and check the partition contract."""
    audit["tree_partition_calls"] = audit.get("tree_partition_calls", 0) + 1
    AUDIT_TOTALS["tree_partition_calls"] += 1
    literal = tree_partition(view, g, theta)
    live = view.live_nontree_mask()
    u, v = g.u, g.v
    problems = []
    if literal != j:
        problems.append(f"record-propagation visit returned {literal}, fast path {j}")
    for x in view.subtree_nodes(j).tolist():
        inside = view.subtree_mask(x)
        size = int(np.count_nonzero(live & (inside[u] != inside[v])))
        if x == j:
            if j != view.root and size < theta:
                problems.append(f"returned subtree {j} is cut by {size} < theta={theta} edges")
        elif size > theta:
            problems.append(f"node {x} inside T_{j} is cut by {size} > theta={theta} edges")
    if problems:
        audit["tree_partition_failures"] = audit.get("tree_partition_failures", 0) + 1
        AUDIT_TOTALS["tree_partition_failures"] += 1
        raise CoverInvariantError("; ".join(problems))


class _Builder:
    """Accumulates circuits in global edge/node ids across scccc runs."""

    def __init__(self, n: int, m: int):
        self.n, self.m = n, m
        self.test_edges: list[int] = []
        self.paths: list[list[int]] = []
        self.starts: list[int] = []
        self.epochs: list[int] = []
        self.kinds: list[int] = []
        self.query: list[int] = []
        self.sheaves: list[Sheaf] = []
        self.epoch_nodes: list[np.ndarray] = []
        self.epoch_run: list[int] = []
        self.spanning = 0
        self.runs = 0
        self.audit: dict = {}

    def finish(self, params: dict) -> CircuitCover:
        lengths = np.fromiter((len(p) for p in self.paths), dtype=np.int64, count=len(self.paths))
        ptr = np.zeros(len(self.paths) + 1, dtype=np.int64)
        np.cumsum(lengths, out=ptr[1:])
        flat = np.fromiter((e for p in self.paths for e in p), dtype=np.int64, count=int(ptr[-1]))
        tests = np.asarray(self.test_edges, dtype=np.int64)
        load = np.bincount(flat, minlength=self.m) + np.bincount(tests, minlength=self.m)
        return CircuitCover(
            n=self.n,
            m=self.m,
            test_edges=tests,
            path_ptr=ptr,
            path_edges=flat,
            path_start=np.asarray(self.starts, dtype=np.int64),
            circuit_epoch=np.asarray(self.epochs, dtype=np.int64),
            circuit_kind=np.asarray(self.kinds, dtype=np.int8),
            query=np.sort(np.asarray(self.query, dtype=np.int64)),
            test=np.sort(tests),
            load=load.astype(np.int64),
            sheaves=self.sheaves,
            epoch_nodes=self.epoch_nodes,
            epoch_run=np.asarray(self.epoch_run, dtype=np.int64),
            spanning_queries=self.spanning,
            params=params,
            audit=self.audit,
        )


def _scccc_run(
    g: SignedGraph,
    t: RootedSpanningForest,
    rho: float,
    theta: float,
    pick: str,
    rng,
    check: bool,
    out: _Builder,
    nodes: Optional[np.ndarray] = None,
    edges: Optional[np.ndarray] = None,
) -> None:
    """One scccc pass over connected ``g`` with tree ``t``; results go to ``out``.

    ``nodes``/``edges`` map local ids of ``g`` to the ids used in ``out``.
    """
    nmap = (lambda x: x) if nodes is None else (lambda x: int(nodes[x]))
    emap = (lambda e: e) if edges is None else (lambda e: int(edges[e]))
    run = out.runs
    out.runs += 1

    view = TreeView.whole(t)
    idx = view.index
    tree_mask = t.tree_mask
    alive = view.alive
    u, v = g.u, g.v
    ptr, nbr, eid = g.adj_ptr, g.adj_nbr, g.adj_eid

    for e in t.tree_edges.tolist():
        out.query.append(emap(e))
    out.spanning += len(t.tree_edges)

    # w[x] = live non-tree degree of x - 2 * (#live non-tree edges whose LCA is x);
    # the cut size of T_x is the sum of w over T_x.
    non_tree = np.flatnonzero(~tree_mask)
    lca = np.empty(g.m, dtype=np.int64)
    w = np.zeros(g.n, dtype=np.int64)
    for e in non_tree.tolist():
        a, b = int(u[e]), int(v[e])
        c = tree_lca(t, a, b)
        lca[e] = c
        w[a] += 1
        w[b] += 1
        w[c] -= 2
    fen = _Fenwick(w[idx.pre])

    post = idx.post
    p = 0
    root = view.root
    while True:
        while True:
            x = post[p]
            if alive[x] and (x == root or fen.range(idx.tin[x], idx.tout[x]) >= theta):
                break
            p += 1
        j = x
        if check:
            _audit_partition(view, g, theta, j, out.audit)
        epoch = len(out.epoch_nodes)
        members = view.subtree_nodes(j)
        inside = np.zeros(g.n, dtype=bool)
        inside[members] = True

        cut = []
        for a in members.tolist():
            for s in range(ptr[a], ptr[a + 1]):
                e = int(eid[s])
                b = int(nbr[s])
                if tree_mask[e] or not alive[b]:
                    continue
                if inside[b]:
                    if a == u[e]:  # each internal edge once
                        out.test_edges.append(emap(e))
                        out.paths.append([emap(f) for f in tree_path_edges(t, a, b)])
                        out.starts.append(nmap(a))
                        out.epochs.append(epoch)
                        out.kinds.append(TREE)
                else:
                    cut.append(e)

        if cut:
            ordered = _order_cut(view, g, inside, cut)
            ends = {e: (i, o) for e, i, o in ordered}
            for sh in _make_sheaves([e for e, _, _ in ordered], rho, pick, rng):
                qi, qo = ends[sh.queried]
                out.query.append(emap(sh.queried))
                out.sheaves.append(Sheaf(tuple(emap(e) for e in sh.edges), emap(sh.queried)))
                for e in sh.edges:
                    if e == sh.queried:
                        continue
                    ii, oo = ends[e]
                    path = tree_path_edges(t, ii, qi) + [sh.queried] + tree_path_edges(t, qo, oo)
                    out.test_edges.append(emap(e))
                    out.paths.append([emap(f) for f in path])
                    out.starts.append(nmap(ii))
                    out.epochs.append(epoch)
                    out.kinds.append(SHEAF)
            for e in cut:
                a, b = int(u[e]), int(v[e])
                outside = b if inside[a] else a
                fen.add(int(idx.tin[outside]), -1)
                fen.add(int(idx.tin[lca[e]]), 2)
                w[outside] -= 1
                w[lca[e]] += 2

        for a in members.tolist():
            if w[a]:
                fen.add(int(idx.tin[a]), -int(w[a]))
                w[a] = 0
        alive[members] = False
        out.epoch_nodes.append(np.asarray([nmap(a) for a in members.tolist()], dtype=np.int64))
        out.epoch_run.append(run)
        if j == root:
            break
        p += 1


def _draw_tree(g: SignedGraph, strategy, rng) -> RootedSpanningForest:
    # best-of-k seeds its own trees from an integer
    if strategy == "best-of-k":
        return spanning_tree(g, strategy, int(rng.integers(2**63)))
    return spanning_tree(g, strategy, rng)


def default_theta(g: SignedGraph) -> int:
    """``ceil(sqrt(|E| - |V| + 1))``, at least 1."""
    return max(1, math.ceil(math.sqrt(max(g.m - g.n + 1, 0))))


def scccc(
    g: SignedGraph,
    rho: float,
    theta: Optional[float] = None,
    tree_strategy="bfs",
    pick: str = "first",
    seed=None,
    check: Optional[bool] = None,
    tree: Optional[RootedSpanningForest] = None,
) -> CircuitCover:
    """Simplified constrained circuit covering of a connected graph.

    Queries a spanning tree, then repeatedly detaches a subtree ``T_q`` with
    :func:`tree_partition`: non-tree edges inside ``T_q`` are tested against
    their tree path, and the edges leaving ``T_q`` are grouped into sheaves,
    each tested against its sheaf's queried edge.  The randomised variant is
    ``tree_strategy="wilson", pick="random"``.  ``check`` re-verifies every
    subtree split from scratch.
    """
    if rho <= 0:
        raise ParameterError(f"rho must be positive, got {rho}")
    if g.n and not is_connected(g):
        raise DisconnectedGraphError("scccc needs a connected graph; use cccc or split components")
    theta = default_theta(g) if theta is None else theta
    if theta < 1:
        raise ParameterError(f"theta must be at least 1, got {theta}")
    check = _default_check() if check is None else check
    rng = np.random.default_rng(seed)
    if tree is None:
        tree = _draw_tree(g, tree_strategy, rng)
    out = _Builder(g.n, g.m)
    if g.n:
        _scccc_run(g, tree, rho, theta, pick, rng, check, out)
    strategy = tree_strategy if isinstance(tree_strategy, str) else "custom"
    return out.finish({"algorithm": "scccc", "rho": rho, "theta": theta, "tree": strategy, "pick": pick, "seed": seed})


def cccc(
    g: SignedGraph,
    rho: float,
    pick: str = "first",
    tree_strategy="bfs",
    edge_order: str = "stored",
    seed=None,
    check: Optional[bool] = None,
) -> CircuitCover:
    """Constrained circuit covering: scccc on batches of ``min(|E|, rho |V|)`` edges.

    Batches are taken in stored edge order (``edge_order="shuffle"`` draws a
    seeded permutation).  Each connected component of a batch is covered by
    ``scccc(rho, sqrt(batch size))``.  Requires ``3 < rho <= |E| / |V|``.
    """
    if g.m == 0:
        raise ParameterError("cccc needs at least one edge")
    if not (3 < rho <= g.m / g.n):
        raise ParameterError(f"rho must satisfy 3 < rho <= |E|/|V| = {g.m / g.n:.4g}, got {rho}")
    check = _default_check() if check is None else check
    rng = np.random.default_rng(seed)
    if edge_order == "stored":
        order = np.arange(g.m)
    elif edge_order == "shuffle":
        order = rng.permutation(g.m)
    else:
        raise ParameterError(f"unknown edge order {edge_order!r}")
    batch = int(math.floor(rho * g.n))
    out = _Builder(g.n, g.m)
    for lo in range(0, g.m, batch):
        chunk = order[lo : lo + batch]
        theta = math.sqrt(len(chunk))
        sub, sub_nodes, sub_edges = g.edge_subgraph(chunk)
        comp = connected_components(sub).labels
        owner = comp[sub.u]
        for c in range(int(comp.max()) + 1 if sub.n else 0):
            local = np.flatnonzero(owner == c)
            part, part_nodes, part_edges = sub.edge_subgraph(local)
            tree = _draw_tree(part, tree_strategy, rng)
            _scccc_run(
                part, tree, rho, theta, pick, rng, check, out,
                nodes=sub_nodes[part_nodes], edges=sub_edges[part_edges],
            )
    strategy = tree_strategy if isinstance(tree_strategy, str) else "custom"
    return out.finish({"algorithm": "cccc", "rho": rho, "tree": strategy, "pick": pick, "edge_order": edge_order, "seed": seed})


# ---------------------------------------------------------------------------
# prediction and accounting


def _label_array(labels, m: int) -> np.ndarray:
    if isinstance(labels, Mapping):
        lab = np.zeros(m, dtype=np.int8)
        for e, s in labels.items():
            lab[int(e)] = s
        return lab
    lab = np.asarray(labels, dtype=np.int8)
    if lab.shape != (m,):
        raise ValueError(f"expected {m} labels, got shape {lab.shape}")
    return lab


def predict_with_cover(cover: CircuitCover, labels) -> np.ndarray:
    """Sign product of the queried labels along each circuit's path.

    ``labels`` is a length-``m`` array (0 = unknown) or a mapping from edge id
    to sign; only query-set entries are read.  Returns a length-``m`` array
    holding the prediction at each test edge and 0 elsewhere.
    """
    lab = _label_array(labels, cover.m)
    missing = cover.query[lab[cover.query] == 0]
    if missing.size:
        raise MissingLabelError(f"queried edge {int(missing[0])} has no label")
    pred = np.zeros(cover.m, dtype=np.int8)
    if len(cover):
        prods = np.multiply.reduceat(lab[cover.path_edges].astype(np.int8), cover.path_ptr[:-1])
        pred[cover.test_edges] = prods
    return pred


def cover_mistakes(cover: CircuitCover, truth) -> int:
    truth = np.asarray(truth, dtype=np.int8)
    pred = predict_with_cover(cover, truth)
    return int(np.count_nonzero(pred[cover.test] != truth[cover.test]))


def flip_load(cover: CircuitCover, flips) -> int:
    """Total load of the flipped edges (an upper bound on the mistakes they cause)."""
    ids = np.asarray(sorted(set(int(e) for e in flips)), dtype=np.int64)
    return int(cover.load[ids].sum())


@dataclass(frozen=True)
class CoverStats:
    queries: int
    tests: int
    max_load: int
    max_query_load: int
    mean_load: float
    load_histogram: tuple
    sheaves: int
    ratio: float  # tests / queries
    ratio_beyond_tree: float  # tests / (queries - spanning-forest queries)
    load_constant: Optional[float]  # max load over the O() shape of the load bound


def cover_stats(cover: CircuitCover, g: Optional[SignedGraph] = None) -> CoverStats:
    q, te = len(cover.query), len(cover.test)
    load = cover.load
    extra = q - cover.spanning_queries
    qload = int(load[cover.query].max()) if q else 0
    const = None
    rho = cover.params.get("rho")
    if rho and cover.m:
        algo = cover.params.get("algorithm")
        if algo == "scccc":
            theta = cover.params["theta"]
            scale = rho * (theta + max(cover.m - cover.n + 1, 0) / theta)
        else:
            scale = rho ** 1.5 * math.sqrt(cover.n)
        const = float(load.max()) / scale if scale else None
    return CoverStats(
        queries=q,
        tests=te,
        max_load=int(load.max()) if cover.m else 0,
        max_query_load=qload,
        mean_load=float(load.mean()) if cover.m else 0.0,
        load_histogram=tuple(int(c) for c in np.bincount(load)) if cover.m else (),
        sheaves=len(cover.sheaves),
        ratio=te / q if q else math.inf,
        ratio_beyond_tree=te / extra if extra else math.inf,
        load_constant=const,
    )


def verify_cover(cover: CircuitCover, g: SignedGraph) -> list[str]:
    """Check the structural invariants of a cover; returns the violations found."""
    bad: list[str] = []
    m = g.m
    if cover.m != m:
        return [f"cover is for {cover.m} edges, graph has {m}"]
    in_query = np.zeros(m, dtype=np.int64)
    np.add.at(in_query, cover.query, 1)
    in_test = np.zeros(m, dtype=np.int64)
    np.add.at(in_test, cover.test_edges, 1)
    if np.any(in_query > 1):
        bad.append(f"edge {int(np.argmax(in_query > 1))} queried twice")
    dup = np.flatnonzero(in_test > 1)
    if dup.size:
        bad.append(f"duplicated test edge {int(dup[0])} appears in {int(in_test[dup[0]])} circuits")
    both = np.flatnonzero((in_query > 0) & (in_test > 0))
    if both.size:
        bad.append(f"edge {int(both[0])} is both queried and tested")
    neither = np.flatnonzero((in_query == 0) & (in_test == 0))
    if neither.size:
        bad.append(f"edge {int(neither[0])} is neither queried nor tested")
    if not np.array_equal(np.sort(cover.test_edges), cover.test):
        bad.append("test set differs from the circuits' test edges")

    # node -> epoch, per scccc run
    where: dict[tuple[int, int], int] = {}
    for k, nodes in enumerate(cover.epoch_nodes):
        run = int(cover.epoch_run[k])
        for x in nodes.tolist():
            where[(run, x)] = k

    load = np.zeros(m, dtype=np.int64)
    for c in cover.circuits():
        e = c.test_edge
        a, b = int(g.u[e]), int(g.v[e])
        if c.start not in (a, b):
            bad.append(f"circuit of edge {e} starts at {c.start}, not an endpoint")
            continue
        end = b if c.start == a else a
        x = c.start
        walk = [x]
        ok = True
        for f in c.path:
            if in_query[f] == 0:
                bad.append(f"circuit of edge {e} uses unqueried edge {f}")
                ok = False
                break
            if g.u[f] == x:
                x = int(g.v[f])
            elif g.v[f] == x:
                x = int(g.u[f])
            else:
                bad.append(f"circuit of edge {e} breaks at edge {f}")
                ok = False
                break
            walk.append(x)
        if ok and x != end:
            bad.append(f"circuit of edge {e} does not close")
            ok = False
        for f in set(c.path) | {e}:
            load[f] += 1
        if not ok or c.epoch >= len(cover.epoch_nodes):
            continue
        run = int(cover.epoch_run[c.epoch])
        epochs = [where.get((run, y), -1) for y in walk]
        if c.kind == TREE:
            if any(k != c.epoch for k in epochs):
                bad.append(f"tree circuit of edge {e} leaves its epoch's subtree")
        else:
            # a prefix inside T_q, then nodes of the tree that remained
            split = next((i for i, k in enumerate(epochs) if k != c.epoch), len(epochs))
            if split == 0 or split == len(epochs) or any(k <= c.epoch for k in epochs[split:]):
                bad.append(f"sheaf circuit of edge {e} is not routed through its sheaf's queried edge")
    if not np.array_equal(load, cover.load):
        diff = int(np.flatnonzero(load != cover.load)[0])
        bad.append(f"load of edge {diff} is {int(cover.load[diff])}, recount gives {int(load[diff])}")
    if np.any(cover.load[cover.test] != 1):
        bad.append("a test edge has load other than 1")
    return bad
