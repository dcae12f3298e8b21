"""Slow, independent reference implementations used as test oracles.

Nothing here imports the search kernels: partitions are generated
recursively, two-clusterings with itertools.product, cycles by plain DFS.
"""

import itertools
from collections import deque

import numpy as np

from signlink.graph import build_graph


def set_partitions(items):
    """Every partition of ``items`` as a list of blocks (recursive insertion)."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for k in range(len(part)):
            yield part[:k] + [[first] + part[k]] + part[k + 1 :]


def cost_of_blocks(n, edges, blocks):
    where = {}
    for c, b in enumerate(blocks):
        for x in b:
            where[x] = c
    bad = 0
    for a, b, s in edges:
        same = where[a] == where[b]
        bad += (s < 0) if same else (s > 0)
    return bad


def delta(n, edges):
    return min(cost_of_blocks(n, edges, p) for p in set_partitions(range(n)))


def delta2(n, edges):
    best = None
    for x in itertools.product((1, -1), repeat=n):
        c = sum(1 for a, b, s in edges if x[a] * x[b] != s)
        best = c if best is None else min(best, c)
    return best


def quadratic_min(L):
    n = L.shape[0]
    best = None
    for x in itertools.product((1, -1), repeat=n):
        v = np.asarray(x)
        q = int(v @ L @ v)
        best = q if best is None else min(best, q)
    return best


def simple_cycles(n, edges):
    """Every simple cycle (length >= 3) as a tuple of edge indices, each once."""
    adj = [[] for _ in range(n)]
    for k, (a, b, _) in enumerate(edges):
        adj[a].append((b, k))
        adj[b].append((a, k))
    seen = set()
    out = []

    def dfs(start, x, visited, path):
        for y, k in adj[x]:
            if k in path:
                continue
            if y == start and len(path) >= 2:
                key = frozenset(path + [k])
                if key not in seen:
                    seen.add(key)
                    out.append(tuple(path + [k]))
            elif y > start and y not in visited:
                visited.add(y)
                path.append(k)
                dfs(start, y, visited, path)
                path.pop()
                visited.discard(y)

    for s in range(n):
        dfs(s, s, {s}, [])
    return out


def has_bad_cycle(edges, cycles, signs):
    """Some simple cycle with exactly one negative edge."""
    return any(sum(1 for k in c if signs[k] < 0) == 1 for c in cycles)


def tree_path_bfs(t, i, j):
    """Tree path by BFS over tree edges only."""
    g = t.graph
    adj = {}
    for e in t.tree_edges.tolist():
        a, b = int(g.u[e]), int(g.v[e])
        adj.setdefault(a, []).append((b, e))
        adj.setdefault(b, []).append((a, e))
    prev = {i: None}
    q = deque([i])
    while q:
        x = q.popleft()
        for y, e in adj.get(x, []):
            if y not in prev:
                prev[y] = (x, e)
                q.append(y)
    out = []
    x = j
    while prev[x] is not None:
        x, e = prev[x]
        out.append(e)
    return out[::-1]


def random_graph(rng, n, density=None, connected=False):
    """Random simple graph with random signs; ``density`` is an edge probability."""
    p = rng.uniform(0.1, 1.0) if density is None else density
    pairs = [(a, b) for a, b in itertools.combinations(range(n), 2) if rng.random() < p]
    if connected and n > 1:
        perm = rng.permutation(n)
        have = set(pairs)
        for k in range(1, n):
            a, b = sorted((int(perm[k]), int(perm[rng.integers(k)])))
            if (a, b) not in have:
                have.add((a, b))
                pairs.append((a, b))
        pairs.sort()
    signs = rng.choice([-1, 1], size=len(pairs))
    return build_graph(n, [(a, b, int(s)) for (a, b), s in zip(pairs, signs)])


def brute_cut_size(t_alive, inside, g, tree_mask):
    """Live non-tree edges with exactly one endpoint inside."""
    count = 0
    for e in range(g.m):
        a, b = int(g.u[e]), int(g.v[e])
        if tree_mask[e] or not (t_alive[a] and t_alive[b]):
            continue
        count += inside[a] != inside[b]
    return count
