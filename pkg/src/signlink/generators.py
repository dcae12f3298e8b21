"""Random graphs and planted labelings.

Every generator returns a :class:`LabeledInstance` whose ``provenance``
records the generator, its parameters, the seed and whatever structure was
planted (bipartition, flipped edges, negative triangles, random pool), so the
labels can be re-derived and re-checked.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import PackingError, ParameterError
from .graph import SignedGraph, build_graph
from .oracles import is_two_balanced


@dataclass(frozen=True, eq=False)
class LabeledInstance:
    graph: SignedGraph
    provenance: dict = field(default_factory=dict)

    @property
    def labels(self) -> np.ndarray:
        return self.graph.sign

    def planted(self, key: str, default=None):
        return self.provenance.get(key, default)


def _seed_value(seed):
    return seed if seed is None or isinstance(seed, (int, str)) else repr(seed)


def random_connected_graph(n: int, m: int, seed=None) -> SignedGraph:
    """Uniform random attachment tree plus ``m - n + 1`` distinct extra pairs; all signs +1.

    Edges are stored sorted by endpoint pair.
    """
    top = n * (n - 1) // 2
    if n < 1 or not (n - 1 <= m <= top):
        raise ParameterError(f"need 1 <= n and n-1 <= m <= {top}, got n={n}, m={m}")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    pairs = set()
    for k in range(1, n):
        a, b = int(perm[k]), int(perm[rng.integers(k)])
        pairs.add((min(a, b), max(a, b)))
    extra = m - len(pairs)
    if extra > (top - len(pairs)) // 2:
        rest = [p for p in itertools.combinations(range(n), 2) if p not in pairs]
        pick = rng.choice(len(rest), size=extra, replace=False)
        pairs.update(rest[i] for i in pick.tolist())
    else:
        while len(pairs) < m:
            a, b = rng.integers(n, size=2).tolist()
            if a != b:
                pairs.add((min(a, b), max(a, b)))
    return build_graph(n, [(a, b, 1) for a, b in sorted(pairs)])


def random_bipartition(n: int, seed=None) -> np.ndarray:
    return np.random.default_rng(seed).choice(np.array([-1, 1], dtype=np.int8), size=n)


def gen_two_cluster_labeling(g: SignedGraph, bipartition) -> LabeledInstance:
    """Label each edge +1 when its endpoints share a side, -1 otherwise.

    ``bipartition`` is a per-node array of sides (any two values; booleans
    work).
    """
    side = np.asarray(bipartition)
    if side.shape != (g.n,):
        raise ParameterError(f"bipartition must have one entry per node ({g.n}), got shape {side.shape}")
    signs = np.where(side[g.u] == side[g.v], 1, -1).astype(np.int8)
    sides = np.where(side == side[0], 1, -1).astype(np.int8) if g.n else side.astype(np.int8)
    return LabeledInstance(
        g.with_signs(signs),
        {"generator": "two_cluster", "bipartition": sides.tolist()},
    )


def gen_p_random(instance: LabeledInstance, p: float, seed=None) -> LabeledInstance:
    """Flip every edge independently with probability ``p``; the flip set is recorded."""
    if not 0 <= p < 1:
        raise ParameterError(f"p must lie in [0, 1), got {p}")
    g = instance.graph
    ok, _ = is_two_balanced(g)
    if not ok:
        raise ParameterError("gen_p_random needs a balanced base labeling")
    rng = np.random.default_rng(seed)
    flip = rng.random(g.m) < p
    signs = np.where(flip, -g.sign, g.sign).astype(np.int8)
    prov = dict(instance.provenance)
    prov.update(
        generator=f"{prov.get('generator', 'given')}+p_random",
        p=p,
        seed=_seed_value(seed),
        base_labels=g.sign.tolist(),
        flips=np.flatnonzero(flip).tolist(),
    )
    return LabeledInstance(g.with_signs(signs), prov)


def clique_delta_limit(n: int) -> int:
    return max(0, (n - 3) * (n - 4) // 6) if n >= 4 else 0


def gen_clique_delta(n: int, K: int, seed=None, retries: int = 100) -> LabeledInstance:
    """Complete graph with correlation-clustering index exactly ``K``.

    ``K`` edge-disjoint triangles are packed greedily (random triangle order,
    restarted up to ``retries`` times); one edge of each is negative, all
    other edges positive.  Each packed triangle is a cycle with one negative
    edge, and merging all nodes into one cluster pays exactly ``K``.
    """
    limit = clique_delta_limit(n)
    if not 0 <= K <= limit:
        raise ParameterError(f"K={K} outside [0, {limit}] for a clique on {n} nodes")
    rng = np.random.default_rng(seed)
    triangles = list(itertools.combinations(range(n), 3))
    packed: list = []
    attempt = 0
    for attempt in range(retries if K else 0):
        used: set = set()
        packed = []
        for i in rng.permutation(len(triangles)).tolist():
            a, b, c = triangles[i]
            sides = {(a, b), (a, c), (b, c)}
            if used.isdisjoint(sides):
                used |= sides
                packed.append((a, b, c))
                if len(packed) == K:
                    break
        if len(packed) == K:
            break
    if len(packed) != K:
        raise PackingError(f"no {K} edge-disjoint triangles found in {retries} attempts")
    negative = set()
    for tri in packed:
        pair = list(itertools.combinations(tri, 2))[int(rng.integers(3))]
        negative.add(pair)
    edges = [(a, b, -1 if (a, b) in negative else 1) for a, b in itertools.combinations(range(n), 2)]
    return LabeledInstance(
        build_graph(n, edges),
        {
            "generator": "clique_delta",
            "n": n,
            "K": K,
            "seed": _seed_value(seed),
            "attempts": attempt + 1,
            "triangles": [list(t) for t in packed],
            "negative_pairs": sorted([list(p) for p in negative]),
        },
    )


def gen_active_lowerbound_labeling(g: SignedGraph, K: int, seed=None) -> LabeledInstance:
    """All edges +1 except a uniform pool of ``K`` edges with independent fair-coin signs."""
    if not 0 <= K <= g.m:
        raise ParameterError(f"K={K} outside [0, {g.m}]")
    rng = np.random.default_rng(seed)
    pool = np.sort(rng.choice(g.m, size=K, replace=False))
    signs = np.ones(g.m, dtype=np.int8)
    signs[pool] = rng.choice(np.array([-1, 1], dtype=np.int8), size=K)
    return LabeledInstance(
        g.with_signs(signs),
        {"generator": "active_lowerbound", "K": K, "seed": _seed_value(seed), "pool": pool.tolist()},
    )
