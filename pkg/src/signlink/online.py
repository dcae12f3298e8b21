"""Online link classification on small graphs.

Edges arrive one at a time; the learner predicts a sign, then sees the true
label.  ``HAL_d`` predicts by majority over the version space: labelings
consistent with everything seen so far whose correlation-clustering index
equals ``d``.  The index of every labeling is tabulated once, so each step is
a filter over at most ``2**|E|`` integers.

Labelings are encoded as integers: bit ``e`` set means edge ``e`` is negative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .errors import DisconnectedGraphError, ParameterError, SizeLimitError
from .graph import SignedGraph, bfs_spanning_forest, connected_components, is_connected
from .oracles import DELTA_LIMIT

TABLE_EDGE_LIMIT = 14


@dataclass(frozen=True, eq=False)
class VersionSpaceTable:
    graph: SignedGraph
    delta: np.ndarray  # delta[code] = index of labeling ``code``

    def labeling(self, code: int) -> np.ndarray:
        bits = (int(code) >> np.arange(self.graph.m)) & 1
        return (1 - 2 * bits).astype(np.int8)

    def size(self, d: int) -> int:
        return int(np.count_nonzero(self.delta == d))


def encode_labeling(signs) -> int:
    signs = np.asarray(signs)
    return int(sum(1 << e for e in np.flatnonzero(signs < 0).tolist()))


def build_version_space_table(g: SignedGraph, limit: int = TABLE_EDGE_LIMIT) -> VersionSpaceTable:
    if g.m > limit:
        raise SizeLimitError(f"version-space table over {g.m} edges exceeds limit {limit}")
    if g.n > DELTA_LIMIT:
        raise SizeLimitError(f"version-space table needs the index of {g.n}-node graphs; limit {DELTA_LIMIT}")
    table = kernels.delta_table(g.n, g.u, g.v)
    table.setflags(write=False)
    return VersionSpaceTable(g, table)


def _consistent(codes: np.ndarray, mask: int, bits: int) -> np.ndarray:
    return codes[(codes & mask) == bits] if mask else codes


def halving_predict(table: VersionSpaceTable, d: int, observed, e_t: int) -> int:
    """Majority sign of edge ``e_t`` over the version space; +1 on ties or when it is empty.

    ``observed`` maps edge ids to revealed signs.
    """
    mask = bits = 0
    for e, s in dict(observed).items():
        mask |= 1 << int(e)
        if s < 0:
            bits |= 1 << int(e)
    space = _consistent(np.flatnonzero(table.delta == d), mask, bits)
    neg = int(np.count_nonzero((space >> e_t) & 1))
    return -1 if neg > len(space) - neg else 1


# ---------------------------------------------------------------------------
# learners: predict(e) -> sign, update(e, y)


class HalvingLearner:
    """``HAL_d`` with an incrementally filtered version space."""

    def __init__(self, table: VersionSpaceTable, d: int):
        self.table = table
        self.d = d
        self.space = np.flatnonzero(table.delta == d)
        self.name = f"HAL_{d}"

    def predict(self, e: int) -> int:
        neg = int(np.count_nonzero((self.space >> e) & 1))
        return -1 if neg > len(self.space) - neg else 1

    def update(self, e: int, y: int) -> None:
        want = 1 if y < 0 else 0
        self.space = self.space[((self.space >> e) & 1) == want]


class ConstantLearner:
    def __init__(self, sign: int = 1):
        self.sign = 1 if sign > 0 else -1
        self.name = f"constant{self.sign:+d}"

    def predict(self, e: int) -> int:
        return self.sign

    def update(self, e: int, y: int) -> None:
        pass


class OnlineTreeLearner:
    """Predict by the sign product along already-revealed edges; +1 across components.

    Keeps a union-find whose nodes carry their sign relative to the set
    representative, so a revealed forest is exactly a queried tree.
    """

    name = "tree"

    def __init__(self, g: SignedGraph):
        self.g = g
        self.parent = list(range(g.n))
        self.rel = [1] * g.n  # sign of node relative to its parent

    def _find(self, x: int) -> tuple[int, int]:
        s = 1
        path = []
        while self.parent[x] != x:
            path.append(x)
            s *= self.rel[x]
            x = self.parent[x]
        root = x
        # compress: each node on the path now points at the root
        acc = s
        for y in path:
            r = acc
            acc *= self.rel[y]
            self.parent[y], self.rel[y] = root, r
        return root, s

    def predict(self, e: int) -> int:
        ra, sa = self._find(int(self.g.u[e]))
        rb, sb = self._find(int(self.g.v[e]))
        return sa * sb if ra == rb else 1

    def update(self, e: int, y: int) -> None:
        ra, sa = self._find(int(self.g.u[e]))
        rb, sb = self._find(int(self.g.v[e]))
        if ra != rb:
            self.parent[rb] = ra
            self.rel[rb] = sa * sb * y


class WeightedMajority:
    """Deterministic weighted majority vote; wrong experts are scaled by ``beta``.

    Ties go to +1.  Per-expert mistakes are counted whether or not the vote
    itself errs.
    """

    name = "WM"

    def __init__(self, experts: Sequence, beta: float = 0.5):
        if not 0 <= beta < 1:
            raise ParameterError(f"beta must lie in [0, 1), got {beta}")
        if not experts:
            raise ParameterError("weighted majority needs at least one expert")
        self.experts = list(experts)
        self.beta = beta
        self.weights = np.ones(len(self.experts))
        self.expert_mistakes = np.zeros(len(self.experts), dtype=np.int64)
        self._votes: Optional[np.ndarray] = None

    def predict(self, e: int) -> int:
        self._votes = np.array([x.predict(e) for x in self.experts])
        plus = self.weights[self._votes > 0].sum()
        minus = self.weights[self._votes < 0].sum()
        return -1 if minus > plus else 1

    def update(self, e: int, y: int) -> None:
        votes = self._votes if self._votes is not None else np.array([x.predict(e) for x in self.experts])
        wrong = votes != y
        self.expert_mistakes += wrong
        self.weights[wrong] *= self.beta
        self._votes = None
        for x in self.experts:
            x.update(e, y)

    def mistake_bound(self) -> float:
        """Weighted-majority guarantee given the best expert's count so far."""
        n = len(self.experts)
        best = int(self.expert_mistakes.min())
        if self.beta == 0:
            return math.log2(n) if best == 0 else math.inf
        return (math.log2(n) + best * math.log2(1 / self.beta)) / math.log2(2 / (1 + self.beta))


def halving_experts(table: VersionSpaceTable, include_zero: bool = True) -> list[HalvingLearner]:
    lo = 0 if include_zero else 1
    return [HalvingLearner(table, d) for d in range(lo, table.graph.m + 1)]


# ---------------------------------------------------------------------------
# environments: next_edge() -> edge id or None, answer(e, prediction) -> sign


class LabelingEnvironment:
    """Presents a fixed labeling in a fixed order."""

    def __init__(self, labels, order=None):
        self.labels = np.asarray(labels, dtype=np.int8)
        self.order = list(range(len(self.labels)) if order is None else (int(e) for e in order))
        self._k = 0

    def next_edge(self) -> Optional[int]:
        if self._k >= len(self.order):
            return None
        e = self.order[self._k]
        self._k += 1
        return e

    def answer(self, e: int, prediction: int) -> int:
        return int(self.labels[e])


class TreePlusKAdversary:
    """Forces a mistake on every spanning-tree edge and on ``K`` further edges.

    Tree edges come first (breadth-first order) and are answered against the
    learner.  Positive tree edges then define the clusters; the ``K`` chosen
    non-tree edges are answered against the learner too and every other edge
    gets the sign its clusters dictate.  The final labeling therefore has
    correlation-clustering index at most ``K``.
    """

    def __init__(self, g: SignedGraph, K: int, tree=None):
        if not is_connected(g):
            raise DisconnectedGraphError("the adversary needs a connected graph")
        self.g = g
        self.tree = bfs_spanning_forest(g, roots=[0] if g.n else None) if tree is None else tree
        spare = np.flatnonzero(~self.tree.tree_mask)
        if not 0 <= K <= len(spare):
            raise ParameterError(f"K={K} outside [0, {len(spare)}] (non-tree edges available)")
        self.K = K
        self.adversarial = spare[:K].tolist()
        self.rest = spare[K:].tolist()
        tree_edges = [int(self.tree.parent_edge[x]) for x in self.tree.order.tolist() if self.tree.parent[x] >= 0]
        self.order = tree_edges + self.adversarial + self.rest
        self.labels = np.zeros(g.m, dtype=np.int8)
        self._k = 0
        self._cluster: Optional[np.ndarray] = None
        self._adv = set(self.adversarial)

    def next_edge(self) -> Optional[int]:
        if self._k >= len(self.order):
            return None
        e = self.order[self._k]
        self._k += 1
        return e

    def _clusters(self) -> np.ndarray:
        if self._cluster is None:
            keep = self.tree.tree_mask & (self.labels > 0)
            self._cluster = connected_components(self.g, keep).labels
        return self._cluster

    def answer(self, e: int, prediction: int) -> int:
        if self.tree.tree_mask[e] or e in self._adv:
            y = -1 if prediction > 0 else 1
        else:
            c = self._clusters()
            y = 1 if c[self.g.u[e]] == c[self.g.v[e]] else -1
        self.labels[e] = y
        return y


@dataclass(eq=False)
class OnlineRun:
    order: list
    predictions: list
    truth: list
    space_sizes: Optional[list] = None  # |S_t| before each step, for Halving runs
    expert_mistakes: Optional[np.ndarray] = None
    extra: dict = field(default_factory=dict)

    @property
    def mistake_flags(self) -> list[bool]:
        return [p != y for p, y in zip(self.predictions, self.truth)]

    @property
    def mistakes(self) -> int:
        return sum(self.mistake_flags)

    def final_labeling(self, m: int) -> np.ndarray:
        out = np.zeros(m, dtype=np.int8)
        out[self.order] = self.truth
        return out


def run_online(learner, env) -> OnlineRun:
    """Drive the predict / reveal protocol to the end of the sequence."""
    order, preds, truth = [], [], []
    sizes = [] if isinstance(learner, HalvingLearner) else None
    while True:
        e = env.next_edge()
        if e is None:
            break
        if sizes is not None:
            sizes.append(len(learner.space))
        p = learner.predict(e)
        y = env.answer(e, p)
        learner.update(e, y)
        order.append(e)
        preds.append(p)
        truth.append(y)
    run = OnlineRun(order, preds, truth, sizes)
    if isinstance(learner, WeightedMajority):
        run.expert_mistakes = learner.expert_mistakes.copy()
    return run


def weighted_majority_run(
    g: SignedGraph,
    labels=None,
    order=None,
    beta: float = 0.5,
    env=None,
    table: Optional[VersionSpaceTable] = None,
    include_zero: bool = True,
) -> OnlineRun:
    """Weighted majority over ``HAL_0 .. HAL_|E|`` (``HAL_1 ..`` with ``include_zero=False``).

    Either ``labels`` (presented in ``order``) or an environment ``env`` drives
    the run.  ``run.expert_mistakes[k]`` counts the mistakes of the ``k``-th
    expert; ``run.extra["bound"]`` is the weighted-majority guarantee.
    """
    table = build_version_space_table(g) if table is None else table
    wm = WeightedMajority(halving_experts(table, include_zero), beta)
    if env is None:
        env = LabelingEnvironment(g.sign if labels is None else labels, order)
    run = run_online(wm, env)
    run.extra["bound"] = wm.mistake_bound()
    run.extra["experts"] = [x.name for x in wm.experts]
    return run
