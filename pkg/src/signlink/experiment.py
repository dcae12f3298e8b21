"""Experiment configuration, dispatch and reports.

A run is fully described by an :class:`ExperimentConfig`, which names the
graph source and carries every parameter plus the master seed.  Trial ``t``
draws its randomness from a stream keyed by ``(seed, t)``, so trials do not
depend on execution order; the generated instance has a stream of its own.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import cover as cover_mod
from . import generators as gen
from .errors import ParameterError, SizeLimitError
from .io import load_edge_list
from .online import (
    ConstantLearner,
    HalvingLearner,
    LabelingEnvironment,
    OnlineTreeLearner,
    TreePlusKAdversary,
    WeightedMajority,
    build_version_space_table,
    halving_experts,
    run_online,
)
from .oracles import DELTA2_LIMIT, DELTA_LIMIT, delta2_exact, delta_exact, is_two_balanced, is_weakly_balanced
from .spectral import QUADRATIC_LIMIT, boolean_min_quadratic, least_eigen_classifier, min_eigenpair, signed_laplacian
from .treepredict import TREE_STRATEGIES, average_stretch, expected_mistake_bound, flip_bound_rhs, spanning_tree, tree_learner_run

SCHEMA_VERSION = 1
COMMANDS = ("oracle", "spectral", "cover", "tree", "online")
LABELINGS = ("positive", "balanced", "p-random", "clique", "lowerbound", "random")


@dataclass
class ExperimentConfig:
    command: str
    graph: Optional[str] = None  # edge-list path; generated when None
    n: int = 20
    m: int = 60
    labeling: str = "balanced"
    gen_p: float = 0.0  # flip rate baked into a generated p-random labeling
    K: int = 0
    seed: int = 0
    rho: Optional[float] = None
    theta: Optional[float] = None
    p: float = 0.0  # per-trial flip rate on top of the instance labels
    k: int = 16
    trials: int = 1
    tree: str = "bfs"
    pick: str = "first"
    algorithm: str = "scccc"
    edge_order: str = "stored"
    train_frac: float = 0.6
    learner: str = "wm"
    adversary: Optional[int] = None
    beta: float = 0.5

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ParameterError(f"unknown command {self.command!r}")
        if self.graph is None and self.labeling not in LABELINGS:
            raise ParameterError(f"unknown labeling {self.labeling!r}; expected one of {LABELINGS}")
        if self.tree not in TREE_STRATEGIES:
            raise ParameterError(f"unknown tree strategy {self.tree!r}")
        if self.pick not in ("first", "random"):
            raise ParameterError(f"unknown pick strategy {self.pick!r}")
        if self.algorithm not in ("scccc", "cccc"):
            raise ParameterError(f"unknown cover algorithm {self.algorithm!r}")
        if self.trials < 1:
            raise ParameterError("trials must be at least 1")
        if not 0 <= self.p < 1:
            raise ParameterError(f"p must lie in [0, 1), got {self.p}")
        if not 0 < self.train_frac <= 1:
            raise ParameterError(f"train_frac must lie in (0, 1], got {self.train_frac}")
        if self.learner not in ("wm", "halving", "tree", "constant"):
            raise ParameterError(f"unknown learner {self.learner!r}")


@dataclass
class ExperimentReport:
    command: str
    algorithm: str
    params: dict
    seed: int
    instance: dict
    graph: dict
    queries: Optional[int] = None
    tests: Optional[int] = None
    mistakes: Optional[float] = None  # mean over trials
    max_load: Optional[int] = None
    mean_load: Optional[float] = None
    ratios: dict = field(default_factory=dict)
    average_stretch: Optional[float] = None
    bounds: dict = field(default_factory=dict)
    results: dict = field(default_factory=dict)
    trials: list = field(default_factory=list)
    wall_time: float = 0.0
    schema_version: int = SCHEMA_VERSION

    def to_dict(self, wall_time: bool = True) -> dict:
        d = asdict(self)
        if not wall_time:
            d.pop("wall_time")
        return d

    def to_json(self, wall_time: bool = True) -> str:
        return json.dumps(_jsonable(self.to_dict(wall_time)), indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        """Per-trial table when there are trials, otherwise flattened ``key,value`` rows."""
        buf = io.StringIO()
        if self.trials:
            cols = sorted({k for row in self.trials for k in row})
            w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
            w.writeheader()
            for row in self.trials:
                w.writerow(_jsonable(row))
        else:
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["key", "value"])
            for k, v in _flatten(_jsonable(self.to_dict(wall_time=False))):
                w.writerow([k, v])
        return buf.getvalue()


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    if isinstance(x, Fraction):
        return float(x)
    return x


def _flatten(d: dict, prefix: str = ""):
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            yield from _flatten(v, key + ".")
        elif isinstance(v, list):
            yield key, json.dumps(v)
        else:
            yield key, v


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(1, trial)))


def instance_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(0,)))


def make_instance(cfg: ExperimentConfig) -> gen.LabeledInstance:
    if cfg.graph is not None:
        g, names = load_edge_list(cfg.graph)
        return gen.LabeledInstance(g, {"generator": "file", "path": str(cfg.graph), "names": names})
    rng = instance_rng(cfg.seed)
    base = {"n": cfg.n, "m": cfg.m}
    if cfg.labeling == "clique":
        inst = gen.gen_clique_delta(cfg.n, cfg.K, seed=rng)
        base["m"] = inst.graph.m
        inst.provenance.update(base, seed=cfg.seed)
        return inst
    g = gen.random_connected_graph(cfg.n, cfg.m, seed=rng)
    if cfg.labeling == "positive":
        inst = gen.LabeledInstance(g, {"generator": "positive"})
    elif cfg.labeling == "random":
        signs = rng.choice(np.array([-1, 1], dtype=np.int8), size=g.m)
        inst = gen.LabeledInstance(g.with_signs(signs), {"generator": "random"})
    elif cfg.labeling == "lowerbound":
        inst = gen.gen_active_lowerbound_labeling(g, cfg.K, seed=rng)
    else:
        inst = gen.gen_two_cluster_labeling(g, gen.random_bipartition(cfg.n, rng))
        if cfg.labeling == "p-random":
            inst = gen.gen_p_random(inst, cfg.gen_p, seed=rng)
    inst.provenance.update(base, seed=cfg.seed)
    return inst


def _summary(prov: dict) -> dict:
    # large planted lists are reproducible from the seed; keep counts only
    out = {}
    for k, v in prov.items():
        if isinstance(v, list) and len(v) > 32:
            out[f"{k}_count"] = len(v)
        else:
            out[k] = v
    return out


def _perturb(inst: gen.LabeledInstance, p: float, rng) -> tuple[np.ndarray, np.ndarray]:
    """Labels for one trial and the flipped edges relative to the instance labels."""
    g = inst.graph
    if p == 0:
        return g.sign, np.zeros(0, dtype=np.int64)
    flipped = gen.gen_p_random(inst, p, seed=rng)
    return flipped.graph.sign, np.asarray(flipped.provenance["flips"], dtype=np.int64)


def _run_oracle(cfg, inst, rep: ExperimentReport) -> None:
    g = inst.graph
    res = rep.results
    res["two_balanced"] = is_two_balanced(g)[0]
    res["weakly_balanced"] = is_weakly_balanced(g)[0]
    if g.n <= DELTA_LIMIT:
        d = delta_exact(g)
        res["delta"] = d.cost
        res["delta_witness"] = d.witness.labels
    if g.n <= DELTA2_LIMIT:
        d2 = delta2_exact(g)
        res["delta2"] = d2.cost
        res["delta2_witness"] = d2.witness.sides
    if g.n <= QUADRATIC_LIMIT:
        res["min_quadratic"] = boolean_min_quadratic(g)[0]
    if g.n:
        eig = min_eigenpair(signed_laplacian(g, dtype=np.float64))
        res["lambda_min"] = eig.value
        if "delta2" in res:
            rep.bounds["four_delta2_over_n"] = 4 * res["delta2"] / g.n


def _run_spectral(cfg, inst, rep: ExperimentReport) -> None:
    g = inst.graph
    total = 0
    for t in range(cfg.trials):
        rng = trial_rng(cfg.seed, t)
        labels, flips = _perturb(inst, cfg.p, rng)
        size = int(round(cfg.train_frac * g.m))
        train = np.sort(rng.choice(g.m, size=size, replace=False))
        pred = least_eigen_classifier(g, train, labels[train])
        mis = pred.mistakes(labels)
        total += mis
        rep.trials.append(
            {
                "trial": t,
                "train": len(train),
                "tests": len(pred.edge_ids),
                "mistakes": mis,
                "flips": len(flips),
                "lambda_min": None if pred.eigen is None else pred.eigen.value,
            }
        )
    rep.queries = rep.trials[-1]["train"]
    rep.tests = rep.trials[-1]["tests"]
    rep.mistakes = total / cfg.trials


def _run_cover(cfg, inst, rep: ExperimentReport) -> None:
    g = inst.graph
    rho = cfg.rho
    if rho is None:
        raise ParameterError("the cover command needs --rho")
    total = 0
    for t in range(cfg.trials):
        rng = trial_rng(cfg.seed, t)
        tree_seed = int(rng.integers(2**63))
        if cfg.algorithm == "scccc":
            c = cover_mod.scccc(g, rho, cfg.theta, cfg.tree, cfg.pick, seed=tree_seed)
        else:
            c = cover_mod.cccc(g, rho, cfg.pick, cfg.tree, cfg.edge_order, seed=tree_seed)
        labels, flips = _perturb(inst, cfg.p, rng)
        mis = cover_mod.cover_mistakes(c, labels)
        total += mis
        st = cover_mod.cover_stats(c)
        row = {
            "trial": t,
            "queries": st.queries,
            "tests": st.tests,
            "mistakes": mis,
            "max_load": st.max_load,
            "flips": len(flips),
        }
        if cfg.p > 0:
            row["flip_load"] = cover_mod.flip_load(c, flips)
        rep.trials.append(row)
    rep.queries, rep.tests = st.queries, st.tests
    rep.max_load, rep.mean_load = st.max_load, st.mean_load
    rep.mistakes = total / cfg.trials
    rep.ratios = {"test_per_query": st.ratio, "test_per_extra_query": st.ratio_beyond_tree}
    rep.results["sheaves"] = st.sheaves
    rep.results["load_histogram"] = list(st.load_histogram)
    rep.results["load_constant"] = st.load_constant
    rep.results["theta"] = c.params.get("theta")
    if cfg.algorithm == "scccc":
        rep.bounds["ratio_extra_min"] = rho
    else:
        rep.bounds["ratio_min"] = (rho - 3) / 3


def _run_tree(cfg, inst, rep: ExperimentReport) -> None:
    g = inst.graph
    total = 0
    for t in range(cfg.trials):
        rng = trial_rng(cfg.seed, t)
        tree = spanning_tree(g, cfg.tree, int(rng.integers(2**63)), cfg.k)
        labels, flips = _perturb(inst, cfg.p, rng)
        run = tree_learner_run(g, labels, tree=tree, flips=flips)
        total += run.mistakes
        rep.trials.append(
            {
                "trial": t,
                "mistakes": run.mistakes,
                "flips": len(flips),
                "flip_bound": flip_bound_rhs(tree, g, flips),
                "average_stretch": float(average_stretch(tree, g)),
            }
        )
    rep.queries = len(tree.tree_edges)
    rep.tests = g.m - rep.queries
    rep.mistakes = total / cfg.trials
    rep.average_stretch = float(average_stretch(tree, g))
    rep.bounds["flip_bound"] = rep.trials[-1]["flip_bound"]
    rep.bounds["expected_mistakes"] = expected_mistake_bound(tree, cfg.p, g)


def _run_online(cfg, inst, rep: ExperimentReport) -> None:
    g = inst.graph
    needs_table = cfg.learner in ("wm", "halving")
    table = build_version_space_table(g) if needs_table else None
    if cfg.adversary is not None:
        env = TreePlusKAdversary(g, cfg.adversary)
        rep.bounds["forced_mistakes"] = g.n - 1 + cfg.adversary
    else:
        order = trial_rng(cfg.seed, 0).permutation(g.m) if cfg.edge_order == "shuffle" else None
        env = LabelingEnvironment(g.sign, order)
    if cfg.learner == "wm":
        learner = WeightedMajority(halving_experts(table), cfg.beta)
    elif cfg.learner == "halving":
        if g.n > DELTA_LIMIT:
            raise SizeLimitError(f"halving needs the index of a {g.n}-node graph")
        d = delta_exact(g).cost if cfg.adversary is None else cfg.adversary
        learner = HalvingLearner(table, d)
        rep.params["d"] = d
    elif cfg.learner == "tree":
        learner = OnlineTreeLearner(g)
    else:
        learner = ConstantLearner(1)
    run = run_online(learner, env)
    rep.mistakes = run.mistakes
    rep.results["order"] = run.order
    rep.results["predictions"] = run.predictions
    rep.results["truth"] = run.truth
    if run.space_sizes is not None:
        rep.results["space_sizes"] = run.space_sizes
        if run.space_sizes[0]:
            rep.bounds["halving"] = math.log2(run.space_sizes[0])
    if isinstance(learner, WeightedMajority):
        rep.results["expert_mistakes"] = run.expert_mistakes
        rep.bounds["weighted_majority"] = learner.mistake_bound()
    final = run.final_labeling(g.m)
    if g.n <= DELTA_LIMIT:
        rep.results["final_delta"] = delta_exact(g.with_signs(final)).cost


_DISPATCH = {
    "oracle": _run_oracle,
    "spectral": _run_spectral,
    "cover": _run_cover,
    "tree": _run_tree,
    "online": _run_online,
}


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Build the instance, run the command and collect the report."""
    cfg.validate()
    start = time.perf_counter()
    inst = make_instance(cfg)
    g = inst.graph
    params = {k: v for k, v in asdict(cfg).items() if k not in ("command", "seed", "graph")}
    algorithm = cfg.algorithm if cfg.command == "cover" else cfg.command
    if cfg.command == "online":
        algorithm = cfg.learner
    rep = ExperimentReport(
        command=cfg.command,
        algorithm=algorithm,
        params=params,
        seed=cfg.seed,
        instance=_summary(inst.provenance),
        graph={"n": g.n, "m": g.m, "negative": int(np.count_nonzero(g.sign < 0))},
    )
    _DISPATCH[cfg.command](cfg, inst, rep)
    rep.wall_time = time.perf_counter() - start
    return rep
