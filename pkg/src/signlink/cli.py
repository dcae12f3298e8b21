"""Command-line entry point: ``signlink <command> [graph] [options]``.

Exit codes: 0 success, 2 bad configuration, 3 unreadable or malformed
input, 4 exact computation beyond its size limit, 5 numerical failure,
1 anything else raised by the library.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import fields

from . import errors
from .bench import run_benchmark
from .experiment import LABELINGS, ExperimentConfig, make_instance, run_experiment
from .io import format_edge_list
from .treepredict import TREE_STRATEGIES

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CONFIG = 2
EXIT_INPUT = 3
EXIT_LIMIT = 4
EXIT_NUMERIC = 5


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, errors.SizeLimitError):
        return EXIT_LIMIT
    if isinstance(exc, (errors.EdgeListParseError, errors.GraphValidationError, OSError)):
        return EXIT_INPUT
    if isinstance(exc, errors.ParameterError):
        return EXIT_CONFIG
    if isinstance(exc, (errors.ConvergenceError, errors.PackingError)):
        return EXIT_NUMERIC
    return EXIT_ERROR


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    p.add_argument("--out", default="-", help="output file, '-' for stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    g = p.add_argument_group("generated instance (used when no graph file is given)")
    g.add_argument("--n", type=int, default=20, help="nodes")
    g.add_argument("--m", type=int, default=60, help="edges")
    g.add_argument("--labeling", choices=LABELINGS, default="balanced")
    g.add_argument("--gen-p", type=float, default=0.0, help="flip rate of a p-random labeling")
    g.add_argument("--K", type=int, default=0, help="planted budget for clique / lowerbound labelings")


def _add_algo(p: argparse.ArgumentParser) -> None:
    p.add_argument("graph", nargs="?", help="edge-list file ('-' for stdin)")
    p.add_argument("--rho", type=float)
    p.add_argument("--theta", type=float)
    p.add_argument("--p", type=float, default=0.0, help="per-trial flip rate applied to the labels")
    p.add_argument("--k", type=int, default=16, help="candidates for --tree best-of-k")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--tree", choices=TREE_STRATEGIES, default="bfs")
    p.add_argument("--pick", choices=("first", "random"), default="first")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="signlink", description="Link classification in signed networks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a generated labeled instance as an edge list")
    _add_common(p)

    for name, text in (
        ("oracle", "exact clustering indices, balance tests and the spectral bound"),
        ("spectral", "least-eigenvalue classifier on a random training set"),
        ("cover", "circuit-cover active learner (scccc or cccc)"),
        ("tree", "spanning-tree active learner"),
        ("online", "online learners, optionally against the tree-plus-K adversary"),
    ):
        p = sub.add_parser(name, help=text)
        _add_common(p)
        _add_algo(p)
        if name == "spectral":
            p.add_argument("--train-frac", type=float, default=0.6)
        if name == "cover":
            p.add_argument("--algorithm", choices=("scccc", "cccc"), default="scccc")
            p.add_argument("--edge-order", choices=("stored", "shuffle"), default="stored")
        if name == "online":
            p.add_argument("--learner", choices=("wm", "halving", "tree", "constant"), default="wm")
            p.add_argument("--adversary", type=int, metavar="K", help="play against the adversary with budget K")
            p.add_argument("--beta", type=float, default=0.5)
            p.add_argument("--edge-order", choices=("stored", "shuffle"), default="stored")

    p = sub.add_parser("bench", help="time numba kernels against the numpy fallback")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--trials", type=int, default=3, help="timing repeats per kernel")
    return parser


def _config(ns: argparse.Namespace) -> ExperimentConfig:
    names = {f.name for f in fields(ExperimentConfig)}
    kw = {k: v for k, v in vars(ns).items() if k in names}
    return ExperimentConfig(**kw)


def _write(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _gen(ns) -> str:
    cfg = _config(argparse.Namespace(**{**vars(ns), "command": "oracle", "graph": None}))
    cfg.validate()
    inst = make_instance(cfg)
    prov = {k: v for k, v in inst.provenance.items() if k not in ("base_labels",)}
    header = ["signlink gen " + json.dumps(prov, sort_keys=True)]
    return format_edge_list(inst.graph, header=header)


def _bench(ns) -> str:
    res = run_benchmark(repeat=ns.trials, seed=ns.seed)
    if ns.format == "csv":
        cols = ["kernel", "n", "m", "numpy_s", "numba_s", "speedup", "agree"]
        lines = [",".join(cols)]
        for row in res["kernels"]:
            lines.append(",".join("" if row.get(c) is None else str(row.get(c)) for c in cols))
        return "\n".join(lines) + "\n"
    return json.dumps(res, indent=2, sort_keys=True) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        if ns.command == "gen":
            text = _gen(ns)
        elif ns.command == "bench":
            text = _bench(ns)
        else:
            report = run_experiment(_config(ns))
            text = report.to_csv() if ns.format == "csv" else report.to_json()
        _write(text, ns.out)
    except (errors.SignlinkError, OSError) as exc:
        print(f"signlink: error: {exc}", file=sys.stderr)
        return exit_code_for(exc)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
