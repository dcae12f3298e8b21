"""Signed edge-list files.

One edge per line, ``u v s`` separated by whitespace, ``s`` one of ``+1 1 -1 +
-``.  ``#`` starts a comment.  Node tokens are arbitrary strings numbered in
order of first appearance.

:func:`save_edge_list` writes a ``#@nodes`` comment listing every node token in
id order; :func:`load_edge_list` uses it, when present, to restore ids and
isolated nodes exactly.  Other readers just see a comment.
"""

from __future__ import annotations

import io as _io
import os
import sys
from typing import Optional, Sequence, TextIO, Union

import numpy as np

from .errors import EdgeListParseError, GraphValidationError
from .graph import SignedGraph, build_graph

SIGN_TOKENS = {"+1": 1, "1": 1, "+": 1, "-1": -1, "-": -1}
NODES_DIRECTIVE = "#@nodes"

PathLike = Union[str, os.PathLike]


def parse_edge_list(stream: TextIO, duplicates: str = "error") -> tuple[SignedGraph, list[str]]:
    """Parse an edge list; returns the graph and the node token of each id.

    ``duplicates="error"`` rejects a pair listed twice; ``"first"`` keeps the
    first occurrence if the signs agree and still rejects conflicting signs.
    """
    if duplicates not in ("error", "first"):
        raise ValueError(f"unknown duplicates policy {duplicates!r}")
    ids: dict[str, int] = {}
    names: list[str] = []
    edges = []
    seen: dict[tuple[int, int], tuple[int, int]] = {}

    def node(tok: str) -> int:
        k = ids.get(tok)
        if k is None:
            k = ids[tok] = len(names)
            names.append(tok)
        return k

    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if line.startswith(NODES_DIRECTIVE):
            if names:
                raise EdgeListParseError("node list must precede the edges", lineno)
            for tok in line[len(NODES_DIRECTIVE):].split():
                if tok in ids:
                    raise EdgeListParseError(f"node {tok!r} listed twice", lineno)
                node(tok)
            continue
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise EdgeListParseError(f"expected 'u v sign', got {len(parts)} fields", lineno)
        a, b, s = parts
        if s not in SIGN_TOKENS:
            raise EdgeListParseError(f"invalid sign token {s!r}", lineno)
        if a == b:
            raise EdgeListParseError(f"self-loop on node {a!r}", lineno)
        i, j = node(a), node(b)
        key = (min(i, j), max(i, j))
        sign = SIGN_TOKENS[s]
        if key in seen:
            first_line, first_sign = seen[key]
            if duplicates == "error" or first_sign != sign:
                raise EdgeListParseError(f"pair {a} {b} already listed on line {first_line}", lineno)
            continue
        seen[key] = (lineno, sign)
        edges.append((i, j, sign))
    try:
        g = build_graph(len(names), edges)
    except GraphValidationError as exc:  # pragma: no cover - parser checks the same things
        raise EdgeListParseError(str(exc)) from exc
    return g, names


def load_edge_list(path: PathLike, duplicates: str = "error") -> tuple[SignedGraph, list[str]]:
    if str(path) == "-":
        return parse_edge_list(sys.stdin, duplicates)
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh, duplicates)


def loads_edge_list(text: str, duplicates: str = "error") -> tuple[SignedGraph, list[str]]:
    return parse_edge_list(_io.StringIO(text), duplicates)


def format_edge_list(
    g: SignedGraph,
    names: Optional[Sequence[str]] = None,
    header: Sequence[str] = (),
) -> str:
    """Edge list text with a ``#@nodes`` line and optional ``# ...`` header comments."""
    names = [str(k) for k in range(g.n)] if names is None else [str(x) for x in names]
    if len(names) != g.n:
        raise ValueError(f"{len(names)} names for {g.n} nodes")
    for x in names:
        if not x or any(c.isspace() for c in x) or "#" in x:
            raise ValueError(f"node name {x!r} cannot be written to an edge list")
    out = [f"# {h}" for h in header]
    out.append(" ".join([NODES_DIRECTIVE] + names))
    tok = np.where(g.sign > 0, "+1", "-1")
    for a, b, s in zip(g.u.tolist(), g.v.tolist(), tok.tolist()):
        out.append(f"{names[a]} {names[b]} {s}")
    return "\n".join(out) + "\n"


def save_edge_list(g: SignedGraph, path: PathLike, names=None, header: Sequence[str] = ()) -> None:
    text = format_edge_list(g, names, header)
    if str(path) == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
