"""Signed Laplacian and the least-eigenvalue link classifier."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConvergenceError, ParameterError, SizeLimitError
from .graph import SignedGraph, TwoClustering, connected_components

QUADRATIC_LIMIT = 20


@dataclass(frozen=True, eq=False)
class EigenResult:
    value: float
    vector: np.ndarray
    residual: float
    iterations: int = 0


def signed_laplacian(g: SignedGraph, edge_subset=None, dtype=np.int64) -> np.ndarray:
    """Dense ``D - Y`` where ``Y`` is the signed adjacency and ``D`` the degrees.

    With ``edge_subset`` only those edges contribute, to both ``Y`` and ``D``.
    """
    if edge_subset is None:
        ids = np.arange(g.m)
    else:
        ids = np.asarray(sorted(set(int(e) for e in edge_subset)), dtype=np.int64)
    u, v, s = g.u[ids], g.v[ids], g.sign[ids].astype(dtype)
    L = np.zeros((g.n, g.n), dtype=dtype)
    L[u, v] = -s
    L[v, u] = -s
    np.add.at(L, (u, u), 1)
    np.add.at(L, (v, v), 1)
    return L


def _orient(vec: np.ndarray, tol: float) -> np.ndarray:
    # deterministic sign: first clearly non-zero component positive
    nz = np.flatnonzero(np.abs(vec) > tol)
    if nz.size and vec[nz[0]] < 0:
        return -vec
    return vec


def _power_iteration(L: np.ndarray, tol: float, max_iter: int) -> EigenResult:
    n = L.shape[0]
    # Gershgorin: every eigenvalue lies below max_i (L_ii + sum_j |L_ij|)
    c = float(np.max(np.abs(L).sum(axis=1))) if n else 0.0
    M = c * np.eye(n) - L
    x = np.ones(n) + np.linspace(0.0, 1.0, n)  # generic start, deterministic
    x /= np.linalg.norm(x)
    lam = float(x @ L @ x)
    best = None
    for it in range(1, max_iter + 1):
        y = M @ x
        norm = np.linalg.norm(y)
        if norm == 0.0:
            # L = cI: every vector is an eigenvector
            return EigenResult(c, x, 0.0, it)
        x = y / norm
        lam = float(x @ L @ x)
        residual = float(np.linalg.norm(L @ x - lam * x))
        best = EigenResult(lam, x, residual, it)
        if residual <= tol:
            return best
    raise ConvergenceError(f"power iteration did not reach residual {tol} in {max_iter} steps", best)


def min_eigenpair(L: np.ndarray, tol: float = 1e-9, max_iter: int = 100_000, method: str = "eigh") -> EigenResult:
    """Smallest eigenvalue of a symmetric matrix with a unit eigenvector.

    ``method="eigh"`` uses LAPACK's symmetric solver; ``method="power"`` runs
    shifted power iteration on ``cI - L`` (``c`` a Gershgorin bound) until the
    residual ``||Lv - lambda v||`` drops to ``tol``.
    """
    if tol <= 0:
        raise ParameterError("tol must be positive")
    L = np.asarray(L, dtype=np.float64)
    n = L.shape[0]
    if n == 0:
        return EigenResult(0.0, np.zeros(0), 0.0)
    if method == "power":
        res = _power_iteration(L, tol, max_iter)
    elif method == "eigh":
        w, V = np.linalg.eigh(L)
        vec = V[:, 0]
        res = EigenResult(float(w[0]), vec, float(np.linalg.norm(L @ vec - w[0] * vec)), 1)
        floor = 1e3 * np.finfo(float).eps * n * max(1.0, float(np.abs(L).max()))
        if res.residual > max(tol, floor):
            raise ConvergenceError(f"eigh residual {res.residual} exceeds {tol}", res)
    else:
        raise ParameterError(f"unknown method {method!r}")
    vec = _orient(res.vector / np.linalg.norm(res.vector), tol)
    return EigenResult(res.value, vec, res.residual, res.iterations)


def boolean_min_quadratic(g: SignedGraph, limit: int = QUADRATIC_LIMIT) -> tuple[int, TwoClustering]:
    """Exact ``min x'L x`` over ``x`` in ``{-1, +1}^n`` with a minimiser."""
    if g.n > limit:
        raise SizeLimitError(f"boolean quadratic over {g.n} nodes exceeds limit {limit}")
    value, x = kernels.min_quadratic(signed_laplacian(g))
    return value, TwoClustering.from_sides(x)


@dataclass(frozen=True, eq=False)
class EdgePredictions:
    """Predicted signs for the edges left out of training."""

    edge_ids: np.ndarray
    predicted: np.ndarray
    clustering: TwoClustering
    eigen: EigenResult | None

    def mistakes(self, truth) -> int:
        truth = np.asarray(truth)
        return int(np.count_nonzero(truth[self.edge_ids] != self.predicted))


def least_eigen_classifier(
    g: SignedGraph,
    training_edge_ids,
    training_labels=None,
    tol: float = 1e-9,
    method: str = "eigh",
) -> EdgePredictions:
    """Predict non-training edges from the sign pattern of the bottom eigenvector.

    The Laplacian is built from training edges only.  Nodes whose eigenvector
    entry is below ``tol`` in magnitude go to side +1.  If the training graph
    is empty or does not connect all nodes the eigenvector is not determined,
    and every test edge is predicted +1.
    """
    train = np.asarray(sorted(set(int(e) for e in training_edge_ids)), dtype=np.int64)
    test = np.setdiff1d(np.arange(g.m), train)
    h = g
    if training_labels is not None:
        signs = np.array(g.sign, copy=True)
        signs[train] = np.asarray(training_labels, dtype=np.int8)
        h = g.with_signs(signs)
    mask = np.zeros(g.m, dtype=bool)
    mask[train] = True
    connected = train.size > 0 and connected_components(h, mask).n_clusters == 1
    if not connected:
        ones = np.ones(g.n, dtype=np.int8)
        return EdgePredictions(test, np.ones(len(test), dtype=np.int8), TwoClustering.from_sides(ones), None)
    eig = min_eigenpair(signed_laplacian(h, train, dtype=np.float64), tol=tol, method=method)
    sides = np.where(eig.vector < -tol, -1, 1).astype(np.int8)
    pred = (sides[g.u[test]] * sides[g.v[test]]).astype(np.int8)
    return EdgePredictions(test, pred, TwoClustering.from_sides(sides), eig)
