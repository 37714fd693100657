"""Provable lower bounds on the optimal tour cost via minimum one-trees.

A one-tree is a spanning tree over all nodes except node 0 plus the two
cheapest edges at node 0. Every tour is a one-tree with all degrees 2, so
the minimum one-tree weight under potential-modified distances,
d'(i,j) = d(i,j) + pi_i + pi_j, minus twice the potential sum, bounds the
optimum from below for *any* potential vector. Subgradient ascent on the
degree surplus tightens the bound.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .tsp import DistanceOracle
from .types import EmbeddingMatrix


@dataclass(frozen=True)
class OneTree:
    """Edges (n of them), per-node degrees, and the bound value w(pi)."""

    edges: tuple[tuple[int, int], ...]
    degrees: np.ndarray
    weight: float


def min_one_tree(
    emb: EmbeddingMatrix, pi: np.ndarray, oracle: DistanceOracle | None = None
) -> OneTree:
    """Minimum one-tree under modified distances d(i,j) + pi_i + pi_j.

    The spanning tree covers nodes 1..n-1 (Prim, dense O(n^2) scan); node 0
    contributes its two cheapest modified edges. The weight already has
    2 * sum(pi) subtracted, making it a valid lower bound on the optimum.
    """
    n = emb.n
    if n < 3:
        raise ValidationError("one-tree needs at least 3 nodes")
    pi = np.asarray(pi, dtype=np.float64)
    if pi.shape != (n,):
        raise ValidationError(f"potentials must have shape ({n},)")
    if not np.all(np.isfinite(pi)):
        raise ValidationError("potentials must be finite")
    if oracle is None:
        oracle = DistanceOracle(emb.vectors)

    def mod_row(i: int) -> np.ndarray:
        return oracle.row(i) + pi + pi[i]

    # Prim over nodes 1..n-1, seeded at node 1. Ties go to the smaller index
    # (argmin returns the first minimum).
    in_tree = np.zeros(n, dtype=bool)
    in_tree[0] = True  # excluded from the spanning tree part
    in_tree[1] = True
    best_dist = mod_row(1)
    best_parent = np.full(n, 1, dtype=np.int64)
    best_dist[0] = np.inf
    best_dist[1] = np.inf
    edges: list[tuple[int, int]] = []
    total = 0.0
    for _ in range(n - 2):
        j = int(np.argmin(best_dist))
        total += float(best_dist[j])
        edges.append((int(best_parent[j]), j))
        in_tree[j] = True
        row = mod_row(j)
        row[0] = np.inf
        better = row < best_dist
        better &= ~in_tree
        best_dist[better] = row[better]
        best_parent[better] = j
        best_dist[j] = np.inf

    # Two cheapest modified edges at node 0; stable sort breaks ties by index.
    row0 = mod_row(0)
    row0[0] = np.inf
    j1, j2 = (int(v) for v in np.argsort(row0, kind="stable")[:2])
    total += float(row0[j1]) + float(row0[j2])
    edges.append((0, j1))
    edges.append((0, j2))

    degrees = np.zeros(n, dtype=np.int64)
    for u, v in edges:
        degrees[u] += 1
        degrees[v] += 1
    weight = total - 2.0 * float(pi.sum())
    return OneTree(edges=tuple(edges), degrees=degrees, weight=weight)


@dataclass
class AscentResult:
    bound: float
    pi: np.ndarray
    iterations_run: int
    converged: bool  # all one-tree degrees hit 2 (the tree is an optimal tour)


def held_karp_ascent(
    emb: EmbeddingMatrix, iterations: int, upper_bound: float
) -> AscentResult:
    """Maximize the one-tree bound by subgradient ascent on node potentials.

    Updates pi += t_m * (deg - 2) with the geometric step schedule
    t_m = t_0 * 0.95^m, t_0 = (upper_bound - w(0)) / max(1, ||deg - 2||^2).
    The reported bound is the max over all visited potentials and is valid
    (<= optimal tour cost) regardless of convergence; `upper_bound` must be
    the cost of some feasible tour.
    """
    if iterations < 0:
        raise ValidationError("iterations must be >= 0")
    n = emb.n
    oracle = DistanceOracle(emb.vectors)
    pi = np.zeros(n, dtype=np.float64)
    tree = min_one_tree(emb, pi, oracle)
    best = tree.weight
    grad = tree.degrees - 2
    if not np.any(grad):
        return AscentResult(bound=best, pi=pi, iterations_run=0, converged=True)
    t0 = max(0.0, upper_bound - tree.weight) / max(1.0, float(grad @ grad))
    for m in range(iterations):
        pi = pi + (t0 * 0.95**m) * grad
        tree = min_one_tree(emb, pi, oracle)
        best = max(best, tree.weight)
        grad = tree.degrees - 2
        if not np.any(grad):
            return AscentResult(bound=max(best, tree.weight), pi=pi, iterations_run=m + 1, converged=True)
    return AscentResult(bound=best, pi=pi, iterations_run=iterations, converged=False)
