"""Cyclic tour construction and improvement over embedding distances.

The objective is the cyclic sum of consecutive L2 distances (the closing
edge included). Local search combines 2-opt and Or-opt (segment lengths
1-3) moves restricted to a k-nearest-neighbor candidate graph, with
first-improvement scanning, don't-look bits, and a final full verification
pass so the returned tour is provably move-stable unless the budget ran out.
"""

from __future__ import annotations

import itertools
import time
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .types import EmbeddingMatrix, Tour

# Full n x n distance caching is allowed up to this many nodes; beyond it
# rows are recomputed on demand (40k^2 doubles would be 12.8 GB).
MATRIX_CACHE_LIMIT = 2000

# A move counts as improving only above this gain, so floating-point noise
# cannot cycle the search.
MIN_GAIN = 1e-9


class DistanceOracle:
    """L2 distances between embedding rows, cached as a matrix when small."""

    def __init__(self, vectors: np.ndarray, cache_limit: int = MATRIX_CACHE_LIMIT):
        self.vectors = np.asarray(vectors, dtype=np.float64)
        self.n = self.vectors.shape[0]
        self.matrix: np.ndarray | None = None
        if self.n <= cache_limit:
            rows = [np.linalg.norm(self.vectors - self.vectors[i], axis=1) for i in range(self.n)]
            self.matrix = np.vstack(rows)

    def row(self, i: int) -> np.ndarray:
        if self.matrix is not None:
            return self.matrix[i]
        return np.linalg.norm(self.vectors - self.vectors[i], axis=1)

    def dist(self, i: int, j: int) -> float:
        if self.matrix is not None:
            return float(self.matrix[i, j])
        return float(np.linalg.norm(self.vectors[i] - self.vectors[j]))


@dataclass(frozen=True)
class CandidateGraph:
    """Per-node nearest-neighbor lists restricting which moves are examined.

    neighbors[i] holds min(k, n-1) node indices sorted by ascending distance
    to i, distance ties broken by smaller index.
    """

    neighbors: tuple[tuple[int, ...], ...]
    k: int


def tour_cost(emb: EmbeddingMatrix, tour: Tour) -> float:
    """Cyclic tour length: sum of consecutive L2 distances plus the closing edge."""
    if tour.n != emb.n:
        raise ValidationError(f"tour has {tour.n} nodes, embedding has {emb.n}")
    X = emb.vectors
    order = tour.order
    nxt = np.roll(order, -1)
    return float(np.linalg.norm(X[order] - X[nxt], axis=1).sum())


def build_candidates(emb: EmbeddingMatrix, k: int, threads: int = 1) -> CandidateGraph:
    """Exact k-nearest-neighbor lists for every node.

    Rows are processed in blocks to bound memory; ties are broken by smaller
    node index via a stable sort. Blocks may run on a thread pool; results
    are merged in block order, so the output is identical for any `threads`.
    """
    if k < 1:
        raise ValidationError("k must be at least 1")
    if threads < 1:
        raise ValidationError("threads must be >= 1")
    X = emb.vectors
    n, d = X.shape
    m = min(k, n - 1)
    block_rows = max(1, int(2**24 // max(1, n * d)))
    blocks = list(range(0, n, block_rows))

    def knn_block(start: int) -> list[tuple[int, ...]]:
        block = X[start : start + block_rows]
        diff = block[:, None, :] - X[None, :, :]
        dmat = np.sqrt((diff * diff).sum(axis=2))
        out: list[tuple[int, ...]] = []
        for r in range(block.shape[0]):
            drow = dmat[r]
            drow[start + r] = np.inf
            idx = np.argsort(drow, kind="stable")[:m]
            out.append(tuple(int(j) for j in idx))
        return out

    if threads == 1 or len(blocks) == 1:
        results = [knn_block(s) for s in blocks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(knn_block, blocks))
    lists = [row for chunk in results for row in chunk]
    return CandidateGraph(neighbors=tuple(lists), k=k)


def greedy_tour(emb: EmbeddingMatrix, start: int = 0) -> Tour:
    """Nearest-neighbor construction from `start`, distance ties to smaller index."""
    n = emb.n
    if not 0 <= start < n:
        raise ValidationError(f"start {start} out of range for n={n}")
    oracle = DistanceOracle(emb.vectors)
    visited = np.zeros(n, dtype=bool)
    order = np.empty(n, dtype=np.int64)
    order[0] = start
    visited[start] = True
    cur = start
    for i in range(1, n):
        row = oracle.row(cur).copy()
        row[visited] = np.inf
        cur = int(np.argmin(row))
        order[i] = cur
        visited[cur] = True
    return Tour(order)


@dataclass
class SearchResult:
    tour: Tour
    cost: float
    moves: int
    budget_exhausted: bool


def _symmetric_adjacency(graph: CandidateGraph, oracle: DistanceOracle) -> list[list[int]]:
    # Moves are admissible when a *new* edge joins candidate neighbors in
    # either direction, so symmetrize the k-NN relation up front.
    n = len(graph.neighbors)
    sets: list[set[int]] = [set(graph.neighbors[i]) for i in range(n)]
    for i in range(n):
        for j in graph.neighbors[i]:
            sets[j].add(i)
    adj: list[list[int]] = []
    for i in range(n):
        adj.append(sorted(sets[i], key=lambda j: (oracle.dist(i, j), j)))
    return adj


class _TourState:
    """Mutable tour with position index, supporting 2-opt flips and Or-opt moves."""

    def __init__(self, order: np.ndarray):
        self.order: list[int] = [int(v) for v in order]
        self.n = len(self.order)
        self.pos: list[int] = [0] * self.n
        for i, v in enumerate(self.order):
            self.pos[v] = i

    def next(self, v: int) -> int:
        i = self.pos[v] + 1
        return self.order[i if i < self.n else 0]

    def prev(self, v: int) -> int:
        return self.order[self.pos[v] - 1]

    def reverse_segment(self, i: int, j: int) -> None:
        # Reverse cyclic positions i..j inclusive.
        order, pos, n = self.order, self.pos, self.n
        cnt = (j - i) % n + 1
        for t in range(cnt // 2):
            ii = (i + t) % n
            jj = (j - t) % n
            oi, oj = order[ii], order[jj]
            order[ii], order[jj] = oj, oi
            pos[oi], pos[oj] = jj, ii

    def apply_2opt(self, t1: int, t3: int) -> None:
        # Remove the successor edges of t1 and t3; reverse the shorter side.
        n = self.n
        i = (self.pos[t1] + 1) % n
        j = self.pos[t3]
        if ((j - i) % n + 1) * 2 > n:
            i2 = (self.pos[t3] + 1) % n
            j2 = self.pos[t1]
            self.reverse_segment(i2, j2)
        else:
            self.reverse_segment(i, j)

    def apply_oropt(self, seg: list[int], u: int, reversed_: bool) -> None:
        # Remove `seg` (contiguous) and reinsert it directly after node u.
        n = self.n
        start = self.pos[seg[0]]
        L = len(seg)
        rest = [self.order[(start + L + t) % n] for t in range(n - L)]
        piece = seg[::-1] if reversed_ else seg
        at = rest.index(u) + 1
        new_order = rest[:at] + piece + rest[at:]
        self.order = new_order
        for i, v in enumerate(new_order):
            self.pos[v] = i


def _scan_node(a: int, state: _TourState, dist, adj: list[list[int]], adj_sets: list[set[int]]):
    """First improving 2-opt or Or-opt move involving node `a`, or None."""
    n = state.n
    a_next = state.next(a)
    a_prev = state.prev(a)
    d_a_next = dist(a, a_next)
    d_a_prev = dist(a, a_prev)

    for c in adj[a]:
        if c == a_next or c == a_prev:
            continue
        d_ac = dist(a, c)
        # Remove (a, a_next) and (c, next(c)); add (a, c) and (a_next, next(c)).
        c_next = state.next(c)
        gain = d_a_next + dist(c, c_next) - d_ac - dist(a_next, c_next)
        if gain > MIN_GAIN:
            return ("2opt", a, c)
        # Mirror move on the predecessor side: remove (a_prev, a) and (prev(c), c).
        c_prev = state.prev(c)
        gain = d_a_prev + dist(c_prev, c) - d_ac - dist(a_prev, c_prev)
        if gain > MIN_GAIN:
            return ("2opt", a_prev, c_prev)

    for L in (1, 2, 3):
        if n < L + 2:
            break
        pa = state.pos[a]
        seg = [state.order[(pa + t) % n] for t in range(L)]
        s1, sL = seg[0], seg[-1]
        seg_set = set(seg)
        p = state.order[(pa - 1) % n]
        q = state.order[(pa + L) % n]
        g_rem = dist(p, s1) + dist(sL, q) - dist(p, q)
        if L == 1:
            cands = adj[s1]
        else:
            first = adj_sets[s1]
            cands = adj[s1] + [c for c in adj[sL] if c not in first]
        for c in cands:
            if c in seg_set:
                continue
            c_pos = state.pos[c]
            c_nxt = state.order[(c_pos + 1) % n]
            if c_nxt == s1:  # c == p: after removal its successor becomes q
                c_nxt = q
            c_prv = state.order[(c_pos - 1) % n]
            if c_prv == sL:  # c == q: after removal its predecessor becomes p
                c_prv = p
            d_c_nxt = dist(c, c_nxt)
            gain = g_rem + d_c_nxt - dist(c, s1) - dist(sL, c_nxt)
            if gain > MIN_GAIN:
                return ("oropt", seg, c, False)
            gain = g_rem + d_c_nxt - dist(c, sL) - dist(s1, c_nxt)
            if gain > MIN_GAIN:
                return ("oropt", seg, c, True)
            d_prv_c = dist(c_prv, c)
            gain = g_rem + d_prv_c - dist(c_prv, s1) - dist(sL, c)
            if gain > MIN_GAIN:
                return ("oropt", seg, c_prv, False)
            gain = g_rem + d_prv_c - dist(c_prv, sL) - dist(s1, c)
            if gain > MIN_GAIN:
                return ("oropt", seg, c_prv, True)
    return None


def local_search(
    emb: EmbeddingMatrix,
    tour: Tour,
    graph: CandidateGraph,
    max_moves: int | None = None,
    time_limit: float | None = None,
) -> SearchResult:
    """Improve a tour until it is 2-opt and Or-opt stable on candidate edges.

    Deterministic for fixed inputs: first-improvement scans in tour order,
    a FIFO don't-look queue, and a full verification pass before returning.
    Returns the best tour found so far if the move or time budget runs out,
    flagged in the result.
    """
    if len(graph.neighbors) != emb.n:
        raise ValidationError("candidate graph does not match embedding size")
    if tour.n != emb.n:
        raise ValidationError("tour does not match embedding size")
    oracle = DistanceOracle(emb.vectors)
    if oracle.matrix is not None:
        M = oracle.matrix

        def dist(i: int, j: int) -> float:
            return M[i, j]

    else:
        dist = oracle.dist
    adj = _symmetric_adjacency(graph, oracle)
    adj_sets = [set(lst) for lst in adj]
    state = _TourState(tour.order)
    n = state.n

    deadline = None if time_limit is None else time.monotonic() + time_limit
    moves = 0
    exhausted = False

    def out_of_budget() -> bool:
        if max_moves is not None and moves >= max_moves:
            return True
        if deadline is not None and time.monotonic() >= deadline:
            return True
        return False

    queue: deque[int] = deque(int(v) for v in tour.order)
    in_queue = [True] * n

    def wake(nodes) -> None:
        for v in nodes:
            if not in_queue[v]:
                in_queue[v] = True
                queue.append(v)

    def apply_move(mv) -> None:
        nonlocal moves
        if mv[0] == "2opt":
            _, t1, t3 = mv
            t2, t4 = state.next(t1), state.next(t3)
            state.apply_2opt(t1, t3)
            wake((t1, t2, t3, t4))
        else:
            _, seg, u, rev = mv
            p, q = state.prev(seg[0]), state.next(seg[-1])
            v = state.next(u)
            if v == seg[0]:  # u == p: the gap closes onto q once the segment is out
                v = q
            state.apply_oropt(seg, u, rev)
            wake((p, q, seg[0], seg[-1], u, v))
        moves += 1

    while True:
        while queue:
            if out_of_budget():
                exhausted = True
                break
            a = queue.popleft()
            in_queue[a] = False
            mv = _scan_node(a, state, dist, adj, adj_sets)
            if mv is not None:
                apply_move(mv)
                wake((a,))
        if exhausted:
            break
        # Verification pass: don't-look bits alone cannot certify Or-opt
        # stability (an insertion gap may improve without either endpoint
        # being rescanned), so confirm with a full sweep in tour order.
        found = False
        for p_idx in range(n):
            if out_of_budget():
                exhausted = True
                break
            a = state.order[p_idx % n]
            mv = _scan_node(a, state, dist, adj, adj_sets)
            if mv is not None:
                apply_move(mv)
                wake((a,))
                found = True
                break
        if exhausted or not found:
            break

    result_tour = Tour(np.array(state.order, dtype=np.int64))
    return SearchResult(
        tour=result_tour,
        cost=tour_cost(emb, result_tour),
        moves=moves,
        budget_exhausted=exhausted,
    )


def brute_force_tour(emb: EmbeddingMatrix) -> tuple[Tour, float]:
    """Exact optimum by enumerating all (n-1)!/2 distinct cycles; n in 3..10.

    Ties resolve to the lexicographically smallest canonical order.
    """
    n = emb.n
    if not 3 <= n <= 10:
        raise ValidationError(f"brute force handles 3..10 nodes, got {n}")
    oracle = DistanceOracle(emb.vectors)
    D = oracle.matrix
    assert D is not None
    perms = [p for p in itertools.permutations(range(1, n)) if p[0] < p[-1]]
    full = np.zeros((len(perms), n), dtype=np.int64)
    full[:, 1:] = np.array(perms, dtype=np.int64)
    costs = np.zeros(len(perms))
    for i in range(n):
        costs += D[full[:, i], full[:, (i + 1) % n]]
    best = int(np.argmin(costs))
    return Tour(full[best]), float(costs[best])
