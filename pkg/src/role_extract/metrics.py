"""Scoring: ground-truth overlap, centralities, per-cluster deviations, and
the exhaustive minimum-cost search used to certify the fast algorithms."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterator

import numpy as np
from scipy.optimize import linear_sum_assignment

from .cost import long_term_cost, short_term_cost
from .graph import Graph, degree_vector
from .partition import Partition, is_coarsening_of
from .spectral import dominant_eigenpair
from .wl import coarsest_ep

BRUTE_FORCE_MAX_NODES = 12


@dataclass(frozen=True)
class OverlapScore:
    """Best loss-free relabeling score between two partitions.

    ``raw_sum`` is the permutation-maximized sum over classes of the fraction
    of each found class recovered inside its matched ground-truth class (in
    [0, k]); ``value`` is that sum divided by k. ``permutation`` maps
    ground-truth class i to the matched found class.
    """

    value: float
    permutation: tuple[int, ...]
    raw_sum: float


def overlap(found: Partition, truth: Partition) -> OverlapScore:
    """Permutation-maximized class overlap, normalized to [0, 1].

    Solved as an optimal assignment on the k x k gain matrix rather than by
    enumerating permutations. When the class counts differ, the smaller side
    is padded with empty virtual classes that score zero.
    """
    if found.n != truth.n:
        raise ValueError(f"partitions cover {found.n} and {truth.n} nodes")
    k = max(found.k, truth.k)
    counts = np.zeros((k, k))
    np.add.at(counts, (found.assignment, truth.assignment), 1.0)
    sizes = np.bincount(found.assignment, minlength=k).astype(float)
    gain = np.divide(counts, sizes[:, None], out=np.zeros((k, k)), where=sizes[:, None] > 0)
    rows, cols = linear_sum_assignment(gain, maximize=True)
    raw = float(gain[rows, cols].sum())
    perm = np.empty(k, dtype=int)
    perm[cols] = rows  # ground-truth class i -> found class perm[i]
    return OverlapScore(value=raw / k, permutation=tuple(int(c) for c in perm), raw_sum=raw)


def _adjacency_lists(g: Graph) -> list[np.ndarray]:
    return [g.neighbors(v)[0] for v in range(g.n)]


def _bfs_distances(neigh: list[np.ndarray], source: int, n: int) -> np.ndarray:
    dist = np.full(n, -1, dtype=int)
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in neigh[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def pagerank(g: Graph, damping: float = 0.85, tol: float = 1e-10,
             max_iter: int = 10_000) -> np.ndarray:
    """PageRank with weighted transitions; dangling mass is spread uniformly."""
    n = g.n
    deg = degree_vector(g)
    dangling = deg == 0
    inv_deg = np.divide(1.0, deg, out=np.zeros(n), where=~dangling)
    rank = np.full(n, 1.0 / n)
    uniform = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        spread = rank * inv_deg
        nxt = damping * (g.dot(spread) + rank[dangling].sum() * uniform) \
            + (1 - damping) * uniform
        if np.abs(nxt - rank).sum() <= tol:
            return nxt
        rank = nxt
    return rank


def closeness_centrality(g: Graph, harmonic: bool = False) -> np.ndarray:
    """Unweighted closeness, per connected component; isolated nodes get 0."""
    neigh = _adjacency_lists(g)
    out = np.zeros(g.n)
    for v in range(g.n):
        dist = _bfs_distances(neigh, v, g.n)
        reached = dist > 0
        if not reached.any():
            continue
        if harmonic:
            out[v] = float((1.0 / dist[reached]).sum()) / max(g.n - 1, 1)
        else:
            comp_size = int((dist >= 0).sum())
            out[v] = (comp_size - 1) / float(dist[reached].sum())
    return out


def betweenness_centrality(g: Graph) -> np.ndarray:
    """Unnormalized shortest-path betweenness (Brandes accumulation) over
    unweighted paths; endpoints excluded. Each unordered pair counts once."""
    n = g.n
    neigh = _adjacency_lists(g)
    score = np.zeros(n)
    for s in range(n):
        stack: list[int] = []
        preds: list[list[int]] = [[] for _ in range(n)]
        sigma = np.zeros(n)
        sigma[s] = 1.0
        dist = np.full(n, -1, dtype=int)
        dist[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            stack.append(u)
            for v in neigh[u]:
                if v == u:
                    continue
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    queue.append(v)
                if dist[v] == dist[u] + 1:
                    sigma[v] += sigma[u]
                    preds[v].append(u)
        delta = np.zeros(n)
        while stack:
            w = stack.pop()
            for u in preds[w]:
                delta[u] += sigma[u] / sigma[w] * (1.0 + delta[w])
            if w != s:
                score[w] += delta[w]
    return score / 2.0


def eigenvector_centrality(g: Graph) -> np.ndarray:
    return dominant_eigenpair(g, check_simple=False).eigenvector.copy()


CENTRALITY_KINDS = ("pagerank", "eigenvector", "closeness", "betweenness")


def centrality(g: Graph, kind: str, **opts) -> np.ndarray:
    """Dispatch over the four supported centralities.

    Betweenness and closeness always use unweighted shortest paths, even on
    weighted graphs (weights here are probabilities, not lengths).
    """
    if kind == "pagerank":
        return pagerank(g, **opts)
    if kind == "eigenvector":
        return eigenvector_centrality(g)
    if kind == "closeness":
        return closeness_centrality(g, **opts)
    if kind == "betweenness":
        return betweenness_centrality(g)
    raise ValueError(f"unknown centrality {kind!r}, expected one of {CENTRALITY_KINDS}")


def cluster_deviation(values, p: Partition) -> float:
    """Summed l1 deviation of each entry from its cluster mean."""
    x = np.asarray(values, dtype=float)
    if x.shape[0] != p.n:
        raise ValueError(f"got {x.shape[0]} values for {p.n} nodes")
    means = np.array([x[cls].mean() for cls in p.classes()])
    return float(np.abs(x - means[p.assignment]).sum())


def _restricted_growth_strings(n: int, max_k: int) -> Iterator[np.ndarray]:
    """All partitions of 0..n-1 into at most max_k classes, lexicographically."""
    labels = np.zeros(n, dtype=int)

    def rec(i: int, used: int) -> Iterator[np.ndarray]:
        if i == n:
            yield labels
            return
        for c in range(min(used + 1, max_k)):
            labels[i] = c
            yield from rec(i + 1, max(used, c + 1))

    yield from rec(1, 1) if n > 0 else iter(())


COST_KINDS = ("short_term_l2sq", "long_term_l1")


def brute_force_min_cost(g: Graph, k: int, cost_kind: str,
                         cep_compatible_only: bool = False) -> tuple[Partition, float]:
    """Exhaustive minimum of a cost over all partitions into at most k classes.

    Exponential-time certification oracle, guarded to n <= 12. With
    ``cep_compatible_only`` the search runs over coarsenings of the coarsest
    equitable partition (equivalently, partitions of its classes). Ties keep
    the first minimizer in restricted-growth-string order.
    """
    if g.n > BRUTE_FORCE_MAX_NODES:
        raise ValueError(f"brute force is guarded to n <= {BRUTE_FORCE_MAX_NODES}, got {g.n}")
    if not 1 <= k <= g.n:
        raise ValueError(f"k must satisfy 1 <= k <= n, got k={k}")
    if cost_kind not in COST_KINDS:
        raise ValueError(f"unknown cost kind {cost_kind!r}, expected one of {COST_KINDS}")

    def evaluate(p: Partition) -> float:
        if cost_kind == "short_term_l2sq":
            return short_term_cost(g, p, norm="l2_squared").value
        return long_term_cost(g, p).value

    if cep_compatible_only:
        cep = coarsest_ep(g)
        units = cep.assignment
        n_units = cep.k
    else:
        units = np.arange(g.n)
        n_units = g.n

    best_cost = np.inf
    best: Partition | None = None
    for unit_labels in _restricted_growth_strings(n_units, min(k, n_units)):
        candidate = Partition(unit_labels[units])
        value = evaluate(candidate)
        if value < best_cost:
            best_cost = value
            best = Partition(candidate.assignment)
    assert best is not None
    return best, float(best_cost)


def is_cep_compatible_partition(g: Graph, p: Partition) -> bool:
    """Convenience re-export used by experiment drivers."""
    return is_coarsening_of(p, coarsest_ep(g))
