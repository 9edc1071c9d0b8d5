"""Dominant eigenpair, optimal 1-D clustering, and eigenvector-based roles.

The long-range structure of a symmetric nonnegative adjacency is carried by
its dominant eigenvector: nodes whose eigenvector entries agree play the same
role at infinite depth. Clustering that one-dimensional vector optimally is
therefore the exact minimizer of the long-term cost (see cost.long_term_cost),
and is solvable by dynamic programming over sorted contiguous segments.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph
from .partition import Partition


class NonSimpleDominantError(ValueError):
    """Dominant eigenvalue is (numerically) not simple; eigenvector roles undefined."""


class PowerIterationError(RuntimeError):
    """Power iteration failed to reach the requested residual."""


@dataclass(frozen=True)
class EigenResult:
    """Dominant eigenpair of an adjacency matrix.

    ``eigenvector`` is entrywise nonnegative and normalized to unit l1 norm.
    ``simple`` is False when a deflated second eigenvalue matches the dominant
    one within 1e-8.
    """

    eigenvalue: float
    eigenvector: np.ndarray
    iterations: int
    residual: float
    simple: bool


@dataclass(frozen=True)
class EvEmbedding:
    """Cluster sizes and per-cluster eigenvector means, sorted by center."""

    sizes: np.ndarray
    centers: np.ndarray

    @property
    def k(self) -> int:
        return self.sizes.size

    def to_csv_row(self) -> str:
        parts = [str(self.k)]
        parts += [str(int(s)) for s in self.sizes]
        parts += [repr(float(c)) for c in self.centers]
        return ",".join(parts)


_SIMPLE_GAP = 1e-8


def _shifted_power(g: Graph, start: np.ndarray, tol: float, max_iter: int,
                   deflate: np.ndarray | None = None) -> tuple[float, np.ndarray, int, float]:
    """Power iteration on A + I; the unit shift removes the -rho oscillation of
    bipartite spectra so the iteration always converges to the top eigenvector
    (or, with ``deflate``, to the top vector orthogonal to it)."""
    v = start / np.linalg.norm(start)
    if deflate is not None:
        v = v - (deflate @ v) * deflate
        nrm = np.linalg.norm(v)
        v = v / nrm if nrm > 0 else _orthogonal_unit(deflate)
    lam = 0.0
    residual = np.inf
    for it in range(1, max_iter + 1):
        av = g.dot(v) + v
        if deflate is not None:
            av = av - (deflate @ av) * deflate
        nrm = np.linalg.norm(av)
        if nrm == 0.0:
            # start vector annihilated; eigenvalue of the shifted operator is 0
            return -1.0, v, it, 0.0
        nxt = av / nrm
        lam = float(v @ av)
        residual = float(np.linalg.norm(av - lam * v))
        v = nxt
        if residual <= tol:
            return lam - 1.0, v, it, residual
    return lam - 1.0, v, max_iter, residual


def _orthogonal_unit(u: np.ndarray) -> np.ndarray:
    e = np.zeros_like(u)
    e[int(np.argmin(np.abs(u)))] = 1.0
    e -= (u @ e) * u
    return e / np.linalg.norm(e)


def dominant_eigenpair(g: Graph, tol: float = 1e-10, max_iter: int = 100_000,
                       check_simple: bool = True) -> EigenResult:
    """Dominant eigenpair by power iteration from the all-ones vector.

    Raises ``PowerIterationError`` if the residual target is not met within
    ``max_iter`` rounds, and ``ValueError`` on an all-zero adjacency.
    """
    if g.n == 0:
        raise ValueError("graph is empty")
    if not g.dot(np.ones(g.n)).any():
        raise ValueError("zero adjacency matrix has no dominant eigenpair")
    key = ("eig", tol, check_simple)
    cached = g._cache.get(key)
    if cached is not None:
        return cached

    start = np.ones(g.n)
    lam, v, iters, residual = _shifted_power(g, start, tol, max_iter)
    if residual > tol:
        raise PowerIterationError(
            f"power iteration did not reach tol={tol} in {max_iter} iterations "
            f"(best residual {residual:.3e})"
        )

    # Perron vector of a nonnegative matrix: fix the sign, clip float dust.
    if v.sum() < 0:
        v = -v
    v = np.clip(v, 0.0, None)
    v = v / v.sum()

    simple = True
    if check_simple and g.n > 1:
        unit = v / np.linalg.norm(v)
        lam2, _, _, _ = _shifted_power(g, start + _orthogonal_unit(unit), tol=1e-12,
                                       max_iter=5000, deflate=unit)
        simple = (lam - lam2) > _SIMPLE_GAP

    result = EigenResult(eigenvalue=lam, eigenvector=v, iterations=iters,
                         residual=residual, simple=simple)
    g._cache[key] = result
    return result


def spectral_radius(g: Graph) -> float:
    """Largest eigenvalue; skips the simplicity check."""
    return dominant_eigenpair(g, check_simple=False).eigenvalue


def _segment_costs_abs(x: np.ndarray, prefix: np.ndarray, j: int) -> np.ndarray:
    """Sum of |x_t - segment mean| for all segments [i..j] of sorted x, i = 0..j."""
    i = np.arange(j + 1)
    length = j + 1 - i
    mean = (prefix[j + 1] - prefix[i]) / length
    split = np.clip(np.searchsorted(x, mean), i, j + 1)
    below = split - i
    sum_below = prefix[split] - prefix[i]
    total = prefix[j + 1] - prefix[i]
    return mean * below - sum_below + (total - sum_below) - mean * (length - below)


def _segment_costs_sq(prefix: np.ndarray, prefix_sq: np.ndarray, j: int) -> np.ndarray:
    i = np.arange(j + 1)
    length = j + 1 - i
    seg_sum = prefix[j + 1] - prefix[i]
    seg_sq = prefix_sq[j + 1] - prefix_sq[i]
    return seg_sq - seg_sum * seg_sum / length


def cluster_1d(values, k: int, objective: str = "abs_dev_from_mean") -> Partition:
    """Optimal 1-D clustering into at most k clusters.

    Minimizes the summed per-cluster deviation from the cluster mean, either
    absolute (``abs_dev_from_mean``) or squared (``squared_dev_from_mean``).
    Optimal clusters are contiguous in sorted order, so a dynamic program over
    split points finds the exact optimum. Ties between equal-cost splits
    resolve to the first (earlier-segment) candidate; if fewer clusters reach
    the same optimum, the smallest such cluster count is returned (splitting
    exactly equal values never pays, so duplicates stay together).
    """
    x = np.asarray(values, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("values must be a non-empty 1-D vector")
    n = x.size
    if not 1 <= k <= n:
        raise ValueError(f"k must satisfy 1 <= k <= n, got k={k}, n={n}")
    if objective not in ("abs_dev_from_mean", "squared_dev_from_mean"):
        raise ValueError(f"unknown objective {objective!r}")

    order = np.argsort(x, kind="stable")
    xs = x[order]
    prefix = np.concatenate(([0.0], np.cumsum(xs)))
    prefix_sq = np.concatenate(([0.0], np.cumsum(xs * xs)))

    def seg_costs(j: int) -> np.ndarray:
        if objective == "abs_dev_from_mean":
            return _segment_costs_abs(xs, prefix, j)
        return _segment_costs_sq(prefix, prefix_sq, j)

    # dp[m][j]: best cost of clustering xs[0..j] into exactly m+1 segments
    dp = np.full((k, n), np.inf)
    back = np.zeros((k, n), dtype=int)
    for j in range(n):
        costs = seg_costs(j)
        dp[0, j] = costs[0]
        for m in range(1, min(k, j + 1)):
            cand = dp[m - 1, m - 1:j] + costs[m:j + 1]
            best = int(np.argmin(cand))
            dp[m, j] = cand[best]
            back[m, j] = m + best  # start index of the last segment

    finals = dp[:, n - 1]
    best_cost = float(np.min(finals))
    m_star = int(np.min(np.nonzero(finals == best_cost)[0]))

    labels_sorted = np.empty(n, dtype=int)
    j = n - 1
    for m in range(m_star, -1, -1):
        start = back[m, j] if m > 0 else 0
        labels_sorted[start:j + 1] = m
        j = start - 1
    labels = np.empty(n, dtype=int)
    labels[order] = labels_sorted
    return Partition(labels)


# Eigenvector entries closer than this are treated as equal before clustering;
# sits above the power-iteration residual so float noise never splits nodes
# that agree structurally.
EIGENVECTOR_SNAP_TOL = 1e-9


def _snap_plateaus(values: np.ndarray, tol: float) -> np.ndarray:
    order = np.argsort(values, kind="stable")
    snapped = values.copy()
    start = 0
    xs = values[order]
    for i in range(1, len(xs) + 1):
        if i == len(xs) or xs[i] - xs[i - 1] > tol:
            snapped[order[start:i]] = xs[start:i].mean()
            start = i
    return snapped


def eigenvector_clustering(g: Graph, k: int) -> Partition:
    """Cluster nodes by their dominant-eigenvector entries (exact 1-D optimum).

    This minimizes the long-term (infinite-depth) equitability cost under the
    l1 norm among all hard k-partitions, and never separates nodes whose
    eigenvector entries agree to within ``EIGENVECTOR_SNAP_TOL`` (the result
    may therefore have fewer than k classes on highly symmetric graphs).
    Requires a simple dominant eigenvalue.
    """
    eig = dominant_eigenpair(g)
    if not eig.simple:
        raise NonSimpleDominantError(
            "dominant eigenvalue is not simple; eigenvector clustering is undefined"
        )
    snapped = _snap_plateaus(eig.eigenvector, EIGENVECTOR_SNAP_TOL)
    return cluster_1d(snapped, k, objective="abs_dev_from_mean")


def eigenvector_embedding(g: Graph, k: int) -> EvEmbedding:
    """Cluster sizes and eigenvector cluster means, sorted by center ascending."""
    eig = dominant_eigenpair(g)
    part = eigenvector_clustering(g, k)
    sizes = part.class_sizes()
    centers = np.array([eig.eigenvector[cls].mean() for cls in part.classes()])
    order = np.argsort(centers, kind="stable")
    return EvEmbedding(sizes=sizes[order], centers=centers[order])
