"""Approximate refinement for a fixed class budget.

Exact color refinement splits classes without bound, which makes it useless on
noisy data. The approximate variant keeps a row-stochastic assignment H of the
nodes to at most k classes, alternates the class-adjacency embedding
``X = A H`` with a clustering of X's rows, and stops once the hardened
partition stabilizes. The clustering backend is pluggable: deterministic
average linkage (the variant with recovery guarantees on planted-role
benchmarks), plain k-means, or fuzzy c-means for fractional assignments.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .graph import Graph
from .partition import Partition, SoftAssignment, harden, save_partition_csv
from .spectral import spectral_radius

BACKENDS = ("average_linkage", "kmeans", "fuzzy_cmeans")
NORMALIZATIONS = ("spectral", "row_stochastic", "none")


@dataclass
class ApproxWLConfig:
    """Settings for one approximate-refinement run.

    ``distance`` defaults to l1 for average linkage (the metric backing its
    recovery guarantee) and l2 otherwise. ``normalization`` controls the
    one-time rescaling of A: by spectral radius (default, keeps embeddings
    bounded across steps), row-stochastic, or none.
    """

    k: int
    backend: str = "average_linkage"
    max_steps: int = 30
    stabilization: int = 2
    fuzzifier: float = 2.0
    distance: str | None = None
    normalization: str = "spectral"
    seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")
        if self.stabilization < 1:
            raise ValueError("stabilization must be >= 1")
        if self.fuzzifier <= 1:
            raise ValueError("fuzzifier m must be > 1")
        if self.backend not in BACKENDS:
            raise ValueError(f"unknown backend {self.backend!r}, expected one of {BACKENDS}")
        if self.normalization not in NORMALIZATIONS:
            raise ValueError(
                f"unknown normalization {self.normalization!r}, expected one of {NORMALIZATIONS}"
            )
        if self.distance is None:
            self.distance = "l1" if self.backend == "average_linkage" else "l2"
        if self.distance not in ("l1", "l2"):
            raise ValueError("distance must be 'l1' or 'l2'")


@dataclass(frozen=True)
class ApproxWLStep:
    embedding: np.ndarray
    assignment: SoftAssignment
    hardened: Partition


@dataclass(frozen=True)
class ApproxWLResult:
    """Final assignment plus the per-step trace of one run."""

    assignment: SoftAssignment
    trace: tuple[ApproxWLStep, ...]
    steps_run: int
    converged: bool

    @property
    def partition(self) -> Partition:
        return harden(self.assignment)


def average_linkage(x: np.ndarray, k: int, distance: str = "l1") -> Partition:
    """Agglomerative clustering of matrix rows down to k clusters.

    Merges the pair of clusters with the smallest mean pairwise row distance
    until k remain. Cluster slots are keyed by their minimum row id, and exact
    distance ties resolve to the smallest (min-id, min-id) pair, so the result
    is fully deterministic.
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    n = x.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must satisfy 1 <= k <= n, got k={k}, n={n}")
    metric = "cityblock" if distance == "l1" else "euclidean"
    dist = cdist(x, x, metric=metric)
    np.fill_diagonal(dist, np.inf)
    members: dict[int, list[int]] = {i: [i] for i in range(n)}

    while len(members) > k:
        i, j = np.unravel_index(np.argmin(dist), dist.shape)
        i, j = int(min(i, j)), int(max(i, j))
        si, sj = len(members[i]), len(members[j])
        # mean pairwise distance merges by size-weighted average (Lance-Williams)
        merged_row = (si * dist[i] + sj * dist[j]) / (si + sj)
        dist[i] = merged_row
        dist[:, i] = merged_row
        dist[i, i] = np.inf
        dist[j] = np.inf
        dist[:, j] = np.inf
        members[i].extend(members[j])
        del members[j]

    labels = np.empty(n, dtype=int)
    for slot, nodes in members.items():
        labels[nodes] = slot
    return Partition(labels)


def _kmeans_rows(x: np.ndarray, k: int, seed: int) -> Partition:
    from sklearn.cluster import KMeans

    k = min(k, len(np.unique(x, axis=0)))
    if k <= 1:
        return Partition.single_class(x.shape[0])
    km = KMeans(n_clusters=k, n_init=4, random_state=seed)
    return Partition(km.fit_predict(x))


def _init_centers(x: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """k-means++-style seeding: subsequent centers drawn proportional to the
    squared distance from the centers chosen so far."""
    n = x.shape[0]
    centers = [x[rng.integers(n)]]
    for _ in range(1, k):
        d2 = np.min(cdist(x, np.asarray(centers), metric="sqeuclidean"), axis=1)
        total = d2.sum()
        if total == 0:
            centers.append(x[rng.integers(n)])
            continue
        centers.append(x[rng.choice(n, p=d2 / total)])
    return np.asarray(centers)


def fuzzy_cmeans(x: np.ndarray, k: int, m: float = 2.0, seed: int = 0,
                 tol: float = 1e-6, max_iter: int = 300) -> SoftAssignment:
    """Fuzzy c-means on matrix rows.

    Memberships follow the standard inverse-distance-ratio update with
    fuzzifier m; centers are the membership^m weighted row means. A row that
    coincides with a center gets full membership there (ties to the lowest
    center index). Clusters whose total membership falls below 1e-6 * n are
    dropped, so the effective cluster count may shrink.
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    n = x.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must satisfy 1 <= k <= n, got k={k}, n={n}")
    if m <= 1:
        raise ValueError("fuzzifier m must be > 1")
    rng = np.random.default_rng(seed)
    centers = _init_centers(x, k, rng)
    exponent = 2.0 / (m - 1.0)
    u = None
    for _ in range(max_iter):
        d = cdist(x, centers)
        u_new = np.zeros((n, k))
        zero_rows = np.nonzero((d <= 0).any(axis=1))[0]
        pos_rows = np.setdiff1d(np.arange(n), zero_rows, assume_unique=True)
        for i in zero_rows:
            u_new[i, int(np.argmin(d[i]))] = 1.0
        if pos_rows.size:
            ratios = (d[pos_rows, :, None] / d[pos_rows, None, :]) ** exponent
            u_new[pos_rows] = 1.0 / ratios.sum(axis=2)
        if u is not None and np.max(np.abs(u_new - u)) < tol:
            u = u_new
            break
        u = u_new
        w = u ** m
        mass = w.sum(axis=0)
        keep = mass > 0
        centers[keep] = (w.T[keep] @ x) / mass[keep, None]

    total = u.sum(axis=0)
    keep = total >= 1e-6 * n
    if not keep.any():
        keep[int(np.argmax(total))] = True
    u = u[:, keep]
    u = u / u.sum(axis=1, keepdims=True)
    return SoftAssignment(u)


def _normalized_adjacency(g: Graph, mode: str) -> np.ndarray:
    a = g.adjacency
    if mode == "spectral":
        rho = 0.0 if not g.dot(np.ones(g.n)).any() else spectral_radius(g)
        return a / rho if rho > 0 else a
    if mode == "row_stochastic":
        deg = np.asarray(a.sum(axis=1)).ravel()
        inv = np.divide(1.0, deg, out=np.zeros_like(deg, dtype=float), where=deg > 0)
        if g.is_dense:
            return a * inv[:, None]
        from scipy import sparse

        return sparse.diags(inv) @ a
    return a


def approximate_wl(g: Graph, cfg: ApproxWLConfig) -> ApproxWLResult:
    """Iterate embed-then-cluster until the hardened partition stabilizes.

    H starts uniform at 1/k. Hard backends re-harden every step; the fuzzy
    backend feeds its fractional assignment straight back into the embedding.
    Stops after ``cfg.stabilization`` consecutive identical hardened
    partitions (the initial uniform assignment hardens to a single class and
    counts as the first observation) or after ``cfg.max_steps``.
    """
    if g.n == 0:
        raise ValueError("graph is empty")
    a_hat = _normalized_adjacency(g, cfg.normalization)
    k_cur = min(cfg.k, g.n)
    h = np.full((g.n, k_cur), 1.0 / k_cur)
    history = [harden(SoftAssignment(h))]
    steps: list[ApproxWLStep] = []
    converged = False

    for step in range(1, cfg.max_steps + 1):
        x = np.asarray(a_hat @ h)
        if not np.isfinite(x).all():
            raise ValueError(f"non-finite embedding values at step {step}")
        if cfg.backend == "average_linkage":
            part = average_linkage(x, min(k_cur, g.n), distance=cfg.distance)
            soft = SoftAssignment.from_partition(part)
        elif cfg.backend == "kmeans":
            part = _kmeans_rows(x, k_cur, seed=cfg.seed + step)
            soft = SoftAssignment.from_partition(part)
        else:
            soft = fuzzy_cmeans(x, k_cur, m=cfg.fuzzifier,
                                seed=np.random.default_rng((cfg.seed, step)).integers(2**32))
            part = harden(soft)
        h = soft.weights
        k_cur = soft.k
        steps.append(ApproxWLStep(embedding=x, assignment=soft, hardened=part))
        history.append(part)
        if len(history) >= cfg.stabilization and all(
            history[-1] == history[-1 - i] for i in range(1, cfg.stabilization)
        ):
            converged = True
            break

    return ApproxWLResult(assignment=steps[-1].assignment, trace=tuple(steps),
                          steps_run=len(steps), converged=converged)


def _embedding_checksum(x: np.ndarray) -> str:
    canon = np.round(np.asarray(x, dtype=float), 12) + 0.0  # -0.0 -> 0.0
    payload = f"{x.shape[0]}x{x.shape[1]}:".encode() + canon.tobytes()
    return hashlib.sha256(payload).hexdigest()


def export_trace(result: ApproxWLResult) -> str:
    """JSON array of steps with embedding checksums and partition CSVs,
    for diffing runs across machines or implementations."""
    records = [
        {
            "step": i + 1,
            "embedding_sha256": _embedding_checksum(step.embedding),
            "n_classes": step.hardened.k,
            "partition_csv": save_partition_csv(step.hardened),
        }
        for i, step in enumerate(result.trace)
    ]
    return json.dumps(records, indent=2)
