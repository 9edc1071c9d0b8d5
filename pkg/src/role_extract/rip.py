"""Role-infused partition benchmark: a block model with planted roles.

The generator is a stochastic block model over ``c * k`` blocks of ``n`` nodes
each: ``c`` communities, each containing the same ``k`` roles. Edges between
blocks of the same community follow the k x k role matrix (indexed by each
block's role, i.e. block id mod k); blocks of different communities connect
with a flat probability p. The expected adjacency then has an exact equitable
partition whose classes are the roles, which makes ground truth available for
recovery experiments, and the separation of the role profiles yields explicit
sample-size bounds for exact recovery.

Randomness: all sampling uses ``numpy.random.default_rng`` (PCG64). Sample i
of a multi-sample draw uses seed ``seed + i``; cross-implementation
comparisons are meaningful at the statistics level, not bit level. A directed
interpretation of ``omega_role`` is resolved by the upper triangle: the entry
for blocks (b, b') with b <= b' wins, matching the symmetric edge draw.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .graph import Graph
from .wl import coarsest_equitable_partition


class RolesNotSeparatedError(ValueError):
    """Role profiles never separate (zero row gap); recovery bounds are infinite."""


@dataclass(frozen=True)
class RipParams:
    """Benchmark parameters.

    ``n`` is the number of nodes per (community, role) block, so the graph has
    ``c * k * n`` nodes. Node v belongs to block ``v // n``, community
    ``block // k``, and role ``block % k``.
    """

    p: float
    c: int
    k: int
    n: int
    omega_role: np.ndarray
    seed: int = 0

    def __post_init__(self):
        omega = np.asarray(self.omega_role, dtype=float)
        object.__setattr__(self, "omega_role", omega)
        if not (0.0 <= self.p <= 1.0):
            raise ValueError(f"p must be in [0, 1], got {self.p}")
        if self.c < 1 or self.k < 1 or self.n < 1:
            raise ValueError("c, k, n must all be >= 1")
        if omega.shape != (self.k, self.k):
            raise ValueError(f"omega_role must be {self.k}x{self.k}, got {omega.shape}")
        if (omega < 0).any() or (omega > 1).any():
            raise ValueError("omega_role entries must be probabilities in [0, 1]")

    @property
    def total_nodes(self) -> int:
        return self.c * self.k * self.n

    @property
    def n_blocks(self) -> int:
        return self.c * self.k

    def block_of(self, v: int) -> int:
        return v // self.n

    def roles(self) -> np.ndarray:
        """Ground-truth role label of every node."""
        blocks = np.arange(self.total_nodes) // self.n
        return blocks % self.k

    def communities(self) -> np.ndarray:
        blocks = np.arange(self.total_nodes) // self.n
        return blocks // self.k

    def to_json(self) -> str:
        return json.dumps({
            "p": self.p, "c": self.c, "k": self.k, "n": self.n,
            "omega_role": self.omega_role.tolist(), "seed": self.seed,
        })

    @classmethod
    def from_json(cls, text: str) -> "RipParams":
        data = json.loads(text)
        try:
            return cls(p=data["p"], c=data["c"], k=data["k"], n=data["n"],
                       omega_role=data["omega_role"], seed=data.get("seed", 0))
        except KeyError as exc:
            raise ValueError(f"params JSON missing field {exc}") from None


def build_omega(params: RipParams) -> np.ndarray:
    """ck x ck block probability matrix: role-matrix entries within a
    community, flat p across communities."""
    nb = params.n_blocks
    roles = np.arange(nb) % params.k
    comms = np.arange(nb) // params.k
    omega = np.where(comms[:, None] == comms[None, :],
                     params.omega_role[roles[:, None], roles[None, :]],
                     params.p)
    return omega


def _symmetrized_omega(params: RipParams) -> np.ndarray:
    omega = build_omega(params)
    upper = np.triu(omega)
    return upper + np.triu(omega, 1).T


def expected_adjacency(params: RipParams, dense_threshold: int | None = None) -> Graph:
    """Expected adjacency as a weighted graph (self-loop weights included)."""
    omega = _symmetrized_omega(params)
    blocks = np.arange(params.total_nodes) // params.n
    return Graph(omega[np.ix_(blocks, blocks)], dense_threshold=dense_threshold)


def sample(params: RipParams, seed: int | None = None,
           dense_threshold: int | None = None) -> Graph:
    """One symmetric Bernoulli draw (self-loops included), row by row over the
    upper triangle so the draw is reproducible for a given seed."""
    rng = np.random.default_rng(params.seed if seed is None else seed)
    omega = _symmetrized_omega(params)
    total = params.total_nodes
    blocks = np.arange(total) // params.n
    adj = np.zeros((total, total))
    for u in range(total):
        probs = omega[blocks[u], blocks[u:]]
        row = (rng.random(total - u) < probs).astype(float)
        adj[u, u:] = row
        adj[u:, u] = row
    return Graph(adj, dense_threshold=dense_threshold)


def sample_mean(params: RipParams, s: int, dense_threshold: int | None = None) -> Graph:
    """Entrywise mean of s independent samples, drawn with seeds seed+i."""
    if s < 1:
        raise ValueError(f"sample count s must be >= 1, got {s}")
    acc = np.zeros((params.total_nodes, params.total_nodes))
    for i in range(s):
        acc += sample(params, seed=params.seed + i).toarray()
    return Graph(acc / s, dense_threshold=dense_threshold)


_BRANCH_POINT = -1.0 / math.e


def lambert_w_minus1(x: float) -> float:
    """Lower real branch of the Lambert W function on [-1/e, 0).

    Returns the y <= -1 with ``y * exp(y) = x``, found by bisection on the
    monotone segment (y e^y increases from 0- toward -1/e as y rises to -1).
    Round-trip accuracy is better than 1e-12 relative.
    """
    if not np.isfinite(x):
        raise ValueError(f"x must be finite, got {x}")
    if x >= 0:
        raise ValueError(f"x must be negative, got {x}")
    if x < _BRANCH_POINT:
        if x < _BRANCH_POINT * (1.0 + 1e-12):
            raise ValueError(f"x must be >= -1/e = {_BRANCH_POINT!r}, got {x}")
        x = _BRANCH_POINT
    if x == _BRANCH_POINT:
        return -1.0

    # y e^y decreases from 0- to -1/e as y rises from -inf to -1, so bracket
    # with f(lo) > x > f(hi) and bisect on that monotone segment.
    lo = -2.0
    while lo * math.exp(lo) < x:
        lo *= 2.0
    hi = -1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if mid * math.exp(mid) > x:
            lo = mid
        else:
            hi = mid
    # pick the endpoint with the smaller residual
    return min((lo, hi), key=lambda y: abs(y * math.exp(y) - x))


def recovery_separation(params: RipParams) -> float:
    """Minimum gap between distinct role profiles across refinement rounds.

    Runs exact refinement on the expected adjacency, collapses each round's
    partition to block level, and takes the smallest positive l2 distance
    between rows of ``Omega @ H`` over all rounds. Blocks with the same role
    have exactly equal rows at every round (communities are exchangeable), so
    only pairs with distinct profiles enter the minimum. Raises
    ``RolesNotSeparatedError`` when refinement never tells all k roles apart.
    """
    omega = _symmetrized_omega(params)
    expected = expected_adjacency(params)
    trace = coarsest_equitable_partition(expected)
    blocks = np.arange(params.total_nodes) // params.n

    best = math.inf
    found = False
    for part in dict.fromkeys(trace.partitions):
        labels = part.assignment
        block_labels = labels[::params.n]
        if not np.array_equal(np.repeat(block_labels, params.n), labels):
            raise AssertionError("refinement split nodes inside a block")
        h = np.zeros((params.n_blocks, part.k))
        h[np.arange(params.n_blocks), block_labels] = 1.0
        profiles = omega @ h
        for i in range(params.n_blocks):
            for j in range(i + 1, params.n_blocks):
                gap = float(np.linalg.norm(profiles[i] - profiles[j]))
                if gap > 1e-12:
                    best = min(best, gap)
                    found = True

    final_block_classes = len(set(trace.final.assignment[::params.n].tolist()))
    if not found or final_block_classes < params.k:
        raise RolesNotSeparatedError(
            "role profiles never separate; exact recovery is impossible for these parameters"
        )
    return best


def _recovery_bound(params: RipParams, q: float) -> float:
    if params.k < 3:
        raise ValueError("recovery bounds require k >= 3")
    if not (0.0 < q < 1.0):
        raise ValueError(f"confidence q must be in (0, 1), got {q}")
    delta = recovery_separation(params)
    arg = (q - 1.0) * delta * delta / (9.0 * params.k * params.k)
    w = lambert_w_minus1(arg)
    return -9.0 * w / (2.0 * delta * delta)


def min_n_for_recovery(params: RipParams, q: float) -> int:
    """Smallest per-block size n for which single-sample exact recovery holds
    with probability at least q. Independent of ``params.n``."""
    return math.floor(_recovery_bound(params, q)) + 1


def min_s_for_recovery(params: RipParams, q: float) -> int:
    """Smallest sample count s so that recovery from the mean of s samples at
    block size ``params.n`` holds with probability at least q."""
    return math.floor(_recovery_bound(params, q) / params.n) + 1
