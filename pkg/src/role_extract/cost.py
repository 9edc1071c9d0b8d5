"""Equitability cost functions for candidate role assignments.

The short-term cost is the residual norm of ``A H - H (D^-1 H^T A H)``: zero
exactly when every node's class-wise neighbor sums match its class average.
The depth-d family applies the same residual to each power ``A^t`` for
t = 1..d, rescaled by the spectral radius so deeper terms stay comparable.
Its infinite-depth limit has a closed form in the dominant eigenvector and is
what eigenvector clustering optimizes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .graph import Graph, matrix_power_apply
from .partition import AssignmentLike, Partition, membership_matrix
from .spectral import NonSimpleDominantError, dominant_eigenpair

NORMS = ("l1", "l2", "l2_squared")


@dataclass(frozen=True)
class CostReport:
    """Evaluated cost with its norm, depth, and rescaling metadata.

    ``depth`` is 1 for the short-term cost, the summation depth d for the
    depth family, and ``math.inf`` for the long-term limit. ``spectral_radius``
    is None when no rescaling was applied.
    """

    value: float
    norm: str
    depth: float
    spectral_radius: float | None = None

    def to_dict(self) -> dict:
        depth = "inf" if math.isinf(self.depth) else int(self.depth)
        return {
            "value": self.value,
            "norm": self.norm,
            "depth": depth,
            "spectral_radius": self.spectral_radius,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _entrywise_norm(r: np.ndarray, norm: str) -> float:
    if norm == "l1":
        return float(np.abs(r).sum())
    if norm == "l2":
        return float(np.sqrt((r * r).sum()))
    if norm == "l2_squared":
        return float((r * r).sum())
    raise ValueError(f"unknown norm {norm!r}, expected one of {NORMS}")


def _residual(ah: np.ndarray, h: np.ndarray) -> np.ndarray:
    """``ah - H D^-1 H^T ah`` with D the (fractional) class sizes diag(1^T H)."""
    sizes = h.sum(axis=0)
    if np.any(sizes <= 0):
        raise ValueError("assignment has an empty class (zero column sum)")
    return ah - h @ ((h.T @ ah) / sizes[:, None])


def short_term_cost(g: Graph, h: AssignmentLike, norm: str = "l2") -> CostReport:
    """Direct-neighborhood equitability residual of a hard or fractional assignment."""
    hm = membership_matrix(h)
    if hm.shape[0] != g.n:
        raise ValueError(f"assignment covers {hm.shape[0]} nodes, graph has {g.n}")
    value = _entrywise_norm(_residual(g.dot(hm), hm), norm)
    return CostReport(value=value, norm=norm, depth=1)


def depth_cost(g: Graph, h: AssignmentLike, d: int, norm: str = "l2") -> CostReport:
    """Sum over t = 1..d of the residual on ``A^t``, each rescaled by rho(A)^-t.

    ``A^t`` is only ever applied to the n x k membership matrix, never formed.
    """
    if d < 1:
        raise ValueError(f"depth d must be >= 1, got {d}")
    hm = membership_matrix(h)
    if hm.shape[0] != g.n:
        raise ValueError(f"assignment covers {hm.shape[0]} nodes, graph has {g.n}")
    rho = dominant_eigenpair(g, check_simple=False).eigenvalue
    if rho <= 0:
        raise ValueError("spectral radius is zero (graph has no edges)")
    total = 0.0
    power = hm
    scale = 1.0
    for _ in range(d):
        power = matrix_power_apply(g, power, 1)
        scale /= rho
        total += scale * _entrywise_norm(_residual(power, hm), norm)
    return CostReport(value=total, norm=norm, depth=d, spectral_radius=rho)


def long_term_cost(g: Graph, h: Partition) -> CostReport:
    """Closed-form infinite-depth limit of the rescaled residual, l1 norm.

    Equals ``(sum_i u_i) * sum_i |u_i - mean of u over class(i)|`` with u the
    unit-l2 dominant eigenvector, which is the limit of the depth-t summand of
    ``depth_cost``; zero exactly when u is constant on every class. Requires a
    simple dominant eigenvalue (and a connected graph for the limit to be
    meaningful).
    """
    if not isinstance(h, Partition):
        raise TypeError("long_term_cost is defined for hard partitions")
    if h.n != g.n:
        raise ValueError(f"partition covers {h.n} nodes, graph has {g.n}")
    eig = dominant_eigenpair(g)
    if not eig.simple:
        raise NonSimpleDominantError(
            "dominant eigenvalue is not simple; the infinite-depth limit is undefined"
        )
    u = eig.eigenvector / np.linalg.norm(eig.eigenvector)
    class_mean = np.zeros(h.k)
    for c, nodes in enumerate(h.classes()):
        class_mean[c] = u[nodes].mean()
    value = float(u.sum() * np.abs(u - class_mean[h.assignment]).sum())
    return CostReport(value=value, norm="l1", depth=math.inf,
                      spectral_radius=eig.eigenvalue)
