"""Hard and fractional node-class assignments and their matrix views."""

from __future__ import annotations

import io
from typing import Sequence, TextIO, Union

import numpy as np

from .graph import Graph

CSV_VERSION_HEADER = "# role-extract v1"

ROW_SUM_TOL = 1e-9


class Partition:
    """Hard assignment of n nodes to k non-empty classes.

    Class labels are canonical: renumbered by first occurrence along the node
    order, so structurally identical partitions compare equal regardless of
    the labels they were built with.
    """

    __slots__ = ("assignment", "k")

    def __init__(self, assignment: Sequence[int]):
        raw = np.asarray(assignment)
        if raw.ndim != 1 or raw.size == 0:
            raise ValueError("assignment must be a non-empty 1-D sequence")
        if not np.issubdtype(raw.dtype, np.integer):
            if not np.all(raw == raw.astype(int)):
                raise ValueError("assignment labels must be integers")
            raw = raw.astype(int)
        relabel: dict[int, int] = {}
        canon = np.empty(raw.size, dtype=int)
        for i, c in enumerate(raw):
            canon[i] = relabel.setdefault(int(c), len(relabel))
        canon.flags.writeable = False
        self.assignment = canon
        self.k = len(relabel)

    @property
    def n(self) -> int:
        return self.assignment.size

    def indicator(self) -> np.ndarray:
        """n x k 0/1 matrix with exactly one 1 per row."""
        h = np.zeros((self.n, self.k))
        h[np.arange(self.n), self.assignment] = 1.0
        return h

    def class_sizes(self) -> np.ndarray:
        return np.bincount(self.assignment, minlength=self.k)

    def classes(self) -> list[np.ndarray]:
        return [np.nonzero(self.assignment == c)[0] for c in range(self.k)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return np.array_equal(self.assignment, other.assignment)

    def __hash__(self) -> int:
        return hash(self.assignment.tobytes())

    def __repr__(self) -> str:
        return f"Partition(k={self.k}, n={self.n})"

    @classmethod
    def single_class(cls, n: int) -> "Partition":
        return cls(np.zeros(n, dtype=int))

    @classmethod
    def singletons(cls, n: int) -> "Partition":
        return cls(np.arange(n))


class SoftAssignment:
    """Row-stochastic n x k matrix of fractional class memberships."""

    __slots__ = ("weights",)

    def __init__(self, weights: np.ndarray):
        w = np.asarray(weights, dtype=float)
        if w.ndim != 2 or w.size == 0:
            raise ValueError("weights must be a non-empty 2-D matrix")
        if (w < -ROW_SUM_TOL).any() or (w > 1 + ROW_SUM_TOL).any():
            raise ValueError("memberships must lie in [0, 1]")
        sums = w.sum(axis=1)
        if np.any(np.abs(sums - 1.0) > ROW_SUM_TOL):
            raise ValueError("rows must sum to 1 within 1e-9")
        w = np.clip(w, 0.0, 1.0)
        w.flags.writeable = False
        self.weights = w

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    @property
    def k(self) -> int:
        return self.weights.shape[1]

    @classmethod
    def from_partition(cls, p: Partition) -> "SoftAssignment":
        return cls(p.indicator())

    def __repr__(self) -> str:
        return f"SoftAssignment(n={self.n}, k={self.k})"


AssignmentLike = Union[Partition, SoftAssignment]


def membership_matrix(h: AssignmentLike) -> np.ndarray:
    """Indicator or membership matrix of a hard/soft assignment."""
    if isinstance(h, Partition):
        return h.indicator()
    if isinstance(h, SoftAssignment):
        return h.weights
    raise TypeError(f"expected Partition or SoftAssignment, got {type(h).__name__}")


def harden(s: SoftAssignment) -> Partition:
    """Per-row argmax with ties to the lowest class index; empty classes removed."""
    labels = np.argmax(s.weights, axis=1)
    return Partition(labels)


def quotient_matrix(g: Graph, p: Partition) -> np.ndarray:
    """k x k matrix of mean class-to-class connectivity, ``D^-1 H^T A H``.

    Row i holds the average number (weight) of edges a node of class i sends
    into each class. For an equitable partition this is exact for every node,
    and its eigenvalues are inherited by the graph's adjacency.
    """
    if p.n != g.n:
        raise ValueError(f"partition covers {p.n} nodes, graph has {g.n}")
    h = p.indicator()
    class_sums = h.T @ g.dot(h)
    sizes = p.class_sizes().astype(float)
    return class_sums / sizes[:, None]


def is_coarsening_of(coarse: Partition, fine: Partition) -> bool:
    """True iff every class of ``fine`` lies inside a single class of ``coarse``."""
    if coarse.n != fine.n:
        raise ValueError("partitions cover different node counts")
    seen: dict[int, int] = {}
    for cf, cc in zip(fine.assignment, coarse.assignment):
        prev = seen.setdefault(int(cf), int(cc))
        if prev != cc:
            return False
    return True


def save_partition_csv(p: Partition, target: TextIO | None = None) -> str | None:
    """Write ``node,class`` rows sorted by node id, with the version header."""
    buf = target if target is not None else io.StringIO()
    buf.write(CSV_VERSION_HEADER + "\n")
    buf.write("node,class\n")
    for node, cls in enumerate(p.assignment):
        buf.write(f"{node},{cls}\n")
    if target is None:
        return buf.getvalue()
    return None


def load_partition_csv(source: Union[str, TextIO]) -> Partition:
    """Read a partition written by ``save_partition_csv``."""
    if isinstance(source, str):
        source = io.StringIO(source)
    rows: dict[int, int] = {}
    for raw in source:
        line = raw.strip()
        if not line or line.startswith("#") or line.lower() == "node,class":
            continue
        node_s, cls_s = line.split(",")
        rows[int(node_s)] = int(cls_s)
    if not rows:
        raise ValueError("partition CSV contains no rows")
    if sorted(rows) != list(range(len(rows))):
        raise ValueError("partition CSV must cover node ids 0..n-1")
    return Partition([rows[i] for i in range(len(rows))])
