"""Core graph representation: symmetric nonnegative adjacency plus edge-list I/O.

Graphs are undirected and may carry positive real edge weights and self-loops.
Nodes are dense 0-based integers; the adjacency is stored dense below a size
threshold and as a CSR sparse matrix above it.
"""

from __future__ import annotations

import io
import warnings
from typing import Iterable, TextIO, Union

import numpy as np
from scipy import sparse

# Experiments in this library run at a few hundred nodes, where dense wins.
DENSE_THRESHOLD = 2048

AdjacencyLike = Union[np.ndarray, sparse.spmatrix]


class EdgeListError(ValueError):
    """Raised for malformed edge-list input."""


class Graph:
    """Immutable weighted undirected graph backed by a symmetric adjacency matrix.

    Attributes
    ----------
    n : int
        Node count; nodes are ``0..n-1``.
    adjacency : ndarray or scipy.sparse.csr_matrix
        Symmetric nonnegative matrix. Dense for ``n <= dense_threshold``.
    weighted : bool
        False iff all entries are in {0, 1}.
    """

    __slots__ = ("n", "adjacency", "weighted", "_cache")

    def __init__(self, adjacency: AdjacencyLike, dense_threshold: int | None = None):
        threshold = DENSE_THRESHOLD if dense_threshold is None else dense_threshold
        if sparse.issparse(adjacency):
            mat = adjacency.tocsr().astype(float)
        else:
            mat = np.asarray(adjacency, dtype=float)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"adjacency must be square, got shape {mat.shape!r}")
        n = mat.shape[0]

        dense = mat.toarray() if sparse.issparse(mat) else mat
        if not np.isfinite(dense).all():
            raise ValueError("adjacency contains non-finite entries")
        if (dense < 0).any():
            raise ValueError("adjacency entries must be nonnegative")
        if not np.array_equal(dense, dense.T):
            sym = np.maximum(dense, dense.T)
            if not np.allclose(dense, dense.T):
                warnings.warn(
                    "asymmetric adjacency symmetrized by elementwise max",
                    stacklevel=2,
                )
            dense = sym

        self.n = n
        self.weighted = bool(np.any((dense != 0) & (dense != 1)))
        if n > threshold:
            csr = sparse.csr_matrix(dense)
            for buf in (csr.data, csr.indices, csr.indptr):
                buf.flags.writeable = False
            self.adjacency = csr
        else:
            dense = dense.copy(order="C")  # never freeze a caller-owned array
            dense.flags.writeable = False
            self.adjacency = dense
        self._cache: dict = {}

    @property
    def is_dense(self) -> bool:
        return not sparse.issparse(self.adjacency)

    def toarray(self) -> np.ndarray:
        if self.is_dense:
            return self.adjacency
        return self.adjacency.toarray()

    def dot(self, m: np.ndarray) -> np.ndarray:
        return np.asarray(self.adjacency @ m)

    def neighbors(self, v: int) -> tuple[np.ndarray, np.ndarray]:
        """Indices and weights of the nonzero entries in row ``v`` (self-loops included)."""
        if self.is_dense:
            idx = np.nonzero(self.adjacency[v])[0]
            return idx, self.adjacency[v, idx]
        row = self.adjacency.getrow(v)
        return row.indices, row.data

    def edges(self) -> Iterable[tuple[int, int, float]]:
        """Canonical edge iteration: per node u ascending, (u, v) with v > u, then (u, u)."""
        for u in range(self.n):
            idx, w = self.neighbors(u)
            loop = None
            for v, wv in zip(idx, w):
                if v == u:
                    loop = wv
                elif v > u:
                    yield u, int(v), float(wv)
            if loop is not None:
                yield u, u, float(loop)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.toarray(), other.toarray())

    def __repr__(self) -> str:
        kind = "weighted" if self.weighted else "unweighted"
        return f"Graph(n={self.n}, {kind}, dense={self.is_dense})"


def _format_weight(w: float) -> str:
    return repr(float(w))


def load_edge_list(source: Union[str, TextIO], dense_threshold: int | None = None) -> Graph:
    """Parse whitespace-separated ``u v [w]`` lines into a Graph.

    Lines starting with '#' and blank lines are skipped. Node ids are
    nonnegative integers; the graph spans ``0..max_id`` so gaps create isolated
    nodes. Duplicate edges overwrite with the last weight.
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    entries: dict[tuple[int, int], float] = {}
    max_id = -1
    for lineno, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise EdgeListError(f"line {lineno}: expected 'u v [w]', got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListError(f"line {lineno}: node ids must be integers, got {raw!r}") from None
        if u < 0 or v < 0:
            raise EdgeListError(f"line {lineno}: node ids must be nonnegative")
        w = 1.0
        if len(parts) == 3:
            try:
                w = float(parts[2])
            except ValueError:
                raise EdgeListError(f"line {lineno}: weight must be a real number") from None
            if not np.isfinite(w) or w <= 0:
                raise EdgeListError(f"line {lineno}: weight must be a positive real, got {parts[2]}")
        entries[(min(u, v), max(u, v))] = w
        max_id = max(max_id, u, v)
    n = max_id + 1
    if n == 0:
        raise EdgeListError("edge list contains no edges or nodes")
    mat = np.zeros((n, n))
    for (u, v), w in entries.items():
        mat[u, v] = w
        mat[v, u] = w
    return Graph(mat, dense_threshold=dense_threshold)


def save_edge_list(g: Graph, target: TextIO | None = None) -> str | None:
    """Write the canonical edge list (see ``Graph.edges`` for the order).

    Weights are emitted only for weighted graphs, with full repr precision so
    that load(save(g)) round-trips exactly. Returns the text if no target is
    given.
    """
    buf = target if target is not None else io.StringIO()
    for u, v, w in g.edges():
        if g.weighted:
            buf.write(f"{u} {v} {_format_weight(w)}\n")
        else:
            buf.write(f"{u} {v}\n")
    if target is None:
        return buf.getvalue()
    return None


def degree_vector(g: Graph) -> np.ndarray:
    """Weighted degree of each node (row sums; a self-loop counts its weight once)."""
    if g.is_dense:
        return g.adjacency.sum(axis=1)
    return np.asarray(g.adjacency.sum(axis=1)).ravel()


def matrix_power_apply(g: Graph, m: np.ndarray, t: int) -> np.ndarray:
    """Compute ``A^t @ m`` by t successive products, never materializing ``A^t``."""
    if t < 1:
        raise ValueError(f"power t must be >= 1, got {t}")
    m = np.asarray(m, dtype=float)
    if m.shape[0] != g.n:
        raise ValueError(f"matrix has {m.shape[0]} rows, graph has {g.n} nodes")
    out = m
    for _ in range(t):
        out = g.dot(out)
    return out
