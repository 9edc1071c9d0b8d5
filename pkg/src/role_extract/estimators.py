"""Scikit-learn style estimators wrapping the role-extraction algorithms.

Each estimator accepts a precomputed adjacency (dense array, scipy sparse
matrix, or a ``Graph``) in ``fit`` and exposes ``labels_`` plus
``fit_predict``, so the algorithms drop into sklearn pipelines, grid search
over ``get_params``, and clustering benchmarks that expect the standard API.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin

from .approx import ApproxWLConfig, approximate_wl
from .graph import Graph
from .spectral import dominant_eigenpair, eigenvector_clustering, eigenvector_embedding
from .wl import coarsest_equitable_partition


def as_graph(x) -> Graph:
    """Validate estimator input: a Graph passes through, anything else must be
    a square symmetric nonnegative matrix."""
    if isinstance(x, Graph):
        return x
    return Graph(x)


class EigenvectorClustering(ClusterMixin, BaseEstimator):
    """Role clustering on the dominant eigenvector (exact 1-D optimum).

    Parameters
    ----------
    n_roles : int
        Number of clusters k.

    Attributes
    ----------
    labels_ : ndarray of shape (n,)
    eigenvalue_ : float
    eigenvector_ : ndarray of shape (n,)
    cluster_sizes_, cluster_centers_ : ndarray of shape (k,)
        The flat embedding (sizes and eigenvector means, sorted by center).
    """

    def __init__(self, n_roles: int = 2):
        self.n_roles = n_roles

    def fit(self, X, y=None):
        g = as_graph(X)
        eig = dominant_eigenpair(g)
        part = eigenvector_clustering(g, self.n_roles)
        emb = eigenvector_embedding(g, self.n_roles)
        self.labels_ = part.assignment.copy()
        self.n_classes_ = part.k
        self.eigenvalue_ = eig.eigenvalue
        self.eigenvector_ = eig.eigenvector.copy()
        self.cluster_sizes_ = emb.sizes
        self.cluster_centers_ = emb.centers
        return self


class ApproximateWLClustering(ClusterMixin, BaseEstimator):
    """Iterated class-adjacency embedding plus pluggable row clustering.

    Parameters mirror ``ApproxWLConfig``; see that class for semantics.

    Attributes
    ----------
    labels_ : ndarray of shape (n,)
    membership_ : ndarray of shape (n, k_effective)
        Fractional memberships (one-hot rows for hard backends).
    n_steps_ : int
    converged_ : bool
    """

    def __init__(self, n_roles: int = 2, backend: str = "average_linkage",
                 max_steps: int = 30, stabilization: int = 2, fuzzifier: float = 2.0,
                 distance: str | None = None, normalization: str = "spectral",
                 random_state: int = 0):
        self.n_roles = n_roles
        self.backend = backend
        self.max_steps = max_steps
        self.stabilization = stabilization
        self.fuzzifier = fuzzifier
        self.distance = distance
        self.normalization = normalization
        self.random_state = random_state

    def fit(self, X, y=None):
        g = as_graph(X)
        cfg = ApproxWLConfig(
            k=self.n_roles, backend=self.backend, max_steps=self.max_steps,
            stabilization=self.stabilization, fuzzifier=self.fuzzifier,
            distance=self.distance, normalization=self.normalization,
            seed=self.random_state,
        )
        result = approximate_wl(g, cfg)
        self.labels_ = result.partition.assignment.copy()
        self.n_classes_ = result.partition.k
        self.membership_ = np.array(result.assignment.weights)
        self.n_steps_ = result.steps_run
        self.converged_ = result.converged
        self.result_ = result
        return self


class ExactColorRefinement(ClusterMixin, BaseEstimator):
    """Coarsest equitable partition via exact color refinement.

    The class count is determined by the graph, not requested. ``trace_``
    holds the full refinement sequence.
    """

    def fit(self, X, y=None):
        g = as_graph(X)
        trace = coarsest_equitable_partition(g)
        self.labels_ = trace.final.assignment.copy()
        self.n_classes_ = trace.final.k
        self.n_iterations_ = trace.iterations
        self.trace_ = trace
        return self
