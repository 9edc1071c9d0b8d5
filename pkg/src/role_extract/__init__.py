"""Node role extraction via equitable partitions.

Functional core: graph I/O (``graph``), partitions (``partition``), exact
refinement (``wl``), cost functions (``cost``), spectral role clustering
(``spectral``), approximate refinement (``approx``), the planted-role
benchmark (``rip``), and metrics (``metrics``). Scikit-learn style wrappers
live in ``estimators``; the CLI in ``cli``.
"""

from .approx import (ApproxWLConfig, ApproxWLResult, approximate_wl,
                     average_linkage, export_trace, fuzzy_cmeans)
from .cost import CostReport, depth_cost, long_term_cost, short_term_cost
from .estimators import (ApproximateWLClustering, EigenvectorClustering,
                         ExactColorRefinement)
from .graph import (Graph, degree_vector, load_edge_list, matrix_power_apply,
                    save_edge_list)
from .metrics import (OverlapScore, brute_force_min_cost, centrality,
                      cluster_deviation, overlap)
from .partition import (Partition, SoftAssignment, harden, is_coarsening_of,
                        load_partition_csv, quotient_matrix, save_partition_csv)
from .rip import (RipParams, RolesNotSeparatedError, build_omega,
                  expected_adjacency, lambert_w_minus1, min_n_for_recovery,
                  min_s_for_recovery, recovery_separation, sample, sample_mean)
from .spectral import (EigenResult, EvEmbedding, NonSimpleDominantError,
                       cluster_1d, dominant_eigenpair, eigenvector_clustering,
                       eigenvector_embedding, spectral_radius)
from .wl import (RefinementTrace, coarsest_ep, coarsest_equitable_partition,
                 is_cep_compatible, is_equitable)

__version__ = "0.1.0"

__all__ = [
    "ApproxWLConfig",
    "ApproxWLResult",
    "ApproximateWLClustering",
    "CostReport",
    "EigenResult",
    "EigenvectorClustering",
    "EvEmbedding",
    "ExactColorRefinement",
    "Graph",
    "NonSimpleDominantError",
    "OverlapScore",
    "Partition",
    "RefinementTrace",
    "RipParams",
    "RolesNotSeparatedError",
    "SoftAssignment",
    "approximate_wl",
    "average_linkage",
    "brute_force_min_cost",
    "build_omega",
    "centrality",
    "cluster_1d",
    "cluster_deviation",
    "coarsest_ep",
    "coarsest_equitable_partition",
    "degree_vector",
    "depth_cost",
    "dominant_eigenpair",
    "eigenvector_clustering",
    "eigenvector_embedding",
    "expected_adjacency",
    "export_trace",
    "fuzzy_cmeans",
    "harden",
    "is_cep_compatible",
    "is_coarsening_of",
    "is_equitable",
    "lambert_w_minus1",
    "load_edge_list",
    "load_partition_csv",
    "long_term_cost",
    "matrix_power_apply",
    "min_n_for_recovery",
    "min_s_for_recovery",
    "overlap",
    "quotient_matrix",
    "recovery_separation",
    "sample",
    "sample_mean",
    "save_edge_list",
    "save_partition_csv",
    "short_term_cost",
    "spectral_radius",
]
