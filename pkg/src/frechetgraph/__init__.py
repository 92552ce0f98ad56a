"""Fréchet mean and median graphs under the Hamming distance and the adjacency
spectral pseudometric, with numerical checks of their edge-count bounds."""

from .bounds import (
    BoundReport,
    Check,
    SolverPolicy,
    run_campaign,
    tightness_experiment,
    verify_corollary_sparsity,
    verify_lemma_chain,
    verify_theorem1,
)
from .frechet import (
    CapExceededError,
    Metric,
    Order,
    SolverReport,
    exhaustive_frechet,
    frechet_function,
    local_search_frechet,
    median_majority_rule,
)
from .graph import (
    EdgeStats,
    Graph,
    GraphSample,
    complete_graph,
    edge_count,
    empty_graph,
    parse_graph,
    parse_sample,
    path_graph,
    sample_edge_stats,
    serialize_graph,
    serialize_sample,
)
from .metrics import (
    Spectrum,
    adjacency_spectrum,
    edges_from_spectrum,
    hamming_distance,
    spectral_distance,
    symmetric_eigenvalues,
)
from .random_graphs import (
    EdgeProbabilityMatrix,
    population_f2_bound,
    population_frechet_f2,
    population_mean_graph,
    sample_ier,
)

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "Check",
    "SolverPolicy",
    "run_campaign",
    "tightness_experiment",
    "verify_corollary_sparsity",
    "verify_lemma_chain",
    "verify_theorem1",
    "CapExceededError",
    "Metric",
    "Order",
    "SolverReport",
    "exhaustive_frechet",
    "frechet_function",
    "local_search_frechet",
    "median_majority_rule",
    "EdgeStats",
    "Graph",
    "GraphSample",
    "complete_graph",
    "edge_count",
    "empty_graph",
    "parse_graph",
    "parse_sample",
    "path_graph",
    "sample_edge_stats",
    "serialize_graph",
    "serialize_sample",
    "Spectrum",
    "adjacency_spectrum",
    "edges_from_spectrum",
    "hamming_distance",
    "spectral_distance",
    "symmetric_eigenvalues",
    "EdgeProbabilityMatrix",
    "population_f2_bound",
    "population_frechet_f2",
    "population_mean_graph",
    "sample_ier",
]
