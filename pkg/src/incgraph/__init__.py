"""Connectivity-guaranteed neighborhood graphs for spectral text clustering.

Build k-NN, incremental k-NN, and epsilon-threshold graphs over embedding
matrices, embed them with Laplacian eigenmaps, cluster, and score against
ground-truth labels — with graph statistics and a reproducible experiment
pipeline on top.
"""

from .construction import (
    Ordering,
    augment_mst,
    build_epsilon,
    build_knn_incremental,
    build_knn_standard,
    extend_incremental,
    find_epsilon0,
    identity_ordering,
    minimum_spanning_tree_edges,
    random_ordering,
    seed_for_run,
)
from .distances import distance, pairwise_distances
from .errors import (
    DataError,
    DisconnectedAffinityError,
    FormatError,
    IncGraphError,
    NumericalError,
    ParameterError,
    ValidationError,
)
from .graph import (
    ComponentReport,
    NeighborGraph,
    Provenance,
    connected_components,
    load_graph,
    save_graph,
    symmetrize,
)
from .metrics import (
    contingency_table,
    homogeneity_completeness,
    v_measure,
)
from .pipeline import (
    ExperimentConfig,
    RunReport,
    baseline_kmeans_hd,
    build_graph,
    load_dataset,
    merge_reports,
    report_components,
    run_experiment,
    sweep_k,
    sweep_to_dict,
)
from .spectral import (
    AffinityMatrix,
    SpectralEmbedding,
    affinity_connection,
    affinity_gaussian,
    kmeans_assign,
    laplacian_eigenmaps,
    qr_assign,
    save_embedding,
)
from .stats import (
    StatsReport,
    StatValue,
    assortativity,
    compute_stats,
    density,
    estimate_stats_mc,
    homophily,
    local_clustering_avg,
    pagerank,
    transitivity,
)
from .synthetic import make_blob_dataset
from .vectorstore import (
    VectorDataset,
    read_embeddings,
    read_labels,
    write_embeddings,
    write_labels,
)

__version__ = "0.1.0"

__all__ = [
    "AffinityMatrix",
    "ComponentReport",
    "DataError",
    "DisconnectedAffinityError",
    "ExperimentConfig",
    "FormatError",
    "IncGraphError",
    "NeighborGraph",
    "NumericalError",
    "Ordering",
    "ParameterError",
    "Provenance",
    "RunReport",
    "SpectralEmbedding",
    "StatsReport",
    "StatValue",
    "ValidationError",
    "VectorDataset",
    "affinity_connection",
    "affinity_gaussian",
    "assortativity",
    "augment_mst",
    "baseline_kmeans_hd",
    "build_epsilon",
    "build_graph",
    "build_knn_incremental",
    "build_knn_standard",
    "compute_stats",
    "connected_components",
    "contingency_table",
    "density",
    "distance",
    "estimate_stats_mc",
    "extend_incremental",
    "find_epsilon0",
    "homogeneity_completeness",
    "homophily",
    "identity_ordering",
    "kmeans_assign",
    "laplacian_eigenmaps",
    "load_dataset",
    "load_graph",
    "local_clustering_avg",
    "make_blob_dataset",
    "merge_reports",
    "minimum_spanning_tree_edges",
    "pagerank",
    "pairwise_distances",
    "qr_assign",
    "random_ordering",
    "read_embeddings",
    "read_labels",
    "report_components",
    "run_experiment",
    "save_embedding",
    "save_graph",
    "seed_for_run",
    "sweep_k",
    "sweep_to_dict",
    "symmetrize",
    "transitivity",
    "v_measure",
    "write_embeddings",
    "write_labels",
]
