"""Clustering of citation networks and comparison of the resulting partitions."""

from .compare import (
    DistanceMatrix,
    MethodClasses,
    classify_methods,
    distance_matrix,
    robustness_curve,
    uncertainty,
    variation_of_information,
)
from .graph import (
    DegreeStats,
    Graph,
    build_simple_graph,
    generate_citation_like,
    generate_planted_partition,
    induced_subgraph,
    largest_connected_component,
    read_edgelist,
    rewire,
    write_edgelist,
)
from .hybrid import HybridConfig, named_hybrid, two_stage
from .methods import (
    MethodConfig,
    default_cluster_count,
    infomap_two_level,
    kway_partition,
    label_propagation,
    louvain,
    map_equation,
    run_method,
)
from .metrics import (
    MetricsReport,
    cluster_coverage,
    connectivity,
    degeneracy,
    effective_diameter,
    evaluate,
    log_likelihood,
    modularity,
    powerlaw_fit,
    size_stats,
)
from .partition import (
    Clustering,
    cluster_sizes,
    compact_relabel,
    contingency,
    flatten_overlaps,
    read_clustering,
    write_clustering,
)
from .postprocess import PostprocessConfig, merge_tiny, postprocess, split_giants

__version__ = "0.1.0"
