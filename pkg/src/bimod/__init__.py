"""Community detection for directed graphs via singular vectors of the
modularity operator and edge-space clustering.

The pieces compose in pipeline order: load or generate a DirectedGraph,
build the degree-corrected operator, decompose it, embed edges in the
component space, cluster them, and read off bicommunities (a sending set,
a receiving set, a score).  Everything downstream of a seed is
deterministic, including across BLAS thread counts.
"""

from .errors import (
    BimodError,
    ConfigError,
    ConvergenceError,
    MetadataJoinError,
    ParseError,
    ValidationError,
)
from .graph import (
    DirectedGraph,
    NodeMetadata,
    degree_sequences,
    load_edge_list,
    load_node_metadata,
    save_edge_list,
)
from .modularity import (
    ModularityOperator,
    PartitionPair,
    bimodularity_index,
    build_modularity,
    community_bimodularity,
    export_dense_matrix,
    undirected_modularity,
)
from .spectral import (
    SpectralComponent,
    SpectralDecomposition,
    baseline_symmetrized,
    classify_component,
    decompose,
)
from .bicommunity import (
    Bicommunity,
    EdgeEmbedding,
    bicommunity_record,
    build_edge_features,
    cluster_edges,
    extract_bicommunities,
    node_role_summary,
)
from .synthgen import BlockCycleSpec, generate, load_spec, resolve_structure
from .metrics import adjusted_rand_index, best_match_jaccard, jaccard
from .celegans import AnalysisReport, run_celegans

__version__ = "0.1.0"

__all__ = [
    "AnalysisReport",
    "Bicommunity",
    "BimodError",
    "BlockCycleSpec",
    "ConfigError",
    "ConvergenceError",
    "DirectedGraph",
    "EdgeEmbedding",
    "MetadataJoinError",
    "ModularityOperator",
    "NodeMetadata",
    "ParseError",
    "PartitionPair",
    "SpectralComponent",
    "SpectralDecomposition",
    "ValidationError",
    "adjusted_rand_index",
    "baseline_symmetrized",
    "best_match_jaccard",
    "bicommunity_record",
    "bimodularity_index",
    "build_edge_features",
    "build_modularity",
    "classify_component",
    "cluster_edges",
    "community_bimodularity",
    "decompose",
    "degree_sequences",
    "export_dense_matrix",
    "extract_bicommunities",
    "generate",
    "jaccard",
    "load_edge_list",
    "load_node_metadata",
    "load_spec",
    "node_role_summary",
    "resolve_structure",
    "run_celegans",
    "save_edge_list",
    "undirected_modularity",
    "__version__",
]
