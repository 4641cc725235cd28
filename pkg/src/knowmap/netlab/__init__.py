"""Co-occurrence and co-authorship networks, centrality, communities and layout."""

from knowmap.netlab.centrality import CentralityScores, betweenness, degree_centrality
from knowmap.netlab.community import (
    EmptyGraphError,
    NoEdgesError,
    Partition,
    detect_communities,
    modularity,
)
from knowmap.netlab.conceptual import METHOD_NOTE, ConceptualMap, conceptual_map
from knowmap.netlab.export import PALETTE, to_dot, to_graphml
from knowmap.netlab.graph import (
    GraphKind,
    NoTermsError,
    WeightedGraph,
    coauthorship_graph,
    cooccurrence_graph,
)
from knowmap.netlab.layout import (
    Embedding,
    Layout,
    association_dissimilarity,
    classical_mds,
    mds_layout,
)

__all__ = [
    "CentralityScores",
    "ConceptualMap",
    "Embedding",
    "EmptyGraphError",
    "GraphKind",
    "Layout",
    "METHOD_NOTE",
    "NoEdgesError",
    "NoTermsError",
    "PALETTE",
    "Partition",
    "WeightedGraph",
    "association_dissimilarity",
    "betweenness",
    "classical_mds",
    "coauthorship_graph",
    "conceptual_map",
    "cooccurrence_graph",
    "degree_centrality",
    "detect_communities",
    "mds_layout",
    "modularity",
    "to_dot",
    "to_graphml",
]
