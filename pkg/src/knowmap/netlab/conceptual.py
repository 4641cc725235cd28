from __future__ import annotations

from dataclasses import dataclass

from knowmap.ingest.records import Corpus
from knowmap.netlab.community import Partition, detect_communities
from knowmap.netlab.graph import WeightedGraph, cooccurrence_graph
from knowmap.netlab.layout import mds_layout
from knowmap.termspace import TermConfig, TermLayer

# Recorded in run metadata: the map is a substitute for a factorial method.
METHOD_NOTE = (
    "clusters: seeded Louvain modularity communities; "
    "coordinates: classical MDS of 1 - association strength"
)


@dataclass(frozen=True)
class ConceptualMap:
    graph: WeightedGraph
    points: dict[str, tuple[float, float]]
    partition: Partition
    stress: float
    degenerate: bool = False


def conceptual_map(
    corpus: Corpus,
    layer: TermLayer,
    config: TermConfig,
    min_df: int = 1,
    seed: int = 0,
    resolution: float = 1.0,
) -> ConceptualMap:
    graph = cooccurrence_graph(corpus, layer, config, min_df)
    # a graph with an edge has >= 2 nodes, so the layout precondition holds
    partition = detect_communities(graph, seed, resolution)
    layout = mds_layout(graph)
    return ConceptualMap(graph, layout.points, partition, layout.stress, layout.degenerate)
