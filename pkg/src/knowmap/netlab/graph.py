"""Undirected weighted term and author networks."""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

import numpy as np

from knowmap.ingest.records import Corpus
from knowmap.termspace import TermConfig, TermLayer, extract_terms


class NoTermsError(ValueError):
    """The document-frequency filter left no terms to build a network from."""


class GraphKind(str, enum.Enum):
    TERM_COOCCURRENCE = "TermCooccurrence"
    COAUTHORSHIP = "Coauthorship"


@dataclass(frozen=True)
class WeightedGraph:
    """Nodes carry an occurrence count; edges are stored once per unordered pair (i < j).

    ``documents`` is the size of the corpus the graph was built from; the
    association-strength layout needs it.
    """

    nodes: tuple[tuple[str, int], ...]
    edges: tuple[tuple[int, int, float], ...]
    kind: GraphKind = GraphKind.TERM_COOCCURRENCE
    documents: int = 0

    def __post_init__(self) -> None:
        n = len(self.nodes)
        labels = [label for label, _ in self.nodes]
        if len(set(labels)) != n:
            raise ValueError("node labels must be unique")
        seen = set()
        for i, j, w in self.edges:
            if not (0 <= i < j < n):
                raise ValueError(f"edge ({i}, {j}) must satisfy 0 <= i < j < {n}")
            if not w > 0:
                raise ValueError(f"edge ({i}, {j}) has non-positive weight {w}")
            if (i, j) in seen:
                raise ValueError(f"edge ({i}, {j}) stored twice")
            seen.add((i, j))

    @classmethod
    def from_edges(
        cls,
        labels,
        edges,
        occurrences=None,
        kind: GraphKind = GraphKind.TERM_COOCCURRENCE,
        documents: int = 0,
    ) -> "WeightedGraph":
        """Convenience constructor from label pairs; weights default to 1 and repeated pairs add up."""
        labels = list(labels)
        index = {label: i for i, label in enumerate(labels)}
        weights: Counter = Counter()
        for edge in edges:
            a, b = edge[0], edge[1]
            w = edge[2] if len(edge) > 2 else 1
            i, j = sorted((index[a], index[b]))
            if i == j:
                raise ValueError(f"self-loop on {a!r}")
            weights[(i, j)] += w
        occurrences = list(occurrences) if occurrences is not None else [1] * len(labels)
        return cls(
            tuple(zip(labels, occurrences)),
            tuple((i, j, w) for (i, j), w in sorted(weights.items())),
            kind,
            documents,
        )

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def labels(self) -> list[str]:
        return [label for label, _ in self.nodes]

    @property
    def occurrences(self) -> list[int]:
        return [occ for _, occ in self.nodes]

    @cached_property
    def adjacency(self) -> list[dict[int, float]]:
        adj: list[dict[int, float]] = [{} for _ in self.nodes]
        for i, j, w in self.edges:
            adj[i][j] = w
            adj[j][i] = w
        return adj

    @property
    def total_weight(self) -> float:
        return sum(w for _, _, w in self.edges)

    def degree(self) -> dict[str, int]:
        return {label: len(nbrs) for label, nbrs in zip(self.labels, self.adjacency)}

    def weight(self, a: str, b: str) -> float:
        index = {label: i for i, label in enumerate(self.labels)}
        return self.adjacency[index[a]].get(index[b], 0)


def cooccurrence_graph(
    corpus: Corpus, layer: TermLayer, config: TermConfig, min_df: int = 1
) -> WeightedGraph:
    """Terms with document frequency >= min_df, linked by the number of records holding both."""
    if min_df < 1:
        raise ValueError("min_df must be >= 1")
    layer = TermLayer.parse(layer)
    doc_terms = [{t for t, _ in extract_terms(r, layer, config)} for r in corpus.records]
    df = Counter(t for terms in doc_terms for t in terms)
    kept = sorted((t for t, c in df.items() if c >= min_df), key=lambda t: (-df[t], t))
    if not kept:
        raise NoTermsError(f"no {layer.value} term reaches document frequency {min_df}")

    index = {t: i for i, t in enumerate(kept)}
    incidence = np.zeros((len(doc_terms), len(kept)), dtype=np.int64)
    for row, terms in enumerate(doc_terms):
        cols = [index[t] for t in terms if t in index]
        incidence[row, cols] = 1
    co = incidence.T @ incidence
    ii, jj = np.nonzero(np.triu(co, k=1))
    edges = tuple((int(i), int(j), int(co[i, j])) for i, j in zip(ii, jj))
    return WeightedGraph(
        tuple((t, df[t]) for t in kept),
        edges,
        GraphKind.TERM_COOCCURRENCE,
        len(corpus.records),
    )


def coauthorship_graph(corpus: Corpus) -> WeightedGraph:
    """Authors (identity keys) linked by the number of jointly authored records."""
    pubs: Counter = Counter()
    pairs: Counter = Counter()
    for record in corpus.records:
        keys = sorted({a.key for a in record.authors})
        pubs.update(keys)
        pairs.update(combinations(keys, 2))
    labels = sorted(pubs, key=lambda k: (-pubs[k], k))
    index = {k: i for i, k in enumerate(labels)}
    edges = []
    for (a, b), w in pairs.items():
        i, j = sorted((index[a], index[b]))
        edges.append((i, j, w))
    edges.sort()
    return WeightedGraph(
        tuple((k, pubs[k]) for k in labels),
        tuple(edges),
        GraphKind.COAUTHORSHIP,
        len(corpus.records),
    )
