"""Modularity and seeded, deterministic Louvain community detection."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Mapping, Sequence

from knowmap.netlab.graph import WeightedGraph


class EmptyGraphError(ValueError):
    """Modularity is undefined for a graph without edge weight."""


class NoEdgesError(ValueError):
    pass


@dataclass(frozen=True)
class Partition:
    assignment: dict[str, int]
    modularity: float
    resolution: float = 1.0

    @property
    def n_clusters(self) -> int:
        return len(set(self.assignment.values()))

    def members(self) -> dict[int, list[str]]:
        out: dict[int, list[str]] = {}
        for label, c in self.assignment.items():
            out.setdefault(c, []).append(label)
        return out


def _as_index_assignment(graph: WeightedGraph, assignment) -> list:
    if isinstance(assignment, Mapping):
        missing = [label for label in graph.labels if label not in assignment]
        if missing:
            raise ValueError(f"assignment misses nodes {missing[:5]}")
        return [assignment[label] for label in graph.labels]
    if len(assignment) != graph.n:
        raise ValueError("assignment length differs from node count")
    return list(assignment)


def modularity(
    graph: WeightedGraph, assignment: Mapping[str, int] | Sequence[int], resolution: float = 1.0
) -> float:
    """Q = sum over clusters of intra-weight / W - resolution * (cluster degree / 2W)^2."""
    comm = _as_index_assignment(graph, assignment)
    total = graph.total_weight
    if total <= 0:
        raise EmptyGraphError("modularity undefined: graph has no edge weight")
    intra: dict = {}
    degree: dict = {}
    for i, j, w in graph.edges:
        degree[comm[i]] = degree.get(comm[i], 0) + w
        degree[comm[j]] = degree.get(comm[j], 0) + w
        if comm[i] == comm[j]:
            intra[comm[i]] = intra.get(comm[i], 0) + w
    terms = []
    for c in degree:
        terms.append(intra.get(c, 0) / total)
        terms.append(-resolution * (degree[c] / (2 * total)) ** 2)
    return math.fsum(terms)


def _local_moving(adj, loops, rng, resolution, m2):
    """One Louvain level: move nodes until no strictly improving move remains.

    Returns (community per node, whether any node moved).
    """
    n = len(adj)
    k = [sum(nbrs.values()) + 2 * loops[i] for i, nbrs in enumerate(adj)]
    comm = list(range(n))
    tot = k[:]
    size = [1] * n
    order = list(range(n))
    rng.shuffle(order)
    eps = 1e-12 * m2
    moved_any = False
    while True:
        moves = 0
        for i in order:
            ci = comm[i]
            links: dict[int, float] = {}
            for j, w in adj[i].items():
                links[comm[j]] = links.get(comm[j], 0) + w
            tot[ci] -= k[i]
            size[ci] -= 1
            scale = resolution * k[i] / m2
            stay = links.get(ci, 0) - scale * tot[ci]
            gains = {c: links[c] - scale * tot[c] for c in links if c != ci}
            if size[ci]:
                # leaving for an empty cluster gains nothing but sheds the penalty
                empty = next(c for c in range(n) if size[c] == 0)
                gains.setdefault(empty, 0.0)
            target = ci
            if gains:
                # lowest id among equal best gains
                best = min(gains, key=lambda c: (-gains[c], c))
                if gains[best] > stay + eps:
                    target = best
            tot[target] += k[i]
            size[target] += 1
            if target != ci:
                comm[i] = target
                moves += 1
        if not moves:
            return comm, moved_any
        moved_any = True


def _dense(labels: Sequence[int]) -> list[int]:
    """Renumber cluster ids 0, 1, 2, ... in order of first appearance."""
    ids: dict[int, int] = {}
    return [ids.setdefault(c, len(ids)) for c in labels]


def _aggregate(adj, loops, comm):
    size = max(comm) + 1
    new_adj: list[dict[int, float]] = [{} for _ in range(size)]
    new_loops = [0.0] * size
    for i, nbrs in enumerate(adj):
        ci = comm[i]
        new_loops[ci] += loops[i]
        for j, w in nbrs.items():
            if j < i:
                continue
            cj = comm[j]
            if ci == cj:
                new_loops[ci] += w
            else:
                new_adj[ci][cj] = new_adj[ci].get(cj, 0) + w
                new_adj[cj][ci] = new_adj[cj].get(ci, 0) + w
    return new_adj, new_loops


def _louvain(graph: WeightedGraph, rng: random.Random, resolution: float) -> list[int]:
    adj = [dict(nbrs) for nbrs in graph.adjacency]
    loops = [0.0] * graph.n
    m2 = 2 * graph.total_weight
    membership = list(range(graph.n))
    while True:
        comm, moved = _local_moving(adj, loops, rng, resolution, m2)
        if not moved:
            break
        comm = _dense(comm)
        membership = [comm[c] for c in membership]
        adj, loops = _aggregate(adj, loops, comm)
    return _dense(membership)


def detect_communities(
    graph: WeightedGraph, seed: int = 0, resolution: float = 1.0, restarts: int = 8
) -> Partition:
    """Greedy modularity maximization with coarsening (Louvain scheme).

    Nodes are visited in an order shuffled by a seeded generator; a node
    changes cluster only for a strictly positive gain, preferring the lowest
    cluster id among equal gains (an empty cluster is always a candidate).
    The scheme is run ``restarts`` times with visit orders derived from
    ``seed`` and the highest-modularity result is kept, earliest run on ties.
    Identical inputs give identical partitions.
    """
    if not graph.edges:
        raise NoEdgesError("community detection needs at least one edge")
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    best: Partition | None = None
    for run in range(restarts):
        rng = random.Random(seed if run == 0 else f"{seed}:{run}")
        labels = _louvain(graph, rng, resolution)
        q = modularity(graph, labels, resolution)
        if best is None or q > best.modularity:
            best = Partition(dict(zip(graph.labels, labels)), q, resolution)
    return best
