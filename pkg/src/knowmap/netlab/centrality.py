"""Betweenness centrality by pair-dependency accumulation.

For each source node the shortest-path DAG is built (breadth-first for hop
counts, a binary heap for weighted distances), then dependencies are summed
back from the farthest node. Every unordered pair is reached from both of its
endpoints, so raw totals are halved.

Path counts and dependencies stay in integer arithmetic, so scores are exact
rationals. ``exact=True`` also compares weighted distances exactly and
returns Fractions.
"""

from __future__ import annotations

import heapq
import itertools
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real

from knowmap.netlab.graph import WeightedGraph


@dataclass(frozen=True)
class CentralityScores:
    scores: dict[str, Real]
    normalized: bool = False

    def ranked(self) -> list[tuple[str, Real]]:
        return sorted(self.scores.items(), key=lambda kv: (-kv[1], kv[0]))


def _bfs_dag(adj, s):
    n = len(adj)
    order = []
    preds: list[list[int]] = [[] for _ in range(n)]
    sigma = [0] * n
    dist = [-1] * n
    sigma[s] = 1
    dist[s] = 0
    queue = deque([s])
    while queue:
        v = queue.popleft()
        order.append(v)
        dv = dist[v] + 1
        for w in adj[v]:
            if dist[w] < 0:
                dist[w] = dv
                queue.append(w)
            if dist[w] == dv:
                sigma[w] += sigma[v]
                preds[w].append(v)
    return order, preds, sigma


def _dijkstra_dag(lengths, s, exact):
    n = len(lengths)
    order = []
    preds: list[list[int]] = [[] for _ in range(n)]
    sigma = [0] * n
    sigma[s] = 1
    done: dict[int, object] = {}
    best: dict[int, object] = {s: 0}
    tie = itertools.count()
    heap = [(0, next(tie), s, s)]

    def same(a, b) -> bool:
        if exact:
            return a == b
        return abs(a - b) <= 1e-12 * max(1.0, abs(a), abs(b))

    while heap:
        d, _, pred, v = heapq.heappop(heap)
        if v in done:
            continue
        if v != s:
            sigma[v] += sigma[pred]
        order.append(v)
        done[v] = d
        for w, length in lengths[v].items():
            if w in done:
                continue
            dw = d + length
            if w not in best or (dw < best[w] and not same(dw, best[w])):
                best[w] = dw
                heapq.heappush(heap, (dw, next(tie), v, w))
                sigma[w] = 0
                preds[w] = [v]
            elif same(dw, best[w]):
                sigma[w] += sigma[v]
                preds[w].append(v)
    return order, preds, sigma


def betweenness(
    graph: WeightedGraph,
    use_weights: bool = False,
    normalized: bool = False,
    exact: bool = False,
) -> CentralityScores:
    """Shortest-path betweenness of every node.

    Weighted mode treats an edge of weight w as length 1/w, so heavily
    co-occurring terms sit close together. Raw scores count each unordered
    pair once; ``normalized`` divides by (n-1)(n-2)/2.

    Dependencies are accumulated in integers: for a source whose path counts
    have least common multiple L, the scaled dependency L * delta(v) / sigma(v)
    obeys an integer recurrence. Scores are therefore exact rationals, returned
    as Fractions with ``exact=True`` and as correctly rounded floats otherwise.
    """
    n = graph.n
    adj = graph.adjacency
    if use_weights:
        inv = (lambda w: 1 / Fraction(w)) if exact else (lambda w: 1.0 / w)
        lengths = [{j: inv(w) for j, w in nbrs.items()} for nbrs in adj]
    # totals[v] / denom is twice the raw score
    totals = [0] * n
    denom = 1

    for s in range(n):
        if use_weights:
            order, preds, sigma = _dijkstra_dag(lengths, s, exact)
        else:
            order, preds, sigma = _bfs_dag(adj, s)
        scale = math.lcm(*(sigma[v] for v in order))
        if denom % scale:
            grown = math.lcm(denom, scale)
            totals = [t * (grown // denom) for t in totals]
            denom = grown
        lift = denom // scale
        scaled = [0] * n
        while order:
            w = order.pop()
            share = scale // sigma[w] + scaled[w]
            for v in preds[w]:
                scaled[v] += share
            if w != s:
                totals[w] += sigma[w] * scaled[w] * lift

    divisor = 2 * denom
    if normalized and n > 2:
        divisor *= (n - 1) * (n - 2) // 2
    scores = {label: Fraction(totals[i], divisor) for i, label in enumerate(graph.labels)}
    if not exact:
        scores = {label: float(value) for label, value in scores.items()}
    return CentralityScores(scores, normalized and n > 2)


def degree_centrality(graph: WeightedGraph) -> dict[str, int]:
    return graph.degree()
