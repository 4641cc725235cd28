"""Classical (Torgerson) MDS of association-strength dissimilarities."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from knowmap.netlab.graph import WeightedGraph

EIGEN_FLOOR = 1e-12


@dataclass(frozen=True)
class Embedding:
    coords: np.ndarray  # (n, 2)
    stress: float
    degenerate: bool = False


@dataclass(frozen=True)
class Layout:
    points: dict[str, tuple[float, float]]
    stress: float
    degenerate: bool = False


def association_dissimilarity(graph: WeightedGraph) -> np.ndarray:
    """d(a, b) = 1 - clamp(w(a,b) * N / (occ(a) * occ(b)), 0, 1); 1 for non-adjacent pairs."""
    n = graph.n
    if graph.documents <= 0:
        raise ValueError("graph carries no document count; association strength needs it")
    occ = np.asarray(graph.occurrences, dtype=float)
    d = np.ones((n, n))
    np.fill_diagonal(d, 0.0)
    for i, j, w in graph.edges:
        strength = w * graph.documents / (occ[i] * occ[j]) if occ[i] * occ[j] > 0 else 0.0
        d[i, j] = d[j, i] = 1.0 - min(max(strength, 0.0), 1.0)
    return d


def classical_mds(dissimilarity: np.ndarray) -> Embedding:
    """Embed a symmetric dissimilarity matrix in 2D.

    The double-centred Gram matrix B = -1/2 J D^2 J is diagonalised (LAPACK
    symmetric solver); coordinates come from the two largest eigenpairs with
    eigenvalues above 1e-12. Each axis is oriented so its largest-magnitude
    coordinate is positive. ``stress`` is the Frobenius norm of B - X X^T.
    """
    d = np.asarray(dissimilarity, dtype=float)
    n = d.shape[0]
    if d.shape != (n, n) or n < 2:
        raise ValueError("need a square dissimilarity matrix with at least 2 points")
    d = (d + d.T) / 2
    centre = np.eye(n) - np.full((n, n), 1.0 / n)
    gram = -0.5 * centre @ (d**2) @ centre
    gram = (gram + gram.T) / 2

    values, vectors = np.linalg.eigh(gram)
    top = np.argsort(values, kind="stable")[::-1][:2]
    coords = np.zeros((n, 2))
    for axis, k in enumerate(top):
        lam = values[k]
        if lam <= EIGEN_FLOOR:
            continue
        v = vectors[:, k]
        pivot = int(np.argmax(np.abs(v)))
        if v[pivot] < 0:
            v = -v
        coords[:, axis] = v * np.sqrt(lam)
    degenerate = bool(np.all(values[top] <= EIGEN_FLOOR))
    stress = float(np.linalg.norm(gram - coords @ coords.T))
    return Embedding(coords, stress, degenerate)


def mds_layout(graph: WeightedGraph) -> Layout:
    if graph.n < 2:
        raise ValueError("layout needs at least 2 nodes")
    emb = classical_mds(association_dissimilarity(graph))
    points = {
        label: (float(x), float(y)) for label, (x, y) in zip(graph.labels, emb.coords)
    }
    return Layout(points, emb.stress, emb.degenerate)
