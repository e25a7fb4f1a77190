"""K-means on eigenfunction rows, and coherence scoring of vertex sets.

The graph clusterer computes the top-k paired eigenfunctions of the
forward-backward dynamics and runs k-means on the rows of the
eigenvector matrix, exactly the indicator heuristic behind spectral
clustering. k-means itself is seeded, restarted, and fully
deterministic: same (points, k, seed) gives the same labels.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal

import numpy as np

from .errors import (
    DegeneratePointsError,
    EmptySubsetError,
    IndexOutOfRangeError,
    KTooLargeError,
)
from .graph import Graph, transition_matrix
from .operators import Density, forward_backward, uniform_density
from .spectral import fb_spectrum

__all__ = [
    "Clustering",
    "KMeansConfig",
    "kmeans",
    "cluster_graph",
    "coherence_score",
]

_TIE_TOL = 1e-12


@dataclass(frozen=True)
class KMeansConfig:
    restarts: int = 10
    max_iter: int = 300
    tol: float = 1e-9
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")


@dataclass(frozen=True)
class Clustering:
    """Per-vertex labels with the inertia and seed that produced them."""

    labels: np.ndarray
    k: int
    inertia: float
    seed: int


def _kmeanspp_init(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = len(points)
    centroids = np.empty((k, points.shape[1]))
    centroids[0] = points[rng.integers(n)]
    d2 = ((points - centroids[0]) ** 2).sum(axis=1)
    for j in range(1, k):
        total = d2.sum()
        if total <= 0.0:
            # all remaining points coincide with chosen centroids
            centroids[j] = points[rng.integers(n)]
            continue
        centroids[j] = points[rng.choice(n, p=d2 / total)]
        d2 = np.minimum(d2, ((points - centroids[j]) ** 2).sum(axis=1))
    return centroids


def _assign(points: np.ndarray, centroids: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    d2 = ((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    labels = np.argmin(d2, axis=1)
    return labels, d2[np.arange(len(points)), labels]


def _lloyd(
    points: np.ndarray,
    k: int,
    rng: np.random.Generator,
    max_iter: int,
    tol: float,
) -> tuple[np.ndarray, float, list[float]]:
    """One restart: k-means++ init then Lloyd iterations.

    Returns (labels, inertia, per-iteration inertia history). Empty
    clusters are reseeded at the point farthest from its centroid.
    """
    centroids = _kmeanspp_init(points, k, rng)
    history: list[float] = []
    labels, dist2 = _assign(points, centroids)
    for _ in range(max_iter):
        for j in range(k):
            if not (labels == j).any():
                far = int(np.argmax(dist2))
                centroids[j] = points[far]
                labels[far] = j
                dist2[far] = 0.0
        history.append(float(dist2.sum()))
        new_centroids = centroids.copy()
        for j in range(k):
            members = labels == j
            if members.any():
                new_centroids[j] = points[members].mean(axis=0)
        shift = np.abs(new_centroids - centroids).max()
        centroids = new_centroids
        labels, dist2 = _assign(points, centroids)
        if shift <= tol:
            break
    history.append(float(dist2.sum()))
    return labels, float(dist2.sum()), history


def kmeans(points: np.ndarray, k: int, cfg: KMeansConfig | None = None) -> Clustering:
    """Best-of-restarts Lloyd clustering with k-means++ initialization.

    Restarts tie-break on inertia (within 1e-12) toward the lower
    restart index, so results are reproducible bit for bit.
    """
    cfg = cfg or KMeansConfig()
    points = np.asarray(points, dtype=np.float64)
    if points.ndim == 1:
        points = points[:, None]
    n = len(points)
    if k < 1 or k > n:
        raise KTooLargeError(f"k={k} outside [1, {n}]")
    if len(np.unique(points, axis=0)) < k:
        raise DegeneratePointsError(
            f"fewer than k={k} distinct rows; clusters would be empty"
        )
    best: tuple[float, np.ndarray] | None = None
    for restart in range(cfg.restarts):
        rng = np.random.default_rng([cfg.seed, restart])
        labels, inertia, _ = _lloyd(points, k, rng, cfg.max_iter, cfg.tol)
        if best is None or inertia < best[0] - _TIE_TOL:
            best = (inertia, labels)
    inertia, labels = best
    return Clustering(labels=labels, k=k, inertia=inertia, seed=cfg.seed)


def cluster_graph(
    g: Graph,
    k: int,
    mu: Density | None = None,
    cfg: KMeansConfig | None = None,
    use: Literal["phi", "psi", "both"] = "phi",
    drop_first: bool = False,
) -> Clustering:
    """Spectral clustering of a (directed) graph into k coherent sets.

    Runs k-means on the rows of [phi_1 .. phi_k] (or psi, or both
    concatenated). ``drop_first`` removes the constant phi_1 column
    before clustering; the default keeps it.
    """
    mu = mu or uniform_density(g.n)
    s = transition_matrix(g)
    spec = fb_spectrum(s, mu, k)
    if use == "phi":
        feats = spec.phi
    elif use == "psi":
        feats = spec.psi
    elif use == "both":
        feats = np.hstack([spec.phi, spec.psi])
    else:
        raise ValueError(f"unknown feature choice {use!r}")
    if drop_first:
        feats = feats[:, 1:]
    return kmeans(feats, k, cfg)


def coherence_score(g: Graph, mu: Density | None, subset: Iterable[int]) -> float:
    """Probability that a forward-backward walk from the set returns to it.

    Averages the in-set row mass of F over the set; 1 means every
    forward-backward path starting inside stays inside.
    """
    idx = np.asarray(sorted(set(int(i) for i in subset)), dtype=np.int64)
    if len(idx) == 0:
        raise EmptySubsetError("coherence of the empty set is undefined")
    if idx.min() < 0 or idx.max() >= g.n:
        raise IndexOutOfRangeError(
            f"vertex index {int(idx.max())} outside [0, {g.n})"
        )
    mu = mu or uniform_density(g.n)
    f = forward_backward(transition_matrix(g), mu).m
    return float(f[np.ix_(idx, idx)].sum() / len(idx))
