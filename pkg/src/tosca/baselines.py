"""Symmetrization-based clusterers for directed graphs.

Two comparison methods: degree-discounted bibliometric symmetrization
(common in-links and out-links weighted by degrees) and clustering of
the Hermitian matrix i(A - A^T), realized through the real SVD of the
skew-symmetric part of the normalized adjacency matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .clustering import Clustering, KMeansConfig, kmeans
from .errors import DegenerateSpectrumError, KTooLargeError, ZeroDegreeError
from .graph import Graph, degree_info

__all__ = [
    "SymmetrizedMatrix",
    "symmetrize",
    "ddbs_cluster",
    "herm_cluster",
]

_DEGENERATE_TOL = 1e-12


@dataclass(frozen=True)
class SymmetrizedMatrix:
    m: np.ndarray
    scheme: Literal["ddbs", "naive_sum"]


def _pseudo_inv_sqrt(values: np.ndarray) -> np.ndarray:
    """1/sqrt per entry with the pseudo-inverse convention 1/0 -> 0."""
    out = np.zeros_like(values)
    positive = values > 0.0
    out[positive] = 1.0 / np.sqrt(values[positive])
    return out


def symmetrize(g: Graph, scheme: Literal["ddbs", "naive_sum"] = "ddbs") -> SymmetrizedMatrix:
    """Symmetric nonnegative similarity matrix for a directed graph."""
    a = g.adjacency.toarray()
    if scheme == "naive_sum":
        return SymmetrizedMatrix(m=a + a.T, scheme=scheme)
    deg = degree_info(g)
    do = _pseudo_inv_sqrt(deg.out_degrees)
    di = _pseudo_inv_sqrt(deg.in_degrees)
    # Degree-discounted coupling + co-citation:
    #   Do^-1/2 A Di^-1/2 A^T Do^-1/2  +  Di^-1/2 A^T Do^-1/2 A Di^-1/2
    left = (do[:, None] * a) @ (di[:, None] * a.T * do[None, :])
    right = (di[:, None] * a.T) @ (do[:, None] * a * di[None, :])
    m = left + right
    return SymmetrizedMatrix(m=(m + m.T) / 2.0, scheme="ddbs")


def _spectral_features(m: np.ndarray, k: int) -> np.ndarray:
    """Top-k random-walk eigenvectors of a symmetric similarity matrix."""
    deg = m.sum(axis=1)
    if not (deg > 0.0).any():
        raise ZeroDegreeError("similarity matrix has zero degrees everywhere")
    dinv = _pseudo_inv_sqrt(deg)
    sym = dinv[:, None] * m * dinv[None, :]
    vals, vecs = np.linalg.eigh(sym)
    return vecs[:, ::-1][:, :k] * dinv[:, None]


def ddbs_cluster(g: Graph, k: int, cfg: KMeansConfig | None = None) -> Clustering:
    """Spectral clustering of the degree-discounted symmetrization."""
    if not 1 <= k <= g.n:
        raise KTooLargeError(f"k={k} outside [1, {g.n}]")
    sym = symmetrize(g, "ddbs")
    feats = _spectral_features(sym.m, k)
    return kmeans(feats, k, cfg)


def herm_cluster(g: Graph, k: int, cfg: KMeansConfig | None = None) -> Clustering:
    """Cluster by the spectrum of the Hermitian matrix i(A_nn - A_nn^T).

    The eigenpairs of H = iC for real skew-symmetric C follow from the
    SVD of C: C v = sigma u and C u = -sigma v give eigenvalues
    +-sigma with eigenvectors (u -+ iv)/sqrt(2). Each singular value of
    C appears twice, so consecutive SVD triplets 2j, 2j+1 span one
    eigenpair subspace; the stacked columns [u_j, v_j] of the leading
    ceil(k/2) pairs feed k-means.
    """
    if not 1 <= k <= g.n:
        raise KTooLargeError(f"k={k} outside [1, {g.n}]")
    a = g.adjacency.toarray()
    deg = degree_info(g)
    do = _pseudo_inv_sqrt(deg.out_degrees)
    di = _pseudo_inv_sqrt(deg.in_degrees)
    a_nn = do[:, None] * a * di[None, :]
    c = a_nn - a_nn.T
    u, sigma, vt = np.linalg.svd(c)
    if sigma[0] <= _DEGENERATE_TOL:
        raise DegenerateSpectrumError(
            "skew-symmetric part vanishes; the graph carries no "
            "directional information"
        )
    n_pairs = (k + 1) // 2
    cols = []
    for j in range(n_pairs):
        cols.append(u[:, 2 * j])
        cols.append(vt[2 * j, :])
    feats = np.column_stack(cols)
    return kmeans(feats, k, cfg)
