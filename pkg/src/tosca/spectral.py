"""Paired spectra of the forward-backward dynamics via a symmetrized SVD.

Instead of eigendecomposing the nonsymmetric F, the top singular
triplets (sigma, u, v) of

    M = D_mu^{1/2} S D_nu^{-1/2}

are computed; M M^T is symmetric positive semi-definite and similar to
F, so the eigenpairs of F and B follow as

    kappa = sigma,  lambda = sigma^2,
    phi = D_mu^{-1/2} u,  psi = D_nu^{-1/2} v.

This keeps the numerics real and stable for directed graphs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import (
    IndexOutOfRangeError,
    KOutOfRangeError,
    NonPositiveDensityError,
    NotUndirectedError,
    TooFewValuesError,
)
from .graph import Graph, TransitionMatrix, lazy_chain, transition_matrix
from .operators import Density, image_density, stationary_density

__all__ = [
    "SpectrumResult",
    "KoopmanSpectrum",
    "fb_spectrum",
    "koopman_spectrum",
    "spectral_gap",
    "embed_coordinates",
    "DENSE_LIMIT",
]

# Above this size the SVD switches to a restarted Lanczos solver.
DENSE_LIMIT = 2000
_ITER_TOL = 1e-10
_ITER_MAXITER_PER_K = 300


@dataclass(frozen=True)
class SpectrumResult:
    """Top-k paired spectrum of the forward-backward dynamics.

    kappa are the singular values (correlations), lambda = kappa^2 the
    eigenvalues of F and B, phi / psi the corresponding eigenvector
    columns, D_mu- resp. D_nu-orthonormal.
    """

    kappa: np.ndarray
    lam: np.ndarray
    phi: np.ndarray
    psi: np.ndarray

    @property
    def k(self) -> int:
        return len(self.kappa)


@dataclass(frozen=True)
class KoopmanSpectrum:
    """Top-k eigenpairs of K = S for an undirected graph.

    Eigenvalues are sorted descending by value (not magnitude) and may
    be negative; vectors are D_pi-orthonormal.
    """

    values: np.ndarray
    vectors: np.ndarray

    @property
    def k(self) -> int:
        return len(self.values)


def _fix_signs(phi: np.ndarray, *others: np.ndarray) -> None:
    """Make the first largest-magnitude entry of each phi column positive.

    Companion matrices are flipped with phi so eigenpairs stay paired.
    Operates in place.
    """
    for j in range(phi.shape[1]):
        pivot = int(np.argmax(np.abs(phi[:, j])))
        if phi[pivot, j] < 0.0:
            phi[:, j] = -phi[:, j]
            for other in others:
                other[:, j] = -other[:, j]


def fb_spectrum(s: TransitionMatrix, mu: Density, k: int) -> SpectrumResult:
    """Top-k paired eigenfunctions of the forward-backward operators."""
    n = s.n
    if not 1 <= k <= n:
        raise KOutOfRangeError(f"k={k} outside [1, {n}]")
    if not mu.strictly_positive():
        raise NonPositiveDensityError("mu", int(np.argmin(mu.p)))
    nu = image_density(s, mu)
    if not nu.strictly_positive():
        raise NonPositiveDensityError("nu", int(np.argmin(nu.p)))

    sqrt_mu = np.sqrt(mu.p)
    inv_sqrt_nu = 1.0 / np.sqrt(nu.p)
    if n <= DENSE_LIMIT or k >= n - 1:
        m = sqrt_mu[:, None] * s.dense() * inv_sqrt_nu[None, :]
        u, sigma, vt = np.linalg.svd(m)
        u, sigma, v = u[:, :k], sigma[:k], vt[:k, :].T
    else:
        m = sp.diags(sqrt_mu) @ s.s @ sp.diags(inv_sqrt_nu)
        v0 = np.full(n, 1.0 / np.sqrt(n))
        u, sigma, vt = spla.svds(
            m, k=k, tol=_ITER_TOL, maxiter=_ITER_MAXITER_PER_K * k, v0=v0
        )
        order = np.argsort(sigma)[::-1]
        u, sigma, v = u[:, order], sigma[order], vt[order, :].T

    kappa = np.clip(sigma, 0.0, 1.0)
    phi = u / sqrt_mu[:, None]
    psi = v * inv_sqrt_nu[:, None]
    _fix_signs(phi, psi)
    return SpectrumResult(kappa=kappa, lam=kappa**2, phi=phi, psi=psi)


def koopman_spectrum(g: Graph, k: int, lazy: bool = False) -> KoopmanSpectrum:
    """Top-k eigenpairs of K = S for an undirected graph.

    Computed through the symmetric similarity D_pi^{1/2} K D_pi^{-1/2};
    ``lazy`` replaces S by (S + I)/2, which makes all eigenvalues
    nonnegative.
    """
    a = g.adjacency
    if (a != a.T).nnz != 0:
        raise NotUndirectedError("Koopman spectra are only real for undirected graphs")
    if not 1 <= k <= g.n:
        raise KOutOfRangeError(f"k={k} outside [1, {g.n}]")
    pi = stationary_density(g)
    s = transition_matrix(g)
    if lazy:
        s = lazy_chain(s)
    sqrt_pi = np.sqrt(pi.p)
    sym = sp.diags(sqrt_pi) @ s.s @ sp.diags(1.0 / sqrt_pi)
    if g.n <= DENSE_LIMIT or k >= g.n - 1:
        vals, vecs = np.linalg.eigh(sym.toarray())
        vals, vecs = vals[::-1][:k], vecs[:, ::-1][:, :k]
    else:
        sym = sp.csr_matrix((sym + sym.T) / 2.0)
        v0 = np.full(g.n, 1.0 / np.sqrt(g.n))
        vals, vecs = spla.eigsh(sym, k=k, which="LA", tol=_ITER_TOL, v0=v0)
        order = np.argsort(vals)[::-1]
        vals, vecs = vals[order], vecs[:, order]
    vectors = vecs / sqrt_pi[:, None]
    _fix_signs(vectors)
    return KoopmanSpectrum(values=vals, vectors=vectors)


def spectral_gap(lam: Sequence[float], max_k: int) -> int:
    """Suggest k as the 1-based position of the largest drop.

    Returns argmax over 1 <= j < min(max_k, len) of lam[j] - lam[j+1];
    ties resolve to the smallest j.
    """
    lam = np.asarray(lam, dtype=np.float64)
    if len(lam) < 2:
        raise TooFewValuesError("need at least two values to find a gap")
    limit = min(int(max_k), len(lam))
    if limit < 2:
        raise TooFewValuesError(f"max_k={max_k} leaves no gap to inspect")
    drops = lam[: limit - 1] - lam[1:limit]
    return int(np.argmax(drops)) + 1


def embed_coordinates(spec: SpectrumResult, dims: Sequence[int]) -> np.ndarray:
    """Vertex coordinates from 1-based eigenfunction indices.

    Row i is (phi_d(v_i)) for d in dims; dims=[2, 3] reproduces the
    planar graph drawing from the two subdominant eigenfunctions.
    """
    cols = []
    for d in dims:
        if not 1 <= d <= spec.k:
            raise IndexOutOfRangeError(
                f"eigenfunction index {d} outside [1, {spec.k}]"
            )
        cols.append(spec.phi[:, d - 1])
    return np.column_stack(cols)
