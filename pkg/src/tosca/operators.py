"""Densities and matrix representations of the transfer operators.

The walk on a graph with transition matrix S induces, for a start
density mu and its image nu = S^T mu, the operator matrices

    K = S                      (observables, one step ahead)
    P = S^T                    (densities, push-forward)
    T = D_nu^-1 S^T D_mu       (density-reweighted adjoint of K)
    F = K T                    (one step forward, one step backward)
    B = T K                    (one step backward, one step forward)

together with the covariance matrices C_xx = D_mu, C_yy = D_nu and
C_xy = D_mu S. All matrices here are dense; F and B are structurally
denser than S, so sparse storage would not pay off.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import (
    NonPositiveDensityError,
    NotUndirectedError,
    ToscaError,
    ZeroDegreeError,
)
from .graph import Graph, TransitionMatrix, degree_info

__all__ = [
    "Density",
    "OperatorMatrix",
    "OperatorKind",
    "uniform_density",
    "image_density",
    "koopman",
    "perron_frobenius",
    "reweighted",
    "forward_backward",
    "backward_forward",
    "covariance_matrices",
    "stationary_density",
]

OperatorKind = Literal["K", "P", "T", "F", "B", "Cxx", "Cyy", "Cxy"]

_STRICT_POSITIVE_FLOOR = 1e-300  # any true zero fails, denormal noise too


@dataclass(frozen=True)
class Density:
    """Probability vector on the vertex set."""

    p: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p, dtype=np.float64)
        object.__setattr__(self, "p", p)
        if p.ndim != 1:
            raise ToscaError(f"density must be a vector, got shape {p.shape}")
        if (p < 0.0).any():
            raise ToscaError(
                f"density has negative mass at vertex {int(np.argmax(p < 0.0))}"
            )
        if abs(p.sum() - 1.0) > 1e-12:
            raise ToscaError(f"density sums to {p.sum()!r}, expected 1")

    @property
    def n(self) -> int:
        return len(self.p)

    def strictly_positive(self) -> bool:
        return bool((self.p > _STRICT_POSITIVE_FLOOR).all())


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense operator matrix tagged with its kind and reference densities."""

    kind: OperatorKind
    m: np.ndarray
    mu: Density | None = None
    nu: Density | None = None


def uniform_density(n: int) -> Density:
    return Density(np.full(n, 1.0 / n))


def _require_positive(d: Density, which: str) -> None:
    if not d.strictly_positive():
        raise NonPositiveDensityError(which, int(np.argmin(d.p)))


def image_density(s: TransitionMatrix, mu: Density) -> Density:
    """One-step image nu with nu_i = sum_j s_ji mu_j."""
    return Density(s.s.T @ mu.p)


def koopman(s: TransitionMatrix, mu: Density | None = None) -> OperatorMatrix:
    """K = S; attach a density when a weighted projection is intended."""
    nu = image_density(s, mu) if mu is not None else None
    return OperatorMatrix(kind="K", m=s.dense(), mu=mu, nu=nu)


def perron_frobenius(s: TransitionMatrix, mu: Density | None = None) -> OperatorMatrix:
    nu = image_density(s, mu) if mu is not None else None
    return OperatorMatrix(kind="P", m=s.dense().T, mu=mu, nu=nu)


def reweighted(s: TransitionMatrix, mu: Density) -> OperatorMatrix:
    """T = D_nu^-1 S^T D_mu; row-stochastic for strictly positive mu, nu."""
    _require_positive(mu, "mu")
    nu = image_density(s, mu)
    _require_positive(nu, "nu")
    t = (s.dense().T * mu.p[None, :]) / nu.p[:, None]
    return OperatorMatrix(kind="T", m=t, mu=mu, nu=nu)


def forward_backward(s: TransitionMatrix, mu: Density) -> OperatorMatrix:
    """F = K T = S D_nu^-1 S^T D_mu."""
    t = reweighted(s, mu)
    f = s.s @ t.m
    return OperatorMatrix(kind="F", m=np.asarray(f), mu=t.mu, nu=t.nu)


def backward_forward(s: TransitionMatrix, mu: Density) -> OperatorMatrix:
    """B = T K = D_nu^-1 S^T D_mu S."""
    t = reweighted(s, mu)
    b = np.asarray((s.s.T @ t.m.T).T)  # t @ S via sparse ops
    return OperatorMatrix(kind="B", m=b, mu=t.mu, nu=t.nu)


def covariance_matrices(
    s: TransitionMatrix, mu: Density
) -> tuple[OperatorMatrix, OperatorMatrix, OperatorMatrix]:
    """C_xx = diag(mu), C_yy = diag(nu), C_xy = D_mu S."""
    nu = image_density(s, mu)
    cxx = OperatorMatrix(kind="Cxx", m=np.diag(mu.p), mu=mu, nu=nu)
    cyy = OperatorMatrix(kind="Cyy", m=np.diag(nu.p), mu=mu, nu=nu)
    cxy = OperatorMatrix(kind="Cxy", m=s.dense() * mu.p[:, None], mu=mu, nu=nu)
    return cxx, cyy, cxy


def stationary_density(g: Graph) -> Density:
    """Degree-proportional density satisfying detailed balance.

    Only defined for undirected graphs (symmetric adjacency) with
    positive degrees.
    """
    a = g.adjacency
    if (a != a.T).nnz != 0:
        raise NotUndirectedError("adjacency matrix is not symmetric")
    deg = degree_info(g).out_degrees
    if (deg == 0.0).any():
        raise ZeroDegreeError(
            f"vertex {int(np.argmax(deg == 0.0))} has zero degree"
        )
    return Density(deg / deg.sum())
