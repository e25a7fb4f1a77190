"""Galerkin projection of operators onto basis subspaces.

A basis of r functions on the vertices, stored as the rows of an
r x n matrix, turns an operator matrix L into the reduced r x r matrix
L_r = G0^-1 G1 with G0 = Phi D G1 = Phi D L Phi^T, where D is the
diagonal of the operator's reference density. Eigenpairs of L_r lift
back to vertex functions through the basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg as sla

from .errors import (
    EmptySetError,
    IndexOutOfRangeError,
    KOutOfRangeError,
    OverlappingSetsError,
    ParseError,
    SingularGramError,
    ToscaError,
)
from .operators import OperatorMatrix

__all__ = [
    "Basis",
    "ReducedOperator",
    "indicator_basis",
    "project",
    "reduced_eigenfunctions",
    "read_partition",
    "write_partition",
    "GRAM_CONDITION_LIMIT",
]

GRAM_CONDITION_LIMIT = 1e12

# Reference measure per operator kind: F and K act on mu-weighted
# functions, T and B on nu-weighted ones.
_MEASURE = {"K": "mu", "P": "mu", "F": "mu", "T": "nu", "B": "nu"}

# Kinds whose Gram pair (G0, G1) is symmetric definite, allowing the
# stable generalized symmetric eigensolver.
_SELF_ADJOINT_KINDS = frozenset({"F", "B"})


@dataclass(frozen=True)
class Basis:
    """Rows are basis functions evaluated on all vertices (r x n)."""

    phi_v: np.ndarray

    @property
    def r(self) -> int:
        return self.phi_v.shape[0]

    @property
    def n(self) -> int:
        return self.phi_v.shape[1]


@dataclass(frozen=True)
class ReducedOperator:
    """Reduced operator L_r = G0^-1 G1 with its Gram matrices and basis."""

    l_r: np.ndarray
    g0: np.ndarray
    g1: np.ndarray
    basis: Basis
    kind: str


def indicator_basis(n: int, sets: Sequence[Iterable[int]]) -> Basis:
    """0/1 indicator functions of disjoint vertex sets (need not cover)."""
    phi_v = np.zeros((len(sets), n))
    seen: set[int] = set()
    for row, vertices in enumerate(sets):
        vertices = list(vertices)
        if not vertices:
            raise EmptySetError(f"set {row} is empty")
        for v in vertices:
            v = int(v)
            if not 0 <= v < n:
                raise IndexOutOfRangeError(f"vertex {v} outside [0, {n})")
            if v in seen:
                raise OverlappingSetsError(f"vertex {v} appears in two sets")
            seen.add(v)
            phi_v[row, v] = 1.0
    return Basis(phi_v=phi_v)


def project(op: OperatorMatrix, basis: Basis) -> ReducedOperator:
    """Project an operator matrix onto the span of the basis.

    Raises SingularGram when the basis is rank-deficient under the
    reference measure (condition number >= 1e12); no pseudo-inverse
    fallback is attempted.
    """
    if op.kind not in _MEASURE:
        raise ToscaError(f"cannot project operator of kind {op.kind!r}")
    density = op.mu if _MEASURE[op.kind] == "mu" else op.nu
    if density is None:
        raise ToscaError(f"operator of kind {op.kind!r} carries no densities")
    if basis.n != op.m.shape[0]:
        raise ToscaError(
            f"basis is on {basis.n} vertices, operator on {op.m.shape[0]}"
        )
    weighted = basis.phi_v * density.p[None, :]
    g0 = weighted @ basis.phi_v.T
    g1 = weighted @ op.m @ basis.phi_v.T
    eigvals = np.linalg.eigvalsh((g0 + g0.T) / 2.0)
    if eigvals[0] <= 0.0 or eigvals[-1] / eigvals[0] >= GRAM_CONDITION_LIMIT:
        raise SingularGramError(
            "basis is rank-deficient under the reference measure "
            f"(Gram eigenvalue range [{eigvals[0]:.3e}, {eigvals[-1]:.3e}])"
        )
    l_r = sla.cho_solve(sla.cho_factor((g0 + g0.T) / 2.0), g1)
    return ReducedOperator(l_r=l_r, g0=g0, g1=g1, basis=basis, kind=op.kind)


def reduced_eigenfunctions(
    red: ReducedOperator, k: int
) -> tuple[np.ndarray, np.ndarray]:
    """Top-k eigenvalues of L_r and the lifted vertex functions.

    For the self-adjoint kinds the generalized symmetric problem
    G1 xi = lambda G0 xi is solved; other kinds go through the general
    eigensolver and are returned sorted by real part.
    """
    r = red.basis.r
    if not 1 <= k <= r:
        raise KOutOfRangeError(f"k={k} outside [1, {r}]")
    if red.kind in _SELF_ADJOINT_KINDS:
        vals, xi = sla.eigh((red.g1 + red.g1.T) / 2.0, (red.g0 + red.g0.T) / 2.0)
        vals, xi = vals[::-1], xi[:, ::-1]
    else:
        vals, xi = np.linalg.eig(red.l_r)
        order = np.argsort(vals.real)[::-1]
        vals, xi = vals[order], xi[:, order]
        if np.abs(vals.imag).max(initial=0.0) < 1e-10:
            vals, xi = vals.real, xi.real
    funcs = red.basis.phi_v.T @ xi[:, :k]
    return vals[:k], funcs


def read_partition(path) -> list[list[int]]:
    """Partition CSV: 'vertex_index,set_index' per line, '#' comments."""
    groups: dict[int, list[int]] = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if stripped == "vertex_index,set_index":
                continue
            parts = stripped.split(",")
            if len(parts) != 2:
                raise ParseError("expected 'vertex_index,set_index'", lineno)
            try:
                vertex, group = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParseError(f"cannot parse entry '{stripped}'", lineno)
            groups.setdefault(group, []).append(vertex)
    return [groups[key] for key in sorted(groups)]


def write_partition(sets: Sequence[Iterable[int]], path) -> None:
    with open(path, "w") as fh:
        fh.write("vertex_index,set_index\n")
        for group, vertices in enumerate(sets):
            for v in vertices:
                fh.write(f"{int(v)},{group}\n")
