"""Random-walk sampling and operator estimation from walk data.

Pairs (x, y) of walker positions before and after one step give
empirical matrices

    Gxx = Phi_x Phi_x^T / m,  Gyy = Phi_y Phi_y^T / m,
    Gxy = Phi_x Phi_y^T / m,

whose infinite-data limits are the Galerkin matrices of the transfer
operators. Estimated operators follow as compositions

    K_r = Gxx^-1 Gxy,  T_r = Gyy^-1 Gyx,  F_r = K_r T_r,  B_r = T_r K_r.

Sampling uses inverse-CDF lookups on precomputed cumulative row sums
with numpy's PCG64 generator, so all draws are reproducible from the
seed alone.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Literal, NamedTuple

import numpy as np

from .errors import EmptySampleError, ParseError, SingularGramError
from .galerkin import Basis
from .graph import TransitionMatrix
from .operators import Density

__all__ = [
    "WalkSample",
    "EmpiricalGrams",
    "EstimatedOperators",
    "sample_pairs",
    "sample_trajectory",
    "empirical_grams",
    "estimated_operators",
    "write_walks",
    "read_walks",
]

SampleMode = Literal["independent_pairs", "single_trajectory"]


@dataclass(frozen=True)
class WalkSample:
    """m walker transitions: ys[i] is one step of the walk from xs[i]."""

    xs: np.ndarray
    ys: np.ndarray
    mode: SampleMode
    seed: int

    @property
    def m(self) -> int:
        return len(self.xs)


@dataclass(frozen=True)
class EmpiricalGrams:
    gxx: np.ndarray
    gyy: np.ndarray
    gxy: np.ndarray
    m: int


class EstimatedOperators(NamedTuple):
    k: np.ndarray
    t: np.ndarray
    f: np.ndarray
    b: np.ndarray


def _cumulative_rows(s: TransitionMatrix) -> np.ndarray:
    return np.cumsum(s.dense(), axis=1)


def _draw_categorical(cum: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Inverse-CDF draw from one cumulative distribution row."""
    return np.searchsorted(cum, u, side="right").clip(max=len(cum) - 1)


def _step_all(cum_rows: np.ndarray, xs: np.ndarray, u: np.ndarray) -> np.ndarray:
    """One walk step for every walker, grouped by current vertex.

    Equivalent to drawing ys[i] from row xs[i] with uniform u[i]; the
    grouping only batches the searchsorted calls.
    """
    ys = np.empty_like(xs)
    order = np.argsort(xs, kind="stable")
    sorted_xs = xs[order]
    boundaries = np.flatnonzero(np.diff(sorted_xs)) + 1
    for chunk in np.split(order, boundaries):
        v = xs[chunk[0]]
        ys[chunk] = _draw_categorical(cum_rows[v], u[chunk])
    return ys


def sample_pairs(
    s: TransitionMatrix, mu: Density, m: int, seed: int = 0
) -> WalkSample:
    """m independent walkers: start from mu, take one step of S."""
    rng = np.random.default_rng(seed)
    cum_mu = np.cumsum(mu.p)
    xs = _draw_categorical(cum_mu, rng.random(m)).astype(np.int64)
    ys = (
        _step_all(_cumulative_rows(s), xs, rng.random(m))
        if m
        else np.empty(0, dtype=np.int64)
    )
    return WalkSample(xs=xs, ys=ys, mode="independent_pairs", seed=seed)


def sample_trajectory(
    s: TransitionMatrix, start_density: Density, m: int, seed: int = 0
) -> WalkSample:
    """One walk of m steps; consecutive positions form the (x, y) pairs."""
    rng = np.random.default_rng(seed)
    if m == 0:
        empty = np.empty(0, dtype=np.int64)
        return WalkSample(xs=empty, ys=empty, mode="single_trajectory", seed=seed)
    cum_rows = _cumulative_rows(s)
    path = np.empty(m + 1, dtype=np.int64)
    path[0] = _draw_categorical(np.cumsum(start_density.p), rng.random(1))[0]
    u = rng.random(m)
    for i in range(m):
        path[i + 1] = _draw_categorical(cum_rows[path[i]], u[i : i + 1])[0]
    return WalkSample(
        xs=path[:-1], ys=path[1:], mode="single_trajectory", seed=seed
    )


def empirical_grams(sample: WalkSample, basis: Basis) -> EmpiricalGrams:
    """Empirical covariance matrices of the basis evaluated on the walk."""
    if sample.m == 0:
        raise EmptySampleError("cannot estimate from an empty sample")
    phi_x = basis.phi_v[:, sample.xs]
    phi_y = basis.phi_v[:, sample.ys]
    m = sample.m
    return EmpiricalGrams(
        gxx=phi_x @ phi_x.T / m,
        gyy=phi_y @ phi_y.T / m,
        gxy=phi_x @ phi_y.T / m,
        m=m,
    )


def estimated_operators(
    grams: EmpiricalGrams, ridge: float | None = None
) -> EstimatedOperators:
    """Reduced transfer operators from empirical covariance matrices.

    ``ridge`` is added to the diagonals before inversion; the default
    1e-10 * trace(Gxx)/r keeps Grams with never-visited basis sets
    invertible without distorting well-conditioned ones.
    """
    r = grams.gxx.shape[0]
    if ridge is None:
        ridge = 1e-10 * np.trace(grams.gxx) / r
    if ridge < 0.0:
        raise ValueError(f"ridge must be nonnegative, got {ridge}")
    eye = ridge * np.eye(r)
    try:
        k = np.linalg.solve(grams.gxx + eye, grams.gxy)
        t = np.linalg.solve(grams.gyy + eye, grams.gxy.T)
    except np.linalg.LinAlgError as exc:
        raise SingularGramError(f"Gram matrix not invertible: {exc}") from exc
    return EstimatedOperators(k=k, t=t, f=k @ t, b=t @ k)


def write_walks(sample: WalkSample, path: str | Path) -> None:
    """Walk-pair CSV: header records mode and seed, then one x,y per line."""
    with open(path, "w", newline="") as fh:
        fh.write(f"# mode={sample.mode} seed={sample.seed}\n")
        fh.write("x,y\n")
        writer = csv.writer(fh)
        for x, y in zip(sample.xs, sample.ys):
            writer.writerow([int(x), int(y)])


def read_walks(path: str | Path) -> WalkSample:
    mode: SampleMode = "independent_pairs"
    seed = 0
    xs: list[int] = []
    ys: list[int] = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped:
                continue
            if stripped.startswith("#"):
                for token in stripped[1:].split():
                    if token.startswith("mode="):
                        mode = token[5:]  # type: ignore[assignment]
                    elif token.startswith("seed="):
                        seed = int(token[5:])
                continue
            if stripped == "x,y":
                continue
            parts = stripped.split(",")
            if len(parts) != 2:
                raise ParseError("expected 'x,y'", lineno)
            try:
                xs.append(int(parts[0]))
                ys.append(int(parts[1]))
            except ValueError:
                raise ParseError(f"cannot parse entry '{stripped}'", lineno)
    return WalkSample(
        xs=np.asarray(xs, dtype=np.int64),
        ys=np.asarray(ys, dtype=np.int64),
        mode=mode,
        seed=seed,
    )
