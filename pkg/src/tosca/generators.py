"""Directed stochastic block model benchmarks and parameter sweeps."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .clustering import KMeansConfig, cluster_graph
from .errors import ToscaError
from .graph import Graph, add_self_loops, from_edge_list, transition_matrix
from .metrics import adjusted_rand_index
from .operators import uniform_density
from .spectral import fb_spectrum

__all__ = [
    "DSBMParams",
    "dsbm_sample",
    "two_block_sweep",
    "SweepRow",
    "read_prob_matrix",
    "write_sweep_csv",
]


@dataclass(frozen=True)
class DSBMParams:
    """Block count, block size, block edge probabilities, edge weight, seed."""

    r_b: int
    n_b: int
    e: np.ndarray
    weight: float = 1.0
    seed: int = 0

    def __post_init__(self):
        e = np.asarray(self.e, dtype=np.float64)
        object.__setattr__(self, "e", e)
        if e.shape != (self.r_b, self.r_b):
            raise ToscaError(f"probability matrix must be {self.r_b}x{self.r_b}")
        if ((e < 0.0) | (e > 1.0)).any():
            raise ToscaError("block probabilities must lie in [0, 1]")
        if self.weight <= 0.0:
            raise ToscaError("edge weight must be positive")

    @property
    def n(self) -> int:
        return self.r_b * self.n_b

    def block_labels(self) -> np.ndarray:
        return np.repeat(np.arange(self.r_b), self.n_b)


def dsbm_sample(params: DSBMParams) -> Graph:
    """Sample a directed block-model graph, one Bernoulli per entry.

    Entry (u, v) with u in block i and v in block j is present with
    probability e[i, j]; present edges all carry ``params.weight``. The
    generator never adds self-loops beyond what the blocks produce;
    regularization is the caller's explicit step.
    """
    n = params.n
    rng = np.random.default_rng(params.seed)
    thresholds = np.kron(params.e, np.ones((params.n_b, params.n_b)))
    mask = rng.random((n, n)) < thresholds
    src, dst = np.nonzero(mask)
    triples = zip(src.tolist(), dst.tolist(), [params.weight] * len(src))
    return from_edge_list(n, triples, directed=True)


@dataclass(frozen=True)
class SweepRow:
    p: float
    q: float
    seed: int
    kappa2: float
    ari: float


def two_block_sweep(
    n_b: int,
    p_grid: Sequence[float],
    q_grid: Sequence[float],
    seeds: Sequence[int],
    cfg: KMeansConfig | None = None,
) -> list[SweepRow]:
    """Sweep the two-block model [[p, q], [q, p]] over a (p, q) grid.

    For every cell and seed the graph is sampled, regularized with unit
    self-loops, and clustered with k=2; the second singular value and
    the agreement with the planted blocks are recorded.
    """
    if not p_grid or not q_grid or not seeds:
        raise ToscaError("p_grid, q_grid, and seeds must be nonempty")
    rows = []
    truth = np.repeat([0, 1], n_b)
    for p in p_grid:
        for q in q_grid:
            e = np.array([[p, q], [q, p]])
            for seed in seeds:
                params = DSBMParams(r_b=2, n_b=n_b, e=e, seed=seed)
                g = add_self_loops(dsbm_sample(params), 1.0)
                mu = uniform_density(g.n)
                spec = fb_spectrum(transition_matrix(g), mu, 2)
                cell_cfg = cfg or KMeansConfig(seed=seed)
                labels = cluster_graph(g, 2, mu=mu, cfg=cell_cfg).labels
                rows.append(
                    SweepRow(
                        p=float(p),
                        q=float(q),
                        seed=int(seed),
                        kappa2=float(spec.kappa[1]),
                        ari=adjusted_rand_index(truth, labels),
                    )
                )
    return rows


def read_prob_matrix(path) -> np.ndarray:
    """Read a block probability matrix from CSV (one row per line)."""
    e = np.loadtxt(path, delimiter=",", ndmin=2)
    if e.shape[0] != e.shape[1]:
        raise ToscaError(f"probability matrix must be square, got {e.shape}")
    return e


def write_sweep_csv(rows: Sequence[SweepRow], path) -> None:
    with open(path, "w") as fh:
        fh.write("p,q,seed,kappa2,ari\n")
        for row in rows:
            fh.write(
                f"{row.p:.17g},{row.q:.17g},{row.seed},"
                f"{row.kappa2:.17g},{row.ari:.17g}\n"
            )
