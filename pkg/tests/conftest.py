import numpy as np
import pytest

import tosca


def three_cycles_graph(cross_weight: float = 0.01, self_loops: float = 1.0) -> tosca.Graph:
    """Three directed 4-cycles linked by weak edges (12 vertices).

    Cycle c occupies vertices 4c..4c+3; weak edges 3->4, 7->8, 11->0
    close the outer loop. Unit self-loops keep every vertex reachable
    backward.
    """
    triples = []
    for c in range(3):
        base = 4 * c
        for i in range(4):
            triples.append((base + i, base + (i + 1) % 4, 1.0))
    triples += [(3, 4, cross_weight), (7, 8, cross_weight), (11, 0, cross_weight)]
    g = tosca.from_edge_list(12, triples, directed=True)
    if self_loops:
        g = tosca.add_self_loops(g, self_loops)
    return g


def random_directed_graph(
    n: int,
    rng: np.random.Generator,
    density: float = 0.3,
    self_loops: bool = True,
    weighted: bool = True,
) -> tosca.Graph:
    mask = rng.random((n, n)) < density
    weights = rng.uniform(0.5, 1.5, (n, n)) if weighted else np.ones((n, n))
    src, dst = np.nonzero(mask)
    triples = [(int(s), int(d), float(weights[s, d])) for s, d in zip(src, dst)]
    g = tosca.from_edge_list(n, triples, directed=True)
    if self_loops:
        g = tosca.add_self_loops(g, 1.0)
    return g


def random_undirected_graph(
    n: int, rng: np.random.Generator, density: float = 0.3
) -> tosca.Graph:
    """Connected weighted undirected graph (random edges over a path)."""
    triples = [(i, i + 1, float(rng.uniform(0.5, 1.5))) for i in range(n - 1)]
    mask = np.triu(rng.random((n, n)) < density, k=1)
    for i, j in zip(*np.nonzero(mask)):
        triples.append((int(i), int(j), float(rng.uniform(0.5, 1.5))))
    return tosca.from_edge_list(n, triples, directed=False)


def example_block_matrix(p: float = 0.8, q: float = 0.1) -> np.ndarray:
    """Four-block probability matrix with one dense block per row/column."""
    return np.array(
        [
            [q, p, q, q],
            [q, q, q, p],
            [q, q, p, q],
            [p, q, q, q],
        ]
    )


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
