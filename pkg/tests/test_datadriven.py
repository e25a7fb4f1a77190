import numpy as np
import pytest

import tosca
from tosca.errors import EmptySampleError

from conftest import example_block_matrix, random_undirected_graph


def five_vertex_setup(rng=None):
    triples = [
        (0, 1, 2.0), (0, 2, 1.0), (1, 0, 1.0), (1, 3, 3.0), (2, 4, 1.0),
        (2, 0, 1.0), (3, 2, 2.0), (3, 3, 1.0), (4, 0, 1.0), (4, 4, 2.0),
    ]
    g = tosca.from_edge_list(5, triples)
    s = tosca.transition_matrix(g)
    mu = tosca.uniform_density(5)
    return g, s, mu


class TestSamplePairs:
    def test_permutation_applies_map(self):
        g = tosca.from_edge_list(4, [(i, (i + 1) % 4, 1.0) for i in range(4)])
        s = tosca.transition_matrix(g)
        sample = tosca.sample_pairs(s, tosca.uniform_density(4), 500, seed=9)
        assert np.array_equal(sample.ys, (sample.xs + 1) % 4)

    def test_empty_sample(self):
        _, s, mu = five_vertex_setup()
        sample = tosca.sample_pairs(s, mu, 0, seed=1)
        assert sample.m == 0
        with pytest.raises(EmptySampleError):
            tosca.empirical_grams(sample, tosca.indicator_basis(5, [[0], [1]]))

    def test_law_of_large_numbers(self):
        _, s, mu = five_vertex_setup()
        m = 100_000
        sample = tosca.sample_pairs(s, mu, m, seed=0)
        dense = s.dense()
        bound = 3.0 / np.sqrt(m)
        for i in range(5):
            mask = sample.xs == i
            rows = sample.ys[mask]
            freq = np.bincount(rows, minlength=5) / mask.sum()
            assert np.abs(freq - dense[i]).max() < bound
        # start marginal follows mu
        start = np.bincount(sample.xs, minlength=5) / m
        assert np.abs(start - mu.p).max() < bound

    def test_determinism(self):
        _, s, mu = five_vertex_setup()
        a = tosca.sample_pairs(s, mu, 1000, seed=4)
        b = tosca.sample_pairs(s, mu, 1000, seed=4)
        assert np.array_equal(a.xs, b.xs) and np.array_equal(a.ys, b.ys)
        c = tosca.sample_pairs(s, mu, 1000, seed=5)
        assert not np.array_equal(a.ys, c.ys)


class TestSampleTrajectory:
    def test_single_step(self):
        _, s, mu = five_vertex_setup()
        sample = tosca.sample_trajectory(s, mu, 1, seed=2)
        assert sample.m == 1
        assert sample.mode == "single_trajectory"

    def test_consecutive_pair_structure(self):
        _, s, mu = five_vertex_setup()
        sample = tosca.sample_trajectory(s, mu, 200, seed=3)
        assert np.array_equal(sample.ys[:-1], sample.xs[1:])

    def test_permutation_cycles(self):
        g = tosca.from_edge_list(3, [(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)])
        s = tosca.transition_matrix(g)
        start = tosca.Density(np.array([1.0, 0.0, 0.0]))
        sample = tosca.sample_trajectory(s, start, 9, seed=0)
        assert np.array_equal(sample.xs, np.tile([0, 1, 2], 3))

    def test_marginal_converges_to_stationary(self, rng):
        g = random_undirected_graph(8, rng, density=0.5)
        g = tosca.add_self_loops(g, 1.0)  # aperiodic for sure
        pi = tosca.stationary_density(g)
        s = tosca.transition_matrix(g)
        m = 100_000
        sample = tosca.sample_trajectory(s, tosca.uniform_density(8), m, seed=1)
        marginal = np.bincount(sample.xs, minlength=8) / m
        assert np.abs(marginal - pi.p).max() < 5.0 / np.sqrt(m)


class TestEmpiricalGrams:
    def test_counting_identity_exact(self):
        _, s, mu = five_vertex_setup()
        basis = tosca.indicator_basis(5, [[i] for i in range(5)])
        for seed in range(5):
            sample = tosca.sample_pairs(s, mu, 2000, seed=seed)
            grams = tosca.empirical_grams(sample, basis)
            counts = np.zeros((5, 5))
            np.add.at(counts, (sample.xs, sample.ys), 1.0)
            assert np.array_equal(grams.gxy, counts / sample.m)

    def test_symmetric_psd(self):
        _, s, mu = five_vertex_setup()
        basis = tosca.indicator_basis(5, [[0, 1], [2, 3, 4]])
        grams = tosca.empirical_grams(tosca.sample_pairs(s, mu, 500, seed=7), basis)
        for gram in (grams.gxx, grams.gyy):
            assert np.abs(gram - gram.T).max() < 1e-12
            assert np.linalg.eigvalsh(gram).min() > -1e-12

    def test_converges_to_weighted_gram(self):
        _, s, mu = five_vertex_setup()
        basis = tosca.indicator_basis(5, [[i] for i in range(5)])
        m = 100_000
        grams = tosca.empirical_grams(tosca.sample_pairs(s, mu, m, seed=11), basis)
        g_xy = np.diag(mu.p) @ s.dense()
        assert np.abs(grams.gxy - g_xy).max() < 0.01
        g_xx = np.diag(mu.p)
        assert np.abs(grams.gxx - g_xx).max() < 0.01


def exact_grams(s, mu, basis):
    """Infinite-data limits computed from the matrices themselves."""
    nu = tosca.image_density(s, mu)
    phi = basis.phi_v
    return tosca.EmpiricalGrams(
        gxx=phi @ np.diag(mu.p) @ phi.T,
        gyy=phi @ np.diag(nu.p) @ phi.T,
        gxy=phi @ np.diag(mu.p) @ s.dense() @ phi.T,
        m=0,
    )


class TestEstimatedOperators:
    def test_exact_grams_full_basis_recover_operators(self):
        _, s, mu = five_vertex_setup()
        basis = tosca.indicator_basis(5, [[i] for i in range(5)])
        est = tosca.estimated_operators(exact_grams(s, mu, basis), ridge=0.0)
        f = tosca.forward_backward(s, mu).m
        b = tosca.backward_forward(s, mu).m
        assert np.abs(est.f - f).max() < 1e-10
        assert np.abs(est.b - b).max() < 1e-10
        assert np.abs(est.k - s.dense()).max() < 1e-10

    def test_permutation_exact_grams_unit_eigenvalues(self):
        g = tosca.from_edge_list(4, [(i, (i + 1) % 4, 1.0) for i in range(4)])
        s = tosca.transition_matrix(g)
        mu = tosca.uniform_density(4)
        basis = tosca.indicator_basis(4, [[i] for i in range(4)])
        est = tosca.estimated_operators(exact_grams(s, mu, basis), ridge=0.0)
        vals = np.sort(np.linalg.eigvals(est.f).real)
        assert np.abs(vals - 1.0).max() < 1e-10

    def test_default_ridge_handles_unvisited_set(self):
        _, s, mu = five_vertex_setup()
        # visit vertices 0/1 only: basis set {4} never sampled
        sample = tosca.WalkSample(
            xs=np.array([0, 1, 0]), ys=np.array([1, 0, 1]),
            mode="independent_pairs", seed=0,
        )
        basis = tosca.indicator_basis(5, [[0], [1], [4]])
        grams = tosca.empirical_grams(sample, basis)
        est = tosca.estimated_operators(grams)  # default ridge
        assert np.isfinite(est.f).all()
        assert np.abs(est.k[2]).max() == 0.0

    def test_estimated_eigenvalues_bounded(self):
        params = tosca.DSBMParams(r_b=4, n_b=100, e=example_block_matrix(), seed=2)
        g = tosca.dsbm_sample(params)
        s = tosca.transition_matrix(g)
        mu = tosca.uniform_density(400)
        sets = [range(100 * j, 100 * (j + 1)) for j in range(4)]
        basis = tosca.indicator_basis(400, sets)
        for m in (1000, 10_000):
            sample = tosca.sample_pairs(s, mu, m, seed=3)
            est = tosca.estimated_operators(tosca.empirical_grams(sample, basis))
            vals = np.linalg.eigvals(est.f).real
            assert vals.min() > -0.05 and vals.max() < 1.05

    def test_grams_deterministic_bitwise(self):
        _, s, mu = five_vertex_setup()
        basis = tosca.indicator_basis(5, [[0, 1], [2, 3, 4]])
        a = tosca.empirical_grams(tosca.sample_pairs(s, mu, 5000, seed=6), basis)
        b = tosca.empirical_grams(tosca.sample_pairs(s, mu, 5000, seed=6), basis)
        assert np.array_equal(a.gxy, b.gxy)
        assert np.array_equal(a.gxx, b.gxx)


class TestWalkIO:
    def test_round_trip(self, tmp_path):
        _, s, mu = five_vertex_setup()
        sample = tosca.sample_pairs(s, mu, 100, seed=13)
        path = tmp_path / "walks.csv"
        tosca.write_walks(sample, path)
        back = tosca.read_walks(path)
        assert back.mode == sample.mode
        assert back.seed == sample.seed
        assert np.array_equal(back.xs, sample.xs)
        assert np.array_equal(back.ys, sample.ys)
