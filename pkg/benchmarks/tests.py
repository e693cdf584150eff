"""
Test suite for the benchmarks app: SBM, LFR and Erdos-Renyi generators
"""

import numpy as np
import pytest
from pydantic import ValidationError

from benchmarks.erdos_renyi import gen_er
from benchmarks.lfr import gen_lfr, gen_lfr_multiplex, match_stubs, sample_degrees
from benchmarks.sbm import gen_sbm, planted_labels
from benchmarks.specs import LfrSpec, SbmSpec
from benchmarks.stacking import stack_layers
from clustering.quality import modularity_vector
from mlouvain.exceptions import GeneratorError, GraphConstructionError
from networks.graph import Partition

DEFAULT_LFR = LfrSpec(n=128, community_sizes=(32, 32, 32, 32), avg_degree=16, max_degree=32)


def is_simple(graph):
    """No self-loops, unit weights and symmetric layers."""
    for layer in graph.layers:
        if layer.diagonal().any() or (layer.data != 1.0).any():
            return False
        if (layer != layer.T).nnz:
            return False
    return True


def cross_fraction(graph, truth, s=0):
    coo = graph.layers[s].tocoo()
    return float(np.mean(truth.labels[coo.row] != truth.labels[coo.col]))


class TestSbm:
    def test_deterministic_limits(self):
        """Test that p_in=1, p_out=0 gives disjoint cliques"""
        graph, truth = gen_sbm(SbmSpec(sizes=(5, 5), p_in=1.0, p_out=0.0, seed=1))

        assert graph.k == 2
        for s in range(graph.k):
            assert graph.m[s] == 20.0
            assert cross_fraction(graph, truth, s) == 0.0
        assert truth.labels.tolist() == [0] * 5 + [1] * 5

    def test_expected_degrees(self):
        """Test within and across degrees against binomial expectations"""
        within, across = [], []
        for seed in range(10):
            graph, truth = gen_sbm(SbmSpec(p_in=0.1, p_out=0.1 / 3, seed=seed))
            coo = graph.layers[0].tocoo()
            same = truth.labels[coo.row] == truth.labels[coo.col]
            within.append(same.sum() / graph.n)
            across.append((~same).sum() / graph.n)

        assert np.mean(within) == pytest.approx(0.1 * 124, rel=0.15)
        assert np.mean(across) == pytest.approx(0.1 / 3 * 375, rel=0.15)

    def test_same_seed_same_graph(self):
        spec = SbmSpec(sizes=(30, 30), p_in=0.3, p_out=0.05, noisy_layers=1, seed=7)
        first, _ = gen_sbm(spec)
        second, _ = gen_sbm(spec)
        other, _ = gen_sbm(spec.model_copy(update={"seed": 8}))

        assert first == second
        assert first != other
        assert is_simple(first)

    def test_noise_layers_follow_informative_layers(self):
        graph, _ = gen_sbm(SbmSpec(sizes=(40, 40), p_in=0.5, p_out=0.02, noisy_layers=2, p_noise=0.1, seed=2))
        assert graph.k == 4

    def test_invalid_specs(self):
        with pytest.raises(ValidationError):
            SbmSpec(p_in=0.1, p_out=0.2)
        with pytest.raises(ValidationError):
            SbmSpec(sizes=(0, 5))
        with pytest.raises(ValidationError):
            SbmSpec(informative_layers=0, noisy_layers=0)

    def test_planted_labels(self):
        assert planted_labels((2, 3)).tolist() == [0, 0, 1, 1, 1]

    def test_all_in_one_modularity_is_zero(self):
        graph, _ = gen_sbm(SbmSpec(sizes=(50, 50), p_in=0.2, p_out=0.05, noisy_layers=1, seed=4))
        q = modularity_vector(graph, Partition.all_in_one(graph.n))
        assert np.all(np.abs(q) <= 1e-12)


class TestErdosRenyi:
    def test_complete_graph(self):
        graph = gen_er(6, 1.0, seed=0)
        assert graph.m[0] == 15.0

    def test_mean_degree(self):
        degrees = [gen_er(500, 0.01, seed=seed).degree[0].mean() for seed in range(10)]
        assert np.mean(degrees) == pytest.approx(4.99, rel=0.15)

    def test_same_seed_same_graph(self):
        assert gen_er(60, 0.1, seed=3) == gen_er(60, 0.1, seed=3)

    def test_invalid_probability(self):
        with pytest.raises(GeneratorError):
            gen_er(10, 0.0, seed=0)
        with pytest.raises(GeneratorError):
            gen_er(1, 0.5, seed=0)


class TestLfr:
    def test_degree_sequence(self):
        rng = np.random.default_rng(0)
        degrees = sample_degrees(DEFAULT_LFR, rng)

        assert degrees.min() >= 1
        assert degrees.max() <= 32
        assert degrees.mean() == pytest.approx(16, abs=2.5)

    def test_match_stubs_is_simple(self):
        rng = np.random.default_rng(1)
        stubs = np.repeat(np.arange(10), 4)
        pairs = match_stubs(stubs, rng)
        keys = {tuple(sorted(pair)) for pair in pairs}

        assert len(pairs) == 20
        assert len(keys) == 20
        assert all(u != v for u, v in pairs)

    def test_mu_zero_has_no_cross_edges(self):
        spec = LfrSpec(n=60, community_sizes=(20, 20, 20), avg_degree=8, max_degree=12, mu=0.0, seed=5)
        graph, truth = gen_lfr(spec)

        assert cross_fraction(graph, truth) == 0.0
        assert is_simple(graph)

    def test_noisy_layer_has_one_community(self):
        graph, truth = gen_lfr(DEFAULT_LFR.model_copy(update={"noisy": True, "mu": 0.0, "seed": 3}))

        assert truth.num_communities == 1
        assert is_simple(graph)

    def test_layers_share_membership(self):
        graph, truth = gen_lfr_multiplex(DEFAULT_LFR.model_copy(update={"mu": 0.2, "seed": 4}), 2, 1)

        assert graph.k == 3
        assert truth.sizes().tolist() == [32, 32, 32, 32]
        for s in range(2):
            assert cross_fraction(graph, truth, s) < 0.4

    def test_infeasible_membership(self):
        with pytest.raises(GeneratorError):
            gen_lfr(DEFAULT_LFR, membership=Partition([0] * 64 + [1] * 64))

    def test_invalid_specs(self):
        with pytest.raises(ValidationError):
            LfrSpec(n=128, community_sizes=(32, 32, 32), avg_degree=16, max_degree=32)
        with pytest.raises(ValidationError):
            LfrSpec(n=20, community_sizes=(10, 10), avg_degree=8, max_degree=20)

    def test_mu_zero_with_max_degree_above_community(self):
        """Test that a node cannot need more intra links than its community holds"""
        with pytest.raises(GeneratorError):
            gen_lfr(DEFAULT_LFR.model_copy(update={"mu": 0.0, "avg_degree": 31, "seed": 2}))

    def test_intra_stubs_round_up(self):
        """Test that rounding (1 - mu) * degree up keeps the mixing below mu"""
        for seed in range(3):
            graph, truth = gen_lfr(DEFAULT_LFR.model_copy(update={"mu": 0.3, "seed": seed}))

            # inter stubs are floor(mu * degree), about 0.27 of all stubs at mean degree 16
            assert cross_fraction(graph, truth) < 0.29

    @pytest.mark.slow
    def test_default_configuration_statistics(self):
        """Test mean degree and mixing fraction over 10 samples at mu=0.3"""
        degrees, fractions = [], []
        for seed in range(10):
            graph, truth = gen_lfr(DEFAULT_LFR.model_copy(update={"mu": 0.3, "seed": seed}))
            degrees.append(graph.degree[0].mean())
            fractions.append(cross_fraction(graph, truth))

        assert np.mean(degrees) == pytest.approx(16, abs=1.5)
        assert np.mean(fractions) == pytest.approx(0.3, abs=0.05)


def test_stack_layers():
    """Test stacking generated graphs into one multiplex"""
    sbm, _ = gen_sbm(SbmSpec(sizes=(10, 10), p_in=0.5, p_out=0.1, seed=0))
    noise = gen_er(20, 0.2, seed=1)

    assert stack_layers([noise]).k == 1
    assert stack_layers([sbm, noise, noise]).k == 4
    with pytest.raises(GraphConstructionError):
        stack_layers([sbm, gen_er(21, 0.2, seed=1)])
    with pytest.raises(GraphConstructionError):
        stack_layers([])
