"""
Test suite for the clustering app: quality functions, move gains and presets
"""

import networkx as nx
import numpy as np
import pytest

from clustering.config import QualityConfig, Variant
from clustering.objectives import quality, variance_increments
from clustering.presets import Method, parse_method, preset
from clustering.quality import (
    apply_move,
    candidate_moves,
    mean_modularity,
    modularity_layer,
    modularity_vector,
    move_gain,
    variance_modularity,
)
from clustering.state import LouvainState
from mlouvain.exceptions import ConfigurationError, PartitionError
from networks.graph import MultiplexGraph, Partition

TWO_TRIANGLES = [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (4, 5)]
VARIANTS = [
    QualityConfig(variant=Variant.MEAN),
    QualityConfig(variant=Variant.VAR_MINUS, gamma=0.3),
    QualityConfig(variant=Variant.VAR_PLUS, gamma=0.7),
]


def random_multiplex(rng, n, k, p=0.3, loops=False):
    """Random weighted multiplex; every layer keeps at least one edge."""
    layers = []
    for _ in range(k):
        edges = [
            (i, j, rng.uniform(0.1, 2.0))
            for i in range(n)
            for j in range(i + 1, n)
            if rng.random() < p
        ]
        if not edges:
            edges = [(0, 1, 1.0)]
        if loops:
            edges += [(i, i, rng.uniform(0.1, 1.0)) for i in range(n) if rng.random() < 0.2]
        layers.append(edges)
    return MultiplexGraph.from_edges(layers, n=n)


def random_partition(rng, n, c):
    return Partition.from_labels(rng.integers(0, c, size=n))


def networkx_modularity(graph, s, partition):
    """Layer modularity through networkx, as an independent oracle."""
    g = nx.Graph()
    g.add_nodes_from(range(graph.n))
    for i, j, w in graph.edges(s):
        g.add_edge(i, j, weight=w)
    communities = [set(partition.members(c).tolist()) for c in range(partition.num_communities)]
    return nx.community.modularity(g, communities, weight="weight")


class TestObjectives:
    def test_mean_and_variance(self):
        assert mean_modularity([0.5, 0.5]) == 0.5
        assert mean_modularity([0.6, 0.4]) == pytest.approx(0.5)
        assert mean_modularity([0.1, 0.2, 0.3]) == pytest.approx(0.2)
        assert variance_modularity([0.5, 0.5]) == 0.0
        assert variance_modularity([0.6, 0.4]) == pytest.approx(0.02)
        assert variance_modularity([0.3]) == 0.0

    def test_quality_variants(self):
        assert quality([0.5, 0.5], QualityConfig(variant=Variant.VAR_MINUS)) == pytest.approx(0.25)
        assert quality([0.6, 0.4], QualityConfig(variant=Variant.VAR_MINUS)) == pytest.approx(0.24)
        assert quality([0.6, 0.4], QualityConfig(variant=Variant.VAR_PLUS)) == pytest.approx(0.26)
        assert quality([0.6, 0.1, 0.2], QualityConfig()) == mean_modularity([0.6, 0.1, 0.2])

    def test_gamma_bounds(self):
        with pytest.raises(ValueError):
            QualityConfig(gamma=0.0)
        with pytest.raises(ValueError):
            QualityConfig(gamma=1.0)

    def test_variance_increment_identity(self):
        """Test that R_Q equals V_{Q+dQ} - V_Q on random pairs"""
        rng = np.random.default_rng(7)
        for _ in range(10_000):
            k = int(rng.integers(2, 6))
            q = rng.uniform(-0.5, 1.0, size=k)
            dq = rng.uniform(-0.1, 0.1, size=k)
            _, _, r_q = variance_increments(q, dq)
            expected = variance_modularity(q + dq) - variance_modularity(q)
            assert abs(expected - r_q) <= 1e-12

    def test_variance_increments_single_layer(self):
        d_mean, v_dq, r_q = variance_increments(np.array([0.3]), np.array([0.1]))
        assert d_mean == pytest.approx(0.1)
        assert (v_dq, r_q) == (0.0, 0.0)


class TestModularity:
    def test_all_in_one_is_zero(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            graph = random_multiplex(rng, int(rng.integers(3, 30)), 3, loops=True)
            q = modularity_vector(graph, Partition.all_in_one(graph.n))
            assert np.all(np.abs(q) <= 1e-12)

    def test_single_edge_singletons(self):
        graph = MultiplexGraph.from_edges([[(0, 1)]])
        assert modularity_layer(graph, 0, Partition.singletons(2)) == pytest.approx(-0.5)

    def test_two_triangles(self):
        graph = MultiplexGraph.from_edges([TWO_TRIANGLES])
        value = modularity_layer(graph, 0, Partition([0, 0, 0, 1, 1, 1]))
        assert value == pytest.approx(10 / 28, abs=1e-15)

    def test_vector_matches_layers(self):
        graph = MultiplexGraph.from_edges([[(0, 1), (1, 2)], [(0, 2)]])
        partition = Partition.singletons(3)
        q = modularity_vector(graph, partition)
        assert q.tolist() == [
            modularity_layer(graph, 0, partition),
            modularity_layer(graph, 1, partition),
        ]
        assert q[0] == pytest.approx(-(1 + 4 + 1) / 16)
        assert q[1] == pytest.approx(-0.5)

    def test_identical_layers(self):
        graph = MultiplexGraph.from_edges([TWO_TRIANGLES, TWO_TRIANGLES])
        q = modularity_vector(graph, Partition([0, 0, 1, 1, 2, 2]))
        assert q[0] == q[1]

    def test_against_networkx(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            graph = random_multiplex(rng, 25, 2, loops=True)
            partition = random_partition(rng, graph.n, 4)
            for s in range(graph.k):
                assert modularity_layer(graph, s, partition) == pytest.approx(
                    networkx_modularity(graph, s, partition), abs=1e-12
                )

    def test_contraction_preserves_modularity(self):
        from networks.operations import contract

        rng = np.random.default_rng(5)
        for _ in range(10):
            graph = random_multiplex(rng, 30, 3, loops=True)
            fine = random_partition(rng, graph.n, 8)
            coarse_graph = contract(graph, fine)
            grouping = random_partition(rng, coarse_graph.n, 3)
            q_coarse = modularity_vector(coarse_graph, grouping)
            q_fine = modularity_vector(graph, Partition.from_labels(grouping.labels[fine.labels]))
            assert np.all(np.abs(q_coarse - q_fine) <= 1e-12)
            assert np.all(
                np.abs(modularity_vector(coarse_graph, Partition.singletons(coarse_graph.n))
                       - modularity_vector(graph, fine)) <= 1e-12
            )

    def test_partition_size_mismatch(self):
        graph = MultiplexGraph.from_edges([[(0, 1)]])
        with pytest.raises(PartitionError):
            modularity_vector(graph, Partition.singletons(3))


class TestMoveGain:
    def test_no_op_move(self):
        graph = MultiplexGraph.from_edges([[(0, 1)], [(0, 1)]])
        state = LouvainState.singletons(graph)
        gain = move_gain(state, graph, 0, 0, QualityConfig())
        assert gain.dq.tolist() == [0.0, 0.0]
        assert gain.d_f == 0.0

    def test_single_edge_merge(self):
        graph = MultiplexGraph.from_edges([[(0, 1)]])
        state = LouvainState.singletons(graph)
        gain = move_gain(state, graph, 0, 1, QualityConfig())
        assert gain.dq[0] == pytest.approx(0.5)
        assert gain.d_f == pytest.approx(0.5)

    def test_unknown_target(self):
        graph = MultiplexGraph.from_edges([[(0, 1), (1, 2)]])
        state = LouvainState.singletons(graph)
        apply_move(state, graph, 0, 1, QualityConfig())
        with pytest.raises(PartitionError):
            move_gain(state, graph, 1, 0, QualityConfig())
        with pytest.raises(PartitionError):
            move_gain(state, graph, 1, 7, QualityConfig())

    @pytest.mark.parametrize("cfg", VARIANTS, ids=lambda cfg: cfg.variant.value)
    def test_gains_match_recomputation(self, cfg):
        """Test incremental dq and dF against from-scratch values over random legal moves"""
        rng = np.random.default_rng(11)
        moves = 0
        while moves < 1000:
            n = int(rng.integers(5, 51))
            k = int(rng.integers(2, 5))
            graph = random_multiplex(rng, n, k, p=0.2, loops=True)
            state = LouvainState.from_partition(graph, random_partition(rng, n, 6), cfg)
            for _ in range(20):
                i = int(rng.integers(n))
                target = int(rng.choice(np.flatnonzero(state.sizes)))
                before_q = state.recompute_q(graph)
                before_f = quality(before_q, cfg)
                gain = move_gain(state, graph, i, target, cfg)
                apply_move(state, graph, i, target, cfg)
                after_q = modularity_vector(graph, state.partition())
                assert np.all(np.abs(gain.dq - (after_q - before_q)) <= 1e-10)
                assert abs(gain.d_f - (quality(after_q, cfg) - before_f)) <= 1e-10
                moves += 1

    def test_cached_sums_stay_exact(self):
        rng = np.random.default_rng(13)
        graph = random_multiplex(rng, 20, 3, loops=True)
        cfg = QualityConfig(variant=Variant.VAR_MINUS)
        state = LouvainState.singletons(graph, cfg)
        for _ in range(100):
            i = int(rng.integers(graph.n))
            target = int(rng.choice(np.flatnonzero(state.sizes)))
            expected = state.q + move_gain(state, graph, i, target, cfg).dq
            apply_move(state, graph, i, target, cfg)
            assert np.array_equal(state.q, expected)
        assert np.all(np.abs(state.q - state.recompute_q(graph)) <= 1e-10)
        assert np.allclose(state.sigma_tot.sum(axis=1), 2 * graph.m)
        assert state.f == pytest.approx(quality(state.q, cfg))

    def test_move_and_move_back(self):
        graph = MultiplexGraph.from_edges([TWO_TRIANGLES, [(0, 5), (1, 4), (2, 3)]])
        cfg = QualityConfig()
        state = LouvainState.from_partition(graph, Partition([0, 0, 0, 1, 1, 1]), cfg)
        original = state.copy()
        apply_move(state, graph, 2, 1, cfg)
        apply_move(state, graph, 2, 0, cfg)
        assert state.partition() == original.partition()
        assert np.allclose(state.q, original.q, atol=1e-12)
        assert np.allclose(state.sigma_in, original.sigma_in)

    def test_candidate_moves_match_move_gain(self):
        rng = np.random.default_rng(17)
        graph = random_multiplex(rng, 15, 2, p=0.4)
        cfg = QualityConfig(variant=Variant.VAR_PLUS, gamma=0.9)
        state = LouvainState.from_partition(graph, random_partition(rng, 15, 4), cfg)
        for i in range(graph.n):
            targets, dq, d_f = candidate_moves(state, graph, i, cfg)
            assert state.labels[i] not in targets
            assert np.all(np.diff(targets) > 0)
            for target, row, gain in zip(targets, dq, d_f):
                single = move_gain(state, graph, i, int(target), cfg)
                assert np.allclose(single.dq, row, rtol=0, atol=1e-12)
                assert single.d_f == pytest.approx(gain, abs=1e-12)


class TestPresets:
    def test_gl(self):
        cfg = preset("GL")
        assert cfg.quality.variant is Variant.MEAN
        assert cfg.quality.h == 1

    def test_mvm(self):
        cfg = preset("MVM", h=2, gamma=0.5)
        assert cfg.quality.variant is Variant.VAR_MINUS
        assert (cfg.quality.h, cfg.quality.gamma) == (2, 0.5)

    def test_invalid_combinations(self):
        with pytest.raises(ConfigurationError):
            preset("EVP", h=2, gamma=0.5)
        with pytest.raises(ConfigurationError):
            preset("MVP", h=1, gamma=0.5)
        with pytest.raises(ConfigurationError):
            preset("EVM")
        with pytest.raises(ConfigurationError):
            preset("MA")
        with pytest.raises(ConfigurationError):
            preset("GL", gamma=0.5)
        with pytest.raises(ConfigurationError):
            preset("EVM", gamma=1.5)
        with pytest.raises(ConfigurationError):
            preset("XYZ")

    def test_options_pass_through(self):
        cfg = preset("EVP", gamma=0.9, ordering="random", seed=5)
        assert cfg.ordering.value == "random"
        assert cfg.seed == 5

    def test_parse_method(self):
        assert parse_method("mvm2") == (Method.MVM, 2)
        assert parse_method("GL") == (Method.GL, None)
        with pytest.raises(ConfigurationError):
            parse_method("EVM2")
        with pytest.raises(ConfigurationError):
            parse_method("MV2")
