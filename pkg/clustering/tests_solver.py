"""Tests for the two-phase multiobjective Louvain solver"""

import numpy as np
import pytest

from benchmarks.sbm import gen_sbm
from benchmarks.specs import SbmSpec
from clustering import solver
from clustering.config import Ordering, QualityConfig, SolverConfig, Variant
from clustering.pareto import ListEntry, ParetoList
from clustering.presets import preset
from clustering.quality import modularity_vector
from clustering.state import LouvainState
from networks.graph import MultiplexGraph, Partition
from networks.operations import contract, expand_partition

TWO_TRIANGLES = [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (4, 5)]


def set_partitions(n):
    """All partitions of ``range(n)`` as restricted growth strings."""

    def grow(prefix, top):
        if len(prefix) == n:
            yield list(prefix)
            return
        for label in range(top + 2):
            yield from grow(prefix + [label], max(top, label))

    yield from grow([0], 0)


def classical_louvain(weights):
    """Plain single-layer Louvain on a dense weight matrix, natural node order.

    ``weights[i, i]`` is the self-loop weight. Returns the accepted moves as
    ``(level, node, source, target)`` tuples.
    """
    moves = []
    level = 0
    w = np.array(weights, dtype=np.float64)
    while True:
        n = w.shape[0]
        adjacency = w + np.diag(np.diag(w))
        degree = adjacency.sum(axis=1)
        m = degree.sum() / 2.0
        labels = np.arange(n)
        totals = degree.copy()
        moved = False
        improved = True
        while improved:
            improved = False
            for i in range(n):
                own = labels[i]
                links = {}
                for j in np.flatnonzero(w[i]):
                    if j != i:
                        links[labels[j]] = links.get(labels[j], 0.0) + w[i, j]
                removal = links.get(own, 0.0) / m - (totals[own] - degree[i]) * degree[i] / (2 * m * m)
                best, best_gain = own, 0.0
                for c in sorted(links):
                    if c == own:
                        continue
                    gain = links[c] / m - totals[c] * degree[i] / (2 * m * m) - removal
                    if gain > best_gain:
                        best, best_gain = c, gain
                if best != own:
                    totals[own] -= degree[i]
                    totals[best] += degree[i]
                    labels[i] = best
                    moves.append((level, i, int(own), int(best)))
                    improved = moved = True
        if not moved:
            return moves
        _, compact = np.unique(labels, return_inverse=True)
        membership = np.eye(compact.max() + 1)[compact]
        reduced = membership.T @ adjacency @ membership
        w = reduced.copy()
        np.fill_diagonal(w, np.diag(reduced) / 2.0)
        level += 1


def random_weighted_graph(rng, n, p):
    weights = np.zeros((n, n))
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                weight = rng.uniform(0.5, 1.5)
                weights[i, j] = weights[j, i] = weight
                edges.append((i, j, weight))
    if not edges:
        weights[0, 1] = weights[1, 0] = 1.0
        edges.append((0, 1, 1.0))
    return MultiplexGraph.from_edges([edges], n=n), weights


class TestTwoTriangles:
    graph = MultiplexGraph.from_edges([TWO_TRIANGLES])

    def test_brute_force_optimum(self):
        """Test that exhaustive search over all 203 partitions peaks at 10/28"""
        partitions = list(set_partitions(6))
        assert len(partitions) == 203
        best = max(modularity_vector(self.graph, Partition(p))[0] for p in partitions)
        assert best == pytest.approx(10 / 28, abs=1e-12)

    @pytest.mark.parametrize(
        "cfg",
        [preset("GL"), preset("MVM", h=2, gamma=0.1), preset("MVM", h=2, gamma=0.9)],
        ids=["GL", "MVM2-0.1", "MVM2-0.9"],
    )
    def test_solver_reaches_optimum(self, cfg):
        result = solver.run(self.graph, cfg)

        assert result.q[0] == pytest.approx(10 / 28, abs=1e-12)
        assert result.partition == Partition([0, 0, 0, 1, 1, 1])

    def test_phase_one_fixed_point(self):
        """Test that no move improves on the optimum"""
        cfg = SolverConfig()
        state = LouvainState.from_partition(self.graph, Partition([0, 0, 0, 1, 1, 1]), cfg.quality)
        plist = ParetoList.of(ListEntry.from_state(state), 1)
        incumbent = plist.best()

        plist, changed = solver.phase_one(self.graph, plist, cfg)

        assert not changed
        assert plist.best() is incumbent

    def test_phase_two_contracts_best(self):
        state = LouvainState.from_partition(self.graph, Partition([0, 0, 0, 1, 1, 1]))
        coarse, mapping = solver.phase_two(self.graph, ListEntry.from_state(state))

        assert coarse.n == 2
        assert coarse.self_loops(0).tolist() == [3.0, 3.0]
        assert mapping.tolist() == [0, 0, 0, 1, 1, 1]


def test_single_edge_merges():
    """Test one merge on the single-edge graph"""
    graph = MultiplexGraph.from_edges([[(0, 1)]])
    cfg = SolverConfig()
    plist = ParetoList.of(ListEntry.from_state(LouvainState.singletons(graph)), 1)

    plist, changed = solver.phase_one(graph, plist, cfg)

    assert changed
    assert plist.best().q[0] == pytest.approx(0.0, abs=1e-15)
    assert plist.best().state.num_communities == 1


def test_single_node_graph_is_absorbing():
    graph = contract(MultiplexGraph.from_edges([TWO_TRIANGLES]), Partition.all_in_one(6))
    plist = ParetoList.of(ListEntry.from_state(LouvainState.singletons(graph)), 2)

    _, changed = solver.phase_one(graph, plist, SolverConfig())

    assert not changed


def test_perfect_matching():
    """Test that every matched pair ends up in its own community"""
    graph = MultiplexGraph.from_edges([[(0, 1), (2, 3), (4, 5), (6, 7)]])
    result = solver.run(graph, preset("GL"))

    assert result.partition == Partition([0, 0, 1, 1, 2, 2, 3, 3])
    assert result.q[0] == pytest.approx(0.75)
    best = max(modularity_vector(graph, Partition(p))[0] for p in set_partitions(8))
    assert result.q[0] == pytest.approx(best)


def test_identical_layers_match_single_layer():
    """Test that duplicating a layer does not change the list"""
    rng = np.random.default_rng(23)
    single, _ = random_weighted_graph(rng, 30, 0.2)
    double = MultiplexGraph([single.layers[0], single.layers[0]])
    cfg = SolverConfig(quality=QualityConfig(h=2))

    list_one, _ = solver.phase_one(
        single, ParetoList.of(ListEntry.from_state(LouvainState.singletons(single)), 2), cfg
    )
    list_two, _ = solver.phase_one(
        double, ParetoList.of(ListEntry.from_state(LouvainState.singletons(double)), 2), cfg
    )

    assert len(list_one) == len(list_two)
    for one, two in zip(list_one, list_two):
        assert np.allclose(two.q, one.q[0], atol=1e-12)
        assert one.partition == two.partition


@pytest.mark.parametrize("variant", [Variant.VAR_MINUS, Variant.VAR_PLUS])
def test_identical_layers_have_zero_variance(variant):
    graph = MultiplexGraph.from_edges([TWO_TRIANGLES, TWO_TRIANGLES])
    result = solver.run(graph, SolverConfig(quality=QualityConfig(variant=variant, h=2, gamma=0.5)))

    assert result.q[0] == result.q[1]


def test_single_layer_reduction_to_classical_louvain():
    """Test that h=1 Mean on one layer accepts exactly the moves of plain Louvain"""
    rng = np.random.default_rng(29)
    cfg = preset("GL", ordering=Ordering.NATURAL, record_moves=True)
    for _ in range(20):
        n = int(rng.integers(10, 51))
        graph, weights = random_weighted_graph(rng, n, float(rng.uniform(0.08, 0.3)))

        result = solver.run(graph, cfg)
        moves = [(move.level, move.node, move.source, move.target) for move in result.moves]

        assert moves == classical_louvain(weights)


@pytest.mark.parametrize("label,h,gamma", [("MVM", 3, 0.5), ("MVP", 2, 0.9), ("MA", 3, None)])
def test_list_invariants_on_sbm(label, h, gamma):
    """Test the list assertion suite after every outer iteration"""
    graph, _ = gen_sbm(SbmSpec(sizes=(20, 20, 20), p_in=0.4, p_out=0.1, noisy_layers=1, seed=3))
    cfg = preset(label, h=h, gamma=gamma, check_invariants=True)

    result = solver.run(graph, cfg)

    assert all(record.list_size <= h for record in result.history)
    assert np.allclose(result.q, modularity_vector(graph, result.partition))


def test_random_ordering_is_seeded():
    graph, _ = gen_sbm(SbmSpec(sizes=(15, 15), p_in=0.5, p_out=0.1, seed=1))
    cfg = preset("EVP", gamma=0.9, ordering=Ordering.RANDOM, seed=42)

    first = solver.run(graph, cfg)
    second = solver.run(graph, cfg)

    assert first.partition == second.partition
    assert first.f == second.f


def test_history_is_non_decreasing_for_gl():
    graph, _ = gen_sbm(SbmSpec(sizes=(25, 25, 25), p_in=0.3, p_out=0.05, seed=9))
    result = solver.run(graph, preset("GL"))
    values = [record.f for record in result.history]

    assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))
    assert result.outer_iterations == len(result.history)


@pytest.mark.parametrize("h", [1, 2])
def test_phase_one_reports_every_changed_list(h):
    """Test that ``changed`` matches whether any entry was replaced, on many random graphs"""
    rng = np.random.default_rng(31)
    cfg = SolverConfig(quality=QualityConfig(h=h), ordering=Ordering.NATURAL)
    for _ in range(200):
        graph, _ = random_weighted_graph(rng, int(rng.integers(10, 51)), float(rng.uniform(0.05, 0.3)))
        plist = ParetoList.of(ListEntry.from_state(LouvainState.singletons(graph)), h)
        initial = plist.entries

        plist, changed = solver.phase_one(graph, plist, cfg)
        replaced = len(plist) != len(initial) or any(
            a is not b for a, b in zip(plist.entries, initial)
        )

        assert changed == replaced


def test_run_keeps_the_first_level_gain():
    """Test that run never falls back to singletons after phase one improved on them"""
    rng = np.random.default_rng(37)
    cfg = preset("GL", ordering=Ordering.NATURAL)
    for _ in range(200):
        n = int(rng.integers(10, 51))
        graph, _ = random_weighted_graph(rng, n, float(rng.uniform(0.05, 0.3)))
        plist = ParetoList.of(ListEntry.from_state(LouvainState.singletons(graph)), 1)
        singletons_q = plist.best().q[0]
        plist, _ = solver.phase_one(graph, plist, cfg)

        result = solver.run(graph, cfg)

        assert result.q[0] >= plist.best().q[0] - 1e-12
        if plist.best().q[0] > singletons_q + 1e-12:
            assert result.num_communities < n


def test_run_partition_is_the_expanded_best():
    """Test that the final labels are the last best partition pulled back to the original nodes"""
    graph, _ = gen_sbm(SbmSpec(sizes=(20, 20, 20), p_in=0.4, p_out=0.05, seed=5))
    result = solver.run(graph, preset("GL"))

    coarse = contract(graph, result.partition)

    assert coarse.n == result.num_communities
    assert np.allclose(modularity_vector(coarse, Partition.singletons(coarse.n)), result.q)
    assert result.partition == expand_partition(Partition.singletons(coarse.n), result.partition.labels)
