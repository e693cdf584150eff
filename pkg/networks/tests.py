"""
Test suite for the networks app: multiplex graphs, file formats, kNN layers
and contraction
"""

import numpy as np
import pytest

from mlouvain.exceptions import (
    FeatureMatrixError,
    GraphConstructionError,
    GraphFormatError,
    PartitionError,
)
from networks.graph import MultiplexGraph, Partition
from networks.io import load_features, load_multiplex, load_partition, save_multiplex, save_partition
from networks.knn import build_knn_layer
from networks.operations import contract, expand_partition, flatten

TWO_TRIANGLES = [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (4, 5)]


def write_lines(path, lines):
    path.write_text("\n".join(lines) + "\n", encoding="ascii")
    return path


def edge_set(graph, s):
    return {(i, j): w for i, j, w in graph.edges(s)}


def test_load_multiplex_two_layers(tmp_path):
    """Test degrees and edge counts of a small two-layer edge list"""
    path = write_lines(tmp_path / "g.edges", ["0 0 1", "0 1 2", "1 0 2"])
    graph = load_multiplex(path)

    assert graph.n == 3
    assert graph.k == 2
    assert graph.m.tolist() == [2.0, 1.0]
    assert graph.degree[0].tolist() == [1.0, 2.0, 1.0]
    assert graph.degree[1].tolist() == [1.0, 0.0, 1.0]


def test_load_multiplex_single_edge(tmp_path):
    """Test the smallest valid input"""
    graph = load_multiplex(write_lines(tmp_path / "g.edges", ["0 0 1"]))

    assert (graph.n, graph.k) == (2, 1)
    assert graph.m.tolist() == [1.0]
    assert graph.degree[0].tolist() == [1.0, 1.0]


def test_load_multiplex_empty_layer(tmp_path):
    """Test that a layer whose edges all weigh zero is rejected"""
    path = write_lines(tmp_path / "g.edges", ["0 0 1", "1 0 1 0"])
    with pytest.raises(GraphConstructionError, match="empty layer 1"):
        load_multiplex(path)


def test_load_multiplex_reports_line_numbers(tmp_path):
    """Test that parse errors carry the file and line"""
    path = write_lines(tmp_path / "g.edges", ["# comment", "0 0 1", "0 1 x"])
    with pytest.raises(GraphFormatError) as excinfo:
        load_multiplex(path)

    assert excinfo.value.line_no == 3
    assert str(path) in str(excinfo.value)


def test_load_multiplex_rejects_bad_node_directive(tmp_path):
    """Test that an unparsable node count is a format error on its line"""
    path = write_lines(tmp_path / "g.edges", ["0 0 1", "# nodes=abc", "0 1 2"])
    with pytest.raises(GraphFormatError, match="bad node count directive") as excinfo:
        load_multiplex(path)

    assert excinfo.value.line_no == 2


def test_load_multiplex_rejects_duplicates_and_negative_weights(tmp_path):
    """Test duplicate edges (in either direction) and negative weights"""
    with pytest.raises(GraphFormatError, match="duplicate edge"):
        load_multiplex(write_lines(tmp_path / "dup.edges", ["0 0 1", "0 1 0"]))
    with pytest.raises(GraphConstructionError, match="negative weight"):
        load_multiplex(write_lines(tmp_path / "neg.edges", ["0 0 1 -1"]))


def test_save_and_load_keep_isolated_nodes(tmp_path):
    """Test that the node directive preserves trailing isolated nodes and weights"""
    graph = MultiplexGraph.from_edges([[(0, 1, 0.1), (1, 1, 2.5)], [(0, 2, 1 / 3)]], n=5)
    loaded = load_multiplex(save_multiplex(graph, tmp_path / "g.edges"))

    assert loaded.n == 5
    assert loaded == graph
    assert loaded.self_loops(0)[1] == 2.5


def test_self_loop_storage():
    """Test that a self-loop of weight w adds 2w to the degree and w to m"""
    graph = MultiplexGraph.from_edges([[(0, 1, 1.0), (0, 0, 3.0)]])

    assert graph.degree[0].tolist() == [7.0, 1.0]
    assert graph.m.tolist() == [4.0]
    assert graph.self_loops(0).tolist() == [3.0, 0.0]
    assert 2 * graph.m[0] == graph.degree[0].sum()


def test_graph_rejects_asymmetric_layers():
    """Test the symmetry check on raw matrices"""
    import scipy.sparse as sp

    layer = sp.csr_matrix(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(GraphConstructionError, match="not symmetric"):
        MultiplexGraph([layer])


def test_partition_labels_must_be_contiguous():
    """Test the partition invariants and relabeling"""
    with pytest.raises(PartitionError):
        Partition([0, 2, 2])

    partition = Partition.from_labels([7, 3, 7, 9])
    assert partition.labels.tolist() == [1, 0, 1, 2]
    assert partition.num_communities == 3
    assert partition.sizes().tolist() == [1, 2, 1]


def test_load_partition_checks_node_count(tmp_path):
    """Test label files against the graph size"""
    path = save_partition(Partition([0, 0, 1]), tmp_path / "truth.txt")

    assert load_partition(path).labels.tolist() == [0, 0, 1]
    with pytest.raises(GraphFormatError, match="3 labels"):
        load_partition(path, num_nodes=4)


def test_knn_identical_rows_tie_to_lowest_id():
    """Test tie-breaking on perfectly correlated rows"""
    features = np.array([[1.0, 2.0, 3.0], [2.0, 4.0, 6.0], [3.0, 6.0, 9.0]])

    star = build_knn_layer(features, knn=1)
    triangle = build_knn_layer(features, knn=2)

    assert set(edge_set(star, 0)) == {(0, 1), (0, 2)}
    assert set(edge_set(triangle, 0)) == {(0, 1), (0, 2), (1, 2)}


def test_knn_one_hot_rows():
    """Test that equal negative correlations also break ties by id"""
    graph = build_knn_layer(np.eye(4), knn=1)

    assert set(edge_set(graph, 0)) == {(0, 1), (0, 2), (0, 3)}
    assert all(w == 1.0 for w in edge_set(graph, 0).values())


def test_knn_range_and_constant_rows():
    """Test the kNN preconditions"""
    with pytest.raises(FeatureMatrixError, match="knn"):
        build_knn_layer(np.eye(3), knn=3)
    with pytest.raises(FeatureMatrixError, match="zero variance"):
        build_knn_layer(np.array([[1.0, 1.0], [1.0, 2.0], [0.0, 3.0]]), knn=1)


def test_load_features(tmp_path):
    """Test feature CSV parsing"""
    path = write_lines(tmp_path / "features.csv", ["1,2", "3,4.5"])
    assert load_features(path).tolist() == [[1.0, 2.0], [3.0, 4.5]]

    bad = write_lines(tmp_path / "bad.csv", ["1,2", "3,"])
    with pytest.raises(GraphFormatError):
        load_features(bad)


def test_contract_two_triangles():
    """Test contraction of the two triangles into two supernodes"""
    graph = MultiplexGraph.from_edges([TWO_TRIANGLES])
    coarse = contract(graph, Partition([0, 0, 0, 1, 1, 1]))

    assert coarse.n == 2
    assert coarse.self_loops(0).tolist() == [3.0, 3.0]
    assert edge_set(coarse, 0)[(0, 1)] == 1.0
    assert coarse.degree[0].tolist() == [7.0, 7.0]
    assert coarse.m.tolist() == [7.0]
    assert coarse.node_size.tolist() == [3, 3]


def test_contract_singletons_and_all_in_one():
    """Test the two trivial contractions"""
    graph = MultiplexGraph.from_edges([TWO_TRIANGLES, [(0, 5, 2.0), (1, 4)]])

    assert contract(graph, Partition.singletons(6)) == graph

    single = contract(graph, Partition.all_in_one(6))
    assert single.n == 1
    assert single.self_loops(0).tolist() == [7.0]
    assert single.degree[:, 0].tolist() == [14.0, 6.0]
    assert single.node_size.tolist() == [6]


def test_flatten_sums_weights():
    """Test layer aggregation"""
    doubled = flatten(MultiplexGraph.from_edges([[(0, 1)], [(0, 1)]]))
    assert doubled.k == 1
    assert edge_set(doubled, 0) == {(0, 1): 2.0}

    disjoint = flatten(MultiplexGraph.from_edges([[(0, 1, 0.5)], [(1, 2, 2.0)]]))
    assert edge_set(disjoint, 0) == {(0, 1): 0.5, (1, 2): 2.0}

    single = MultiplexGraph.from_edges([TWO_TRIANGLES])
    assert flatten(single) == single


def test_expand_partition():
    """Test pulling supernode labels back to the original nodes"""
    mapping = [0, 0, 0, 1, 1, 1]

    assert expand_partition(Partition([0, 1]), mapping).labels.tolist() == mapping
    assert expand_partition(Partition([0]), [0] * 6).labels.tolist() == [0] * 6
    assert expand_partition(Partition([0, 1, 2]), [0, 1, 2]) == Partition([0, 1, 2])
    with pytest.raises(PartitionError):
        expand_partition(Partition([0, 1]), [0, 2])
