# networks/operations.py
# Community contraction, layer flattening and label expansion

import numpy as np
import scipy.sparse as sp

from mlouvain.exceptions import PartitionError

from .graph import MultiplexGraph, Partition


def indicator_matrix(partition: Partition) -> sp.csr_matrix:
    """Sparse ``n x c`` membership matrix of ``partition``."""
    n = partition.n
    return sp.csr_matrix(
        (np.ones(n), (np.arange(n), partition.labels)),
        shape=(n, partition.num_communities),
    )


def contract(graph: MultiplexGraph, partition: Partition) -> MultiplexGraph:
    """Collapse every community of ``partition`` into one node.

    Inter-community weights are summed. Intra-community edges and member
    self-loops become a self-loop on the supernode, stored so that supernode
    degrees are the sums of member degrees and every ``m[s]`` is unchanged.
    """
    if partition.n != graph.n:
        raise PartitionError(
            f"partition covers {partition.n} nodes, graph has {graph.n}"
        )
    membership = indicator_matrix(partition)
    layers = []
    for layer in graph.layers:
        reduced = (membership.T @ layer @ membership).tocsr()
        layers.append((reduced + reduced.T) / 2.0)
    node_size = np.bincount(
        partition.labels, weights=graph.node_size, minlength=partition.num_communities
    ).astype(np.int64)
    return MultiplexGraph(layers, node_size=node_size, check_symmetry=False)


def flatten(graph: MultiplexGraph) -> MultiplexGraph:
    """Aggregate all layers into one by summing edge weights."""
    total = graph.layers[0].copy()
    for layer in graph.layers[1:]:
        total = total + layer
    return MultiplexGraph([total], node_size=graph.node_size, check_symmetry=False)


def expand_partition(coarse: Partition, mapping) -> Partition:
    """Pull a partition of supernodes back to the nodes mapped onto them.

    Args:
        coarse: Partition of the coarse graph.
        mapping: ``mapping[i]`` is the supernode holding original node ``i``.

    Returns:
        Partition: ``label(i) = coarse.label(mapping[i])``, relabeled to contiguous ids.

    Raises:
        PartitionError: ``mapping`` references a supernode ``coarse`` does not have.

    """
    mapping = np.asarray(mapping, dtype=np.int64)
    if mapping.size and (mapping.min() < 0 or mapping.max() >= coarse.n):
        bad = mapping[(mapping < 0) | (mapping >= coarse.n)][0]
        raise PartitionError(f"mapping references unknown coarse node {int(bad)}")
    return Partition.from_labels(coarse.labels[mapping])
