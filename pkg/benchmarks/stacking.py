# benchmarks/stacking.py
# Assembling sampled layers into one multiplex

from collections.abc import Sequence

import numpy as np
import scipy.sparse as sp

from mlouvain.exceptions import GraphConstructionError
from networks.graph import MultiplexGraph

# attempts at drawing a non-empty layer before giving up
MAX_RESAMPLES = 100


def simple_layer(n: int, rows: np.ndarray, cols: np.ndarray) -> sp.csr_matrix:
    """Symmetric unit-weight adjacency from ``i < j`` pairs."""
    data = np.ones(2 * rows.size)
    return sp.csr_matrix(
        (data, (np.concatenate([rows, cols]), np.concatenate([cols, rows]))), shape=(n, n)
    )


def stack_layers(layers: Sequence[MultiplexGraph]) -> MultiplexGraph:
    """Multiplex whose layers are those of ``layers``, in order.

    Raises:
        GraphConstructionError: the graphs disagree on the node count.

    """
    if not layers:
        raise GraphConstructionError("nothing to stack")
    n = layers[0].n
    for index, graph in enumerate(layers):
        if graph.n != n:
            raise GraphConstructionError(f"graph {index} has {graph.n} nodes, expected {n}")
    return MultiplexGraph(
        [layer for graph in layers for layer in graph.layers], check_symmetry=False
    )
