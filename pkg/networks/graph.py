# networks/graph.py
# Multiplex graph and pillar partition data model

from collections.abc import Sequence
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from mlouvain.exceptions import GraphConstructionError, PartitionError


class MultiplexGraph:
    """k weighted undirected layers over one shared node set.

    Each layer is an ``n x n`` symmetric CSR matrix. A self-loop of weight
    ``w`` is stored as ``2w`` on the diagonal, so row sums are the weighted
    degrees and ``2 * m[s] == degree[s].sum()`` holds on every layer, before
    and after contraction.

    Instances are immutable after construction and may be shared by any
    number of readers.
    """

    def __init__(
        self,
        layers: Sequence[sp.spmatrix],
        node_size: np.ndarray | None = None,
        check_symmetry: bool = True,
    ):
        if not layers:
            raise GraphConstructionError("a multiplex needs at least one layer")

        n = layers[0].shape[0]
        csr_layers = []
        for s, layer in enumerate(layers):
            if layer.shape != (n, n):
                raise GraphConstructionError(
                    f"layer {s} has shape {layer.shape}, expected {(n, n)}"
                )
            csr = sp.csr_matrix(layer, dtype=np.float64)
            csr.sum_duplicates()
            csr.eliminate_zeros()
            csr.sort_indices()
            if csr.nnz and csr.data.min() < 0:
                raise GraphConstructionError(f"negative weight in layer {s}")
            if check_symmetry and (csr - csr.T).count_nonzero():
                raise GraphConstructionError(f"layer {s} is not symmetric")
            csr_layers.append(csr)

        degree = np.vstack(
            [np.asarray(layer.sum(axis=1)).ravel() for layer in csr_layers]
        )
        m = degree.sum(axis=1) / 2.0
        for s, total in enumerate(m):
            if total <= 0:
                raise GraphConstructionError(f"empty layer {s}")

        if node_size is None:
            node_size = np.ones(n, dtype=np.int64)
        node_size = np.asarray(node_size, dtype=np.int64)
        if node_size.shape != (n,) or (n and node_size.min() < 1):
            raise GraphConstructionError("node sizes must be positive, one per node")

        for array in (degree, m, node_size):
            array.setflags(write=False)

        self.layers = tuple(csr_layers)
        self.degree = degree
        self.m = m
        self.node_size = node_size

    @property
    def n(self) -> int:
        return self.layers[0].shape[0]

    @property
    def k(self) -> int:
        return len(self.layers)

    def self_loops(self, s: int) -> np.ndarray:
        """Self-loop weight of every node in layer ``s`` (half the diagonal)."""
        return self.layers[s].diagonal() / 2.0

    @cached_property
    def loop_weights(self) -> np.ndarray:
        """``(k, n)`` matrix of self-loop weights."""
        loops = np.vstack([self.self_loops(s) for s in range(self.k)])
        loops.setflags(write=False)
        return loops

    @cached_property
    def incidence(self) -> list[tuple[np.ndarray, np.ndarray, np.ndarray]]:
        """Per node: (neighbor ids, layer ids, weights) over all layers, self-loops excluded."""
        rows = []
        for i in range(self.n):
            neighbors, layer_ids, weights = [], [], []
            for s, layer in enumerate(self.layers):
                start, end = layer.indptr[i], layer.indptr[i + 1]
                cols = layer.indices[start:end]
                keep = cols != i
                neighbors.append(cols[keep])
                weights.append(layer.data[start:end][keep])
                layer_ids.append(np.full(int(keep.sum()), s, dtype=np.int64))
            rows.append(
                (
                    np.concatenate(neighbors).astype(np.int64),
                    np.concatenate(layer_ids),
                    np.concatenate(weights),
                )
            )
        return rows

    def edges(self, s: int):
        """Yield ``(i, j, weight)`` with ``i <= j`` for layer ``s`` in canonical order."""
        upper = sp.triu(self.layers[s], format="coo")
        order = np.lexsort((upper.col, upper.row))
        for i, j, w in zip(upper.row[order], upper.col[order], upper.data[order]):
            yield int(i), int(j), float(w / 2.0 if i == j else w)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiplexGraph):
            return NotImplemented
        return (
            self.k == other.k
            and self.n == other.n
            and np.array_equal(self.node_size, other.node_size)
            and all((a != b).nnz == 0 for a, b in zip(self.layers, other.layers))
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"MultiplexGraph(n={self.n}, k={self.k}, m={self.m.tolist()})"

    @classmethod
    def from_edges(
        cls,
        edges_per_layer: Sequence[Sequence[tuple]],
        n: int | None = None,
    ) -> "MultiplexGraph":
        """Build a multiplex from per-layer ``(i, j[, weight])`` lists.

        Each undirected edge appears once; ``(i, i, w)`` is a self-loop of
        weight ``w``.
        """
        if n is None:
            ids = [max(e[0], e[1]) for layer in edges_per_layer for e in layer]
            n = max(ids) + 1 if ids else 0
        layers = []
        for edges in edges_per_layer:
            rows, cols, data = [], [], []
            for edge in edges:
                i, j = int(edge[0]), int(edge[1])
                w = float(edge[2]) if len(edge) > 2 else 1.0
                if i == j:
                    rows.append(i)
                    cols.append(i)
                    data.append(2.0 * w)
                else:
                    rows.extend((i, j))
                    cols.extend((j, i))
                    data.extend((w, w))
            layers.append(sp.csr_matrix((data, (rows, cols)), shape=(n, n)))
        return cls(layers)


class Partition:
    """Pillar community assignment: one label per node, shared by all layers.

    Labels are contiguous ids ``0..c-1`` and every id is used.
    """

    __slots__ = ("labels",)

    def __init__(self, labels):
        labels = np.array(labels, dtype=np.int64)
        if labels.ndim != 1:
            raise PartitionError("labels must be one-dimensional")
        if labels.size:
            if labels.min() < 0:
                raise PartitionError("community ids must be non-negative")
            used = np.bincount(labels)
            if not used.all():
                missing = int(np.flatnonzero(used == 0)[0])
                raise PartitionError(f"community ids are not contiguous: {missing} unused")
        labels.setflags(write=False)
        self.labels = labels

    @classmethod
    def from_labels(cls, labels) -> "Partition":
        """Relabel arbitrary integer labels to contiguous ids, keeping sorted order."""
        _, inverse = np.unique(np.asarray(labels, dtype=np.int64), return_inverse=True)
        return cls(inverse.ravel())

    @classmethod
    def singletons(cls, n: int) -> "Partition":
        return cls(np.arange(n, dtype=np.int64))

    @classmethod
    def all_in_one(cls, n: int) -> "Partition":
        return cls(np.zeros(n, dtype=np.int64))

    @property
    def n(self) -> int:
        return self.labels.size

    @property
    def num_communities(self) -> int:
        return int(self.labels.max()) + 1 if self.labels.size else 0

    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.num_communities)

    def members(self, community: int) -> np.ndarray:
        return np.flatnonzero(self.labels == community)

    def __len__(self) -> int:
        return self.labels.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return np.array_equal(self.labels, other.labels)

    __hash__ = None

    def __repr__(self) -> str:
        return f"Partition(n={self.n}, communities={self.num_communities})"
