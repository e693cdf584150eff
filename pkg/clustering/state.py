# clustering/state.py
# Per-layer community running sums behind O(deg) move gains

import numpy as np

from mlouvain.exceptions import PartitionError
from networks.graph import MultiplexGraph, Partition

from .config import QualityConfig
from .objectives import quality


def layer_sums(graph: MultiplexGraph, labels: np.ndarray, slots: int):
    """Return ``(sigma_in, sigma_tot)`` as ``(k, slots)`` arrays.

    ``sigma_tot[s, c]`` sums the degrees of the members of ``c`` in layer
    ``s``; ``sigma_in[s, c]`` is the weight of intra-``c`` edges, each
    undirected edge and each self-loop counted once.
    """
    k = graph.k
    sigma_in = np.zeros((k, slots))
    sigma_tot = np.zeros((k, slots))
    for s, layer in enumerate(graph.layers):
        coo = layer.tocoo()
        inside = labels[coo.row] == labels[coo.col]
        sigma_in[s] = (
            np.bincount(labels[coo.row[inside]], weights=coo.data[inside], minlength=slots)
            / 2.0
        )
        sigma_tot[s] = np.bincount(labels, weights=graph.degree[s], minlength=slots)
    return sigma_in, sigma_tot


def modularity_from_sums(sigma_in: np.ndarray, sigma_tot: np.ndarray, m: np.ndarray) -> np.ndarray:
    """Per-layer modularity ``sum_c sigma_in/m - (sigma_tot/2m)^2``."""
    m = m[:, None]
    return (sigma_in / m - (sigma_tot / (2.0 * m)) ** 2).sum(axis=1)


class LouvainState:
    """Mutable community bookkeeping of one partition of one graph.

    Community ids are slots ``0..n-1``; a slot emptied by a move stays
    allocated until :meth:`partition` compacts the ids. One state has a
    single owner; states over a shared graph are independent.
    """

    __slots__ = ("labels", "sigma_in", "sigma_tot", "sizes", "q", "f")

    def __init__(self, labels, sigma_in, sigma_tot, sizes, q, f=0.0):
        self.labels = labels
        self.sigma_in = sigma_in
        self.sigma_tot = sigma_tot
        self.sizes = sizes
        self.q = q
        self.f = f

    @classmethod
    def from_partition(
        cls, graph: MultiplexGraph, partition: Partition, cfg: QualityConfig | None = None
    ) -> "LouvainState":
        if partition.n != graph.n:
            raise PartitionError(f"partition covers {partition.n} nodes, graph has {graph.n}")
        labels = np.array(partition.labels, dtype=np.int64)
        slots = graph.n
        sigma_in, sigma_tot = layer_sums(graph, labels, slots)
        q = modularity_from_sums(sigma_in, sigma_tot, graph.m)
        sizes = np.bincount(labels, minlength=slots)
        f = quality(q, cfg or QualityConfig())
        return cls(labels, sigma_in, sigma_tot, sizes, q, f)

    @classmethod
    def singletons(cls, graph: MultiplexGraph, cfg: QualityConfig | None = None) -> "LouvainState":
        return cls.from_partition(graph, Partition.singletons(graph.n), cfg)

    def copy(self) -> "LouvainState":
        return LouvainState(
            self.labels.copy(),
            self.sigma_in.copy(),
            self.sigma_tot.copy(),
            self.sizes.copy(),
            self.q.copy(),
            self.f,
        )

    @property
    def num_communities(self) -> int:
        return int(np.count_nonzero(self.sizes))

    def partition(self) -> Partition:
        """Current assignment with community ids compacted to ``0..c-1``."""
        return Partition.from_labels(self.labels)

    def recompute_q(self, graph: MultiplexGraph) -> np.ndarray:
        """Modularity vector recomputed from the adjacency, ignoring the cache."""
        sigma_in, sigma_tot = layer_sums(graph, self.labels, graph.n)
        return modularity_from_sums(sigma_in, sigma_tot, graph.m)

    def __repr__(self) -> str:
        return f"LouvainState(communities={self.num_communities}, q={self.q.tolist()}, f={self.f:.6f})"
