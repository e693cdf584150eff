# clustering/quality.py
# Layer modularity and incremental move gains for the multiplex Louvain solver

from dataclasses import dataclass

import numpy as np

from mlouvain.exceptions import PartitionError
from networks.graph import MultiplexGraph, Partition

from .config import QualityConfig
from .objectives import (mean_modularity, quality, quality_gain,
                         variance_increments, variance_modularity)
from .state import LouvainState, layer_sums, modularity_from_sums

__all__ = [
    "MoveGain",
    "apply_move",
    "candidate_moves",
    "mean_modularity",
    "modularity_layer",
    "modularity_vector",
    "move_gain",
    "quality",
    "variance_modularity",
]


def modularity_layer(graph: MultiplexGraph, s: int, partition: Partition) -> float:
    """Modularity of ``partition`` on layer ``s`` with that layer's own ``m_s``."""
    if partition.n != graph.n:
        raise PartitionError(f"partition covers {partition.n} nodes, graph has {graph.n}")
    return float(modularity_vector(graph, partition)[s])


def modularity_vector(graph: MultiplexGraph, partition: Partition) -> np.ndarray:
    """Vector ``(Q_1, ..., Q_k)`` of layer modularities."""
    if partition.n != graph.n:
        raise PartitionError(f"partition covers {partition.n} nodes, graph has {graph.n}")
    sigma_in, sigma_tot = layer_sums(graph, partition.labels, partition.num_communities)
    return modularity_from_sums(sigma_in, sigma_tot, graph.m)


@dataclass(frozen=True)
class MoveGain:
    """Effect of moving one node to another community.

    ``dq`` holds the per-layer modularity gains; ``d_mean`` is their mean,
    ``v_dq`` their sample variance, ``r_q`` the variance increment of the
    modularity vector and ``d_f`` the gain of the configured quality.
    """

    dq: np.ndarray
    d_mean: float
    v_dq: float
    r_q: float
    d_f: float

    @classmethod
    def zero(cls, k: int) -> "MoveGain":
        return cls(np.zeros(k), 0.0, 0.0, 0.0, 0.0)


def _community_weights(graph: MultiplexGraph, state: LouvainState, i: int):
    """Weights from ``i`` to each neighboring community, per layer.

    Returns the sorted community ids and a ``(c, k)`` weight matrix.
    """
    neighbors, layer_ids, weights = graph.incidence[i]
    k = graph.k
    if neighbors.size == 0:
        return np.empty(0, dtype=np.int64), np.empty((0, k))
    communities, inverse = np.unique(state.labels[neighbors], return_inverse=True)
    flat = np.bincount(
        inverse.ravel() * k + layer_ids, weights=weights, minlength=communities.size * k
    )
    return communities, flat.reshape(communities.size, k)


def _gains(graph, state, i, targets, k_target, k_own, cfg):
    """Per-layer gains of moving ``i`` into each of ``targets`` (remove then insert)."""
    m = graph.m
    d = graph.degree[:, i]
    source = state.labels[i]
    tot_source = state.sigma_tot[:, source]
    tot_target = state.sigma_tot[:, targets].T
    dq = (k_target - k_own) / m + d * (tot_source - d - tot_target) / (2.0 * m * m)
    d_mean, v_dq, r_q = variance_increments(state.q, dq)
    return dq, d_mean, v_dq, r_q, quality_gain(d_mean, r_q, cfg)


def candidate_moves(state: LouvainState, graph: MultiplexGraph, i: int, cfg: QualityConfig):
    """Gains of moving ``i`` into every neighboring community but its own.

    Candidates are the communities of ``i``'s neighbors in the union of all
    layers, deduplicated and in ascending id order.

    Returns:
        tuple: ``(targets, dq, d_f)`` with ``dq`` of shape ``(c, k)``.

    """
    communities, weights = _community_weights(graph, state, i)
    source = state.labels[i]
    own = communities == source
    k_own = weights[own].sum(axis=0) if own.any() else np.zeros(graph.k)
    targets, k_target = communities[~own], weights[~own]
    if targets.size == 0:
        return targets, np.empty((0, graph.k)), np.empty(0)
    dq, _, _, _, d_f = _gains(graph, state, i, targets, k_target, k_own, cfg)
    return targets, dq, d_f


def _check_target(state: LouvainState, target: int):
    if not 0 <= target < state.sizes.size or state.sizes[target] == 0:
        raise PartitionError(f"unknown community id {target}")


def move_gain(
    state: LouvainState, graph: MultiplexGraph, i: int, target: int, cfg: QualityConfig
) -> MoveGain:
    """Gain of moving node ``i`` into community ``target``.

    Raises:
        PartitionError: ``target`` is not an existing community.

    """
    _check_target(state, target)
    if target == state.labels[i]:
        return MoveGain.zero(graph.k)
    communities, weights = _community_weights(graph, state, i)
    source = state.labels[i]
    k_own = weights[communities == source].sum(axis=0)
    k_target = weights[communities == target].sum(axis=0, keepdims=True)
    dq, d_mean, v_dq, r_q, d_f = _gains(
        graph, state, i, np.array([target]), k_target, k_own, cfg
    )
    return MoveGain(dq[0], float(d_mean[0]), float(v_dq[0]), float(r_q[0]), float(d_f[0]))


def relocate(
    state: LouvainState, graph: MultiplexGraph, i: int, target: int, dq: np.ndarray, cfg: QualityConfig
) -> LouvainState:
    """Move ``i`` into ``target`` in place, adding the precomputed gain ``dq`` to Q."""
    neighbors, layer_ids, weights = graph.incidence[i]
    source = state.labels[i]
    k = graph.k
    member_of = state.labels[neighbors]
    in_source = member_of == source
    in_target = member_of == target
    k_own = np.bincount(layer_ids[in_source], weights=weights[in_source], minlength=k)
    k_target = np.bincount(layer_ids[in_target], weights=weights[in_target], minlength=k)
    d = graph.degree[:, i]
    loops = graph.loop_weights[:, i]

    state.sigma_tot[:, source] -= d
    state.sigma_tot[:, target] += d
    state.sigma_in[:, source] -= k_own + loops
    state.sigma_in[:, target] += k_target + loops
    state.sizes[source] -= 1
    state.sizes[target] += 1
    state.labels[i] = target
    state.q = state.q + dq
    state.f = quality(state.q, cfg)
    return state


def apply_move(
    state: LouvainState, graph: MultiplexGraph, i: int, target: int, cfg: QualityConfig
) -> LouvainState:
    """Move node ``i`` into ``target`` and update all cached sums, Q and F in place.

    An emptied source community keeps its slot; ids are compacted when the
    partition is read back with :meth:`LouvainState.partition`.
    """
    gain = move_gain(state, graph, i, target, cfg)
    if target == state.labels[i]:
        return state
    return relocate(state, graph, i, target, gain.dq, cfg)
