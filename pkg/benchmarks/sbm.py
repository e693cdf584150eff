# benchmarks/sbm.py
# Multilayer stochastic block model with optional noise layers

import logging

import numpy as np

from mlouvain.seeding import derive_rng
from networks.graph import MultiplexGraph, Partition

from .erdos_renyi import bernoulli_layer
from .specs import SbmSpec

logger = logging.getLogger(__name__)


def planted_labels(sizes) -> np.ndarray:
    """Contiguous blocks: the first ``sizes[0]`` nodes form community 0, and so on."""
    return np.repeat(np.arange(len(sizes)), sizes)


def gen_sbm(spec: SbmSpec):
    """Sample a multiplex SBM and its planted partition.

    Layers are drawn independently, informative layers first. Each layer
    uses its own random stream derived from ``spec.seed`` and its index.

    Returns:
        tuple: ``(MultiplexGraph, Partition)``.

    """
    labels = planted_labels(spec.sizes)
    n = labels.size

    def block_probability(rows, cols):
        return np.where(labels[rows] == labels[cols], spec.p_in, spec.p_out)

    layers = []
    for s in range(spec.informative_layers):
        rng = derive_rng(spec.seed, s)
        layers.append(bernoulli_layer(n, block_probability, rng, name=f"SBM layer {s}"))
    for s in range(spec.informative_layers, spec.informative_layers + spec.noisy_layers):
        rng = derive_rng(spec.seed, s)
        layers.append(bernoulli_layer(n, spec.p_noise, rng, name=f"SBM noise layer {s}"))

    graph = MultiplexGraph(layers, check_symmetry=False)
    logger.debug(f"Sampled SBM n={n}, k={graph.k}, m={graph.m.tolist()}")
    return graph, Partition(labels)
