# benchmarks/erdos_renyi.py
# Bernoulli pair sampling shared by the ER noise layers and the SBM

import logging

import numpy as np

from mlouvain.exceptions import GeneratorError
from networks.graph import MultiplexGraph

from .stacking import MAX_RESAMPLES, simple_layer

logger = logging.getLogger(__name__)


def bernoulli_layer(n: int, probability, rng: np.random.Generator, name: str = "layer"):
    """Sample every unordered pair ``i < j`` independently.

    ``probability`` is a scalar or a callable mapping the ``(rows, cols)``
    pair arrays to per-pair probabilities. Empty draws are redrawn.
    """
    rows, cols = np.triu_indices(n, k=1)
    probs = probability(rows, cols) if callable(probability) else probability
    for attempt in range(1, MAX_RESAMPLES + 1):
        keep = rng.random(rows.size) < probs
        if keep.any():
            if attempt > 1:
                logger.warning(f"{name}: drew a non-empty layer after {attempt} attempts")
            return simple_layer(n, rows[keep], cols[keep])
    raise GeneratorError(f"{name}: every one of {MAX_RESAMPLES} draws was empty")


def gen_er(n: int, p: float, seed: int | np.random.Generator) -> MultiplexGraph:
    """Single-layer G(n, p) graph.

    Raises:
        GeneratorError: ``p`` is outside ``(0, 1]`` or ``n < 2``.

    """
    if not 0.0 < p <= 1.0:
        raise GeneratorError(f"edge probability must lie in (0, 1], got {p}")
    if n < 2:
        raise GeneratorError(f"need at least two nodes, got {n}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return MultiplexGraph([bernoulli_layer(n, p, rng, name=f"ER(n={n}, p={p})")], check_symmetry=False)
