# benchmarks/lfr.py
# LFR-style layers: power-law degrees, planted communities, stub matching

import logging
import math
from collections import Counter, deque

import numpy as np
import scipy.sparse as sp

from mlouvain.exceptions import GeneratorError
from mlouvain.seeding import derive_rng, derive_seed
from networks.graph import MultiplexGraph, Partition

from .sbm import planted_labels
from .specs import LfrSpec
from .stacking import stack_layers

logger = logging.getLogger(__name__)

MAX_RESTARTS = 10
# rewiring attempts per matched edge before a restart
REWIRE_FACTOR = 100


class _MatchingFailed(Exception):
    pass


def _power_law_mean(x_min: float, x_max: float, exponent: float) -> float:
    """Mean of the density ``x^-exponent`` truncated to ``[x_min, x_max]``."""
    if x_min >= x_max:
        return x_min
    if math.isclose(exponent, 2.0):
        return math.log(x_max / x_min) / (1.0 / x_min - 1.0 / x_max)
    a, b = 1.0 - exponent, 2.0 - exponent
    return (a / b) * (x_max**b - x_min**b) / (x_max**a - x_min**a)


def _lower_cutoff(avg_degree: float, max_degree: float, exponent: float) -> float:
    """Lower cutoff that gives the truncated law mean ``avg_degree`` (bisection)."""
    low, high = 1.0, float(max_degree)
    if _power_law_mean(low, high, exponent) >= avg_degree:
        return low
    for _ in range(200):
        mid = (low + high) / 2.0
        if _power_law_mean(mid, high, exponent) < avg_degree:
            low = mid
        else:
            high = mid
    return (low + high) / 2.0


def sample_degrees(spec: LfrSpec, rng: np.random.Generator) -> np.ndarray:
    """Integer degrees from the truncated power law, clipped to ``[1, max_degree]``."""
    x_min = _lower_cutoff(spec.avg_degree, spec.max_degree, spec.degree_exponent)
    a = 1.0 - spec.degree_exponent
    u = rng.random(spec.n)
    if x_min >= spec.max_degree:
        raw = np.full(spec.n, float(spec.max_degree))
    else:
        raw = (x_min**a + u * (spec.max_degree**a - x_min**a)) ** (1.0 / a)
    return np.clip(np.rint(raw), 1, spec.max_degree).astype(np.int64)


def _fix_parity(stubs, degrees, members, capacity, max_degree, rng):
    """Make ``stubs[members].sum()`` even with a +-1 change on one random member."""
    if stubs[members].sum() % 2 == 0:
        return
    for node in rng.permutation(members):
        if degrees[node] < max_degree and stubs[node] < capacity:
            stubs[node] += 1
            degrees[node] += 1
            return
    for node in rng.permutation(members):
        if stubs[node] >= 1 and degrees[node] > 1:
            stubs[node] -= 1
            degrees[node] -= 1
            return
    raise GeneratorError("cannot even out the stub count")


def _key(u: int, v: int):
    return (u, v) if u < v else (v, u)


def match_stubs(stubs: np.ndarray, rng: np.random.Generator, community=None):
    """Pair up ``stubs`` at random, then rewire away loops and multi-edges.

    With ``community`` given, pairs inside one community are invalid too
    (used for the inter-community stubs). Broken pairs are repaired by
    swapping endpoints with a random other pair.

    Raises:
        _MatchingFailed: the rewiring budget ran out.

    """
    pairs = [tuple(pair) for pair in rng.permutation(stubs).reshape(-1, 2).tolist()]
    counts = Counter(_key(u, v) for u, v in pairs)

    def invalid(u, v):
        return u == v or (community is not None and community[u] == community[v])

    def broken(index):
        u, v = pairs[index]
        return invalid(u, v) or counts[_key(u, v)] > 1

    pending = deque(index for index in range(len(pairs)) if broken(index))
    budget = REWIRE_FACTOR * max(len(pairs), 1)
    attempts = 0
    while pending:
        index = pending.popleft()
        if not broken(index):
            continue
        if attempts >= budget or len(pairs) < 2:
            raise _MatchingFailed
        attempts += 1
        other = int(rng.integers(len(pairs)))
        if other == index:
            pending.append(index)
            continue
        (a, b), (c, d) = pairs[index], pairs[other]
        proposal = [(a, c), (b, d)] if rng.random() < 0.5 else [(a, d), (b, c)]
        counts[_key(a, b)] -= 1
        counts[_key(c, d)] -= 1
        first, second = (_key(*pair) for pair in proposal)
        if (
            first != second
            and not any(invalid(u, v) for u, v in proposal)
            and counts[first] == 0
            and counts[second] == 0
        ):
            pairs[index], pairs[other] = proposal
            counts[first] += 1
            counts[second] += 1
        else:
            counts[_key(a, b)] += 1
            counts[_key(c, d)] += 1
            pending.append(index)
    return pairs


def _sample_layer(spec: LfrSpec, rng: np.random.Generator, membership=None):
    n = spec.n
    mu = 0.0 if spec.noisy else spec.mu
    if spec.noisy:
        membership = np.zeros(n, dtype=np.int64)
    elif membership is None:
        membership = rng.permutation(planted_labels(spec.community_sizes))
    sizes = np.bincount(membership)
    degrees = sample_degrees(spec, rng)

    intra = np.ceil((1.0 - mu) * degrees).astype(np.int64)
    capacity = sizes[membership] - 1
    if np.any(intra > capacity):
        node = int(np.flatnonzero(intra > capacity)[0])
        raise GeneratorError(
            f"node {node} needs {intra[node]} intra-community links, its community allows {capacity[node]}"
        )
    inter = degrees - intra

    for c in range(len(sizes)):
        members = np.flatnonzero(membership == c)
        _fix_parity(intra, degrees, members, capacity[members[0]], spec.max_degree, rng)
    _fix_parity(inter, degrees, np.arange(n), n - 1, spec.max_degree, rng)

    pairs = []
    for c in range(len(sizes)):
        members = np.flatnonzero(membership == c)
        stubs = np.repeat(members, intra[members])
        if stubs.size:
            pairs.extend(match_stubs(stubs, rng))
    stubs = np.repeat(np.arange(n), inter)
    if stubs.size:
        pairs.extend(match_stubs(stubs, rng, community=membership))

    if not pairs:
        raise _MatchingFailed
    rows, cols = np.array(pairs, dtype=np.int64).T
    layer = sp.csr_matrix(
        (np.ones(2 * rows.size), (np.concatenate([rows, cols]), np.concatenate([cols, rows]))),
        shape=(n, n),
    )
    return layer, membership


def gen_lfr(spec: LfrSpec, membership: Partition | None = None):
    """Sample one LFR layer and its planted partition.

    Passing ``membership`` plants the communities of an earlier layer again,
    so independently sampled layers share one ground truth. Noisy layers
    ignore it.

    A failed matching restarts the layer with a fresh sub-seed, at most
    ``MAX_RESTARTS`` times.

    Returns:
        tuple: ``(MultiplexGraph, Partition)`` with a single layer.

    Raises:
        GeneratorError: the layer is infeasible or every restart failed.

    """
    planted = None
    if membership is not None and not spec.noisy:
        if sorted(membership.sizes().tolist()) != sorted(spec.community_sizes):
            raise GeneratorError("membership does not match the community sizes")
        planted = np.asarray(membership.labels)
    for restart in range(MAX_RESTARTS):
        rng = derive_rng(spec.seed, restart)
        try:
            layer, labels = _sample_layer(spec, rng, planted)
        except _MatchingFailed:
            logger.warning(f"LFR seed={spec.seed}: stub matching failed, restart {restart + 1}")
            continue
        return MultiplexGraph([layer], check_symmetry=False), Partition(labels)
    raise GeneratorError(f"LFR seed={spec.seed}: stub matching failed after {MAX_RESTARTS} restarts")


def gen_lfr_multiplex(spec: LfrSpec, informative_layers: int = 2, noisy_layers: int = 0):
    """Stack ``informative_layers`` LFR layers sharing one planted partition
    with ``noisy_layers`` single-community layers at ``mu = 0``.

    Layer ``j`` is sampled from ``derive_seed(spec.seed, j)``.

    Returns:
        tuple: ``(MultiplexGraph, Partition)``.

    """
    if informative_layers < 1:
        raise GeneratorError("an LFR multiplex needs at least one informative layer")
    layers, truth = [], None
    for j in range(informative_layers):
        layer, planted = gen_lfr(
            spec.model_copy(update={"noisy": False, "seed": derive_seed(spec.seed, j)}),
            membership=truth,
        )
        if truth is None:
            truth = planted
        layers.append(layer)
    for j in range(informative_layers, informative_layers + noisy_layers):
        noisy = spec.model_copy(update={"noisy": True, "mu": 0.0, "seed": derive_seed(spec.seed, j)})
        layers.append(gen_lfr(noisy)[0])
    return stack_layers(layers), truth
