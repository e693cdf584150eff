# clustering/solver.py
# Two-phase multiobjective Louvain over a bounded Pareto list

import logging
from dataclasses import dataclass, field

import numpy as np

from mlouvain.instrumentation import log_call
from mlouvain.seeding import derive_rng
from networks.graph import MultiplexGraph, Partition
from networks.operations import contract, expand_partition

from .config import Ordering, SolverConfig
from .objectives import quality
from .pareto import InsertOutcome, ListEntry, Move, ParetoList
from .quality import candidate_moves, modularity_vector, relocate
from .state import LouvainState

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IterationRecord:
    f: float
    list_size: int
    communities: int


@dataclass(frozen=True)
class SolverResult:
    """Final partition of the original nodes with its recomputed ``q`` and ``f``."""

    partition: Partition
    q: np.ndarray
    f: float
    outer_iterations: int
    history: tuple = ()
    moves: tuple = field(default=(), repr=False)

    @property
    def num_communities(self) -> int:
        return self.partition.num_communities


def node_order(graph: MultiplexGraph, ordering: Ordering, rng: np.random.Generator | None = None):
    """Visiting order of the nodes of ``graph`` for one outer iteration."""
    if ordering is Ordering.COMMUNITY_SIZE:
        # stable sort keeps ids ascending among equal sizes
        return np.argsort(-graph.node_size, kind="stable")
    if ordering is Ordering.RANDOM:
        if rng is None:
            rng = np.random.default_rng(0)
        return rng.permutation(graph.n)
    return np.arange(graph.n)


def _expand(graph, plist, entry, i, cfg, level) -> bool:
    """Offer every positive-gain move of ``i`` out of ``entry``; True if any was inserted."""
    qcfg = cfg.quality
    targets, dq, d_f = candidate_moves(entry.state, graph, i, qcfg)
    inserted = False
    source = int(entry.state.labels[i])
    for index in np.flatnonzero(d_f > 0):
        q_new = entry.q + dq[index]
        if not plist.admits(q_new, quality(q_new, qcfg)):
            continue
        target = int(targets[index])
        state = relocate(entry.state.copy(), graph, i, target, dq[index], qcfg)
        move = Move(level, int(i), source, target)
        if plist.try_insert(ListEntry.from_state(state, move)) is InsertOutcome.INSERTED:
            inserted = True
    return inserted


def phase_one(
    graph: MultiplexGraph,
    plist: ParetoList,
    cfg: SolverConfig,
    order=None,
    level: int = 0,
    moves: list | None = None,
):
    """Local-move phase: sweep the nodes until no sweep changes the list.

    Every entry present when node ``i`` comes up is expanded by moving ``i``
    into each neighboring community with a positive quality gain, measured
    against that entry. Entries removed earlier in the same node step are
    skipped. When ``moves`` is given, the move behind each change of the
    best entry is appended to it.

    Returns:
        tuple: ``(plist, changed)``; ``changed`` tells whether the entries differ from the input.

    """
    if order is None:
        order = np.arange(graph.n)
    initial = [entry.seq for entry in plist]
    sweeps = 0
    while True:
        sweeps += 1
        inserted = False
        for i in order:
            incumbent = plist.best()
            for entry in plist:
                if entry not in plist:
                    continue
                inserted |= _expand(graph, plist, entry, i, cfg, level)
            best = plist.best()
            if moves is not None and best is not incumbent:
                moves.append(best.move)
        if not inserted:
            break
        if sweeps >= cfg.max_inner_sweeps:
            logger.warning(f"Level {level}: stopped after {sweeps} sweeps without converging")
            break
    # seq stamps are never reused within a list
    changed = [entry.seq for entry in plist] != initial
    logger.debug(f"Level {level}: {sweeps} sweep(s), |L|={len(plist)}, best f={plist.best().f:.6f}")
    return plist, changed


def phase_two(graph: MultiplexGraph, best: ListEntry):
    """Contract the communities of ``best`` into supernodes.

    Returns:
        tuple: ``(coarse_graph, mapping)`` with ``mapping[i]`` the supernode of node ``i``.

    """
    partition = best.partition
    return contract(graph, partition), np.array(partition.labels, dtype=np.int64)


def _initial_list(graph: MultiplexGraph, cfg: SolverConfig) -> ParetoList:
    state = LouvainState.singletons(graph, cfg.quality)
    return ParetoList.of(ListEntry.from_state(state), cfg.quality.h)


@log_call
def run(graph: MultiplexGraph, cfg: SolverConfig | None = None) -> SolverResult:
    """Run multiobjective Louvain on ``graph`` from the singleton partition."""
    cfg = cfg or SolverConfig()
    rng = derive_rng(cfg.seed)
    current = graph
    partition = Partition.singletons(graph.n)
    history = []
    moves = [] if cfg.record_moves else None
    outer = 0

    while outer < cfg.max_outer_iters:
        plist = _initial_list(current, cfg)
        order = node_order(current, cfg.ordering, rng)
        plist, changed = phase_one(current, plist, cfg, order, level=outer, moves=moves)
        outer += 1
        if cfg.check_invariants:
            plist.validate(cfg.quality, current)
        best = plist.best()
        history.append(IterationRecord(best.f, len(plist), best.state.num_communities))
        if not changed:
            break
        current, _ = phase_two(current, best)
        # supernode ids are the community ids of best, so each level keeps them
        partition = expand_partition(best.partition, partition.labels)
    else:
        logger.warning(f"Stopped after max_outer_iters={cfg.max_outer_iters} outer iterations")

    q = modularity_vector(graph, partition)
    f = quality(q, cfg.quality)
    logger.debug(
        f"Finished after {outer} outer iteration(s): {partition.num_communities} communities, f={f:.6f}"
    )
    return SolverResult(partition, q, f, outer, tuple(history), tuple(moves or ()))
