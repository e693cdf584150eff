# clustering/pareto.py
# Bounded list of mutually non-dominated partitions, cut by scalar quality

import itertools
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from mlouvain.exceptions import ConfigurationError, ParetoInvariantError

from .config import QualityConfig
from .objectives import quality


def dominates(z1, z2) -> bool:
    """True when ``z1 >= z2`` componentwise with at least one strict index."""
    z1 = np.asarray(z1, dtype=np.float64)
    z2 = np.asarray(z2, dtype=np.float64)
    if z1.shape != z2.shape:
        raise ConfigurationError(f"cannot compare vectors of shapes {z1.shape} and {z2.shape}")
    return bool(np.all(z1 >= z2) and np.any(z1 > z2))


class InsertOutcome(str, Enum):
    INSERTED = "inserted"
    REJECTED_DOMINATED = "rejected_dominated"
    REJECTED_CUT = "rejected_cut"


@dataclass(frozen=True)
class Move:
    """One relocation of ``node`` at outer iteration ``level``."""

    level: int
    node: int
    source: int
    target: int


@dataclass(frozen=True, eq=False)
class ListEntry:
    """A partition with its modularity vector ``q`` and quality ``f``.

    ``state`` is owned by the entry and never mutated once the entry is in a
    list; derived partitions start from ``state.copy()``. ``seq`` is stamped
    by the list on insertion and breaks ties between equal ``f``.
    """

    q: np.ndarray
    f: float
    state: object = None
    move: Move | None = None
    seq: int = -1

    @classmethod
    def from_state(cls, state, move: Move | None = None) -> "ListEntry":
        return cls(state.q, float(state.f), state, move)

    @property
    def partition(self):
        return self.state.partition()


class ParetoList:
    """Entries sorted by ``f`` descending (ties: insertion order), at most ``capacity`` long."""

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ConfigurationError(f"list capacity must be at least 1, got {capacity}")
        self.capacity = capacity
        self._entries: list[ListEntry] = []
        self._seq = itertools.count()

    @classmethod
    def of(cls, entry: ListEntry, capacity: int) -> "ParetoList":
        plist = cls(capacity)
        plist.try_insert(entry)
        return plist

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self):
        return iter(list(self._entries))

    def __contains__(self, entry) -> bool:
        return any(existing is entry for existing in self._entries)

    @property
    def entries(self) -> tuple:
        return tuple(self._entries)

    def best(self) -> ListEntry:
        if not self._entries:
            raise ParetoInvariantError("best() called on an empty list")
        return self._entries[0]

    def _survivors(self, q):
        """Entries kept if ``q`` went in, or ``None`` when ``q`` is dominated or already present."""
        survivors = []
        for entry in self._entries:
            if dominates(entry.q, q) or np.array_equal(entry.q, q):
                return None
            if not dominates(q, entry.q):
                survivors.append(entry)
        return survivors

    def admits(self, q, f: float) -> bool:
        """Whether :meth:`try_insert` would insert a candidate with ``(q, f)``.

        Lets callers skip building a state for candidates that would be thrown away.
        """
        survivors = self._survivors(q)
        if survivors is None:
            return False
        return len(survivors) < self.capacity or f > survivors[-1].f

    def try_insert(self, candidate: ListEntry) -> InsertOutcome:
        """Insert ``candidate``, dropping the entries it dominates, then cut to capacity.

        A candidate that would itself fall off the end of the list is
        rejected and the list is left as it was.
        """
        survivors = self._survivors(candidate.q)
        if survivors is None:
            return InsertOutcome.REJECTED_DOMINATED
        if len(survivors) >= self.capacity and candidate.f <= survivors[-1].f:
            return InsertOutcome.REJECTED_CUT

        candidate = replace(candidate, seq=next(self._seq))
        position = len(survivors)
        for index, entry in enumerate(survivors):
            if candidate.f > entry.f:
                position = index
                break
        survivors.insert(position, candidate)
        self._entries = survivors[: self.capacity]
        return InsertOutcome.INSERTED

    def validate(self, cfg: QualityConfig | None = None, graph=None, tol: float = 1e-9):
        """Raise :class:`ParetoInvariantError` on any broken list invariant.

        With ``cfg`` every ``f`` is checked against ``quality(q)``; with
        ``graph`` every cached ``q`` is checked against a recomputation.
        """
        entries = self._entries
        if len(entries) > self.capacity:
            raise ParetoInvariantError(f"list holds {len(entries)} entries, capacity {self.capacity}")
        for before, after in zip(entries, entries[1:]):
            if (before.f, -before.seq) < (after.f, -after.seq):
                raise ParetoInvariantError("entries are not sorted by f then insertion order")
        for a, b in itertools.combinations(entries, 2):
            if dominates(a.q, b.q) or dominates(b.q, a.q):
                raise ParetoInvariantError(f"entry {a.seq} and entry {b.seq} are comparable")
            if np.array_equal(a.q, b.q):
                raise ParetoInvariantError(f"entry {a.seq} and entry {b.seq} share a q vector")
        for entry in entries:
            if cfg is not None and abs(quality(entry.q, cfg) - entry.f) > tol:
                raise ParetoInvariantError(f"entry {entry.seq} has stale f")
            if graph is not None and entry.state is not None:
                drift = np.max(np.abs(entry.state.recompute_q(graph) - entry.q))
                if drift > tol:
                    raise ParetoInvariantError(f"entry {entry.seq} q drifted by {drift:.3e}")

    def __repr__(self) -> str:
        return f"ParetoList(capacity={self.capacity}, f={[round(e.f, 6) for e in self._entries]})"
