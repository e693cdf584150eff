"""Tests for the bounded Pareto list"""

import numpy as np
import pytest

from clustering.config import QualityConfig
from clustering.pareto import InsertOutcome, ListEntry, ParetoList, dominates
from mlouvain.exceptions import ConfigurationError, ParetoInvariantError


def entry(q, f=None):
    q = np.asarray(q, dtype=np.float64)
    return ListEntry(q, float(np.mean(q)) if f is None else f)


def test_dominates():
    """Test componentwise dominance with a strict index"""
    assert dominates([1, 2], [1, 1])
    assert not dominates([1, 2], [2, 1])
    assert not dominates([2, 1], [1, 2])
    assert not dominates([1, 1], [1, 1])
    with pytest.raises(ConfigurationError):
        dominates([1, 2], [1, 2, 3])


def test_insert_into_empty_list():
    plist = ParetoList(2)
    assert plist.try_insert(entry([0.1, 0.2])) is InsertOutcome.INSERTED
    assert len(plist) == 1


def test_insert_removes_dominated_entries():
    """Test that a dominating candidate evicts what it dominates"""
    plist = ParetoList.of(entry([0.3, 0.3]), 2)

    assert plist.try_insert(entry([0.4, 0.4])) is InsertOutcome.INSERTED
    assert len(plist) == 1
    assert plist.best().q.tolist() == [0.4, 0.4]


def test_insert_rejects_dominated_and_duplicate_vectors():
    plist = ParetoList.of(entry([0.4, 0.4]), 3)

    assert plist.try_insert(entry([0.3, 0.4])) is InsertOutcome.REJECTED_DOMINATED
    assert plist.try_insert(entry([0.4, 0.4])) is InsertOutcome.REJECTED_DOMINATED
    assert len(plist) == 1


def test_cut_candidate_leaves_list_unchanged():
    """Test that a candidate below the last entry of a full list is rejected"""
    plist = ParetoList(2)
    first, second = entry([0.6, 0.4], f=0.5), entry([0.3, 0.5], f=0.4)
    plist.try_insert(first)
    plist.try_insert(second)
    before = plist.entries

    assert plist.try_insert(entry([0.1, 0.9], f=0.3)) is InsertOutcome.REJECTED_CUT
    assert plist.entries == before
    assert not plist.admits(np.array([0.1, 0.9]), 0.3)


def test_cut_drops_the_lowest_entry():
    plist = ParetoList(2)
    plist.try_insert(entry([0.6, 0.4], f=0.5))
    plist.try_insert(entry([0.3, 0.5], f=0.4))

    assert plist.try_insert(entry([0.1, 0.9], f=0.45)) is InsertOutcome.INSERTED
    assert [e.f for e in plist] == [0.5, 0.45]
    plist.validate()


def test_sorted_by_f_then_insertion_order():
    """Test the tie rule: equal f keeps the earliest insertion first"""
    plist = ParetoList(3)
    plist.try_insert(entry([0.2, 0.6], f=0.4))
    plist.try_insert(entry([0.6, 0.2], f=0.4))
    plist.try_insert(entry([0.5, 0.5], f=0.5))

    assert [e.f for e in plist] == [0.5, 0.4, 0.4]
    assert plist.entries[1].q.tolist() == [0.2, 0.6]
    assert plist.best().q.tolist() == [0.5, 0.5]
    plist.validate()


def test_best_on_singleton_and_empty():
    only = entry([0.1])
    plist = ParetoList.of(only, 1)
    assert plist.best().q.tolist() == [0.1]

    with pytest.raises(ParetoInvariantError):
        ParetoList(1).best()


def test_capacity_must_be_positive():
    with pytest.raises(ConfigurationError):
        ParetoList(0)


def test_random_insertions_keep_invariants():
    """Test mutual non-dominance and capacity under random insertions"""
    rng = np.random.default_rng(19)
    cfg = QualityConfig()
    for h in (1, 2, 3, 5):
        plist = ParetoList(h)
        for _ in range(500):
            q = rng.uniform(0.0, 1.0, size=3).round(2)
            candidate = ListEntry(q, float(np.mean(q)))
            admitted = plist.admits(q, candidate.f)
            outcome = plist.try_insert(candidate)
            assert admitted == (outcome is InsertOutcome.INSERTED)
            assert len(plist) <= h
            plist.validate(cfg)


def test_validate_detects_stale_f():
    plist = ParetoList.of(entry([0.2, 0.4], f=0.9), 2)
    with pytest.raises(ParetoInvariantError, match="stale f"):
        plist.validate(QualityConfig())
