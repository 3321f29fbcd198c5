import numpy as np
import pytest
from hypothesis import given, strategies as st

from quasicut.graph import WeightedDigraph
from quasicut.oracle import bfs_closure
from quasicut.quasipartition import (
    Quasipartition,
    WeightedSupport,
    epsilon_force_weights,
    is_r_bounded,
    is_transitive,
    lipschitz_constant,
    relation_from_pairs,
    transitive_closure,
)


def test_closure_adds_chain_and_loops():
    p = transitive_closure(relation_from_pairs(3, [(0, 1), (1, 2)]))
    assert p.pairs() == [(0, 1), (0, 2), (1, 2)]
    assert p.rel.diagonal().all()


def test_closure_fixpoint():
    rel = relation_from_pairs(3, [(0, 1), (0, 2), (1, 2)])
    assert transitive_closure(rel).pairs() == [(0, 1), (0, 2), (1, 2)]


@given(st.integers(1, 7).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))))))
def test_closure_equals_reachability(data):
    n, pairs = data
    p = transitive_closure(relation_from_pairs(n, pairs))
    assert np.array_equal(p.rel, bfs_closure(n, pairs))
    assert is_transitive(p.rel)


def test_constructor_rejects_bad_relations():
    with pytest.raises(ValueError):
        Quasipartition(np.zeros((2, 2), dtype=bool))
    with pytest.raises(ValueError):
        Quasipartition(relation_from_pairs(3, [(0, 0), (1, 1), (2, 2), (0, 1), (1, 2)]))


def test_hash_and_equality():
    a = transitive_closure(relation_from_pairs(3, [(0, 1)]))
    b = transitive_closure(relation_from_pairs(3, [(0, 1)]))
    assert a == b and hash(a) == hash(b)
    assert a != Quasipartition.identity(3)


def test_r_bounded_examples():
    m = np.array([[0.0, 5.0], [5.0, 0.0]])
    assert is_r_bounded(Quasipartition.identity(2), m, 0.1)
    assert not is_r_bounded(Quasipartition.full(2), m, 4)


def test_lipschitz_of_full_support_is_zero():
    sup = WeightedSupport.from_intervals([(Quasipartition.full(2), 0.0, 1.0)], 1.0, 2.0)
    assert lipschitz_constant(sup, np.array([[0.0, 1.0], [1.0, 0.0]]), 2.0) == 0.0


def test_epsilon_force_threshold():
    g = WeightedDigraph(2, [(0, 1, 0.5), (1, 0, 1.5)])
    assert epsilon_force_weights(g, 4).edges == ((0, 1, 0.0), (1, 0, 1.5))
    h = WeightedDigraph(2, [(0, 1, 2.0)])
    assert epsilon_force_weights(h, 4).edges == h.edges


def test_support_locate():
    full, ident = Quasipartition.full(2), Quasipartition.identity(2)
    sup = WeightedSupport.from_intervals([(ident, 0.0, 1.0), (full, 1.0, 2.0)], 2.0, 4.0)
    assert sup.locate(0.5).partition == ident
    assert sup.locate(1.5).partition == full
    assert sup.total_weight() == 1.0
    with pytest.raises(KeyError):
        sup.locate(3.0)
