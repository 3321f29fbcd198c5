from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from quasicut.errors import NotATree, ZOutOfRange
from quasicut.generators import random_bidirected_tree
from quasicut.graph import WeightedDigraph
from quasicut.oracle import exact_removal_fractions, exact_vs_empirical_report
from quasicut.quasipartition import Quasipartition, is_r_bounded, is_transitive, lipschitz_constant
from quasicut.trees import _crosses, sample_tree_quasipartition, tree_quasipartition_support

from conftest import bidirected, trees


def test_crosses_threshold_ladder():
    # thresholds 0.25, 1.25, 2.25, ...
    assert _crosses(1.0, 1.5, 0.25, 1.0)
    assert not _crosses(1.5, 2.0, 0.25, 1.0)
    assert not _crosses(1.0, 1.0, 0.0, 1.0)


def test_two_node_tree_cut_only_below_one():
    g = bidirected(2, [(0, 1, 1.0)])
    for z in (0.0, 0.5, 0.99):
        assert sample_tree_quasipartition(g, 4, 0, z) == Quasipartition.identity(2)
    for z in (1.0, 1.5, 2.0):
        assert sample_tree_quasipartition(g, 4, 0, z) == Quasipartition.full(2)


def test_two_node_tree_support():
    g = bidirected(2, [(0, 1, 1.0)])
    sup = tree_quasipartition_support(g, 4, 0)
    got = {it.partition: it.weight for it in sup}
    assert got == {Quasipartition.identity(2): 0.5, Quasipartition.full(2): 0.5}
    assert sup.removal_probability()[0, 1] <= 2 * 1 / 4


def test_path_cut_with_higher_threshold():
    # t=0 -> a=1 -> b=2, unit weights, r=1: threshold z + 1 separates a from b
    g = bidirected(3, [(0, 1, 1.0), (1, 2, 1.0)])
    for z in (0.0, 0.2, 0.49):
        p = sample_tree_quasipartition(g, 1, 0, z)
        assert (1, 2) not in p


@given(trees(), st.floats(0, 1))
def test_huge_radius_with_large_z_is_full(g, frac):
    top = float(g.weights().sum()) + 1
    r = 2 * top + 2
    z = top + frac * (r / 2 - top)
    assert sample_tree_quasipartition(g, r, 0, z) == Quasipartition.full(g.n)


def test_star_with_huge_radius_is_almost_surely_full():
    # the i = 0 threshold still cuts when z < 1, so only mass 1/(r/2) is lost
    g = bidirected(5, [(0, k, 1.0) for k in range(1, 5)])
    sup = tree_quasipartition_support(g, 1000, 0)
    full = {it.partition: it.weight for it in sup}[Quasipartition.full(5)]
    assert full == pytest.approx(1 - 1 / 500, abs=1e-15)
    assert len(sup) == 2


@given(trees(), st.integers(1, 80), st.data())
def test_samples_are_sound_and_match_support(g, r8, data):
    r = r8 / 8
    root = data.draw(st.integers(0, g.n - 1))
    sup = tree_quasipartition_support(g, r, root)
    assert abs(sup.total_weight() - 1) < 1e-12
    z = data.draw(st.floats(0, r / 2, exclude_max=True))
    p = sample_tree_quasipartition(g, r, root, z)
    from quasicut.graph import shortest_path_quasimetric
    d = shortest_path_quasimetric(g)
    assert is_transitive(p.rel) and is_r_bounded(p, d, r)
    assert sup.locate(z).partition == p


@given(trees(max_n=12), st.integers(1, 80), st.data())
def test_exact_lipschitz_at_most_two(g, r8, data):
    r = r8 / 8
    root = data.draw(st.integers(0, g.n - 1))
    sup = tree_quasipartition_support(g, r, root)
    from quasicut.graph import shortest_path_quasimetric
    d = shortest_path_quasimetric(g)
    exact = exact_removal_fractions(sup)
    for u in range(g.n):
        for v in range(g.n):
            if u != v and d[u, v] > 0:
                assert exact[u][v] * Fraction(r) <= 2 * Fraction(d[u, v])
    assert lipschitz_constant(sup, d, r) <= 2 + 1e-12


def test_exact_support_matches_monte_carlo():
    g = random_bidirected_tree(8, np.random.default_rng(3))
    sup = tree_quasipartition_support(g, 3, 0)
    rows = exact_vs_empirical_report(sup, lambda z: sample_tree_quasipartition(g, 3, 0, z),
                                     trials=100_000, seed=5)
    assert all(row.ok for row in rows), [r for r in rows if not r.ok]


def test_input_validation():
    with pytest.raises(NotATree):
        sample_tree_quasipartition(WeightedDigraph(2, [(0, 1, 1.0)]), 1, 0, 0)
    with pytest.raises(ZOutOfRange):
        sample_tree_quasipartition(bidirected(2, [(0, 1, 1.0)]), 1, 0, 0.75)


@given(trees(), st.integers(1, 80))
def test_left_endpoints_belong_to_their_interval(g, r8):
    r = r8 / 8
    sup = tree_quasipartition_support(g, r, 0)
    for it in sup:
        for lo, _ in it.intervals:
            assert sample_tree_quasipartition(g, r, 0, lo) == it.partition
