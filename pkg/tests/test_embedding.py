import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from quasicut.embedding import (
    ConvexCombination01,
    Scale,
    ScaleFamily,
    build_scale_family,
    combination_distance,
    combination_expansion_bound,
    distortion,
    embed_01_combination,
    embed_quasiultrametric,
    expected_ultrametric_distance,
    floor_log2,
    quasiultrametric_to_quasipartition,
    sample_choices,
    sample_quasiultrametric,
    ultrametric_expansion_bound,
)
from quasicut.errors import DegenerateSpace, NotAQuasiUltrametric, ScaleMismatch
from quasicut.graph import WeightedDigraph, shortest_path_quasimetric, validate_quasimetric, validate_quasiultrametric
from quasicut.oracle import exact_removal_fractions
from quasicut.quasipartition import Quasipartition, WeightedSupport, is_r_bounded, is_transitive
from quasicut.treewidth import resolve_hierarchy, treewidth_quasipartition_support
from quasicut.trees import tree_quasipartition_support

from conftest import bidirected, partial_2trees, trees


def tree_family(g):
    return build_scale_family(shortest_path_quasimetric(g), g, lambda h, r: tree_quasipartition_support(h, r, 0))


def tw_family(g, td):
    hier = resolve_hierarchy(g, td)
    return build_scale_family(shortest_path_quasimetric(g), g,
                              lambda h, r: treewidth_quasipartition_support(h, r, hier))


def two_point_family(q):
    """One scale on two points whose support cuts both directions with probability q."""
    g = bidirected(2, [(0, 1, 1.0)])
    items = []
    if q > 0:
        items.append((Quasipartition.identity(2), 0.0, q))
    if q < 1:
        items.append((Quasipartition.full(2), q, 1.0))
    sup = WeightedSupport.from_intervals(items, 1.0, 1.0)
    d = shortest_path_quasimetric(g)
    return ScaleFamily([Scale(0, 1.0, sup, d)], 1.0, 1.0, d, g)


def test_floor_log2():
    assert [floor_log2(x) for x in (1, 1.5, 2, 7.99, 8, 0.5)] == [0, 0, 1, 2, 3, -1]


def test_scale_count():
    assert len(tree_family(bidirected(2, [(0, 1, 1.0)])).scales) == 1
    g = WeightedDigraph(3, [(0, 1, 1.0), (1, 2, 7.0), (2, 0, 8.0)])
    fam = build_scale_family(shortest_path_quasimetric(g), g,
                             lambda h, r: treewidth_quasipartition_support(h, r))
    assert fam.delta == 15.0 and [s.i for s in fam.scales] == [0, 1, 2, 3]


def test_rescaling_is_power_of_two():
    g = bidirected(3, [(0, 1, 0.75), (1, 2, 3.0)])
    fam = tree_family(g)
    assert fam.scale_factor == 2.0
    assert np.array_equal(fam.to_original(fam.dist), shortest_path_quasimetric(g))


def test_degenerate_space():
    g = bidirected(2, [(0, 1, 0.0)])
    with pytest.raises(DegenerateSpace):
        tree_family(g)


def test_two_point_ultrametric_choices():
    fam = two_point_family(0.5)
    full = next(k for k, it in enumerate(fam.scales[0].support.items) if it.partition == Quasipartition.full(2))
    assert embed_quasiultrametric(fam, [full])[0, 1] == 1.0
    assert embed_quasiultrametric(fam, [1 - full])[0, 1] == 2.0
    with pytest.raises(ScaleMismatch):
        embed_quasiultrametric(fam, [])


def test_expectation_extremes():
    assert expected_ultrametric_distance(two_point_family(0.0), 0, 1) == 1.0
    assert expected_ultrametric_distance(two_point_family(1.0), 0, 1) == 2.0
    assert expected_ultrametric_distance(two_point_family(0.25), 0, 1) == 1.25


@given(trees(), st.integers(0, 2**32 - 1))
def test_tree_embedding_is_noncontracting_ultrametric(g, seed):
    fam = tree_family(g)
    um = sample_quasiultrametric(fam, seed)
    assert validate_quasiultrametric(um) is None
    fin = np.isfinite(fam.dist)
    assert (um[fin] >= fam.dist[fin]).all()
    assert distortion(fam.dist, um)[0] == 1.0


@given(trees())
def test_expectation_under_termwise_bound(g):
    fam = tree_family(g)
    raw = fam.raw_lipschitz()
    assert max(raw) <= 2 + 1e-12
    for u in range(g.n):
        for v in range(g.n):
            d = fam.dist[u, v]
            if u != v and 0 < d < math.inf:
                e = expected_ultrametric_distance(fam, u, v)
                term, head = ultrametric_expansion_bound(fam, u, v, raw)
                assert e / d <= term + 1e-9 <= head + 2e-9
                _, theory = ultrametric_expansion_bound(fam, u, v, [2.0] * len(fam.scales))
                assert head <= theory + 1e-9


def test_expectation_matches_monte_carlo():
    g = bidirected(5, [(0, 1, 1.0), (1, 2, 2.5), (1, 3, 0.25), (3, 4, 6.0)])
    fam = tree_family(g)
    rng = np.random.default_rng(0)
    trials = 10_000
    picks = sample_choices(fam, rng, size=trials)
    samples = np.array([embed_quasiultrametric(fam, [int(p[t]) for p in picks]) for t in range(trials)])
    mean, se = samples.mean(axis=0), samples.std(axis=0, ddof=1) / math.sqrt(len(samples))
    for u in range(5):
        for v in range(5):
            if u != v:
                e = expected_ultrametric_distance(fam, u, v)
                assert abs(mean[u, v] - e) <= max(3 * se[u, v], 1e-12)


def test_two_point_combination():
    q = 0.25
    phi = embed_01_combination(two_point_family(q))
    assert phi.c == 2.0
    assert combination_distance(phi, 0, 1) == pytest.approx(2 / phi.c * q)


def test_combination_distance_examples():
    full, ident = Quasipartition.full(2), Quasipartition.identity(2)
    assert combination_distance(ConvexCombination01([(full, 1.0)], 1.0), 0, 1) == 0.0
    assert combination_distance(ConvexCombination01([(ident, 1.0)], 1.0), 0, 1) == 1.0
    phi = ConvexCombination01([(full, 0.3), (ident, 0.7)], 1.0)
    assert combination_distance(phi, 0, 1) == pytest.approx(1 - 0.3)


@given(partial_2trees())
def test_combination_bounds(case):
    g, td = case
    d = shortest_path_quasimetric(g)
    if not (np.isfinite(d) & (d > 0)).any():
        return
    fam = tw_family(g, td)
    phi = embed_01_combination(fam)
    assert abs(phi.coefficients().sum() - 1) <= 1e-12
    for j in range(len(phi.items)):
        assert validate_quasimetric(phi.zero_one(j)) is None
    exact = [exact_removal_fractions(s.support) for s in fam.scales]
    forced = fam.forced_lipschitz()
    for u in range(g.n):
        for v in range(g.n):
            dv = fam.dist[u, v]
            if u != v and 0 < dv < math.inf:
                lower = sum(Fraction(2 ** (s.i + 1)) * exact[s.i][u][v] for s in fam.scales)
                assert lower >= Fraction(dv)
                term, head = combination_expansion_bound(fam, u, v, forced)
                assert phi.c * phi.matrix()[u, v] / dv <= term + 1e-9 <= head + 2e-9


@given(partial_2trees())
def test_scales_are_bounded_and_forcing(case):
    g, td = case
    d = shortest_path_quasimetric(g)
    if not (np.isfinite(d) & (d > 0)).any():
        return
    fam = tw_family(g, td)
    for s in fam.scales:
        close = fam.dist <= s.radius / (2 * g.n)
        for it in s.support:
            assert is_r_bounded(it.partition, fam.dist, s.radius)
            assert not (close & ~it.partition.rel).any()


def test_threshold_examples():
    um = np.array([[0.0, 1.0], [3.0, 0.0]])
    assert quasiultrametric_to_quasipartition(um, 2).pairs() == [(0, 1)]
    assert quasiultrametric_to_quasipartition(um, 3) == Quasipartition.full(2)
    with pytest.raises(NotAQuasiUltrametric):
        quasiultrametric_to_quasipartition(np.array([[0, 1, 2], [9, 0, 1], [9, 9, 0.0]]), 1)


@given(trees(), st.integers(0, 1000), st.floats(0.01, 100))
def test_threshold_round_trip(g, seed, r):
    fam = tree_family(g)
    um = sample_quasiultrametric(fam, seed)
    p = quasiultrametric_to_quasipartition(um, r)
    assert is_transitive(p.rel)
    assert is_r_bounded(p, fam.dist, r)


def test_distortion_examples():
    m = np.array([[0.0, 1.0], [2.0, 0.0]])
    assert distortion(m, m) == (1.0, 1.0)
    assert distortion(m, 2 * m) == (1.0, 2.0)
    assert distortion(m, m / 4) == (4.0, 1.0)
