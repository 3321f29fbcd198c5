import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quasicut.cuts import (
    CutInstance,
    build_sparsest_cut_lp,
    harmonic,
    lp_distances_to_quasimetric,
    solve_multicut,
    solve_sparsest_cut,
    sparsity_of,
)
from quasicut.errors import InputError
from quasicut.generators import random_cut_instance
from quasicut.graph import WeightedDigraph, validate_quasimetric
from quasicut.lp import solve_lp
from quasicut.oracle import bfs_closure, brute_force_multicut, brute_force_sparsest_cut


def test_single_edge_sparsest_cut():
    inst = CutInstance(WeightedDigraph(2, [(0, 1, 1.0)]), [(0, 1, 1.0)])
    res = solve_sparsest_cut(inst)
    assert res.sparsity == 1.0 and res.edges == (0,)
    assert res.report["certified"]


def test_prefers_cheaper_edge_on_path():
    g = WeightedDigraph(3, [(0, 1, 3.0), (1, 2, 1.0)])
    res = solve_sparsest_cut(CutInstance(g, [(0, 2, 2.0)]))
    assert res.edges == (1,) and res.sparsity == 0.5


def test_already_disconnected_pair_is_free():
    g = WeightedDigraph(3, [(0, 1, 1.0)])
    res = solve_sparsest_cut(CutInstance(g, [(1, 0, 1.0), (0, 1, 1.0)]))
    assert res.sparsity == 0.0 and res.edges == () and res.report["trivial"]


def test_instance_validation():
    g = WeightedDigraph(2, [(0, 1, 1.0)])
    for pairs in ([(0, 0, 1.0)], [(0, 5, 1.0)], [(0, 1, -1.0)], [(0, 1, 0.0)]):
        with pytest.raises(InputError):
            CutInstance(g, pairs)


def test_sparsity_of_counts_only_separated_demand():
    g = WeightedDigraph(3, [(0, 1, 1.0), (1, 2, 2.0)])
    inst = CutInstance(g, [(0, 2, 1.0), (0, 1, 3.0)])
    res = sparsity_of(inst, (1,))
    assert res.separated == (0,) and res.demand == 1.0 and res.sparsity == 2.0
    assert math.isinf(sparsity_of(inst, ()).sparsity)


def test_lp_quasimetric_is_valid():
    rng = np.random.default_rng(4)
    made = 0
    while made < 10:
        case = random_cut_instance(rng)
        if case is None:
            continue
        inst, _ = case
        value, x = solve_lp(build_sparsest_cut_lp(inst))
        m = lp_distances_to_quasimetric(inst, x)
        assert validate_quasimetric(m, tol=1e-12) is None
        made += 1


@settings(max_examples=25)
@given(st.integers(0, 2**32 - 1))
def test_pipeline_sandwich(seed):
    case = random_cut_instance(np.random.default_rng(seed))
    if case is None:
        return
    inst, td = case
    res = solve_sparsest_cut(inst, td)
    opt = brute_force_sparsest_cut(inst).sparsity
    lp = res.report["lp_value"]
    assert lp <= opt * (1 + 1e-9) + 1e-12
    assert res.sparsity >= opt * (1 - 1e-12) - 1e-12
    assert res.sparsity <= res.report["distortion"] * lp * (1 + 1e-9) + 1e-12


def test_decomposition_and_auto_agree_on_lp():
    case = random_cut_instance(np.random.default_rng(8))
    inst, td = case
    a, b = solve_sparsest_cut(inst, td), solve_sparsest_cut(inst)
    assert a.report["lp_value"] == b.report["lp_value"]


def test_harmonic():
    assert harmonic(1) == 1.0 and harmonic(3) == pytest.approx(11 / 6)


@settings(max_examples=25)
@given(st.integers(0, 2**32 - 1))
def test_multicut_separates_and_is_bounded(seed):
    case = random_cut_instance(np.random.default_rng(seed))
    if case is None:
        return
    inst, td = case
    res = solve_multicut(inst, td)
    g = inst.graph
    keep = [(u, v) for i, (u, v, _) in enumerate(g.edges) if i not in set(res.edges)]
    reach = bfs_closure(g.n, keep)
    assert not any(reach[s, t] for s, t, _ in inst.pairs)
    assert res.capacity == pytest.approx(sum(g.edges[i][2] for i in res.edges))
    assert res.capacity <= res.report["round_capacity_sum"] + 1e-12
    assert res.capacity >= brute_force_multicut(inst).capacity - 1e-12


def test_multicut_two_chains():
    g = WeightedDigraph(4, [(0, 1, 1.0), (1, 2, 5.0), (2, 3, 1.0)])
    res = solve_multicut(CutInstance(g, [(0, 1, 1.0), (2, 3, 1.0)]))
    assert sorted(res.edge_pairs(g)) == [(0, 1), (2, 3)]
    assert len(res.report["rounds"]) >= 1
