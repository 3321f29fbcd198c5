import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import linprog

from quasicut.cuts import build_sparsest_cut_lp
from quasicut.errors import Infeasible, Unbounded
from quasicut.generators import cut_corpus
from quasicut.lp import EQ, GE, LE, LinearProgram, solve_lp


def highs(lp):
    ub = [(row, b) for row, s, b in zip(lp.A, lp.senses, lp.b) if s == LE]
    ub += [(-row, -b) for row, s, b in zip(lp.A, lp.senses, lp.b) if s == GE]
    eq = [(row, b) for row, s, b in zip(lp.A, lp.senses, lp.b) if s == EQ]
    res = linprog(lp.c,
                  A_ub=np.array([r for r, _ in ub]) if ub else None, b_ub=[b for _, b in ub] or None,
                  A_eq=np.array([r for r, _ in eq]) if eq else None, b_eq=[b for _, b in eq] or None,
                  bounds=(0, None), method="highs")
    return res


def test_textbook_lp():
    # max 3x + 5y st x <= 4, 2y <= 12, 3x + 2y <= 18
    lp = LinearProgram([-3, -5], [[1, 0], [0, 2], [3, 2]], [LE, LE, LE], [4, 12, 18])
    value, x = solve_lp(lp)
    assert value == pytest.approx(-36)
    assert x == pytest.approx([2, 6])


def test_equality_and_ge_rows():
    lp = LinearProgram([1, 1], [[1, 1], [1, -1]], [GE, EQ], [2, 0])
    value, x = solve_lp(lp)
    assert value == pytest.approx(2) and x == pytest.approx([1, 1])


def test_infeasible_and_unbounded():
    with pytest.raises(Infeasible):
        solve_lp(LinearProgram([1], [[1], [1]], [LE, GE], [1, 2]))
    with pytest.raises(Unbounded):
        solve_lp(LinearProgram([-1, 0], [[1, -1]], [LE], [1]))


def test_degenerate_cycling_example():
    # Beale's classic cycling LP; Bland's rule must terminate
    c = [-0.75, 150, -0.02, 6]
    A = [[0.25, -60, -0.04, 9], [0.5, -90, -0.02, 3], [0, 0, 1, 0]]
    value, _ = solve_lp(LinearProgram(c, A, [LE, LE, LE], [0, 0, 1]))
    assert value == pytest.approx(-0.05)


@given(st.integers(0, 2**32 - 1))
def test_random_lps_match_highs(seed):
    rng = np.random.default_rng(seed)
    n, k = int(rng.integers(1, 6)), int(rng.integers(1, 6))
    A = rng.integers(-3, 4, size=(k, n)).astype(float)
    b = rng.integers(0, 6, size=k).astype(float)
    senses = [LE] * k
    c = rng.integers(-3, 4, size=n).astype(float)
    # bounded box keeps the problem bounded
    A = np.vstack([A, np.eye(n)])
    b = np.concatenate([b, np.full(n, 5.0)])
    lp = LinearProgram(c, A, senses + [LE] * n, b)
    ref = highs(lp)
    value, x = solve_lp(lp)
    assert value == pytest.approx(ref.fun, abs=1e-8)
    assert lp.violation(x) <= 1e-9


def test_sparsest_cut_lps_match_highs():
    for inst, _ in cut_corpus(15, 77):
        lp = build_sparsest_cut_lp(inst)
        value, x = solve_lp(lp)
        ref = highs(lp)
        assert ref.status == 0
        assert value == pytest.approx(ref.fun, rel=1e-9, abs=1e-12)
        assert lp.violation(x) <= 1e-9
