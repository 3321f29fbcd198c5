import sys
import numpy as np
import pytest
from hypothesis import settings, strategies as st

from quasicut.generators import random_bidirected_tree, random_partial_2tree
from quasicut.graph import WeightedDigraph

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@st.composite
def digraphs(draw, max_n=7, allow_zero=True):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    lo = 0 if allow_zero else 1
    weights = draw(st.lists(st.integers(lo, 40), min_size=len(chosen), max_size=len(chosen)))
    return WeightedDigraph(n, [(u, v, w / 4) for (u, v), w in zip(chosen, weights)])


@st.composite
def trees(draw, max_n=10):
    seed = draw(st.integers(0, 2**32 - 1))
    n = draw(st.integers(2, max_n))
    return random_bidirected_tree(n, np.random.default_rng(seed))


@st.composite
def partial_2trees(draw, max_n=8):
    seed = draw(st.integers(0, 2**32 - 1))
    n = draw(st.integers(2, max_n))
    return random_partial_2tree(n, np.random.default_rng(seed), zero_prob=0.1)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def bidirected(n, edges):
    """Bidirected graph with the same weight both ways."""
    out = []
    for u, v, w in edges:
        out += [(u, v, w), (v, u, w)]
    return WeightedDigraph(n, out)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(results):
        terminalreporter.write_line(results[k].line())
