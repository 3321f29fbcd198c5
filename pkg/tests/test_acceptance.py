"""Acceptance battery: one test per criterion, each printing a PASS/FAIL line.

Run directly (``python3 tests/test_acceptance.py``) for the bare table, or
through pytest, where the table appears in the terminal summary.
"""

import sys

import pytest

from quasicut import verify
from quasicut.generators import cut_corpus

RESULTS = {}


@pytest.fixture(scope="module")
def corpora():
    trees = verify.tree_corpus(100, 2024)
    tws = verify.treewidth_corpus(100, 4048)
    assert all(c.graph.n <= 12 for c in trees)
    assert all(c.graph.n <= 8 and c.decomposition.width <= 2 for c in tws)
    return trees, tws


@pytest.fixture(scope="module")
def families(corpora):
    return verify._families(*corpora, limit=40)


@pytest.fixture(scope="module")
def cuts():
    corpus = cut_corpus(50, 8096)
    assert all(inst.graph.n <= 8 and inst.graph.m <= 14 and len(inst.pairs) <= 4 for inst, _ in corpus)
    return corpus


def record(res):
    RESULTS[res.criterion] = res
    print(res.line())
    assert res.passed, res.detail


def test_criterion_01_structural(corpora):
    res = verify.check_structural(*corpora)
    assert res.seconds < 120
    record(res)


def test_criterion_02_tree_lipschitz(corpora):
    record(verify.check_tree_lipschitz(corpora[0]))


def test_criterion_03_treewidth_lipschitz(corpora):
    record(verify.check_treewidth_lipschitz(corpora[1]))


def test_criterion_04_forcing(corpora):
    record(verify.check_forcing(*corpora))


def test_criterion_05_quasiultrametric(families):
    record(verify.check_ultrametric(families, trials=100_000))


def test_criterion_06_combination(families):
    record(verify.check_combination(families))


def test_criterion_07_roundtrip(families):
    record(verify.check_roundtrip(families))


def test_criterion_08_sparsest_cut(cuts):
    res = verify.check_sparsest_cut(cuts)
    assert res.seconds < 600
    record(res)


def test_criterion_09_multicut(cuts):
    record(verify.check_multicut(cuts))


def test_criterion_10_cli_determinism():
    record(verify.check_determinism())


if __name__ == "__main__":
    results = verify.run_all(progress=lambda r: print(r.line(), flush=True))
    sys.exit(0 if all(r.passed for r in results) else 1)
