"""Seeded random instance families used by the tests, the demos and ``verify``.

Weights are multiples of 1/4 so that every distance, threshold and interval
length in the pipelines is an exact binary fraction.
"""

from __future__ import annotations

from typing import List, Optional, Tuple

import numpy as np

from .cuts import CutInstance
from .graph import WeightedDigraph
from .treewidth import TreeDecomposition


def _quarter(rng, lo: int, hi: int) -> float:
    return int(rng.integers(lo, hi + 1)) / 4


def random_bidirected_tree(n: int, rng: np.random.Generator, zero_prob: float = 0.1) -> WeightedDigraph:
    """Random recursive tree with independent weights in both directions."""
    edges = []
    for v in range(1, n):
        p = int(rng.integers(v))
        for a, b in ((p, v), (v, p)):
            w = 0.0 if rng.random() < zero_prob else _quarter(rng, 1, 20)
            edges.append((a, b, w))
    return WeightedDigraph(n, edges)


def random_partial_2tree(n: int, rng: np.random.Generator, max_edges: int = 14,
                         both_prob: float = 0.3, drop_prob: float = 0.15,
                         zero_prob: float = 0.0) -> Tuple[WeightedDigraph, TreeDecomposition]:
    """Random digraph of treewidth at most 2 together with a width-2 decomposition.

    Vertices are stacked onto existing undirected edges (a 2-tree), some
    undirected edges are dropped, and each survivor is oriented one way or
    both ways. Directed edges beyond ``max_edges`` are thinned out.
    """
    if n == 1:
        return WeightedDigraph(1, []), TreeDecomposition([{0}])
    und = [(0, 1)]
    home = {(0, 1): 0}
    bags = [{0, 1}]
    links = []
    for v in range(2, n):
        a, b = und[int(rng.integers(len(und)))]
        bags.append({a, b, v})
        links.append((home[(a, b)], len(bags) - 1))
        for e in ((min(a, v), max(a, v)), (min(b, v), max(b, v))):
            und.append(e)
            home[e] = len(bags) - 1
    kept = [e for e in und if rng.random() >= drop_prob] or [und[0]]
    directed = []
    for a, b in kept:
        if rng.random() < both_prob:
            directed += [(a, b), (b, a)]
        elif rng.random() < 0.5:
            directed.append((a, b))
        else:
            directed.append((b, a))
    while len(directed) > max_edges:
        directed.pop(int(rng.integers(len(directed))))
    edges = []
    for a, b in directed:
        w = 0.0 if rng.random() < zero_prob else _quarter(rng, 1, 16)
        edges.append((a, b, w))
    return WeightedDigraph(n, edges), TreeDecomposition(bags, links)


def random_pairs(g: WeightedDigraph, rng: np.random.Generator, k: int,
                 connected_only: bool = True) -> List[Tuple[int, int, float]]:
    """Up to ``k`` distinct terminal pairs with demands in {1, 2, 3}."""
    from .oracle import bfs_closure

    reach = bfs_closure(g.n, g.edge_pairs())
    cands = [(s, t) for s in range(g.n) for t in range(g.n)
             if s != t and (reach[s, t] or not connected_only)]
    if not cands:
        return []
    idx = rng.permutation(len(cands))[:k]
    return [(cands[i][0], cands[i][1], float(rng.integers(1, 4))) for i in sorted(idx)]


def random_cut_instance(rng: np.random.Generator, n_range=(3, 8), max_edges: int = 14,
                        max_pairs: int = 4) -> Optional[Tuple[CutInstance, TreeDecomposition]]:
    n = int(rng.integers(n_range[0], n_range[1] + 1))
    g, td = random_partial_2tree(n, rng, max_edges=max_edges, both_prob=0.35, drop_prob=0.1)
    pairs = random_pairs(g, rng, int(rng.integers(1, max_pairs + 1)))
    if not pairs:
        return None
    return CutInstance(g, pairs), td


def cut_corpus(count: int, seed: int):
    """``count`` cut instances (with decompositions) drawn from one seed."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        inst = random_cut_instance(rng)
        if inst is not None:
            out.append(inst)
    return out
