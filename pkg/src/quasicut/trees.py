"""Random quasipartitions of bidirected-tree quasimetrics.

The random threshold ``z`` is a parameter rather than drawn internally, so
the sampler is a deterministic function and its exact distribution over
``z ~ Uniform[0, r/2]`` can be enumerated interval by interval.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import NotATree, ZOutOfRange
from .graph import WeightedDigraph, is_bidirected_tree, shortest_path_quasimetric
from .quasipartition import Quasipartition, WeightedSupport, transitive_closure


def _crosses(lo: float, hi: float, z: float, step: float) -> bool:
    """True iff some integer i >= 0 has lo <= z + i*step < hi."""
    if not hi > lo:
        return False
    i = max(0, math.ceil((lo - z) / step))
    while i > 0 and z + (i - 1) * step >= lo:
        i -= 1
    while z + i * step < lo:
        i += 1
    return z + i * step < hi


class _TreeCutter:
    def __init__(self, tree: WeightedDigraph, r: float, root: int):
        if not is_bidirected_tree(tree):
            raise NotATree("input is not a bidirected tree")
        if not 0 <= root < tree.n:
            raise NotATree(f"root {root} is not a vertex")
        if not r > 0:
            raise ValueError("r must be positive")
        self.tree = tree
        self.r = float(r)
        self.step = self.r / 2
        self.root = root
        self.dist = shortest_path_quasimetric(tree)

    def __call__(self, z: float) -> Quasipartition:
        if not 0.0 <= z <= self.step:
            raise ZOutOfRange(f"z={z!r} outside [0, {self.step!r}]")
        d, t, h = self.dist, self.root, self.step
        rel = np.zeros((self.tree.n, self.tree.n), dtype=bool)
        for u, v, _ in self.tree.edges:
            # (a): edge steps toward the root across a threshold
            # (b): edge steps away from the root across a threshold
            if _crosses(d[v, t], d[u, t], z, h) or _crosses(d[t, u], d[t, v], z, h):
                continue
            rel[u, v] = True
        return transitive_closure(rel)

    def breakpoints(self):
        h = self.step
        values = set(self.dist[self.root, :]) | set(self.dist[:, self.root])
        pts = {0.0, h}
        for a in values:
            k0 = math.floor(a / h)
            for k in (k0 - 1, k0, k0 + 1):
                b = a - k * h
                if k >= 0 and 0.0 <= b <= h:
                    pts.add(float(b))
        return sorted(pts)


def sample_tree_quasipartition(tree: WeightedDigraph, r: float, root: int, z: float) -> Quasipartition:
    """One run of the layered-threshold tree quasipartition for a fixed z.

    Every tree edge starts related; an edge is dropped when its endpoints
    straddle a threshold ``z + i*r/2`` (i >= 0) of the distance to or from
    ``root`` in the edge's direction. The survivors are closed transitively.
    """
    return _TreeCutter(tree, r, root)(z)


def tree_quasipartition_support(tree: WeightedDigraph, r: float, root: int = 0) -> WeightedSupport:
    """Exact distribution of :func:`sample_tree_quasipartition` over uniform z."""
    cut = _TreeCutter(tree, r, root)
    pts = cut.breakpoints()
    pieces = []
    for lo, hi in zip(pts, pts[1:]):
        if hi > lo:
            pieces.append((cut((lo + hi) / 2), lo, hi))
    return WeightedSupport.from_intervals(pieces, cut.step, cut.r)
