"""Weighted digraphs, shortest-path quasimetrics and structural checks.

Distances are plain ``float64`` arrays. Unreachable pairs hold IEEE ``inf``,
which already absorbs under addition of non-negative values and compares
above every finite number, so no sentinel value is ever used.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from .errors import InvalidGraph, NotADag

INF = float("inf")

Edge = Tuple[int, int, float]


def max_vertices() -> int:
    """Size cap for all-pairs computations; ``QUASICUT_MAX_N`` overrides it."""
    return int(os.environ.get("QUASICUT_MAX_N", "512"))


@dataclass(frozen=True)
class WeightedDigraph:
    """A simple directed graph with non-negative finite edge weights.

    Weights double as lengths (for distances) and capacities (for cuts).
    """

    n: int
    edges: Tuple[Edge, ...]

    def __init__(self, n: int, edges: Iterable[Sequence] = ()):
        n = int(n)
        if n <= 0:
            raise InvalidGraph(f"vertex count must be positive, got {n}")
        clean = []
        seen = set()
        for e in edges:
            u, v, w = int(e[0]), int(e[1]), float(e[2])
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidGraph(f"edge ({u}, {v}) has a vertex outside [0, {n})")
            if u == v:
                raise InvalidGraph(f"self-loop at vertex {u}")
            if (u, v) in seen:
                raise InvalidGraph(f"parallel edge ({u}, {v})")
            if not (w >= 0.0 and np.isfinite(w)):
                raise InvalidGraph(f"edge ({u}, {v}) has invalid weight {w!r}")
            seen.add((u, v))
            clean.append((u, v, w))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", tuple(clean))

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return any(a == u and b == v for a, b, _ in self.edges)

    def edge_pairs(self):
        return [(u, v) for u, v, _ in self.edges]

    def weights(self) -> np.ndarray:
        return np.array([w for _, _, w in self.edges], dtype=float)

    def with_weights(self, weights: Sequence[float]) -> "WeightedDigraph":
        if len(weights) != self.m:
            raise InvalidGraph("weight vector length does not match edge count")
        return WeightedDigraph(self.n, [(u, v, w) for (u, v, _), w in zip(self.edges, weights)])

    def scaled(self, factor: float) -> "WeightedDigraph":
        return WeightedDigraph(self.n, [(u, v, w * factor) for u, v, w in self.edges])

    def weight_matrix(self) -> np.ndarray:
        """Direct-edge length matrix: 0 on the diagonal, inf where no edge."""
        a = np.full((self.n, self.n), INF)
        np.fill_diagonal(a, 0.0)
        for u, v, w in self.edges:
            a[u, v] = min(a[u, v], w)
        return a

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=bool)
        for u, v, _ in self.edges:
            a[u, v] = True
        return a

    def undirected_neighbors(self, vertices: Optional[Iterable[int]] = None):
        keep = set(range(self.n)) if vertices is None else set(vertices)
        nbrs = {v: set() for v in keep}
        for u, v, _ in self.edges:
            if u in keep and v in keep:
                nbrs[u].add(v)
                nbrs[v].add(u)
        return nbrs


def shortest_path_quasimetric(g: WeightedDigraph) -> np.ndarray:
    """All-pairs shortest directed path lengths (Floyd-Warshall, cubic)."""
    if g.n > max_vertices():
        raise InvalidGraph(f"n={g.n} exceeds the all-pairs cap {max_vertices()}")
    d = g.weight_matrix()
    for k in range(g.n):
        np.minimum(d, d[:, k, None] + d[None, k, :], out=d)
    return d


def weak_components(g: WeightedDigraph, vertices: Iterable[int]):
    """Weakly connected components of the subgraph induced by ``vertices``.

    Components come back as sorted lists, ordered by smallest member.
    """
    nbrs = g.undirected_neighbors(vertices)
    seen = set()
    comps = []
    for s in sorted(nbrs):
        if s in seen:
            continue
        stack = [s]
        seen.add(s)
        comp = []
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in nbrs[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        comps.append(sorted(comp))
    return comps


def is_bidirected_tree(g: WeightedDigraph) -> bool:
    pairs = set(g.edge_pairs())
    if any((v, u) not in pairs for u, v in pairs):
        return False
    undirected = len(pairs) // 2
    return undirected == g.n - 1 and len(weak_components(g, range(g.n))) == 1


def _check_square(q) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    if q.ndim != 2 or q.shape[0] != q.shape[1]:
        raise ValueError("expected a square matrix")
    return q


def validate_quasimetric(q, tol: float = 0.0):
    """Return ``None`` if ``q`` is a quasimetric, else the first bad triple.

    A non-zero diagonal entry at ``x`` is reported as ``(x, x, x)``. Otherwise
    the first ``(x, y, z)`` in row-major order with
    ``q[x, y] > q[x, z] + q[z, y] + tol`` is returned.
    """
    q = _check_square(q)
    n = q.shape[0]
    for x in range(n):
        if q[x, x] != 0:
            return (x, x, x)
    for x in range(n):
        # via[y, z] = q[x, z] + q[z, y]
        via = q[x, None, :] + q.T
        bad = q[x, :, None] > via + tol
        if bad.any():
            y, z = np.argwhere(bad)[0]
            return (x, int(y), int(z))
    return None


def validate_quasiultrametric(q, tol: float = 0.0):
    """Like :func:`validate_quasimetric` with ``max`` in place of ``+``."""
    q = _check_square(q)
    n = q.shape[0]
    for x in range(n):
        if q[x, x] != 0:
            return (x, x, x)
    for x in range(n):
        via = np.maximum(q[x, None, :], q.T)
        bad = q[x, :, None] > via + tol
        if bad.any():
            y, z = np.argwhere(bad)[0]
            return (x, int(y), int(z))
    return None


def topological_order(g: WeightedDigraph):
    """Kahn's algorithm; raises :class:`NotADag` on a directed cycle."""
    indeg = [0] * g.n
    out = [[] for _ in range(g.n)]
    for u, v, _ in g.edges:
        out[u].append(v)
        indeg[v] += 1
    ready = [v for v in range(g.n) if indeg[v] == 0]
    order = []
    while ready:
        x = ready.pop()
        order.append(x)
        for y in out[x]:
            indeg[y] -= 1
            if indeg[y] == 0:
                ready.append(y)
    if len(order) != g.n:
        raise NotADag("graph contains a directed cycle")
    return order


def subdivide_three(g: WeightedDigraph) -> WeightedDigraph:
    """Replace every edge of a DAG by a directed path of three edges.

    Edge number k (in input order) gets fresh vertices ``n + 2k`` and
    ``n + 2k + 1``; each of the three new edges carries a third of the weight.
    """
    topological_order(g)
    edges = []
    for k, (u, v, w) in enumerate(g.edges):
        x, y = g.n + 2 * k, g.n + 2 * k + 1
        edges += [(u, x, w / 3), (x, y, w / 3), (y, v, w / 3)]
    return WeightedDigraph(g.n + 2 * g.m, edges)
