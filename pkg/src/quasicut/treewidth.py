"""Balanced separators and the recursive separator-based quasipartition.

The separator recursion depends only on the graph structure, never on the
random threshold, so it is computed once as a :class:`SeparatorHierarchy`
and then replayed for every value of ``z``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from .errors import InvalidDecomposition, SeparatorFailure, ZOutOfRange
from .graph import WeightedDigraph, shortest_path_quasimetric, weak_components
from .quasipartition import Quasipartition, WeightedSupport, transitive_closure

SeparatorProvider = Callable[[WeightedDigraph, Sequence[int]], Tuple[int, ...]]


@dataclass(frozen=True)
class TreeDecomposition:
    bags: Tuple[FrozenSet[int], ...]
    tree_edges: Tuple[Tuple[int, int], ...]

    def __init__(self, bags, tree_edges=()):
        object.__setattr__(self, "bags", tuple(frozenset(int(v) for v in b) for b in bags))
        object.__setattr__(self, "tree_edges", tuple((int(a), int(b)) for a, b in tree_edges))

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def neighbors(self):
        nb = {i: [] for i in range(len(self.bags))}
        for a, b in self.tree_edges:
            nb[a].append(b)
            nb[b].append(a)
        return nb

    def validate(self, g: WeightedDigraph) -> None:
        """Raise :class:`InvalidDecomposition` unless this decomposes ``g``."""
        k = len(self.bags)
        if k == 0:
            raise InvalidDecomposition("no bags")
        for a, b in self.tree_edges:
            if not (0 <= a < k and 0 <= b < k) or a == b:
                raise InvalidDecomposition(f"bad tree edge ({a}, {b})")
        # tree over bags: k - 1 edges and connected
        if len(set(map(frozenset, self.tree_edges))) != k - 1 or not _connected(range(k), self.neighbors()):
            raise InvalidDecomposition("bag links do not form a tree")
        for b in self.bags:
            if any(not 0 <= v < g.n for v in b):
                raise InvalidDecomposition("bag mentions a vertex outside the graph")
        nb = self.neighbors()
        for v in range(g.n):
            holding = [i for i, b in enumerate(self.bags) if v in b]
            if not holding:
                raise InvalidDecomposition(f"vertex {v} is in no bag")
            sub = {i: [j for j in nb[i] if v in self.bags[j]] for i in holding}
            if not _connected(holding, sub):
                raise InvalidDecomposition(f"bags holding vertex {v} are not connected")
        for u, v, _ in g.edges:
            if not any(u in b and v in b for b in self.bags):
                raise InvalidDecomposition(f"edge ({u}, {v}) is in no bag")


def _connected(nodes, nbrs) -> bool:
    nodes = list(nodes)
    if not nodes:
        return True
    seen = {nodes[0]}
    stack = [nodes[0]]
    while stack:
        x = stack.pop()
        for y in nbrs[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(set(nodes))


def is_balanced(g: WeightedDigraph, vertices: Sequence[int], sep) -> bool:
    """Every weak component of ``vertices - sep`` has at most |vertices|/2 members."""
    limit = len(vertices) / 2
    rest = set(vertices) - set(sep)
    return all(len(c) <= limit for c in weak_components(g, rest))


def balanced_separator(g: WeightedDigraph, t: int, vertices: Optional[Sequence[int]] = None) -> Tuple[int, ...]:
    """Smallest balanced vertex separator of size at most ``t``, by exhaustive search.

    Sizes are tried from 1 upward and subsets in lexicographic order, so the
    answer is the lexicographically first among the smallest separators.
    Raises :class:`SeparatorFailure` when none exists.
    """
    verts = sorted(range(g.n) if vertices is None else vertices)
    for size in range(1, min(t, len(verts)) + 1):
        for sep in combinations(verts, size):
            if is_balanced(g, verts, sep):
                return sep
    raise SeparatorFailure(f"no balanced separator of size <= {t} on {len(verts)} vertices")


def separator_from_decomposition(g: WeightedDigraph, td: TreeDecomposition,
                                 vertices: Optional[Sequence[int]] = None) -> Tuple[int, ...]:
    """A bag (restricted to ``vertices``) whose removal leaves components of at most half the vertices.

    Walks the decomposition tree from bag 0 toward any oversized component,
    which always lives inside a single subtree.
    """
    verts = set(range(g.n) if vertices is None else vertices)
    half = len(verts) / 2
    bags = [b & verts for b in td.bags]
    nb = td.neighbors()

    def subtree_bags(start, blocked):
        seen = {start, blocked}
        stack = [start]
        out = [start]
        while stack:
            x = stack.pop()
            for y in nb[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
                    out.append(y)
        return out

    cur, visited = 0, set()
    while cur not in visited:
        visited.add(cur)
        big = [c for c in weak_components(g, verts - bags[cur]) if len(c) > half]
        if not big:
            return tuple(sorted(bags[cur]))
        probe = big[0][0]
        nxt = [j for j in nb[cur] if any(probe in bags[i] for i in subtree_bags(j, cur))]
        if not nxt:
            break
        cur = nxt[0]
    for b in bags:
        if is_balanced(g, sorted(verts), b):
            return tuple(sorted(b))
    raise InvalidDecomposition("no bag is a balanced separator; decomposition does not fit the graph")


def exhaustive_provider(t: int) -> SeparatorProvider:
    def provider(g, vertices):
        return balanced_separator(g, t, vertices)
    provider.t = t
    return provider


def decomposition_provider(g: WeightedDigraph, td: TreeDecomposition) -> SeparatorProvider:
    td.validate(g)

    def provider(graph, vertices):
        return separator_from_decomposition(graph, td, vertices)
    return provider


@dataclass(frozen=True)
class SeparatorNode:
    vertices: Tuple[int, ...]
    separator: Tuple[int, ...]
    depth: int
    # indices into g.edges of edges with both endpoints in ``vertices``
    edge_ids: Tuple[int, ...]


@dataclass(frozen=True)
class SeparatorHierarchy:
    nodes: Tuple[SeparatorNode, ...]

    @property
    def max_separator(self) -> int:
        return max((len(x.separator) for x in self.nodes), default=0)

    @property
    def depth(self) -> int:
        """Number of recursion levels that contain at least one separator."""
        return max((x.depth for x in self.nodes), default=-1) + 1


def separator_hierarchy(g: WeightedDigraph, sep: SeparatorProvider) -> SeparatorHierarchy:
    """Run the component recursion: separate, split into weak components, recurse."""
    nodes: List[SeparatorNode] = []
    stack = [(tuple(range(g.n)), 0)]
    while stack:
        verts, depth = stack.pop()
        if len(verts) <= 1:
            continue
        k = tuple(sorted(sep(g, verts)))
        inside = set(verts)
        eids = tuple(i for i, (u, v, _) in enumerate(g.edges) if u in inside and v in inside)
        nodes.append(SeparatorNode(verts, k, depth, eids))
        comps = weak_components(g, inside - set(k))
        if len(comps) == 1 and len(comps[0]) == len(verts):
            raise SeparatorFailure("separator did not shrink the component")
        for comp in reversed(comps):
            stack.append((tuple(comp), depth + 1))
    return SeparatorHierarchy(tuple(nodes))


def auto_hierarchy(g: WeightedDigraph, max_t: Optional[int] = None) -> Tuple[SeparatorHierarchy, int]:
    """Hierarchy from exhaustive separators with the smallest t that works at every level."""
    top = g.n if max_t is None else max_t
    for t in range(1, top + 1):
        try:
            return separator_hierarchy(g, exhaustive_provider(t)), t
        except SeparatorFailure:
            continue
    raise SeparatorFailure(f"no balanced separators of size <= {top}")


def resolve_hierarchy(g: WeightedDigraph, sep=None) -> SeparatorHierarchy:
    """Accept a provider, a :class:`TreeDecomposition`, a hierarchy, or None (auto)."""
    if isinstance(sep, SeparatorHierarchy):
        return sep
    if isinstance(sep, TreeDecomposition):
        return separator_hierarchy(g, decomposition_provider(g, sep))
    if sep is None:
        return auto_hierarchy(g)[0]
    return separator_hierarchy(g, sep)


class _SeparatorCutter:
    def __init__(self, g: WeightedDigraph, r: float, sep):
        if not r > 0:
            raise ValueError("r must be positive")
        self.g = g
        self.r = float(r)
        self.step = self.r / 2
        self.hier = resolve_hierarchy(g, sep)
        self.dist = shortest_path_quasimetric(g)
        tails = np.array([u for u, _, _ in g.edges], dtype=int)
        heads = np.array([v for _, v, _ in g.edges], dtype=int)
        self.tails, self.heads = tails, heads
        self.levels = []
        for node in self.hier.nodes:
            ids = np.array(node.edge_ids, dtype=int)
            ks = np.array(node.separator, dtype=int)
            if ids.size == 0 or ks.size == 0:
                continue
            u, v = tails[ids], heads[ids]
            d = self.dist
            # rows: edges, columns: separator vertices
            self.levels.append((ids, d[np.ix_(u, ks)], d[np.ix_(v, ks)], d[np.ix_(ks, u)].T, d[np.ix_(ks, v)].T))

    def __call__(self, z: float) -> Quasipartition:
        if not 0.0 <= z <= self.step:
            raise ZOutOfRange(f"z={z!r} outside [0, {self.step!r}]")
        keep = np.ones(self.g.m, dtype=bool)
        for ids, d_ux, d_vx, d_xu, d_xv in self.levels:
            # (a) u is beyond z of x while v is within z; (b) the same from x outward
            hit = ((d_ux > z) & (d_vx <= z)) | ((d_xv > z) & (d_xu <= z))
            keep[ids[hit.any(axis=1)]] = False
        rel = np.zeros((self.g.n, self.g.n), dtype=bool)
        rel[self.tails[keep], self.heads[keep]] = True
        return transitive_closure(rel)

    def breakpoints(self):
        d = self.dist
        vals = d[(d >= 0) & (d <= self.step)]
        return sorted(set(float(x) for x in vals.tolist()) | {0.0, self.step})


def sample_treewidth_quasipartition(g: WeightedDigraph, r: float, sep, z: float) -> Quasipartition:
    """Separator-recursion quasipartition for one fixed threshold ``z``.

    ``z`` is shared by every recursion level and all distance tests use the
    shortest-path distances of the whole input graph. ``sep`` may be a
    separator provider, a :class:`TreeDecomposition`, a precomputed
    :class:`SeparatorHierarchy`, or ``None`` for the smallest exhaustive one.
    """
    return _SeparatorCutter(g, r, sep)(z)


def treewidth_quasipartition_support(g: WeightedDigraph, r: float, sep=None) -> WeightedSupport:
    """Exact distribution over z ~ Uniform[0, r/2], split at all pairwise distances."""
    cut = _SeparatorCutter(g, r, sep)
    pts = cut.breakpoints()
    pieces = []
    for lo, hi in zip(pts, pts[1:]):
        if hi > lo:
            pieces.append((cut((lo + hi) / 2), lo, hi))
    return WeightedSupport.from_intervals(pieces, cut.step, cut.r)


def lipschitz_bound(t: int, n: int) -> float:
    """Per-pair constant 4 * t * (floor(log2 n) + 1) for separator size t."""
    return 4.0 * t * (math.floor(math.log2(n)) + 1) if n >= 1 else 0.0
