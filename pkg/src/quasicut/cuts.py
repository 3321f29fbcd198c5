"""Directed non-bipartite sparsest cut via LP rounding, and multicut by repeated sparsest cuts."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .embedding import build_scale_family, distortion, embed_01_combination
from .errors import InputError, NonProgress, NoSeparatingCandidate
from .graph import INF, WeightedDigraph, shortest_path_quasimetric
from .lp import GE, LE, LinearProgram, solve_lp
from .treewidth import resolve_hierarchy, treewidth_quasipartition_support

Pair = Tuple[int, int, float]


@dataclass(frozen=True)
class CutInstance:
    graph: WeightedDigraph
    pairs: Tuple[Pair, ...]

    def __init__(self, graph: WeightedDigraph, pairs: Sequence[Sequence]):
        clean = []
        for p in pairs:
            s, t, dem = int(p[0]), int(p[1]), float(p[2])
            if s == t:
                raise InputError(f"terminal pair ({s}, {t}) has equal endpoints")
            if not (0 <= s < graph.n and 0 <= t < graph.n):
                raise InputError(f"terminal pair ({s}, {t}) outside the graph")
            if not (dem >= 0 and math.isfinite(dem)):
                raise InputError(f"bad demand {dem!r}")
            clean.append((s, t, dem))
        if not any(d > 0 for _, _, d in clean):
            raise InputError("no terminal pair with positive demand")
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "pairs", tuple(clean))

    def with_pairs(self, pairs) -> "CutInstance":
        return CutInstance(self.graph, pairs)


@dataclass
class CutResult:
    edges: Tuple[int, ...]          # indices into graph.edges, ascending
    capacity: float
    separated: Tuple[int, ...]      # indices into pairs
    demand: float
    sparsity: float
    report: Dict = field(default_factory=dict)

    def edge_pairs(self, g: WeightedDigraph):
        return [g.edges[i][:2] for i in self.edges]

    def key(self):
        return (self.sparsity, len(self.edges), self.edges)


def _reachable(n: int, succ, src: int):
    seen = [False] * n
    seen[src] = True
    stack = [src]
    while stack:
        x = stack.pop()
        for y in succ[x]:
            if not seen[y]:
                seen[y] = True
                stack.append(y)
    return seen


def sparsity_of(inst: CutInstance, edges: Sequence[int]) -> CutResult:
    """Recompute which pairs lose every path once ``edges`` are removed."""
    g = inst.graph
    removed = set(int(e) for e in edges)
    succ = [[] for _ in range(g.n)]
    for i, (u, v, _) in enumerate(g.edges):
        if i not in removed:
            succ[u].append(v)
    reach = {}
    sep = []
    for k, (s, t, _) in enumerate(inst.pairs):
        if s not in reach:
            reach[s] = _reachable(g.n, succ, s)
        if not reach[s][t]:
            sep.append(k)
    cap = float(sum(g.edges[i][2] for i in removed))
    dem = float(sum(inst.pairs[k][2] for k in sep))
    spars = cap / dem if dem > 0 else INF
    return CutResult(tuple(sorted(removed)), cap, tuple(sep), dem, spars)


def d_index(n: int, m: int, u: int, v: int) -> int:
    """Column of the LP distance variable d(u, v), u != v."""
    return m + u * (n - 1) + (v if v < u else v - 1)


def build_sparsest_cut_lp(inst: CutInstance) -> LinearProgram:
    """Edge lengths x(e) and pair distances d(u, v) with triangle rows over all ordered triples."""
    g = inst.graph
    n, m = g.n, g.m
    nv = m + n * (n - 1)
    c = np.zeros(nv)
    c[:m] = g.weights()
    rows, senses, rhs = [], [], []
    for e, (u, v, _) in enumerate(g.edges):
        row = np.zeros(nv)
        row[d_index(n, m, u, v)] = 1.0
        row[e] = -1.0
        rows.append(row); senses.append(LE); rhs.append(0.0)
    for u in range(n):
        for v in range(n):
            if v == u:
                continue
            for w in range(n):
                if w == u or w == v:
                    continue
                row = np.zeros(nv)
                row[d_index(n, m, u, w)] += 1.0
                row[d_index(n, m, u, v)] -= 1.0
                row[d_index(n, m, v, w)] -= 1.0
                rows.append(row); senses.append(LE); rhs.append(0.0)
    row = np.zeros(nv)
    for s, t, dem in inst.pairs:
        row[d_index(n, m, s, t)] += dem
    rows.append(row); senses.append(GE); rhs.append(1.0)
    names = [f"x{e}" for e in range(m)] + [f"d{u},{v}" for u in range(n) for v in range(n) if u != v]
    return LinearProgram(c, np.array(rows), senses, np.array(rhs), names)


def lp_distances_to_quasimetric(inst: CutInstance, assignment) -> np.ndarray:
    """Shortest paths under edge lengths x(e) taken from an LP assignment."""
    x = np.asarray(assignment, dtype=float)[: inst.graph.m]
    return shortest_path_quasimetric(inst.graph.with_weights(np.maximum(x, 0.0)))


def _pick(cands: List[CutResult]) -> Optional[CutResult]:
    finite = [c for c in cands if math.isfinite(c.sparsity)]
    return min(finite, key=CutResult.key) if finite else None


def round_sparsest_cut(inst: CutInstance, m, phi, lp_value: Optional[float] = None,
                       fam=None) -> CutResult:
    """Best cut among the 0-1 quasimetrics of ``phi``; optionally certify against ``lp_value``.

    Candidate j cuts exactly the edges its 0-1 quasimetric puts at distance
    1. With ``lp_value`` given, the winner's sparsity is checked against
    measured distortion times the LP value.
    """
    g = inst.graph
    tails = np.array([u for u, _, _ in g.edges], dtype=int)
    heads = np.array([v for _, v, _ in g.edges], dtype=int)
    seen = {}
    for p, _ in phi.items:
        cut = tuple(int(e) for e in np.nonzero(~p.rel[tails, heads])[0])
        if cut in seen:
            continue
        res = sparsity_of(inst, cut)
        claimed = {k for k, (s, t, _) in enumerate(inst.pairs) if not p.rel[s, t]}
        if not claimed <= set(res.separated):
            raise AssertionError("0-1 quasimetric claims a pair its cut does not separate")
        res.report["claim_matches"] = claimed == set(res.separated)
        seen[cut] = res
    best = _pick(list(seen.values()))
    if best is None:
        raise NoSeparatingCandidate("no candidate cut separates positive demand")
    best.report["candidates"] = len(seen)
    if lp_value is not None:
        base = fam.dist if fam is not None else np.asarray(m, dtype=float)
        contraction, expansion = distortion(base, phi.c * phi.matrix())
        dist_factor = contraction * expansion
        bound = dist_factor * lp_value
        best.report.update(lp_value=lp_value, distortion=dist_factor, contraction=contraction,
                           expansion=expansion,
                           ratio=(best.sparsity / lp_value) if lp_value > 0 else (0.0 if best.sparsity == 0 else INF))
        if best.sparsity > bound * (1 + 1e-9) + 1e-12:
            raise AssertionError(f"rounded sparsity {best.sparsity} exceeds distortion x LP = {bound}")
        best.report["certified"] = True
    return best


def _disconnected_pairs(inst: CutInstance):
    res = sparsity_of(inst, ())
    return [k for k in res.separated if inst.pairs[k][2] > 0], res


def solve_sparsest_cut(inst: CutInstance, sep=None) -> CutResult:
    """LP, shortest-path metric, forced scale ladder, 0-1 combination, best candidate.

    ``sep`` selects separators for the quasipartition recursion: a
    :class:`~quasicut.treewidth.TreeDecomposition`, a separator provider, or
    None to use the smallest exhaustive separators.
    """
    bad, empty = _disconnected_pairs(inst)
    if bad:
        empty.report.update(lp_value=0.0, distortion=1.0, ratio=0.0, certified=True, trivial=True)
        return empty
    lp = build_sparsest_cut_lp(inst)
    value, x = solve_lp(lp)
    m = lp_distances_to_quasimetric(inst, x)
    n, me = inst.graph.n, inst.graph.m
    for s, t, dem in inst.pairs:
        if dem > 0 and m[s, t] < x[d_index(n, me, s, t)] - 1e-9:
            raise AssertionError("shortest-path metric undercuts an LP distance")
    lengths = inst.graph.with_weights(x[:me])
    hier = resolve_hierarchy(inst.graph, sep)
    fam = build_scale_family(m, lengths, lambda g, r: treewidth_quasipartition_support(g, r, hier))
    phi = embed_01_combination(fam)
    best = round_sparsest_cut(inst, m, phi, lp_value=value, fam=fam)
    best.report.update(separator_size=hier.max_separator, recursion_depth=hier.depth,
                       scales=len(fam.scales), combination_size=len(phi.items), trivial=False)
    return best


def harmonic(k: int) -> float:
    return float(sum(1.0 / i for i in range(1, k + 1)))


def solve_multicut(inst: CutInstance, sep=None) -> CutResult:
    """Repeatedly cut the still-connected pairs (unit demands) and take the union."""
    remaining = list(range(len(inst.pairs)))
    chosen = set()
    rounds = []
    while remaining:
        sub = inst.with_pairs([(inst.pairs[k][0], inst.pairs[k][1], 1.0) for k in remaining])
        res = solve_sparsest_cut(sub, sep)
        hit = [remaining[k] for k in res.separated]
        if not hit:
            raise NonProgress("sparsest-cut round separated no pair")
        rounds.append({
            "edges": list(res.edges),
            "capacity": res.capacity,
            "separated": hit,
            "remaining": len(remaining),
            "sparsity": res.sparsity,
            "lp_value": res.report.get("lp_value"),
            "distortion": res.report.get("distortion"),
        })
        chosen.update(res.edges)
        remaining = [k for k in remaining if k not in set(hit)]
    out = sparsity_of(inst, sorted(chosen))
    if len(out.separated) != len(inst.pairs):
        raise AssertionError("union of round cuts leaves a pair connected")
    out.report.update(rounds=rounds, round_capacity_sum=float(sum(r["capacity"] for r in rounds)),
                      harmonic=harmonic(len(inst.pairs)))
    return out
