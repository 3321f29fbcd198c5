"""Brute-force and Monte Carlo reference computations.

Nothing here calls into the code paths it is meant to check: shortest paths
use Dijkstra, reachability uses a vectorised Warshall over all edge subsets.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Tuple

import numpy as np

from .errors import TooLarge

MAX_BRUTE_EDGES = 20
_CHUNK = 1 << 13


def dijkstra_all_pairs(n: int, edges) -> np.ndarray:
    out = np.full((n, n), math.inf)
    adj = [[] for _ in range(n)]
    for u, v, w in edges:
        adj[u].append((v, w))
    for s in range(n):
        dist = out[s]
        dist[s] = 0.0
        heap = [(0.0, s)]
        while heap:
            d, x = heapq.heappop(heap)
            if d > dist[x]:
                continue
            for y, w in adj[x]:
                if d + w < dist[y]:
                    dist[y] = d + w
                    heapq.heappush(heap, (d + w, y))
    return out


def bfs_closure(n: int, pairs) -> np.ndarray:
    """Reflexive-transitive closure by a BFS from every vertex."""
    succ = [[] for _ in range(n)]
    for u, v in pairs:
        succ[u].append(v)
    out = np.zeros((n, n), dtype=bool)
    for s in range(n):
        frontier = [s]
        out[s, s] = True
        while frontier:
            nxt = []
            for x in frontier:
                for y in succ[x]:
                    if not out[s, y]:
                        out[s, y] = True
                        nxt.append(y)
            frontier = nxt
    return out


@dataclass
class BruteResult:
    edges: Tuple[int, ...]
    capacity: float
    separated: Tuple[int, ...]
    demand: float
    sparsity: float


def _subset_scan(inst):
    """Yield (masks, capacity, separated[mask, pair]) chunks over all edge subsets."""
    g = inst.graph
    m, n = g.m, g.n
    if m > MAX_BRUTE_EDGES:
        raise TooLarge(f"{m} edges exceeds the brute-force cap of {MAX_BRUTE_EDGES}")
    caps = np.array([w for _, _, w in g.edges], dtype=float)
    tails = np.array([u for u, _, _ in g.edges], dtype=int)
    heads = np.array([v for _, v, _ in g.edges], dtype=int)
    src = np.array([s for s, _, _ in inst.pairs], dtype=int)
    dst = np.array([t for _, t, _ in inst.pairs], dtype=int)
    bits = 1 << np.arange(m)
    total = 1 << m
    for start in range(0, total, _CHUNK):
        masks = np.arange(start, min(total, start + _CHUNK))
        cut = (masks[:, None] & bits[None, :]) != 0
        reach = np.zeros((masks.size, n, n), dtype=bool)
        reach[:, np.arange(n), np.arange(n)] = True
        for e in range(m):
            reach[~cut[:, e], tails[e], heads[e]] = True
        for k in range(n):
            reach |= reach[:, :, k, None] & reach[:, None, k, :]
        sep = ~reach[:, src, dst]
        yield masks, cut @ caps, cut.sum(axis=1), sep


def _best(rows):
    """Min by (value, size, lexicographic edge tuple)."""
    return min(rows, key=lambda r: (r[0], r[1], r[2]))


def _edges_of(mask: int, m: int):
    return tuple(e for e in range(m) if mask >> e & 1)


def brute_force_sparsest_cut(inst) -> BruteResult:
    """Minimum finite sparsity over all 2^|E| edge subsets."""
    dem = np.array([d for _, _, d in inst.pairs], dtype=float)
    m = inst.graph.m
    rows = []
    for masks, cap, size, sep in _subset_scan(inst):
        sd = sep.astype(float) @ dem
        with np.errstate(divide="ignore", invalid="ignore"):
            spars = np.where(sd > 0, cap / np.where(sd > 0, sd, 1.0), np.inf)
        best = spars.min()
        if not np.isfinite(best):
            continue
        for i in np.nonzero(spars == best)[0]:
            rows.append((float(best), int(size[i]), _edges_of(int(masks[i]), m), sep[i], float(cap[i]), float(sd[i])))
        rows = [min(rows, key=lambda r: (r[0], r[1], r[2]))]
    if not rows:
        raise ValueError("no edge subset separates positive demand")
    s, _, edges, sep, cap, sd = _best(rows)
    return BruteResult(edges, cap, tuple(int(k) for k in np.nonzero(sep)[0]), sd, s)


def brute_force_multicut(inst) -> BruteResult:
    """Minimum capacity edge subset that separates every terminal pair."""
    dem = np.array([d for _, _, d in inst.pairs], dtype=float)
    m = inst.graph.m
    rows = []
    for masks, cap, size, sep in _subset_scan(inst):
        ok = sep.all(axis=1)
        if not ok.any():
            continue
        best = cap[ok].min()
        for i in np.nonzero(ok & (cap == best))[0]:
            rows.append((float(best), int(size[i]), _edges_of(int(masks[i]), m)))
        rows = [min(rows)]
    cap, _, edges = rows[0]
    total = float(dem.sum())
    return BruteResult(edges, cap, tuple(range(len(inst.pairs))), total,
                       cap / total if total > 0 else math.inf)


def empirical_removal_rate(sampler: Callable[[float], object], pair, trials: int, seed: int,
                           zmax: float) -> Tuple[float, float]:
    """Fraction of z ~ U[0, zmax] draws whose quasipartition leaves ``pair`` unrelated."""
    counts, _ = _empirical_counts(sampler, trials, seed, zmax)
    u, v = pair
    rate = counts[u, v] / trials
    return float(rate), math.sqrt(rate * (1 - rate) / trials)


def _empirical_counts(sampler, trials: int, seed: int, zmax: float):
    if trials < 1000:
        raise ValueError("use at least 1000 trials")
    rng = np.random.default_rng(seed)
    zs = rng.random(trials) * zmax
    counts = None
    for z in zs:
        rel = sampler(float(z)).rel
        counts = (~rel).astype(np.int64) if counts is None else counts + ~rel
    return counts, zs


@dataclass
class PairReport:
    pair: Tuple[int, int]
    exact: float
    empirical: float
    stderr: float
    ok: bool


def exact_vs_empirical_report(support, sampler, trials: int = 100_000, seed: int = 0,
                              pairs=None) -> List[PairReport]:
    """Exact removal probabilities of ``support`` against Monte Carlo runs of ``sampler``.

    The standard error uses the larger of the exact and empirical binomial
    variances, so a pair with exact probability strictly between 0 and 1
    never gets a zero-width band.
    """
    zmax = support.zmax
    counts, _ = _empirical_counts(sampler, trials, seed, zmax)
    exact = support.removal_probability()
    n = exact.shape[0]
    if pairs is None:
        pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    out = []
    for u, v in pairs:
        p = float(exact[u, v])
        rate = counts[u, v] / trials
        se = math.sqrt(max(p * (1 - p), rate * (1 - rate)) / trials)
        ok = abs(rate - p) <= 3 * se if se > 0 else abs(rate - p) <= 1e-12
        out.append(PairReport((u, v), p, float(rate), se, ok))
    return out


def exact_removal_fractions(support) -> List[List[Fraction]]:
    """Pr[(u,v) not in P] as exact rationals from the support's z-intervals."""
    h = Fraction(support.zmax)
    n = support.n
    out = [[Fraction(0)] * n for _ in range(n)]
    for it in support.items:
        mass = sum((Fraction(hi) - Fraction(lo) for lo, hi in it.intervals), Fraction(0)) / h
        for u, v in np.argwhere(~it.partition.rel):
            out[u][v] += mass
    return out
