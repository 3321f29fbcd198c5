"""Quasipartitions (reflexive transitive relations) and finite distributions over them."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

from .graph import WeightedDigraph


class Quasipartition:
    """A reflexive, transitive relation on ``range(n)`` stored as a bool matrix.

    Instances are immutable and hashable, so identical relations produced at
    different z values collapse to one support item.
    """

    __slots__ = ("rel", "_key")

    def __init__(self, rel, check: bool = True):
        rel = np.array(rel, dtype=bool)
        if rel.ndim != 2 or rel.shape[0] != rel.shape[1]:
            raise ValueError("relation must be a square matrix")
        if check:
            if not rel.diagonal().all():
                raise ValueError("relation is not reflexive")
            if not is_transitive(rel):
                raise ValueError("relation is not transitive")
        rel.setflags(write=False)
        self.rel = rel
        self._key = np.packbits(rel).tobytes() + rel.shape[0].to_bytes(4, "little")

    @property
    def n(self) -> int:
        return self.rel.shape[0]

    def __contains__(self, pair) -> bool:
        u, v = pair
        return bool(self.rel[u, v])

    def __eq__(self, other):
        return isinstance(other, Quasipartition) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def pairs(self):
        """Related ordered pairs with u != v, sorted."""
        return [(int(u), int(v)) for u, v in np.argwhere(self.rel) if u != v]

    def sort_key(self):
        return self._key

    def __repr__(self):
        return f"Quasipartition(n={self.n}, pairs={self.pairs()})"

    @classmethod
    def identity(cls, n: int) -> "Quasipartition":
        return cls(np.eye(n, dtype=bool), check=False)

    @classmethod
    def full(cls, n: int) -> "Quasipartition":
        return cls(np.ones((n, n), dtype=bool), check=False)


def is_transitive(rel) -> bool:
    rel = np.asarray(rel, dtype=bool)
    composed = (rel.astype(np.int64) @ rel.astype(np.int64)) > 0
    return not (composed & ~rel).any()


def transitive_closure(rel) -> Quasipartition:
    """Smallest reflexive transitive superset of ``rel`` (Warshall)."""
    r = np.array(rel, dtype=bool)
    np.fill_diagonal(r, True)
    for k in range(r.shape[0]):
        r |= r[:, k, None] & r[None, k, :]
    return Quasipartition(r, check=False)


def is_r_bounded(p: Quasipartition, m, r: float) -> bool:
    m = np.asarray(m, dtype=float)
    if m.shape != p.rel.shape:
        raise ValueError("size mismatch between quasipartition and quasimetric")
    return not (p.rel & (m > r)).any()


@dataclass
class SupportItem:
    partition: Quasipartition
    weight: float
    # Disjoint half-open z-intervals [lo, hi) that produce this partition.
    intervals: List[Tuple[float, float]] = field(default_factory=list)

    def covers(self, z: float) -> bool:
        return any(lo <= z < hi for lo, hi in self.intervals)


@dataclass
class WeightedSupport:
    """An exactly represented distribution over quasipartitions.

    ``radius`` is the bound every member is claimed to satisfy, if known;
    ``zmax`` is the upper end of the uniform threshold range the item
    intervals partition.
    """

    items: List[SupportItem]
    radius: float = float("nan")
    zmax: float = float("nan")

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    @property
    def n(self) -> int:
        return self.items[0].partition.n

    def total_weight(self) -> float:
        return float(sum(it.weight for it in self.items))

    def removal_probability(self) -> np.ndarray:
        """Matrix of Pr[(u, v) not in P]."""
        out = np.zeros((self.n, self.n))
        for it in self.items:
            out += it.weight * (~it.partition.rel)
        return out

    def locate(self, z: float) -> SupportItem:
        """Item whose interval holds ``z``; the right end ``zmax`` joins the last interval."""
        for it in self.items:
            if it.covers(z):
                return it
        if z == self.zmax:
            return max(self.items, key=lambda it: max(hi for _, hi in it.intervals))
        raise KeyError(f"no support item covers z={z!r}")

    @classmethod
    def from_intervals(cls, pieces, length: float, radius: float) -> "WeightedSupport":
        """Merge ``(partition, lo, hi)`` pieces into items weighted by measure.

        Pieces must arrive sorted by ``lo``; item order follows the first
        interval of each distinct partition.
        """
        index = {}
        items: List[SupportItem] = []
        for p, lo, hi in pieces:
            if p not in index:
                index[p] = len(items)
                items.append(SupportItem(p, 0.0, []))
            it = items[index[p]]
            it.weight += (hi - lo) / length
            if it.intervals and it.intervals[-1][1] == lo:
                it.intervals[-1] = (it.intervals[-1][0], hi)
            else:
                it.intervals.append((lo, hi))
        return cls(items, radius, length)


def lipschitz_constant(support: WeightedSupport, m, r: float) -> float:
    """max over pairs with 0 < d < inf of Pr[(u,v) not in P] * r / d."""
    m = np.asarray(m, dtype=float)
    mask = (m > 0) & np.isfinite(m)
    if not mask.any():
        return 0.0
    ratio = support.removal_probability()[mask] * r / m[mask]
    return float(ratio.max()) if ratio.size else 0.0


def epsilon_force_weights(g: WeightedDigraph, r: float) -> WeightedDigraph:
    """Zero out every edge weight that is at most ``r / (2n)``."""
    if not r > 0:
        raise ValueError("r must be positive")
    cut = r / (2 * g.n)
    return g.with_weights([0.0 if w <= cut else w for _, _, w in g.edges])


def pipeline_forced_support(g: WeightedDigraph, r: float, builder) -> WeightedSupport:
    """An r-bounded, (1/2n)-forcing support built from an unforced builder.

    ``builder(graph, radius)`` must return a radius-bounded support for the
    shortest-path quasimetric of ``graph``. It is invoked on the forced graph
    at radius ``r / 2``; the result is tagged as r-bounded for the original
    weights.
    """
    sup = builder(epsilon_force_weights(g, r), r / 2)
    sup.radius = r
    return sup


def relation_from_pairs(n: int, pairs: Sequence[Tuple[int, int]]) -> np.ndarray:
    rel = np.zeros((n, n), dtype=bool)
    for u, v in pairs:
        rel[u, v] = True
    return rel
