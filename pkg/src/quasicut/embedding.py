"""Quasiultrametric and 0-1 convex-combination embeddings built from scale ladders.

All embedding outputs live in the *rescaled* units of the family: distances
are multiplied by ``ScaleFamily.scale_factor``, a power of two chosen so that
the smallest positive finite distance lands in ``[1, 2)``. Powers of two
rescale floats exactly, so shortest paths commute with the rescaling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Sequence, Tuple

import numpy as np

from .errors import DegenerateSpace, NotAQuasiUltrametric, ScaleMismatch
from .graph import WeightedDigraph, shortest_path_quasimetric, validate_quasiultrametric
from .quasipartition import (
    Quasipartition,
    WeightedSupport,
    epsilon_force_weights,
    is_transitive,
    lipschitz_constant,
)

SupportBuilder = Callable[[WeightedDigraph, float], WeightedSupport]


def floor_log2(x: float) -> int:
    """Exact floor(log2(x)) for positive finite floats."""
    if not (x > 0 and math.isfinite(x)):
        raise ValueError(f"floor_log2 needs a positive finite value, got {x!r}")
    return math.frexp(x)[1] - 1


@dataclass
class Scale:
    i: int
    radius: float
    support: WeightedSupport
    # shortest-path distances after zeroing weights <= radius / (2n)
    forced_dist: np.ndarray


@dataclass
class ScaleFamily:
    scales: List[Scale]
    delta: float
    scale_factor: float
    dist: np.ndarray
    graph: WeightedDigraph

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    @property
    def top(self) -> int:
        return len(self.scales) - 1

    def removal_probabilities(self) -> np.ndarray:
        """Array of shape (scales, n, n) with Pr[(u, v) not in P_i]."""
        return np.stack([s.support.removal_probability() for s in self.scales])

    def raw_lipschitz(self) -> List[float]:
        """Per scale: Lipschitz constant of the support against the forced metric at half radius."""
        return [lipschitz_constant(s.support, s.forced_dist, s.radius / 2) for s in self.scales]

    def forced_lipschitz(self) -> List[float]:
        """Per scale: Lipschitz constant against the rescaled input metric at full radius."""
        return [lipschitz_constant(s.support, self.dist, s.radius) for s in self.scales]

    def to_original(self, d):
        return np.asarray(d, dtype=float) / self.scale_factor


def build_scale_family(m, g: WeightedDigraph, builder: SupportBuilder) -> ScaleFamily:
    """Forced quasipartition supports at radii 1, 2, 4, ..., 2^floor(log2 delta).

    At radius ``r`` the graph weights at most ``r / (2n)`` are zeroed and
    ``builder(forced_graph, r / 2)`` supplies the distribution, which is then
    r-bounded with respect to the unforced metric.
    """
    m = np.asarray(m, dtype=float)
    if m.shape != (g.n, g.n):
        raise ScaleMismatch("quasimetric and graph sizes differ")
    finite = m[np.isfinite(m) & (m > 0)]
    if finite.size == 0:
        raise DegenerateSpace("no finite positive distance")
    factor = math.ldexp(1.0, -floor_log2(float(finite.min())))
    dist = m * factor
    gs = g.scaled(factor)
    delta = float(finite.max()) * factor
    scales = []
    for i in range(floor_log2(delta) + 1):
        r = math.ldexp(1.0, i)
        forced = epsilon_force_weights(gs, r)
        sup = builder(forced, r / 2)
        sup.radius = r
        scales.append(Scale(i, r, sup, shortest_path_quasimetric(forced)))
    return ScaleFamily(scales, delta, factor, dist, gs)


def embed_quasiultrametric(fam: ScaleFamily, choice: Sequence[int]) -> np.ndarray:
    """Combine one chosen quasipartition per scale into a quasiultrametric.

    Every off-diagonal pair starts at ``2^(L+1)``; descending through the
    scales, a pair still at ``2^(i+1)`` that is related in ``P_i`` drops to
    ``2^i``. The diagonal is 0.
    """
    if len(choice) != len(fam.scales):
        raise ScaleMismatch(f"need {len(fam.scales)} choices, got {len(choice)}")
    top = fam.top
    out = np.full((fam.n, fam.n), math.ldexp(1.0, top + 1))
    for s in reversed(fam.scales):
        rel = s.support.items[choice[s.i]].partition.rel
        out[rel & (out == math.ldexp(1.0, s.i + 1))] = math.ldexp(1.0, s.i)
    np.fill_diagonal(out, 0.0)
    return out


def sample_choices(fam: ScaleFamily, rng: np.random.Generator, size=None):
    """Support indices drawn per scale in ascending scale order."""
    return [rng.choice(len(s.support), size=size, p=_weights(s.support)) for s in fam.scales]


def _weights(sup: WeightedSupport) -> np.ndarray:
    w = np.array([it.weight for it in sup.items])
    return w / w.sum()


def sample_quasiultrametric(fam: ScaleFamily, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return embed_quasiultrametric(fam, [int(c) for c in sample_choices(fam, rng)])


def expected_ultrametric_distance(fam: ScaleFamily, u: int, v: int) -> float:
    """Exact E[d*(u, v)] given independent per-scale draws."""
    if u == v:
        return 0.0
    p = fam.removal_probabilities()[:, u, v]
    total = 0.0
    survive = 1.0  # Pr[(u, v) related at every scale above the current one]
    for i in range(fam.top, -1, -1):
        total += math.ldexp(1.0, i + 1) * p[i] * survive
        survive *= 1.0 - p[i]
    return total + survive


@dataclass
class ConvexCombination01:
    items: List[Tuple[Quasipartition, float]]
    c: float

    def coefficients(self) -> np.ndarray:
        return np.array([a for _, a in self.items])

    def matrix(self) -> np.ndarray:
        n = self.items[0][0].n
        out = np.zeros((n, n))
        for p, a in self.items:
            out += a * (~p.rel)
        return out

    def zero_one(self, j: int) -> np.ndarray:
        return (~self.items[j][0].rel).astype(float)


def embed_01_combination(fam: ScaleFamily) -> ConvexCombination01:
    """Mix the per-scale supports with scale weights 2^(i+1) / c into 0-1 quasimetrics."""
    c = float(sum(math.ldexp(1.0, s.i + 1) for s in fam.scales))
    coef = {}
    for s in fam.scales:
        for it in s.support.items:
            coef[it.partition] = coef.get(it.partition, 0.0) + math.ldexp(1.0, s.i + 1) / c * it.weight
    return ConvexCombination01(list(coef.items()), c)


def combination_distance(phi: ConvexCombination01, u: int, v: int) -> float:
    return float(sum(a for p, a in phi.items if not p.rel[u, v]))


def quasiultrametric_to_quasipartition(um, r: float) -> Quasipartition:
    """Threshold relation {(u, v) : um[u, v] <= r}; transitive without closure."""
    um = np.asarray(um, dtype=float)
    bad = validate_quasiultrametric(um)
    if bad is not None:
        raise NotAQuasiUltrametric(f"strong triangle inequality fails at {bad}")
    rel = um <= r
    assert is_transitive(rel), "threshold of a quasiultrametric must be transitive"
    return Quasipartition(rel, check=False)


def distortion(m, m2) -> Tuple[float, float]:
    """(max m/m2, max m2/m) over pairs with both entries positive and finite.

    Both factors are floored at 1, so an embedding that only stretches has
    contraction 1 and the product is the usual distortion.
    """
    m = np.asarray(m, dtype=float)
    m2 = np.asarray(m2, dtype=float)
    if m.shape != m2.shape:
        raise ValueError("shape mismatch")
    mask = (m > 0) & (m2 > 0) & np.isfinite(m) & np.isfinite(m2)
    if not mask.any():
        return 1.0, 1.0
    a, b = m[mask], m2[mask]
    return max(1.0, float((a / b).max())), max(1.0, float((b / a).max()))


def _mid_scales(fam: ScaleFamily, d: float):
    lo = floor_log2(d)
    hi = floor_log2(2 * fam.n * d)
    return lo, hi, range(lo + 1, min(hi, fam.top) + 1)


def ultrametric_expansion_bound(fam: ScaleFamily, u: int, v: int, raw=None) -> Tuple[float, float]:
    """Upper bounds on E[d*(u, v)] / d(u, v) following the scale-by-scale argument.

    Returns ``(termwise, headline)``. ``termwise`` sums 2^(i+1)/d over scales
    up to floor(log2 d) plus 4 * beta_i over the middle scales, with beta_i
    measured per scale; ``headline`` is 4 + 4 * max(beta) * (number of
    middle-scale slots).
    """
    d = float(fam.dist[u, v])
    raw = fam.raw_lipschitz() if raw is None else raw
    lo, hi, mid = _mid_scales(fam, d)
    low = sum(math.ldexp(1.0, i + 1) for i in range(lo + 1)) / d
    termwise = low + sum(4.0 * raw[i] for i in mid)
    headline = 4.0 + 4.0 * max(raw) * (hi - lo)
    return termwise, headline


def combination_expansion_bound(fam: ScaleFamily, u: int, v: int, forced=None) -> Tuple[float, float]:
    """Like :func:`ultrametric_expansion_bound` for c * d_phi(u, v) / d(u, v), with 2 * beta_i terms."""
    d = float(fam.dist[u, v])
    forced = fam.forced_lipschitz() if forced is None else forced
    lo, hi, mid = _mid_scales(fam, d)
    low = sum(math.ldexp(1.0, i + 1) for i in range(lo + 1)) / d
    termwise = low + sum(2.0 * forced[i] for i in mid)
    headline = 4.0 + 2.0 * max(forced) * (hi - lo)
    return termwise, headline
