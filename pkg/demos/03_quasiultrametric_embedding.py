"""From quasipartitions at every scale to quasiultrametrics and 0-1 mixtures.

Distances are rescaled by a power of two so the smallest positive one lies
in [1, 2). One forced quasipartition per scale 2^i is combined into a
random quasiultrametric; the same supports give a convex combination of
0-1 quasimetrics, the rounding substrate for directed cuts.
"""

import numpy as np

from quasicut.embedding import (
    build_scale_family,
    distortion,
    embed_01_combination,
    expected_ultrametric_distance,
    quasiultrametric_to_quasipartition,
    sample_quasiultrametric,
)
from quasicut.generators import random_bidirected_tree
from quasicut.graph import shortest_path_quasimetric, validate_quasiultrametric
from quasicut.trees import tree_quasipartition_support

np.set_printoptions(precision=3, suppress=True)

# %% Scale ladder on a tree
tree = random_bidirected_tree(6, np.random.default_rng(11), zero_prob=0.0)
d = shortest_path_quasimetric(tree)
fam = build_scale_family(d, tree, lambda g, r: tree_quasipartition_support(g, r, 0))
print(f"rescale factor {fam.scale_factor}, scales {[s.radius for s in fam.scales]}")

# %% One random quasiultrametric
um = sample_quasiultrametric(fam, seed=4)
print(um)
print("strong triangle inequality holds:", validate_quasiultrametric(um) is None)
con, exp = distortion(fam.dist, um)
print(f"contraction {con}, expansion {exp:.3f}")

# %% Expected stretch, computed exactly from per-scale removal probabilities
ratios = [expected_ultrametric_distance(fam, u, v) / fam.dist[u, v]
          for u in range(fam.n) for v in range(fam.n) if u != v]
print(f"E[d*]/d ranges over [{min(ratios):.3f}, {max(ratios):.3f}]")

# %% Thresholding a quasiultrametric gives a transitive relation directly
for cut in sorted(set(um[um > 0].tolist())):
    p = quasiultrametric_to_quasipartition(um, cut)
    print(f"threshold {cut:g}: {len(p.pairs())} related pairs")

# %% The 0-1 convex combination
phi = embed_01_combination(fam)
print(f"{len(phi.items)} 0-1 quasimetrics, coefficients sum {phi.coefficients().sum():.12f}")
scaled = phi.c * phi.matrix()
mask = fam.dist > 0
print("c * d_phi >= d everywhere:", bool((scaled[mask] >= fam.dist[mask]).all()))
