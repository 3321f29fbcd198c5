"""Directed multicut by repeated sparsest cuts.

Each round gives the still-connected pairs unit demand, cuts them with the
sparsest-cut pipeline, and adds the cut to the answer. The capacity is
compared with the exact multicut found by enumerating edge subsets.
"""

from quasicut.cuts import solve_multicut
from quasicut.generators import cut_corpus
from quasicut.oracle import brute_force_multicut

for inst, td in cut_corpus(8, 21):
    res = solve_multicut(inst, td)
    best = brute_force_multicut(inst)
    print(f"n={inst.graph.n} pairs={len(inst.pairs)} rounds={len(res.report['rounds'])} "
          f"capacity={res.capacity:.2f} optimum={best.capacity:.2f} H={res.report['harmonic']:.3f}")
