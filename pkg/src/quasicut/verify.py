"""Acceptance checks over seeded random corpora.

Each ``check_*`` function returns a :class:`CheckResult`; :func:`run_all`
runs every check and is what ``quasicut verify`` and the acceptance tests
call. Probability bounds are compared in exact rational arithmetic: corpus
weights are multiples of 1/4 and radii are multiples of 1/8, so every
distance and z-interval endpoint is an exact binary fraction.
"""

from __future__ import annotations

import math
import os
import subprocess
import sys
import tempfile
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional

import numpy as np

from .cuts import CutInstance, harmonic, solve_multicut, solve_sparsest_cut
from .embedding import (
    build_scale_family,
    combination_expansion_bound,
    embed_01_combination,
    embed_quasiultrametric,
    expected_ultrametric_distance,
    quasiultrametric_to_quasipartition,
    sample_choices,
    ultrametric_expansion_bound,
)
from .formats import format_decomposition, format_graph, format_pairs
from .generators import cut_corpus, random_bidirected_tree, random_partial_2tree
from .graph import shortest_path_quasimetric, validate_quasimetric, validate_quasiultrametric
from .oracle import (
    bfs_closure,
    brute_force_multicut,
    brute_force_sparsest_cut,
    exact_removal_fractions,
)
from .quasipartition import is_r_bounded, is_transitive, pipeline_forced_support
from .treewidth import (
    _SeparatorCutter,
    lipschitz_bound,
    resolve_hierarchy,
    treewidth_quasipartition_support,
)
from .trees import _TreeCutter, tree_quasipartition_support


@dataclass
class CheckResult:
    criterion: int
    name: str
    passed: bool
    detail: str
    stats: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.criterion:>2} {self.name}: {self.detail}"


@dataclass
class TreeCase:
    graph: object
    r: float
    root: int

    @property
    def dist(self):
        return shortest_path_quasimetric(self.graph)


@dataclass
class TreewidthCase:
    graph: object
    decomposition: object
    r: float
    use_decomposition: bool

    @property
    def dist(self):
        return shortest_path_quasimetric(self.graph)

    @property
    def sep(self):
        return self.decomposition if self.use_decomposition else None


def _radius(rng, dist) -> float:
    finite = dist[np.isfinite(dist) & (dist > 0)]
    top = float(finite.max()) if finite.size else 1.0
    # multiples of 1/8 between 1/8 and ~1.5x the largest finite distance
    return int(rng.integers(1, max(2, int(12 * top)) + 1)) / 8


def tree_corpus(count: int = 100, seed: int = 2024, max_n: int = 12) -> List[TreeCase]:
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        g = random_bidirected_tree(int(rng.integers(2, max_n + 1)), rng)
        out.append(TreeCase(g, _radius(rng, shortest_path_quasimetric(g)), int(rng.integers(g.n))))
    return out


def treewidth_corpus(count: int = 100, seed: int = 4048, max_n: int = 8) -> List[TreewidthCase]:
    rng = np.random.default_rng(seed)
    out = []
    for k in range(count):
        g, td = random_partial_2tree(int(rng.integers(2, max_n + 1)), rng, zero_prob=0.1)
        out.append(TreewidthCase(g, td, _radius(rng, shortest_path_quasimetric(g)), k % 2 == 0))
    return out


def _tree_builder(root: int = 0):
    return lambda g, r: tree_quasipartition_support(g, r, root)


def _tw_builder(hier):
    return lambda g, r: treewidth_quasipartition_support(g, r, hier)


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t0
        return res
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _quasipartition_ok(p, dist, r) -> bool:
    return bool(p.rel.diagonal().all()) and is_transitive(p.rel) and is_r_bounded(p, dist, r)


@_timed
def check_structural(trees, tws, samples: int = 20, seed: int = 1) -> CheckResult:
    """Every support item and every sampled quasipartition is reflexive, transitive and r-bounded."""
    rng = np.random.default_rng(seed)
    bad = checked = 0
    for case in trees:
        cutter = _TreeCutter(case.graph, case.r, case.root)
        sup = tree_quasipartition_support(case.graph, case.r, case.root)
        for it in sup:
            checked += 1
            bad += not _quasipartition_ok(it.partition, cutter.dist, case.r)
        for z in rng.random(samples) * cutter.step:
            p = cutter(float(z))
            checked += 1
            bad += not _quasipartition_ok(p, cutter.dist, case.r) or sup.locate(float(z)).partition != p
    for case in tws:
        cutter = _SeparatorCutter(case.graph, case.r, case.sep)
        sup = treewidth_quasipartition_support(case.graph, case.r, cutter.hier)
        for it in sup:
            checked += 1
            bad += not _quasipartition_ok(it.partition, cutter.dist, case.r)
        for z in rng.random(samples) * cutter.step:
            p = cutter(float(z))
            checked += 1
            bad += not _quasipartition_ok(p, cutter.dist, case.r) or sup.locate(float(z)).partition != p
    return CheckResult(1, "structural soundness", bad == 0,
                       f"{checked} quasipartitions over {len(trees)} trees and {len(tws)} treewidth graphs, {bad} violations",
                       {"checked": checked, "violations": bad})


def _exact_ratio_violations(sup, dist, r, beta) -> tuple:
    """Pairs with p * r > beta * d in exact arithmetic, and the largest float ratio."""
    p = exact_removal_fractions(sup)
    n = dist.shape[0]
    worst = 0.0
    bad = 0
    fr = Fraction(r)
    for u in range(n):
        for v in range(n):
            d = dist[u, v]
            if u == v or not (0 < d < math.inf):
                continue
            if p[u][v] * fr > Fraction(beta) * Fraction(d):
                bad += 1
            worst = max(worst, float(p[u][v] * fr / Fraction(d)))
    return bad, worst


@_timed
def check_tree_lipschitz(trees) -> CheckResult:
    """Pr[(u,v) not in P] * r / d(u,v) <= 2 on every pair of every tree, exactly."""
    bad = 0
    worst = 0.0
    for case in trees:
        sup = tree_quasipartition_support(case.graph, case.r, case.root)
        b, w = _exact_ratio_violations(sup, case.dist, case.r, 2)
        bad += b
        worst = max(worst, w)
    return CheckResult(2, "tree Lipschitz <= 2", bad == 0,
                       f"max ratio {worst:.6f} over {len(trees)} trees, {bad} violations",
                       {"max_ratio": worst, "violations": bad})


@_timed
def check_treewidth_lipschitz(tws) -> CheckResult:
    """Pr <= 4 t (floor(log2 n) + 1) d / r exactly; support size < n^2."""
    bad = big = 0
    worst = 0.0
    for case in tws:
        hier = resolve_hierarchy(case.graph, case.sep)
        sup = treewidth_quasipartition_support(case.graph, case.r, hier)
        n = case.graph.n
        bound = lipschitz_bound(hier.max_separator, n)
        b, w = _exact_ratio_violations(sup, case.dist, case.r, bound)
        bad += b
        worst = max(worst, w / bound if bound else 0.0)
        big += len(sup) >= max(n * n, 2)
    return CheckResult(3, "treewidth Lipschitz and support size", bad == 0 and big == 0,
                       f"max ratio/bound {worst:.6f}, {bad} bound violations, {big} oversized supports",
                       {"max_ratio_over_bound": worst, "violations": bad, "oversized": big})


@_timed
def check_forcing(trees, tws) -> CheckResult:
    """After zeroing light edges and halving the radius, close pairs are never cut and Lipschitz at most doubles."""
    bad_force = bad_lip = bad_bound = 0
    cases = [(c.graph, c.r, _tree_builder(c.root), 2.0) for c in trees]
    for c in tws:
        hier = resolve_hierarchy(c.graph, c.sep)
        cases.append((c.graph, c.r, _tw_builder(hier), lipschitz_bound(hier.max_separator, c.graph.n)))
    for g, r, builder, beta in cases:
        dist = shortest_path_quasimetric(g)
        sup = pipeline_forced_support(g, r, builder)
        close = dist <= r / (2 * g.n)
        for it in sup:
            bad_force += bool((close & ~it.partition.rel).any())
            bad_bound += not is_r_bounded(it.partition, dist, r)
        b, _ = _exact_ratio_violations(sup, dist, r, 2 * beta)
        bad_lip += b
    ok = bad_force == 0 and bad_lip == 0 and bad_bound == 0
    return CheckResult(4, "epsilon-forcing", ok,
                       f"{len(cases)} instances: {bad_force} forced-pair cuts, {bad_lip} Lipschitz violations, "
                       f"{bad_bound} r-bound violations",
                       {"forced_violations": bad_force, "lipschitz_violations": bad_lip, "bound_violations": bad_bound})


def _families(trees, tws, limit: Optional[int] = None):
    fams = []
    for c in trees[:limit]:
        fams.append(("tree", build_scale_family(c.dist, c.graph, _tree_builder(c.root)), 2.0))
    for c in tws[:limit]:
        hier = resolve_hierarchy(c.graph, c.sep)
        d = c.dist
        if not (np.isfinite(d) & (d > 0)).any():
            continue
        beta = lipschitz_bound(hier.max_separator, c.graph.n)
        fams.append(("treewidth", build_scale_family(d, c.graph, _tw_builder(hier)), beta))
    return fams


def _mc_ultrametric(fam, trials: int, seed: int):
    """Monte Carlo mean and standard error of d*(u, v) for all pairs."""
    rng = np.random.default_rng(seed)
    picks = sample_choices(fam, rng, size=trials)
    out = np.full((trials, fam.n, fam.n), math.ldexp(1.0, fam.top + 1))
    for s in reversed(fam.scales):
        rels = np.stack([it.partition.rel for it in s.support.items])[picks[s.i]]
        out[rels & (out == math.ldexp(1.0, s.i + 1))] = math.ldexp(1.0, s.i)
    idx = np.arange(fam.n)
    out[:, idx, idx] = 0.0
    return out.mean(axis=0), out.std(axis=0, ddof=1) / math.sqrt(trials)


@_timed
def check_ultrametric(fams, samples: int = 5, mc_families: int = 6, trials: int = 100_000,
                      seed: int = 7) -> CheckResult:
    """Strong triangle, non-contraction, exact expectation under the scale-sum bound, Monte Carlo agreement."""
    rng = np.random.default_rng(seed)
    strong = contract = over_term = over_head = mc_bad = tree_beta = 0
    worst = 0.0
    for kind, fam, beta in fams:
        finite = np.isfinite(fam.dist)
        for _ in range(samples):
            um = embed_quasiultrametric(fam, [int(c) for c in sample_choices(fam, rng)])
            strong += validate_quasiultrametric(um) is not None
            contract += bool((um[finite] < fam.dist[finite]).any())
        raw = fam.raw_lipschitz()
        if kind == "tree":
            tree_beta += max(raw) > 2.0
        for u in range(fam.n):
            for v in range(fam.n):
                d = fam.dist[u, v]
                if u == v or not (0 < d < math.inf):
                    continue
                ratio = expected_ultrametric_distance(fam, u, v) / d
                term, head = ultrametric_expansion_bound(fam, u, v, raw)
                _, theory = ultrametric_expansion_bound(fam, u, v, [beta] * len(fam.scales))
                over_term += ratio > term + 1e-9
                over_head += term > head + 1e-9 or head > theory + 1e-9
                worst = max(worst, ratio)
    for k, (_, fam, _) in enumerate(fams[:mc_families]):
        mean, se = _mc_ultrametric(fam, trials, seed + k)
        for u in range(fam.n):
            for v in range(fam.n):
                if u == v:
                    continue
                e = expected_ultrametric_distance(fam, u, v)
                tol = 3 * se[u, v] if se[u, v] > 0 else 1e-12
                mc_bad += abs(mean[u, v] - e) > tol
    ok = not (strong or contract or over_term or over_head or mc_bad or tree_beta)
    return CheckResult(5, "quasiultrametric embedding", ok,
                       f"{len(fams)} families: {strong} strong-triangle, {contract} contraction, "
                       f"{over_term} termwise, {over_head} headline, {mc_bad} Monte Carlo, {tree_beta} tree-beta "
                       f"violations; max E[d*]/d = {worst:.4f}",
                       {"max_expected_ratio": worst})


@_timed
def check_combination(fams) -> CheckResult:
    """Coefficients sum to 1, c * d_phi >= d exactly, c * d_phi / d under the scale-sum bound."""
    coef_bad = tri_bad = lower_bad = upper_bad = 0
    worst = 0.0
    for _, fam, _ in fams:
        phi = embed_01_combination(fam)
        coef_bad += abs(phi.coefficients().sum() - 1.0) > 1e-12
        tri_bad += sum(validate_quasimetric(phi.zero_one(j)) is not None for j in range(len(phi.items)))
        exact = [exact_removal_fractions(s.support) for s in fam.scales]
        dphi = phi.matrix()
        forced = fam.forced_lipschitz()
        for u in range(fam.n):
            for v in range(fam.n):
                d = fam.dist[u, v]
                if u == v or not (0 < d < math.inf):
                    continue
                scaled = sum(Fraction(2 ** (s.i + 1)) * exact[s.i][u][v] for s in fam.scales)
                lower_bad += scaled < Fraction(d)
                ratio = phi.c * dphi[u, v] / d
                term, head = combination_expansion_bound(fam, u, v, forced)
                upper_bad += ratio > term + 1e-9 or term > head + 1e-9
                worst = max(worst, ratio)
    ok = not (coef_bad or tri_bad or lower_bad or upper_bad)
    return CheckResult(6, "0-1 convex combination", ok,
                       f"{len(fams)} families: {coef_bad} coefficient-sum, {tri_bad} triangle, "
                       f"{lower_bad} lower-bound, {upper_bad} upper-bound violations; max c*d_phi/d = {worst:.4f}",
                       {"max_scaled_ratio": worst})


@_timed
def check_roundtrip(fams, samples: int = 3, seed: int = 11) -> CheckResult:
    """Thresholds of sampled quasiultrametrics are transitive without closure and r-bounded."""
    rng = np.random.default_rng(seed)
    bad = checked = 0
    for _, fam, _ in fams:
        top = math.ldexp(1.0, fam.top + 1)
        all_finite = bool(np.isfinite(fam.dist).all())
        for _ in range(samples):
            um = embed_quasiultrametric(fam, [int(c) for c in sample_choices(fam, rng)])
            vals = sorted(set(um.ravel().tolist()))
            rs = vals + [(a + b) / 2 for a, b in zip(vals, vals[1:])] + [vals[-1] * 2]
            for r in rs:
                if r <= 0 or (r >= top and not all_finite):
                    continue
                checked += 1
                try:
                    p = quasiultrametric_to_quasipartition(um, r)
                except AssertionError:
                    bad += 1
                    continue
                bad += not (is_transitive(p.rel) and is_r_bounded(p, fam.dist, r))
    return CheckResult(7, "quasiultrametric to quasipartition", bad == 0,
                       f"{checked} thresholds, {bad} violations", {"checked": checked, "violations": bad})


@_timed
def check_sparsest_cut(corpus) -> CheckResult:
    """LP <= brute-force optimum <= rounded <= measured distortion x LP."""
    a = b = c = 0
    worst = 0.0
    for k, (inst, td) in enumerate(corpus):
        res = solve_sparsest_cut(inst, td if k % 2 == 0 else None)
        opt = brute_force_sparsest_cut(inst).sparsity
        lp = res.report["lp_value"]
        a += lp > opt * (1 + 1e-7) + 1e-12
        b += not res.report.get("certified") or res.sparsity > res.report["distortion"] * lp * (1 + 1e-9) + 1e-12
        c += res.sparsity < opt * (1 - 1e-12) - 1e-12
        if opt > 0:
            worst = max(worst, res.sparsity / opt)
    ok = not (a or b or c)
    return CheckResult(8, "sparsest-cut pipeline", ok,
                       f"{len(corpus)} instances: {a} LP>OPT, {b} uncertified, {c} below-OPT; "
                       f"max rounded/OPT = {worst:.4f}", {"max_ratio_to_opt": worst})


@_timed
def check_multicut(corpus) -> CheckResult:
    """Multicut separates every pair and obeys max-ratio x harmonic x OPT."""
    sep_bad = bound_bad = 0
    worst = 0.0
    for k, (inst, td) in enumerate(corpus):
        res = solve_multicut(inst, td if k % 2 == 0 else None)
        g = inst.graph
        cut = set(res.edges)
        reach = bfs_closure(g.n, [(u, v) for i, (u, v, _) in enumerate(g.edges) if i not in cut])
        sep_bad += any(reach[s, t] for s, t, _ in inst.pairs)
        alpha = 1.0
        for rnd in res.report["rounds"]:
            sub = CutInstance(g, [(inst.pairs[j][0], inst.pairs[j][1], 1.0)
                                  for j in range(len(inst.pairs)) if j in set(_remaining(res, rnd))])
            opt = brute_force_sparsest_cut(sub).sparsity
            got = rnd["capacity"] / len(rnd["separated"])
            alpha = max(alpha, got / opt if opt > 0 else (1.0 if got == 0 else math.inf))
        best = brute_force_multicut(inst).capacity
        bound = alpha * harmonic(len(inst.pairs)) * best
        bound_bad += res.capacity > bound * (1 + 1e-9) + 1e-12
        if best > 0:
            worst = max(worst, res.capacity / best)
    ok = not (sep_bad or bound_bad)
    return CheckResult(9, "multicut reduction", ok,
                       f"{len(corpus)} instances: {sep_bad} unseparated, {bound_bad} bound violations; "
                       f"max capacity/OPT = {worst:.4f}", {"max_ratio_to_opt": worst})


def _remaining(res, rnd):
    """Pair indices still open at the start of round ``rnd``."""
    done = set()
    for r in res.report["rounds"]:
        if r is rnd:
            break
        done.update(r["separated"])
    return [j for j in range(rnd["remaining"] + len(done)) if j not in done]


def _cli(args, cwd):
    env = dict(os.environ)
    src = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    env["PYTHONPATH"] = src + os.pathsep + env.get("PYTHONPATH", "")
    return subprocess.run([sys.executable, "-m", "quasicut", *args], cwd=cwd, env=env,
                          capture_output=True, timeout=600)


@_timed
def check_determinism(extra_commands=(), seed: int = 99) -> CheckResult:
    """Every CLI command prints byte-identical output on two runs with the same seed."""
    rng = np.random.default_rng(seed)
    tree = random_bidirected_tree(7, rng)
    (inst, td), = cut_corpus(1, seed)
    with tempfile.TemporaryDirectory() as tmp:
        files = {"tree.txt": format_graph(tree), "g.txt": format_graph(inst.graph),
                 "pairs.txt": format_pairs(inst.pairs), "td.txt": format_decomposition(td)}
        for name, text in files.items():
            with open(os.path.join(tmp, name), "w") as fh:
                fh.write(text)
        commands = [
            ["partition", "tree.txt", "--r", "3", "--seed", "7"],
            ["partition", "g.txt", "--r", "2", "--seed", "7", "--decomposition", "td.txt"],
            ["partition", "g.txt", "--r", "2", "--seed", "7", "--treewidth", "3"],
            ["embed", "tree.txt", "--seed", "5"],
            ["embed", "g.txt", "--seed", "5", "--decomposition", "td.txt"],
            ["sparsest-cut", "g.txt", "--pairs", "pairs.txt"],
            ["sparsest-cut", "g.txt", "--pairs", "pairs.txt", "--decomposition", "td.txt"],
            ["multicut", "g.txt", "--pairs", "pairs.txt", "--seed", "3"],
            *[list(c) for c in extra_commands],
        ]
        bad = []
        for cmd in commands:
            a, b = _cli(cmd, tmp), _cli(cmd, tmp)
            if a.returncode != 0 or a.stdout != b.stdout or a.returncode != b.returncode:
                bad.append(" ".join(cmd[:1]) + f" (exit {a.returncode}/{b.returncode})")
    return CheckResult(10, "CLI determinism", not bad,
                       f"{len(commands)} commands run twice, {len(bad)} differ" + (f": {bad}" if bad else ""),
                       {"commands": len(commands), "differ": len(bad)})


def run_all(trials: int = 100_000, seed: int = 0, determinism: bool = True,
            progress: Optional[Callable[[CheckResult], None]] = None) -> List[CheckResult]:
    """Run the full acceptance battery on the bundled seeded corpora."""
    trees = tree_corpus(100, seed + 2024)
    tws = treewidth_corpus(100, seed + 4048)
    cuts = cut_corpus(50, seed + 8096)
    results = []

    def record(res):
        results.append(res)
        if progress is not None:
            progress(res)

    record(check_structural(trees, tws))
    record(check_tree_lipschitz(trees))
    record(check_treewidth_lipschitz(tws))
    record(check_forcing(trees, tws))
    fams = _families(trees, tws, limit=40)
    record(check_ultrametric(fams, trials=trials))
    record(check_combination(fams))
    record(check_roundtrip(fams))
    record(check_sparsest_cut(cuts))
    record(check_multicut(cuts))
    if determinism:
        record(check_determinism())
    return results
