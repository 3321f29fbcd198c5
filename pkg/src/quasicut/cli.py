"""Command-line front end: ``python -m quasicut <command> ...``.

Every command writes one JSON object (sorted keys, floats with 17
significant digits, infinities as the string ``"inf"``) to stdout or
``--out``. Exit codes: 0 success, 1 bad input, 2 internal failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from typing import List, Optional

import numpy as np

from .cuts import CutInstance, CutResult, solve_multicut, solve_sparsest_cut
from .embedding import (
    build_scale_family,
    distortion,
    embed_01_combination,
    embed_quasiultrametric,
    sample_choices,
)
from .errors import InputError, QuasicutError, SeparatorFailure
from .formats import parse_decomposition_file, parse_graph_file, parse_pairs_file
from .graph import is_bidirected_tree, shortest_path_quasimetric
from .treewidth import (
    _SeparatorCutter,
    exhaustive_provider,
    resolve_hierarchy,
    treewidth_quasipartition_support,
)
from .trees import _TreeCutter, tree_quasipartition_support

COMMANDS = ("partition", "embed", "sparsest-cut", "multicut", "verify")


def dumps(obj) -> str:
    """Deterministic JSON: sorted keys, ``%.17g`` floats, ``"inf"`` for infinities."""
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return '"nan"'
        if math.isinf(x):
            return '"inf"' if x > 0 else '"-inf"'
        if x == 0:
            return "0.0"
        s = format(x, ".17g")
        return s if any(c in s for c in ".en") else s + ".0"
    if isinstance(obj, str):
        import json
        return json.dumps(obj)
    if isinstance(obj, dict):
        items = sorted((str(k), v) for k, v in obj.items())
        return "{" + ", ".join(f"{dumps(k)}: {dumps(v)}" for k, v in items) + "}"
    if isinstance(obj, np.ndarray):
        return dumps(obj.tolist())
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quasicut", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("input", nargs="?", help="graph file (not used by verify)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--r", type=float, help="radius for partition")
    p.add_argument("--treewidth", type=int, help="use exhaustive separators of at most this size")
    p.add_argument("--decomposition", help="tree decomposition file")
    p.add_argument("--pairs", help="terminal pairs file")
    p.add_argument("--trials", type=int, default=100_000, help="Monte Carlo trials for verify")
    p.add_argument("--out", help="write JSON here instead of stdout")
    return p


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _separator(args, g):
    if args.decomposition and args.treewidth is not None:
        raise InputError("give at most one of --decomposition and --treewidth")
    if args.decomposition:
        return parse_decomposition_file(_read(args.decomposition))
    if args.treewidth is not None:
        if args.treewidth < 1:
            raise InputError("--treewidth must be positive")
        return exhaustive_provider(args.treewidth)
    return None


def _use_tree(args, g) -> bool:
    return args.decomposition is None and args.treewidth is None and is_bidirected_tree(g)


def _graph(args):
    if not args.input:
        raise InputError(f"{args.command} needs an input graph file")
    return parse_graph_file(_read(args.input))


def _seed(args) -> int:
    if not 0 <= args.seed < 2 ** 64:
        raise InputError("--seed must be a 64-bit unsigned integer")
    return args.seed


def cmd_partition(args) -> dict:
    g = _graph(args)
    if args.r is None or not (args.r > 0 and math.isfinite(args.r)):
        raise InputError("partition needs a positive finite --r")
    rng = np.random.default_rng(_seed(args))
    z = float(rng.random()) * args.r / 2
    if _use_tree(args, g):
        cutter = _TreeCutter(g, args.r, 0)
        algo, extra = "tree", {"root": 0}
    else:
        cutter = _SeparatorCutter(g, args.r, _separator(args, g))
        algo = "separator"
        extra = {"separator_size": cutter.hier.max_separator, "recursion_depth": cutter.hier.depth}
    p = cutter(z)
    d = cutter.dist
    related = [d[u, v] for u, v in p.pairs()]
    worst = max(related, default=0.0)
    return {
        "command": "partition", "algorithm": algo, "n": g.n, "r": args.r, "seed": args.seed, "z": z,
        "pairs": [list(x) for x in p.pairs()],
        "certificate": {"r_bounded": bool(worst <= args.r), "max_related_distance": worst},
        **extra,
    }


def cmd_embed(args) -> dict:
    g = _graph(args)
    m = shortest_path_quasimetric(g)
    if _use_tree(args, g):
        builder, algo = (lambda h, r: tree_quasipartition_support(h, r, 0)), "tree"
    else:
        hier = resolve_hierarchy(g, _separator(args, g))
        builder, algo = (lambda h, r: treewidth_quasipartition_support(h, r, hier)), "separator"
    fam = build_scale_family(m, g, builder)
    rng = np.random.default_rng(_seed(args))
    um = embed_quasiultrametric(fam, [int(c) for c in sample_choices(fam, rng)])
    phi = embed_01_combination(fam)
    um_con, um_exp = distortion(fam.dist, um)
    c_con, c_exp = distortion(fam.dist, phi.c * phi.matrix())
    return {
        "command": "embed", "algorithm": algo, "n": g.n, "seed": args.seed,
        "scale_factor": fam.scale_factor, "scales": len(fam.scales),
        "quasiultrametric": fam.to_original(um),
        "combination": {
            "c": phi.c, "size": len(phi.items),
            "scaled_distance": fam.to_original(phi.c * phi.matrix()),
        },
        "distortion": {
            "quasiultrametric": {"contraction": um_con, "expansion": um_exp},
            "combination": {"contraction": c_con, "expansion": c_exp},
            "per_scale_lipschitz": fam.forced_lipschitz(),
        },
    }


def _cut_json(inst: CutInstance, res: CutResult, command: str) -> dict:
    report = dict(res.report)
    return {
        "command": command,
        "edges": [list(e) for e in res.edge_pairs(inst.graph)],
        "edge_ids": list(res.edges),
        "capacity": res.capacity,
        "separated": list(res.separated),
        "demand": res.demand,
        "sparsity": res.sparsity,
        "certificate": report,
    }


def _instance(args) -> CutInstance:
    g = _graph(args)
    if not args.pairs:
        raise InputError(f"{args.command} needs --pairs")
    return CutInstance(g, parse_pairs_file(_read(args.pairs)))


def cmd_sparsest_cut(args) -> dict:
    inst = _instance(args)
    return _cut_json(inst, solve_sparsest_cut(inst, _separator(args, inst.graph)), "sparsest-cut")


def cmd_multicut(args) -> dict:
    inst = _instance(args)
    return _cut_json(inst, solve_multicut(inst, _separator(args, inst.graph)), "multicut")


def cmd_verify(args) -> dict:
    from .verify import run_all

    if args.trials < 1000:
        raise InputError("--trials must be at least 1000")

    def show(res):
        print(res.line(), file=sys.stderr, flush=True)

    results = run_all(trials=args.trials, seed=_seed(args), progress=show)
    table = [{"criterion": r.criterion, "name": r.name, "passed": r.passed, "detail": r.detail}
             for r in results]
    return {"command": "verify", "passed": all(r.passed for r in results), "checks": table}


HANDLERS = {
    "partition": cmd_partition,
    "embed": cmd_embed,
    "sparsest-cut": cmd_sparsest_cut,
    "multicut": cmd_multicut,
    "verify": cmd_verify,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out = HANDLERS[args.command](args)
    except (InputError, SeparatorFailure) as exc:
        print(f"quasicut: input error: {exc}", file=sys.stderr)
        return 1
    except (AssertionError, QuasicutError) as exc:
        print(f"quasicut: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    text = dumps(out) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if out.get("passed", True) else 2


if __name__ == "__main__":
    sys.exit(main())
