"""Line-oriented text formats for graphs, terminal pairs and tree decompositions.

Graph files::

    # comment
    n 4
    e 0 1 2.5

Pairs files hold ``t <s> <t> <dem>`` lines; decomposition files hold
``b <id> <v...>`` and ``link <id> <id>`` lines.
"""

from __future__ import annotations

from typing import List, Tuple

from .errors import InvalidGraph, ParseError
from .graph import WeightedDigraph
from .treewidth import TreeDecomposition


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line.split()


def _num(tok: str, no: int, kind=float):
    try:
        return kind(tok)
    except ValueError:
        raise ParseError("Syntax", no, f"bad number {tok!r}") from None


def parse_graph_file(text: str) -> WeightedDigraph:
    n = None
    edges = []
    seen = {}
    for no, toks in _lines(text):
        if toks[0] == "n" and len(toks) == 2:
            if n is not None:
                raise ParseError("Syntax", no, "repeated vertex count")
            n = _num(toks[1], no, int)
            if n <= 0:
                raise ParseError("Syntax", no, "vertex count must be positive")
        elif toks[0] == "e" and len(toks) == 4:
            if n is None:
                raise ParseError("Syntax", no, "edge before 'n' line")
            u, v, w = _num(toks[1], no, int), _num(toks[2], no, int), _num(toks[3], no)
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise ParseError("BadVertexId", no, f"edge ({u}, {v})")
            if (u, v) in seen:
                raise ParseError("DuplicateEdge", no, f"({u}, {v}) first seen at line {seen[(u, v)]}")
            if not (w >= 0 and w != float("inf")):
                raise ParseError("Syntax", no, f"weight {w!r} must be finite and non-negative")
            seen[(u, v)] = no
            edges.append((u, v, w))
        else:
            raise ParseError("Syntax", no, f"unrecognised line {' '.join(toks)!r}")
    if n is None:
        raise ParseError("Syntax", 0, "missing 'n' line")
    try:
        return WeightedDigraph(n, edges)
    except InvalidGraph as exc:
        raise ParseError("Syntax", 0, str(exc)) from None


def format_graph(g: WeightedDigraph) -> str:
    out = [f"n {g.n}"]
    out += [f"e {u} {v} {w!r}" for u, v, w in g.edges]
    return "\n".join(out) + "\n"


def parse_pairs_file(text: str) -> List[Tuple[int, int, float]]:
    pairs = []
    for no, toks in _lines(text):
        if toks[0] != "t" or len(toks) != 4:
            raise ParseError("Syntax", no, "expected 't <s> <t> <dem>'")
        s, t, dem = _num(toks[1], no, int), _num(toks[2], no, int), _num(toks[3], no)
        if s == t:
            raise ParseError("SameEndpoints", no, f"pair ({s}, {t})")
        if s < 0 or t < 0:
            raise ParseError("Syntax", no, "negative vertex id")
        if not (dem >= 0 and dem != float("inf")):
            raise ParseError("Syntax", no, f"demand {dem!r} must be finite and non-negative")
        pairs.append((s, t, dem))
    return pairs


def format_pairs(pairs) -> str:
    return "".join(f"t {s} {t} {float(d)!r}\n" for s, t, d in pairs)


def parse_decomposition_file(text: str) -> TreeDecomposition:
    bags = {}
    links = []
    for no, toks in _lines(text):
        if toks[0] == "b" and len(toks) >= 2:
            bid = _num(toks[1], no, int)
            if bid in bags:
                raise ParseError("Syntax", no, f"bag {bid} defined twice")
            bags[bid] = [_num(x, no, int) for x in toks[2:]]
        elif toks[0] == "link" and len(toks) == 3:
            links.append((_num(toks[1], no, int), _num(toks[2], no, int)))
        else:
            raise ParseError("Syntax", no, f"unrecognised line {' '.join(toks)!r}")
    if sorted(bags) != list(range(len(bags))):
        raise ParseError("Syntax", 0, "bag ids must be 0..k-1")
    return TreeDecomposition([bags[i] for i in range(len(bags))], links)


def format_decomposition(td: TreeDecomposition) -> str:
    out = [f"b {i} " + " ".join(str(v) for v in sorted(b)) for i, b in enumerate(td.bags)]
    out += [f"link {a} {b}" for a, b in td.tree_edges]
    return "\n".join(x.rstrip() for x in out) + "\n"
