"""Text formats for graphs, probability maps and subdivision maps.

graph file::

    graph k3
    a b
    b c
    a c

probability file: ``u v <prob>`` with ``<prob>`` a decimal literal or ``num/den``.
subdivision file: ``u v <eta> <dir>`` with ``dir`` in {fwd, rev}.
Blank lines and ``#`` comments are ignored everywhere.
"""
from __future__ import annotations

import re
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterator, List, Tuple

from .base import InputError
from .graph import Graph, ProbGraph, SubdivisionMap, canonical_edge

_DECIMAL = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)$")
_RATIO = re.compile(r"^[+-]?\d+/\d+$")


class ParseError(InputError):
    def __init__(self, source: str, line: int, col: int, message: str):
        self.source, self.line, self.col = source, line, col
        super().__init__(f"{source}:{line}:{col}: {message}")


def _tokens(text: str) -> Iterator[Tuple[int, List[Tuple[int, str]]]]:
    """Yield (line number, [(column, token)]) for every non-empty line."""
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        toks = [(m.start() + 1, m.group()) for m in re.finditer(r"\S+", line)]
        if toks:
            yield lineno, toks


def vertex_token(tok: str):
    return int(tok) if re.fullmatch(r"-?\d+", tok) else tok


def parse_rational(tok: str) -> Fraction:
    if _DECIMAL.match(tok) or _RATIO.match(tok):
        try:
            return Fraction(tok)
        except ZeroDivisionError:
            raise ValueError("zero denominator") from None
    raise ValueError(f"not a decimal or num/den literal: {tok!r}")


def parse_graph(text: str, source: str = "<graph>") -> Tuple[str, Graph]:
    name = None
    edges, seen = [], set()
    for lineno, toks in _tokens(text):
        if name is None:
            if toks[0][1] != "graph" or len(toks) != 2:
                raise ParseError(source, lineno, toks[0][0], "expected header 'graph <name>'")
            name = toks[1][1]
            continue
        if len(toks) != 2:
            col = toks[min(2, len(toks) - 1)][0]
            raise ParseError(source, lineno, col, "expected exactly two vertex tokens 'u v'")
        u, v = vertex_token(toks[0][1]), vertex_token(toks[1][1])
        if u == v:
            raise ParseError(source, lineno, toks[1][0], f"self-loop at {u!r}")
        e = canonical_edge(u, v)
        if e in seen:
            raise ParseError(source, lineno, toks[0][0], f"duplicate edge {u} {v}")
        seen.add(e)
        edges.append(e)
    if name is None:
        raise ParseError(source, 1, 1, "empty graph file")
    return name, Graph.from_edges(edges)


def _edge_at(graph: Graph, toks, source, lineno) -> tuple:
    u, v = vertex_token(toks[0][1]), vertex_token(toks[1][1])
    try:
        e = canonical_edge(u, v)
    except InputError as exc:
        raise ParseError(source, lineno, toks[0][0], str(exc)) from None
    if e not in graph.edge_set:
        raise ParseError(source, lineno, toks[0][0], f"edge {u} {v} is not in the graph")
    return (u, v), e


def parse_probabilities(text: str, graph: Graph, source: str = "<probs>") -> ProbGraph:
    prob: Dict[tuple, Fraction] = {}
    for lineno, toks in _tokens(text):
        if len(toks) != 3:
            raise ParseError(source, lineno, toks[0][0], "expected 'u v <prob>'")
        _, e = _edge_at(graph, toks, source, lineno)
        col, tok = toks[2]
        try:
            p = parse_rational(tok)
        except ValueError as exc:
            raise ParseError(source, lineno, col, str(exc)) from None
        if not 0 <= p <= 1:
            raise ParseError(source, lineno, col, f"probability out of range: {tok}")
        if e in prob:
            raise ParseError(source, lineno, toks[0][0], "duplicate probability entry")
        prob[e] = p
    missing = graph.edge_set - prob.keys()
    if missing:
        raise ParseError(source, 1, 1, f"no probability for edges {sorted(missing, key=repr)}")
    return ProbGraph(graph, prob)


def parse_subdivision(text: str, graph: Graph, source: str = "<eta>") -> SubdivisionMap:
    eta, orient = {}, {}
    for lineno, toks in _tokens(text):
        if len(toks) != 4:
            raise ParseError(source, lineno, toks[0][0], "expected 'u v <eta> <fwd|rev>'")
        (u, v), e = _edge_at(graph, toks, source, lineno)
        col, tok = toks[2]
        if not re.fullmatch(r"\d+", tok) or int(tok) < 1:
            raise ParseError(source, lineno, col, f"eta must be a positive integer, got {tok!r}")
        col, d = toks[3]
        if d not in ("fwd", "rev"):
            raise ParseError(source, lineno, col, f"direction must be fwd or rev, got {d!r}")
        if e in eta:
            raise ParseError(source, lineno, toks[0][0], "duplicate subdivision entry")
        eta[e] = int(tok)
        orient[e] = (u, v) if d == "fwd" else (v, u)
    missing = graph.edge_set - eta.keys()
    if missing:
        raise ParseError(source, 1, 1, f"no eta for edges {sorted(missing, key=repr)}")
    return SubdivisionMap(graph, eta, orient)


def read_text(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def format_graph(name: str, graph: Graph) -> str:
    return "\n".join([f"graph {name}"] + [f"{u} {v}" for u, v in graph.edges]) + "\n"


def format_subdivision(sub: SubdivisionMap) -> str:
    lines = []
    for e in sub.base.edges:
        u, v = sub.orientation[e]
        lines.append(f"{u} {v} {sub.eta[e]} fwd")
    return "\n".join(lines) + "\n"
