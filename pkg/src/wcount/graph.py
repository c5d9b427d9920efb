"""Graphs, probabilistic graphs, subdivisions and the two exact oracles.

``pr_brute`` enumerates edge subsets; ``pr_subdivision`` collapses every
subdivided edge into its path behavior and only enumerates how each path
uses its two end vertices.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Hashable, Iterable, Mapping, Sequence, Tuple

from .base import CapacityError, CountingMode, InputError
from .paths import behavior, exclusive_usage

Vertex = Hashable
Edge = Tuple[Vertex, Vertex]

DEFAULT_EDGE_CAP = 24


def vertex_key(v) -> tuple:
    """Total order over mixed vertex ids (ints, strings, tuples)."""
    if isinstance(v, bool):
        return (2, repr(v))
    if isinstance(v, int):
        return (0, v, "")
    if isinstance(v, str):
        return (1, 0, v)
    return (2, repr(v))


def canonical_edge(u, v) -> Edge:
    if u == v:
        raise InputError(f"self-loop on vertex {u!r}")
    return (u, v) if vertex_key(u) <= vertex_key(v) else (v, u)


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph; edges are stored as canonical sorted pairs."""

    vertices: Tuple[Vertex, ...]
    edges: Tuple[Edge, ...]

    def __post_init__(self):
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise InputError("duplicate vertex ids")
        seen = set()
        for u, v in self.edges:
            e = canonical_edge(u, v)
            if e != (u, v):
                raise InputError(f"edge {(u, v)!r} is not in canonical orientation")
            if u not in vset or v not in vset:
                raise InputError(f"edge {(u, v)!r} uses an undeclared vertex")
            if e in seen:
                raise InputError(f"parallel edge {e!r}")
            seen.add(e)

    @classmethod
    def from_edges(cls, edges: Iterable[Sequence], vertices: Iterable = ()) -> "Graph":
        canon = []
        seen = set()
        verts = list(vertices)
        for u, v in edges:
            e = canonical_edge(u, v)
            if e in seen:
                raise InputError(f"parallel edge {e!r}")
            seen.add(e)
            canon.append(e)
        for u, v in canon:
            verts.extend((u, v))
        uniq = sorted(set(verts), key=vertex_key)
        return cls(tuple(uniq), tuple(sorted(canon, key=lambda e: (vertex_key(e[0]), vertex_key(e[1])))))

    def __contains__(self, edge) -> bool:
        return canonical_edge(*edge) in self.edge_set

    @property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    def degree(self, v) -> int:
        return sum(1 for e in self.edges if v in e)

    def incident(self, v) -> list[Edge]:
        return [e for e in self.edges if v in e]

    def with_vertex(self, v) -> "Graph":
        return Graph.from_edges(self.edges, list(self.vertices) + [v])

    @property
    def m(self) -> int:
        return len(self.edges)


def path_graph(n: int) -> Graph:
    return Graph.from_edges([(i, i + 1) for i in range(n)])


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges([(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges([(i, j) for i in range(n) for j in range(i + 1, n)])


@dataclass(frozen=True)
class ProbGraph:
    graph: Graph
    prob: Mapping[Edge, Fraction]

    def __post_init__(self):
        canon = {}
        for e, p in self.prob.items():
            ce = canonical_edge(*e)
            if ce not in self.graph.edge_set:
                raise InputError(f"probability given for unknown edge {e!r}")
            canon[ce] = p
        missing = self.graph.edge_set - canon.keys()
        if missing:
            raise InputError(f"no probability for edges {sorted(missing, key=repr)!r}")
        for e, p in canon.items():
            if isinstance(p, (int, Fraction)) and not 0 <= p <= 1:
                raise InputError(f"probability out of range on {e!r}: {p}")
        object.__setattr__(self, "prob", canon)

    @classmethod
    def uniform(cls, graph: Graph, p=Fraction(1, 2)) -> "ProbGraph":
        return cls(graph, {e: Fraction(p) for e in graph.edges})


@dataclass(frozen=True)
class SubdivisionMap:
    """η-subdivision data: a base graph, path lengths and edge orientations."""

    base: Graph
    eta: Mapping[Edge, int]
    orientation: Mapping[Edge, Edge] = field(default=None)

    def __post_init__(self):
        eta = {}
        for e, k in self.eta.items():
            ce = canonical_edge(*e)
            if ce not in self.base.edge_set:
                raise InputError(f"eta given for unknown edge {e!r}")
            if not isinstance(k, int) or k < 1:
                raise InputError(f"eta must be a positive integer on {e!r}, got {k!r}")
            eta[ce] = k
        missing = self.base.edge_set - eta.keys()
        if missing:
            raise InputError(f"no eta for edges {sorted(missing, key=repr)!r}")
        orient = {e: e for e in self.base.edges}
        for e, d in (self.orientation or {}).items():
            ce = canonical_edge(*e)
            if ce not in orient:
                raise InputError(f"orientation given for unknown edge {e!r}")
            if canonical_edge(*d) != ce:
                raise InputError(f"{d!r} is not a direction of edge {e!r}")
            orient[ce] = tuple(d)
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "orientation", orient)

    @classmethod
    def uniform(cls, base: Graph, k: int, orientation=None) -> "SubdivisionMap":
        return cls(base, {e: k for e in base.edges}, orientation)

    def expanded_edge_count(self) -> int:
        return sum(self.eta.values())


def subdivide(sub: SubdivisionMap) -> tuple[Graph, Dict[Edge, list]]:
    """Build sub(H, η); also return each base edge's vertex path in orientation order."""
    edges = []
    paths = {}
    for e in sub.base.edges:
        src, dst = sub.orientation[e]
        k = sub.eta[e]
        inner = [("~", e[0], e[1], j) for j in range(1, k)]
        walk = [src] + inner + [dst]
        paths[e] = walk
        edges.extend(zip(walk, walk[1:]))
    return Graph.from_edges(edges, sub.base.vertices), paths


def expand_probabilities(sub: SubdivisionMap, per_path: Mapping[Edge, Sequence]) -> ProbGraph:
    """Turn per-path probability lists into a ProbGraph on sub(H, η)."""
    graph, paths = subdivide(sub)
    prob = {}
    for e, walk in paths.items():
        probs = _path_probs(sub, per_path, e)
        for (u, v), p in zip(zip(walk, walk[1:]), probs):
            prob[canonical_edge(u, v)] = p
    return ProbGraph(graph, prob)


def _path_probs(sub: SubdivisionMap, per_path: Mapping[Edge, Sequence], e: Edge) -> list:
    probs = per_path.get(e)
    if probs is None:
        raise InputError(f"no probabilities for base edge {e!r}")
    if len(probs) != sub.eta[e]:
        raise InputError(
            f"base edge {e!r}: expected {sub.eta[e]} probabilities, got {len(probs)}")
    return list(probs)


# --------------------------------------------------------------------------
# predicates and brute-force oracles
# --------------------------------------------------------------------------

def _check_subset(graph: Graph, subset: Iterable) -> list[Edge]:
    out = []
    eset = graph.edge_set
    for e in subset:
        ce = canonical_edge(*e)
        if ce not in eset:
            raise InputError(f"unknown edge {e!r}")
        out.append(ce)
    return out


def is_matching(graph: Graph, subset: Iterable) -> bool:
    used = set()
    for u, v in _check_subset(graph, subset):
        if u in used or v in used:
            return False
        used.update((u, v))
    return True


def is_edge_cover(graph: Graph, subset: Iterable) -> bool:
    covered = set()
    for u, v in _check_subset(graph, subset):
        covered.update((u, v))
    return covered >= set(graph.vertices)


def _weighted_sum(graph: Graph, present: Sequence, absent: Sequence,
                  mode: CountingMode, one):
    """Sum over satisfying subsets of prod(present[e] if e in S else absent[e]).

    Depth-first over the canonical edge order; branches are cut as soon as a
    vertex is used twice (matching) or a vertex's last incident edge has been
    decided without covering it (edge cover).
    """
    edges = graph.edges
    index = {v: i for i, v in enumerate(graph.vertices)}
    n, m = len(graph.vertices), len(edges)
    ends = [(index[u], index[v]) for u, v in edges]
    last = [-1] * n
    for j, (a, b) in enumerate(ends):
        last[a] = last[b] = j
    if mode is CountingMode.EDGE_COVER and any(x < 0 for x in last):
        return one * 0
    closing = [[] for _ in range(m)]
    for v, j in enumerate(last):
        if j >= 0:
            closing[j].append(v)
    used = [0] * n
    matching = mode is CountingMode.MATCHING

    def rec(j, acc):
        if j == m:
            return acc
        a, b = ends[j]
        total = None
        w_in, w_out = present[j], absent[j]
        if w_in != 0 and (not matching or (used[a] == 0 and used[b] == 0)):
            used[a] += 1
            used[b] += 1
            if all(used[v] for v in closing[j]) or matching:
                r = rec(j + 1, acc * w_in)
                total = r
            used[a] -= 1
            used[b] -= 1
        if w_out != 0 and (matching or all(used[v] for v in closing[j])):
            r = rec(j + 1, acc * w_out)
            total = r if total is None else total + r
        return one * 0 if total is None else total

    return rec(0, one)


def _cap(graph: Graph, cap: int):
    if graph.m > cap:
        raise CapacityError(f"{graph.m} edges exceeds the enumeration cap of {cap}")


def count_brute(graph: Graph, mode: CountingMode = CountingMode.MATCHING,
                cap: int = DEFAULT_EDGE_CAP) -> int:
    """Number of edge subsets that are matchings (or edge covers)."""
    _cap(graph, cap)
    ones = [1] * graph.m
    return _weighted_sum(graph, ones, ones, mode, 1)


def pr_brute(pg: ProbGraph, mode: CountingMode = CountingMode.MATCHING,
             cap: int = DEFAULT_EDGE_CAP):
    """Probability that the random edge subset is a matching (or edge cover)."""
    graph = pg.graph
    _cap(graph, cap)
    probs = [pg.prob[e] for e in graph.edges]
    probs = [Fraction(p) if isinstance(p, int) else p for p in probs]
    return _weighted_sum(graph, probs, [1 - p for p in probs], mode, Fraction(1))


def pr_subdivision(sub: SubdivisionMap, per_path: Mapping[Edge, Sequence],
                   mode: CountingMode = CountingMode.MATCHING):
    """Exact Pr on sub(H, η), collapsing each subdivided edge to its behavior."""
    base = sub.base
    usage = []
    for e in base.edges:
        probs = _path_probs(sub, per_path, e)
        u = exclusive_usage(behavior(probs, mode))
        src, dst = sub.orientation[e]
        usage.append((src, dst, u))
    return _usage_sum(base, usage, mode)


def _usage_sum(base: Graph, usage: list, mode: CountingMode):
    """Sum over end-usage assignments consistent at every base vertex."""
    index = {v: i for i, v in enumerate(base.vertices)}
    n, m = len(base.vertices), len(usage)
    last = [-1] * n
    ends = []
    for j, (src, dst, _) in enumerate(usage):
        a, b = index[src], index[dst]
        ends.append((a, b))
        last[a] = last[b] = j
    matching = mode is CountingMode.MATCHING
    if not matching and any(x < 0 for x in last):
        return Fraction(0)
    closing = [[] for _ in range(m)]
    for v, j in enumerate(last):
        if j >= 0:
            closing[j].append(v)
    used = [0] * n

    def rec(j, acc):
        if j == m:
            return acc
        a, b = ends[j]
        u = usage[j][2]
        total = None
        for (x, y), w in u.items():
            if w == 0:
                continue
            used[a] += x
            used[b] += y
            ok = (used[a] <= 1 and used[b] <= 1) if matching else \
                all(used[v] for v in closing[j])
            if ok:
                r = rec(j + 1, acc * w)
                total = r if total is None else total + r
            used[a] -= x
            used[b] -= y
        return Fraction(0) if total is None else total

    return rec(0, Fraction(1))


def pr_subdivision_brute(sub: SubdivisionMap, per_path: Mapping[Edge, Sequence],
                         mode: CountingMode = CountingMode.MATCHING,
                         cap: int = DEFAULT_EDGE_CAP):
    """Reference oracle: expand the subdivision and enumerate."""
    return pr_brute(expand_probabilities(sub, per_path), mode, cap)
