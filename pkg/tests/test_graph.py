import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from wcount.base import CapacityError, CountingMode, InputError
from wcount.graph import (Graph, ProbGraph, SubdivisionMap, complete_graph, count_brute,
                          cycle_graph, expand_probabilities, is_edge_cover, is_matching,
                          path_graph, pr_brute, pr_subdivision, pr_subdivision_brute, subdivide)

from conftest import probabilities

M, EC = CountingMode.MATCHING, CountingMode.EDGE_COVER
K3 = complete_graph(3)


def test_graph_rejects_self_loop_and_parallel_edges():
    with pytest.raises(InputError):
        Graph.from_edges([(1, 1)])
    with pytest.raises(InputError):
        Graph.from_edges([(1, 2), (2, 1)])
    with pytest.raises(InputError):
        Graph((1,), ((1, 2),))


def test_is_matching_examples():
    assert is_matching(K3, [])
    assert not is_matching(K3, [(0, 1), (1, 2)])
    p3 = path_graph(3)
    assert is_matching(p3, [(0, 1), (2, 3)])
    with pytest.raises(InputError):
        is_matching(K3, [(0, 5)])


def test_is_edge_cover_examples():
    assert is_edge_cover(K3, K3.edges)
    assert not is_edge_cover(K3, [(0, 1)])
    assert not is_edge_cover(path_graph(2), [(0, 1)])
    with pytest.raises(InputError):
        is_edge_cover(K3, [(7, 8)])


def test_count_brute_examples():
    assert count_brute(K3, M) == 4
    assert count_brute(K3, EC) == 4
    assert count_brute(path_graph(1), M) == 2


def test_count_brute_degenerate_graphs():
    empty = Graph((), ())
    assert count_brute(empty, M) == 1
    assert count_brute(empty, EC) == 1
    lonely = Graph((1,), ())
    assert count_brute(lonely, M) == 1
    assert count_brute(lonely, EC) == 0


def test_count_brute_cap():
    with pytest.raises(CapacityError):
        count_brute(complete_graph(8), M)
    assert count_brute(complete_graph(8), M, cap=28) == 764


def test_pr_brute_examples():
    assert pr_brute(ProbGraph.uniform(K3), M) == Fraction(4, 8)
    assert pr_brute(ProbGraph.uniform(cycle_graph(5), 0), M) == 1
    assert pr_brute(ProbGraph.uniform(path_graph(2), 1), EC) == 1


def test_prob_graph_validation():
    with pytest.raises(InputError):
        ProbGraph(K3, {(0, 1): Fraction(1, 2)})
    with pytest.raises(InputError):
        ProbGraph(K3, {e: Fraction(3, 2) for e in K3.edges})


def test_subdivide_examples():
    g, paths = subdivide(SubdivisionMap.uniform(path_graph(1), 1))
    assert g.edges == path_graph(1).edges
    g, paths = subdivide(SubdivisionMap.uniform(path_graph(1), 3))
    assert g.m == 3 and len(g.vertices) == 4
    assert paths[(0, 1)][0] == 0 and paths[(0, 1)][-1] == 1


def test_subdivide_k3_by_two_is_six_cycle():
    g, _ = subdivide(SubdivisionMap.uniform(K3, 2))
    assert g.m == 6 and all(g.degree(v) == 2 for v in g.vertices)
    # connected 2-regular graph on 6 vertices
    seen, stack = set(), [g.vertices[0]]
    while stack:
        v = stack.pop()
        if v in seen:
            continue
        seen.add(v)
        stack.extend(u for e in g.incident(v) for u in e if u != v)
    assert len(seen) == 6
    for mode in (M, EC):
        assert count_brute(g, mode) == count_brute(cycle_graph(6), mode)


def test_subdivision_orientation_follows_direction():
    sub = SubdivisionMap(path_graph(1), {(0, 1): 3}, {(0, 1): (1, 0)})
    _, paths = subdivide(sub)
    assert paths[(0, 1)][0] == 1 and paths[(0, 1)][-1] == 0
    with pytest.raises(InputError):
        SubdivisionMap(path_graph(1), {(0, 1): 3}, {(0, 1): (0, 2)})
    with pytest.raises(InputError):
        SubdivisionMap(path_graph(1), {(0, 1): 0})


def test_pr_subdivision_single_edge_eta4():
    sub = SubdivisionMap.uniform(path_graph(1), 4)
    half = Fraction(1, 2)
    per = {(0, 1): [half] * 4}
    assert pr_subdivision(sub, per, M) == Fraction(8, 16)
    assert pr_subdivision_brute(sub, per, M) == Fraction(8, 16)


def test_pr_subdivision_length_mismatch():
    sub = SubdivisionMap.uniform(path_graph(1), 4)
    with pytest.raises(InputError):
        pr_subdivision(sub, {(0, 1): [Fraction(1, 2)] * 3}, M)


def _random_graph(rng, max_edges):
    pairs = list(combinations(range(5), 2))
    rng.shuffle(pairs)
    return Graph.from_edges(pairs[:rng.randint(1, max_edges)])


def test_pr_subdivision_eta1_equals_brute_all_graphs_small():
    rng = random.Random(3)
    for _ in range(40):
        g = _random_graph(rng, 10)
        probs = {e: Fraction(rng.randint(0, 9), 9) for e in g.edges}
        sub = SubdivisionMap.uniform(g, 1)
        per = {e: [p] for e, p in probs.items()}
        for mode in (M, EC):
            assert pr_subdivision(sub, per, mode) == pr_brute(ProbGraph(g, probs), mode)


def test_pr_subdivision_randomized_200():
    rng = random.Random(5)
    for _ in range(200):
        g = _random_graph(rng, 4)
        eta = {e: rng.randint(1, 4) for e in g.edges}
        orient = {e: (e if rng.random() < .5 else e[::-1]) for e in g.edges}
        sub = SubdivisionMap(g, eta, orient)
        per = {e: [Fraction(rng.randint(0, 7), 7) for _ in range(k)] for e, k in eta.items()}
        for mode in (M, EC):
            assert pr_subdivision(sub, per, mode) == pr_subdivision_brute(sub, per, mode)


def test_pr_subdivision_k3_eta2_and_mixed_path():
    rng = random.Random(9)
    sub = SubdivisionMap.uniform(K3, 2)
    per = {e: [Fraction(rng.randint(1, 30), 31) for _ in range(2)] for e in K3.edges}
    assert pr_subdivision(sub, per, M) == pr_brute(expand_probabilities(sub, per), M)
    p2 = path_graph(2)
    sub = SubdivisionMap(p2, {(0, 1): 2, (1, 2): 3})
    per = {(0, 1): [Fraction(1, 3), Fraction(2, 7)], (1, 2): [Fraction(1, 5)] * 3}
    assert pr_subdivision(sub, per, EC) == pr_brute(expand_probabilities(sub, per), EC)


def test_half_probabilities_give_count_over_two_power():
    for g in (K3, path_graph(3), cycle_graph(4)):
        for mode in (M, EC):
            assert pr_brute(ProbGraph.uniform(g), mode) == Fraction(count_brute(g, mode), 2 ** g.m)


@given(st.lists(probabilities(), min_size=3, max_size=3))
def test_isolated_vertex(ps):
    pg = ProbGraph(K3, dict(zip(K3.edges, ps)))
    bigger = ProbGraph(K3.with_vertex(99), dict(zip(K3.edges, ps)))
    assert pr_brute(bigger, M) == pr_brute(pg, M)
    assert pr_brute(bigger, EC) == 0
