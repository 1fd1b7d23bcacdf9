import math
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oddgraph.hypergraph import (
    HGRParseError,
    Hypergraph,
    HypergraphError,
    complete_rgraph,
    connected_components,
    degrees,
    disjoint_union,
    parse_hypergraph,
    random_rgraph,
    relabel,
    serialize_hypergraph,
    unrank_combination,
)

EDGE4 = Hypergraph(4, 4, ((1, 2, 3, 4),))


@st.composite
def hypergraphs(draw, max_n=9, rs=(2, 3, 4, 5, 6)):
    r = draw(st.sampled_from(rs))
    n = draw(st.integers(min_value=r, max_value=max(r, max_n)))
    pool = list(combinations(range(1, n + 1), r))
    edges = draw(st.lists(st.sampled_from(pool), unique=True, max_size=min(len(pool), 12)))
    return Hypergraph(r, n, tuple(edges))


def test_parse_single_edge():
    assert parse_hypergraph("4 4 1\n1 2 3 4") == EDGE4


def test_parse_repeated_vertex_reports_line():
    with pytest.raises(HGRParseError, match="repeated vertex in edge, line 2"):
        parse_hypergraph("4 4 1\n1 2 2 4")


@pytest.mark.parametrize(
    "text, message",
    [
        ("4 4\n1 2 3 4", "malformed header.*line 1"),
        ("4 4 1\n1 2 3 5", "out of range.*line 2"),
        ("4 4 1\n1 2 3", "wrong arity.*line 2"),
        ("4 5 2\n1 2 3 4\n4 3 2 1", "duplicate edge.*line 3"),
        ("4 4 2\n1 2 3 4", "declared 2 edges but found 1"),
        ("4 4 1\n1 2 x 4", "non-integer token, line 2"),
        ("# comment only\n", "missing header"),
    ],
)
def test_parse_errors(text, message):
    with pytest.raises(HGRParseError, match=message):
        parse_hypergraph(text)


def test_parse_skips_comments_and_sorts_edges():
    G = parse_hypergraph("# header next\n3 5 2\n5 4 3\n# mid\n3 2 1\n")
    assert G.edges == ((1, 2, 3), (3, 4, 5))


def test_serialize_examples():
    assert serialize_hypergraph(EDGE4) == "4 4 1\n1 2 3 4\n"
    assert serialize_hypergraph(Hypergraph(3, 5)) == "3 5 0\n"
    G = Hypergraph(2, 4, ((3, 4), (1, 2)))
    assert serialize_hypergraph(G) == "2 4 2\n1 2\n3 4\n"


@given(hypergraphs())
def test_roundtrip(G):
    assert parse_hypergraph(serialize_hypergraph(G)) == G


@given(hypergraphs())
def test_degree_sum(G):
    assert degrees(G).sum() == G.r * G.m


def test_degrees_examples():
    assert degrees(EDGE4).tolist() == [1, 1, 1, 1]
    # each vertex of K_5^(4) lies in C(4,3) of the 4-subsets
    assert degrees(complete_rgraph(5, 4)).tolist() == [math.comb(4, 3)] * 5
    assert degrees(Hypergraph(4, 6)).tolist() == [0] * 6


def test_constructor_rejects_bad_edges():
    with pytest.raises(HypergraphError):
        Hypergraph(4, 4, ((1, 2, 3),))
    with pytest.raises(HypergraphError):
        Hypergraph(4, 4, ((1, 2, 3, 4), (4, 3, 2, 1)))
    with pytest.raises(HypergraphError):
        Hypergraph(2, 3, ((0, 1),))


def test_components_examples():
    assert len(connected_components(EDGE4)) == 1
    two = Hypergraph(4, 8, ((1, 2, 3, 4), (5, 6, 7, 8)))
    comps = connected_components(two)
    assert comps.blocks == ((1, 2, 3, 4), (5, 6, 7, 8))
    assert all(H == EDGE4 for H in comps.subgraphs)
    shared = Hypergraph(4, 7, ((1, 2, 3, 4), (4, 5, 6, 7)))
    assert len(connected_components(shared)) == 1


def test_components_keep_isolated_vertices_and_labels():
    G = Hypergraph(2, 6, ((2, 5), (5, 6)))
    comps = connected_components(G)
    assert comps.blocks == ((1,), (2, 5, 6), (3,), (4,))
    assert comps.subgraphs[1] == Hypergraph(2, 3, ((1, 2), (2, 3)))


@given(hypergraphs())
def test_components_partition_vertices(G):
    comps = connected_components(G)
    flat = sorted(v for b in comps.blocks for v in b)
    assert flat == list(range(1, G.n + 1))
    owner = {v: i for i, b in enumerate(comps.blocks) for v in b}
    for e in G.edges:
        assert len({owner[v] for v in e}) == 1
    assert sum(H.m for H in comps.subgraphs) == G.m


def test_disjoint_union_examples():
    U = disjoint_union(EDGE4, EDGE4)
    assert (U.n, U.m) == (8, 2)
    V = disjoint_union(EDGE4, Hypergraph(4, 3))
    assert V.edges == EDGE4.edges and V.n == 7
    with pytest.raises(HypergraphError):
        disjoint_union(EDGE4, Hypergraph(3, 3, ((1, 2, 3),)))


@given(hypergraphs(max_n=6, rs=(3,)), hypergraphs(max_n=6, rs=(3,)), hypergraphs(max_n=6, rs=(3,)))
@settings(max_examples=50)
def test_disjoint_union_components_and_associativity(A, B, C):
    AB = disjoint_union(A, B)
    assert len(connected_components(AB)) == len(connected_components(A)) + len(
        connected_components(B)
    )
    assert disjoint_union(AB, C) == disjoint_union(A, disjoint_union(B, C))


def test_random_rgraph_examples():
    assert random_rgraph(6, 4, 15, seed=3) == complete_rgraph(6, 4)
    assert random_rgraph(4, 4, 1, seed=99).edges == ((1, 2, 3, 4),)
    assert random_rgraph(9, 3, 20, seed=7) == random_rgraph(9, 3, 20, seed=7)
    assert random_rgraph(9, 3, 20, seed=7) != random_rgraph(9, 3, 20, seed=8)
    with pytest.raises(HypergraphError):
        random_rgraph(5, 4, 6, seed=0)


def test_unrank_matches_lexicographic_order():
    combos = list(combinations(range(1, 8), 3))
    assert [unrank_combination(k, 7, 3) for k in range(len(combos))] == combos


def test_relabel_preserves_structure():
    G = Hypergraph(3, 5, ((1, 2, 3), (3, 4, 5)))
    H = relabel(G, [5, 4, 3, 2, 1])
    assert H.edges == ((1, 2, 3), (3, 4, 5))
    assert np.array_equal(np.sort(degrees(H)), np.sort(degrees(G)))
