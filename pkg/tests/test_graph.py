import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import bfs_distance, diameter as oracle_diameter, edge_set, isomorphic, maximal_cliques, names, palfy_by_triples
from primegraph.families import SigmaRStar, format_graph_file, generate, parse_graph_file
from primegraph.graph import (
    GraphError,
    V,
    build_graph,
    canonical_form,
    complement,
    complement_triangle,
    connected_components,
    delete_edges,
    delete_vertices,
    diameter,
    distance,
    find_isomorphism,
    is_connected,
    is_isomorphic,
    maximal_cliques as lib_cliques,
    permute,
    relabel,
    to_dot,
)


@st.composite
def small_graphs(draw, max_vertices=7):
    n = draw(st.integers(1, max_vertices))
    labels = [f"b{i}" for i in range(1, n + 1)]
    pairs = list(combinations(labels, 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return build_graph(labels, chosen)


def test_labels_sort_by_role_then_index():
    assert sorted([V("c2"), V("c"), V("b10"), V("a3"), V("b2")]) == [V("a3"), V("b2"), V("b10"), V("c"), V("c2")]


def test_build_graph_rejects_bad_input():
    with pytest.raises(GraphError):
        build_graph(["a1", "a1"])
    with pytest.raises(GraphError):
        build_graph(["a1"], [("a1", "a1")])
    with pytest.raises(GraphError):
        build_graph(["a1"], [("a1", "b1")])
    with pytest.raises(GraphError):
        V("d1")


def test_deletions_keep_labels():
    g = generate(SigmaRStar(3, 1, 2))
    h = delete_vertices(g, ["b1"])
    assert V("b1") not in h and h.n == g.n - 1
    h = delete_edges(g, [("a1", "b1")])
    assert not h.has_edge("a1", "b1") and h.edge_count == g.edge_count - 1


def test_distance_in_starred_graph_after_deleting_b2():
    g = delete_vertices(generate(SigmaRStar(3, 1, 2)), ["b2"])
    assert distance(g, "c1", "a2") == 3
    assert diameter(g) == 3


def test_graph_file_round_trip():
    g = generate(SigmaRStar(3, 1, 2))
    text = format_graph_file(g)
    assert parse_graph_file(text).same_labelled(g)
    assert format_graph_file(parse_graph_file(text)) == text


def test_graph_file_needs_magic_line():
    with pytest.raises(GraphError):
        parse_graph_file("vertex a1\n")


def test_dot_export_is_stable():
    g = build_graph(["c", "a1", "b1"], [("b1", "c"), ("a1", "b1")])
    assert to_dot(g, "t") == 'graph "t" {\n  a1;\n  b1;\n  c;\n  a1 -- b1;\n  b1 -- c;\n}\n'


@settings(max_examples=150, deadline=None)
@given(small_graphs())
def test_cliques_match_brute_force(g):
    got = {frozenset(map(str, c)) for c in lib_cliques(g)}
    assert got == maximal_cliques(names(g), edge_set(g))


@settings(max_examples=150, deadline=None)
@given(small_graphs())
def test_palfy_triangle_matches_triple_scan(g):
    assert (complement_triangle(g) is None) == palfy_by_triples(names(g), edge_set(g))


@settings(max_examples=100, deadline=None)
@given(small_graphs())
def test_distances_match_bfs_oracle(g):
    vs, es = names(g), edge_set(g)
    for a, b in combinations(vs, 2):
        assert distance(g, a, b) == bfs_distance(vs, es, a, b)
    assert diameter(g) == oracle_diameter(vs, es)


@settings(max_examples=100, deadline=None)
@given(small_graphs(6), small_graphs(6))
def test_isomorphism_matches_permutation_search(g, h):
    assert is_isomorphic(g, h) == isomorphic(g, h)


@settings(max_examples=80, deadline=None)
@given(small_graphs(7), st.randoms(use_true_random=False))
def test_found_isomorphism_preserves_edges(g, rnd):
    order = list(range(g.n))
    rnd.shuffle(order)
    h = permute(g, order)
    m = find_isomorphism(g, h)
    assert m is not None
    assert {frozenset((m[a], m[b])) for a, b in g.edges()} == {frozenset(e) for e in h.edges()}


def test_complement_is_involution():
    g = generate(SigmaRStar(2, 1, 2))
    assert complement(complement(g)).same_labelled(g)
    assert complement(g).edge_count + g.edge_count == g.n * (g.n - 1) // 2


def test_components_of_disconnected_graph():
    g = build_graph(["a1", "a2", "b1", "b2", "c"], [("a1", "a2"), ("b1", "b2")])
    comps = sorted(sorted(map(str, c)) for c in connected_components(g))
    assert comps == [["a1", "a2"], ["b1", "b2"], ["c"]]
    assert not is_connected(g)


def test_relabel_changes_labels_not_form():
    g = generate(SigmaRStar(2, 1, 2))
    h = relabel(g, {"a1": "a9"})
    assert V("a9") in h and canonical_form(h) == canonical_form(g)


def test_canonical_form_invariant_on_family_graphs():
    rng = random.Random(7)
    g = generate(SigmaRStar(3, 2, 2))
    base = canonical_form(g)
    for _ in range(20):
        order = list(range(g.n))
        rng.shuffle(order)
        assert canonical_form(permute(g, order)) == base
