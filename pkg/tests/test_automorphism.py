from itertools import permutations

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from networkx.algorithms.isomorphism import GraphMatcher

from conftest import connected_graphs, graphs, to_nx
from stardist.automorphism import (
    are_colourings_isomorphic,
    automorphism_group,
    canonical_form,
    component_orbits,
    find_colour_preserving,
    is_automorphism,
    is_distinguishing,
    pointwise_stabilizer,
)
from stardist.enumerate import all_graphs
from stardist.graph import EdgeColouring, Graph, cycle_graph, hourglass, path_graph, petersen_graph, star_graph


def brute_automorphisms(g: Graph, c: EdgeColouring | None = None, fixed=()):
    return [p for p in permutations(range(g.n))
            if all(p[v] == v for v in fixed) and is_automorphism(g, p, c)]


def along(g: Graph, path: list[int], colours: list[int]) -> EdgeColouring:
    return EdgeColouring({(path[i], path[i + 1]): c for i, c in enumerate(colours)}, max(colours))


def test_group_order_examples():
    assert automorphism_group(cycle_graph(5)).order == 10
    assert automorphism_group(star_graph(3)).order == 6
    assert automorphism_group(petersen_graph()).order == 120


@pytest.mark.parametrize("n", range(1, 6))
def test_group_order_matches_brute_force_exhaustively(n):
    for g in all_graphs(n):
        assert automorphism_group(g).order == len(brute_automorphisms(g))


@settings(max_examples=60, deadline=None)
@given(graphs(min_n=1, max_n=8))
def test_group_order_matches_networkx(g):
    count = sum(1 for _ in GraphMatcher(to_nx(g), to_nx(g)).isomorphisms_iter())
    grp = automorphism_group(g)
    assert grp.order == count
    assert all(is_automorphism(g, p) for p in grp.generators)


def test_pointwise_stabilizer_examples():
    k13 = star_graph(3)
    assert pointwise_stabilizer(k13, [0]).order == 6
    assert pointwise_stabilizer(k13, [1]).order == 2
    assert pointwise_stabilizer(cycle_graph(5), [0]).order == 2


def test_find_colour_preserving_examples():
    p4 = path_graph(4)
    mono = along(p4, [0, 1, 2, 3], [1, 1, 1])
    assert find_colour_preserving(p4, mono) == (3, 2, 1, 0)
    assert find_colour_preserving(p4, along(p4, [0, 1, 2, 3], [1, 1, 2])) is None
    k13 = star_graph(3)
    assert find_colour_preserving(k13, EdgeColouring({(0, 1): 1, (0, 2): 2, (0, 3): 3}, 3)) is None


def test_partial_colouring_breaks_only_where_both_defined():
    p3 = path_graph(3)
    assert find_colour_preserving(p3, EdgeColouring({(0, 1): 1}, 2)) is not None
    assert find_colour_preserving(p3, EdgeColouring({(0, 1): 1, (1, 2): 2}, 2)) is None


def test_is_distinguishing_examples():
    c5 = cycle_graph(5)
    ring = [0, 1, 2, 3, 4, 0]
    # every 2-colouring of C5 has a preserving reflection; a third colour breaks it
    assert not is_distinguishing(c5, along(c5, ring, [1, 1, 1, 2, 2]))
    assert is_distinguishing(c5, EdgeColouring({(0, 1): 1, (1, 2): 1, (2, 3): 2, (3, 4): 3, (0, 4): 1}, 3))
    assert not is_distinguishing(c5, along(c5, ring, [1, 1, 2, 1, 2]))
    assert not is_distinguishing(path_graph(2), EdgeColouring({(0, 1): 1}, 1))


@settings(max_examples=60, deadline=None)
@given(graphs(min_n=1, max_n=6), st.randoms(use_true_random=False))
def test_is_distinguishing_matches_brute_force(g, rnd):
    c = EdgeColouring({e: rnd.randint(1, 2) for e in g.edges()}, 2)
    assert is_distinguishing(g, c) == (len(brute_automorphisms(g, c)) == 1)


def test_component_orbits_examples():
    assert [len(cls) for cls in component_orbits(hourglass(), [0])] == [2]
    assert [len(cls) for cls in component_orbits(star_graph(3), [0])] == [3]
    # path a-v-b plus a pendant triangle at v: {a, b} swap, the K2 stands alone
    g = Graph.from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4), (3, 4)])
    assert sorted(len(cls) for cls in component_orbits(g, [0])) == [1, 2]


@settings(max_examples=40, deadline=None)
@given(graphs(min_n=2, max_n=6), st.data())
def test_component_orbits_match_explicit_group(g, data):
    f = data.draw(st.sets(st.sampled_from(range(g.n)), max_size=2))
    elements = brute_automorphisms(g, fixed=sorted(f))
    classes = component_orbits(g, f)
    where = {frozenset(comp): i for i, cls in enumerate(classes) for comp in cls}
    for cls in classes:
        for comp in cls:
            images = {frozenset(p[v] for v in comp) for p in elements}
            assert {where[img] for img in images} == {where[frozenset(comp)]}
            same = {frozenset(c) for c in cls}
            assert same <= images


def test_colouring_isomorphism_examples():
    k13 = star_graph(3)
    c = EdgeColouring({(0, 1): 1, (0, 2): 2, (0, 3): 3}, 3)
    d = EdgeColouring({(0, 1): 2, (0, 2): 3, (0, 3): 1}, 3)
    assert are_colourings_isomorphic(k13, [0], c, c)
    assert are_colourings_isomorphic(k13, [0], c, d)
    e = EdgeColouring({(0, 1): 1, (0, 2): 1, (0, 3): 2}, 2)
    f = EdgeColouring({(0, 1): 1, (0, 2): 2, (0, 3): 2}, 2)
    assert not are_colourings_isomorphic(k13, [0], e, f)


@settings(max_examples=40, deadline=None)
@given(connected_graphs(max_n=6), st.randoms(use_true_random=False))
def test_colouring_isomorphism_matches_brute_force(g, rnd):
    fixed = [0]
    c, d = (EdgeColouring({e: rnd.randint(1, 2) for e in g.edges()}, 2) for _ in range(2))
    expected = any(all(d[tuple(sorted((p[u], p[v])))] == c[(u, v)] for u, v in g.edges())
                   for p in brute_automorphisms(g, fixed=fixed))
    assert are_colourings_isomorphic(g, fixed, c, d) == expected


@settings(max_examples=40, deadline=None)
@given(graphs(min_n=1, max_n=7), st.randoms(use_true_random=False))
def test_canonical_form_is_relabelling_invariant(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    h = g.relabel(perm)
    assert canonical_form(g).certificate == canonical_form(h).certificate
    assert (canonical_form(g).certificate == canonical_form(path_graph(g.n)).certificate) == \
        nx.is_isomorphic(to_nx(g), to_nx(path_graph(g.n)))
