from collections import Counter

import pytest
from hypothesis import assume, given, settings

from conftest import connected_graphs
from stardist.automorphism import are_colourings_isomorphic, automorphism_group, is_distinguishing
from stardist.enumerate import connected_k1n_free
from stardist.graph import Graph, complete_graph, cycle_graph, hourglass, path_graph, star_graph
from stardist.oracle import count_nonisomorphic_distinguishing
from stardist.rooted import (
    PreconditionError,
    base_case_colouring,
    route_summary,
    theorem3_classify,
    theorem3_colourings,
    verify_outcome,
)
from stardist.starfree import is_k1n_free

NET = Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (0, 3), (1, 4), (2, 5)])
BASE = {"K2": complete_graph(2), "K3": complete_graph(3), "K4": complete_graph(4),
        "K5": complete_graph(5), "C4": cycle_graph(4), "C5": cycle_graph(5)}


def check_pairwise(g, r, cols):
    for c in cols:
        assert is_distinguishing(g, c, [r])
        assert set(c.assignment.values()) <= set(range(1, len(cols) + 1))
    for i in range(len(cols)):
        for j in range(i):
            assert not are_colourings_isomorphic(g, [r], cols[i], cols[j])


@pytest.mark.parametrize("name", sorted(BASE))
@pytest.mark.parametrize("n", [3, 4, 5])
def test_base_case_colourings(name, n):
    g = BASE[name]
    cols = base_case_colouring(g, 0, n)
    assert len(cols) == n - 1
    check_pairwise(g, 0, cols)


def test_base_case_k2_and_scheme():
    cols = base_case_colouring(complete_graph(2), 0, 3)
    assert [c.to_text() for c in cols] == ["0-1:1", "0-1:2"]
    k4 = base_case_colouring(complete_graph(4), 0, 3)
    assert sorted(Counter(c.assignment.values())[1] for c in k4) == [3, 3]


def test_base_case_rejects_other_graphs():
    with pytest.raises(PreconditionError):
        base_case_colouring(path_graph(3), 0, 3)


def test_classify_examples():
    assert theorem3_classify(path_graph(3), 1, 3) == "C3"
    assert theorem3_classify(hourglass(), 1, 3) == "C1"
    assert theorem3_classify(hourglass(), 0, 3) == "C2"
    assert theorem3_classify(hourglass(), 0, 4) == "C1"
    assert theorem3_classify(Graph.empty(1), 0, 5) == "C4"


def test_preconditions():
    with pytest.raises(PreconditionError):
        theorem3_classify(star_graph(3), 0, 3)
    with pytest.raises(PreconditionError):
        theorem3_colourings(Graph.empty(2), 0, 3)
    with pytest.raises(PreconditionError):
        theorem3_colourings(path_graph(3), 7, 3)
    with pytest.raises(PreconditionError):
        theorem3_colourings(path_graph(3), 0, 2)


def test_exceptions():
    assert theorem3_colourings(hourglass(), 0, 3).exception == "HourglassCentre"
    assert theorem3_colourings(star_graph(3), 0, 4).exception == "StarCentre"
    assert theorem3_colourings(Graph.empty(1), 0, 3).exception == "K1"


def test_star_rooted_at_leaf():
    out = theorem3_colourings(star_graph(2), 1, 3)
    assert len(out.colourings) == 2
    check_pairwise(star_graph(2), 1, list(out.colourings))
    assert automorphism_group(star_graph(3), fixed=[1]).order == 2
    out = theorem3_colourings(star_graph(3), 1, 4)
    check_pairwise(star_graph(3), 1, list(out.colourings))


@pytest.mark.parametrize("r", range(6))
def test_net_graph(r):
    out = theorem3_colourings(NET, r, 3)
    assert len(out.colourings) == 2
    check_pairwise(NET, r, list(out.colourings))


def test_verify_outcome_rejects_duplicates():
    out = theorem3_colourings(cycle_graph(5), 0, 3)
    with pytest.raises(AssertionError):
        verify_outcome(cycle_graph(5), 0, 3, [out.colourings[0], out.colourings[0]])


@pytest.mark.parametrize("n", [3, 4])
@pytest.mark.parametrize("order", range(1, 6))
def test_oracle_agreement_small(n, order):
    for g in connected_k1n_free(order, n):
        for orbit in automorphism_group(g).orbits():
            r = orbit[0]
            out = theorem3_colourings(g, r, n)
            found = count_nonisomorphic_distinguishing(g, [r], n - 1, limit=n - 1)
            assert out.is_exception == (found < n - 1)
            if not out.is_exception:
                check_pairwise(g, r, list(out.colourings))


def test_proof_branches_used_without_fallback():
    routes = Counter()
    for n in (3, 4):
        for order in range(2, 7):
            for g in connected_k1n_free(order, n):
                for orbit in automorphism_group(g).orbits():
                    routes += route_summary(theorem3_colourings(g, orbit[0], n))
    assert not [k for k in routes if k.startswith("fallback")]
    assert {"base", "split", "orbit-small", "outer"} <= set(routes)


@pytest.mark.parametrize("blocks,size,n", [(2, 3, 3), (3, 2, 4)])
def test_full_orbit_of_identical_blocks(blocks, size, n):
    # ``blocks`` cliques of ``size`` vertices all joined to the root: as many
    # isomorphic components as there are colours
    r = blocks * size
    edges = [(b * size + i, b * size + j) for b in range(blocks) for i in range(size) for j in range(i)]
    edges += [(v, r) for v in range(r)]
    g = Graph.from_edges(r + 1, edges)
    out = theorem3_colourings(g, r, n)
    assert out.route[0] == "orbit-full"
    check_pairwise(g, r, list(out.colourings))


@settings(max_examples=40, deadline=None)
@given(connected_graphs(min_n=2, max_n=9))
def test_random_instances_satisfy_outcome_invariants(g):
    n = 4
    assume(is_k1n_free(g, n))
    out = theorem3_colourings(g, 0, n)
    if not out.is_exception:
        assert len(out.colourings) == n - 1
        check_pairwise(g, 0, list(out.colourings))


def test_deterministic_output():
    a = theorem3_colourings(NET, 0, 3)
    b = theorem3_colourings(NET, 0, 3)
    assert [c.to_text() for c in a.colourings] == [c.to_text() for c in b.colourings]
