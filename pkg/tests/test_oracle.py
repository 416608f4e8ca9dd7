from itertools import product

import pytest
from hypothesis import given, settings

from conftest import connected_graphs
from stardist.automorphism import are_colourings_isomorphic, is_distinguishing
from stardist.graph import EdgeColouring, Graph, complete_graph, cycle_graph, path_graph, star_graph
from stardist.oracle import (
    Budget,
    BudgetExceeded,
    count_nonisomorphic_distinguishing,
    distinguishing_index,
    enumerate_distinguishing,
    nonisomorphic_distinguishing,
)


def brute_distinguishing(g: Graph, k: int, fixed=()):
    edges = g.edges()
    for vec in product(range(1, k + 1), repeat=len(edges)):
        c = EdgeColouring(dict(zip(edges, vec)), k)
        if is_distinguishing(g, c, fixed):
            yield c


def brute_classes(g: Graph, fixed, k: int) -> int:
    reps: list[EdgeColouring] = []
    for c in brute_distinguishing(g, k, fixed):
        if not any(are_colourings_isomorphic(g, fixed, c, d) for d in reps):
            reps.append(c)
    return len(reps)


def test_distinguishing_index_examples():
    assert distinguishing_index(complete_graph(2)).no_finite
    assert str(distinguishing_index(complete_graph(2))) == "D'=infinity"
    assert distinguishing_index(cycle_graph(5)).value == 3
    assert distinguishing_index(star_graph(3)).value == 3


def test_bounded_search_reports_exceeds():
    res = distinguishing_index(cycle_graph(5), max_k=2)
    assert res.value is None and res.exceeds == 2 and str(res) == "D'>2"


def test_distinguishing_index_rejects_bad_input():
    with pytest.raises(ValueError):
        distinguishing_index(Graph.empty(2))
    with pytest.raises(ValueError):
        distinguishing_index(Graph.empty(1))


def test_budget_overrun_is_an_error():
    with pytest.raises(BudgetExceeded):
        distinguishing_index(complete_graph(5), budget=Budget(nodes=5))


def test_enumerate_examples():
    assert list(enumerate_distinguishing(complete_graph(2), 3)) == []
    got = [c.vector(path_graph(3)) for c in enumerate_distinguishing(path_graph(3), 2)]
    assert got == [(1, 2), (2, 1)]
    assert list(enumerate_distinguishing(cycle_graph(5), 2)) == []


@settings(max_examples=40, deadline=None)
@given(connected_graphs(min_n=2, max_n=5))
def test_enumeration_matches_brute_force(g):
    if g.size > 7:
        return
    got = [c.vector(g) for c in enumerate_distinguishing(g, 2)]
    assert got == [c.vector(g) for c in brute_distinguishing(g, 2)]


@settings(max_examples=30, deadline=None)
@given(connected_graphs(min_n=2, max_n=6))
def test_index_witness_and_minimality(g):
    res = distinguishing_index(g)
    if res.value is not None:
        assert is_distinguishing(g, res.witness)
        assert res.value == 1 or not list(enumerate_distinguishing(g, res.value - 1))
        # monotone: one more colour never hurts
        assert next(iter(enumerate_distinguishing(g, res.value + 1)), None) is not None


def test_class_count_examples():
    # the leaf swap identifies (1,2) with (2,1): one class, not two
    assert count_nonisomorphic_distinguishing(path_graph(3), [1], 2) == 1
    assert count_nonisomorphic_distinguishing(complete_graph(2), [0], 2) == 2
    assert count_nonisomorphic_distinguishing(star_graph(3), [0], 2) == 0


@settings(max_examples=30, deadline=None)
@given(connected_graphs(min_n=1, max_n=5))
def test_class_count_matches_brute_force(g):
    if g.size > 7:
        return
    assert count_nonisomorphic_distinguishing(g, [0], 2) == brute_classes(g, [0], 2)


def test_representatives_are_pairwise_non_isomorphic():
    g = cycle_graph(5)
    reps = nonisomorphic_distinguishing(g, [0], 2, limit=100)
    assert len(reps) == count_nonisomorphic_distinguishing(g, [0], 2)
    for i, c in enumerate(reps):
        assert is_distinguishing(g, c, [0])
        assert not any(are_colourings_isomorphic(g, [0], c, d) for d in reps[:i])
