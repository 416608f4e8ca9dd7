import pytest
from hypothesis import given, settings

from conftest import graphs
from stardist.graph import (
    EdgeColouring,
    Graph,
    GraphFormatError,
    complete_graph,
    components,
    cycle_graph,
    disjoint_union,
    induced_subgraph,
    is_connected,
    parse_edge_list,
    parse_graph6,
    path_graph,
    petersen_graph,
    write_edge_list,
    write_graph6,
)


def test_graph6_small_headers():
    assert parse_graph6("@") == Graph.empty(1)
    assert parse_graph6("A_") == complete_graph(2)
    assert write_graph6(Graph.empty(1)) == "@"
    assert write_graph6(complete_graph(2)) == "A_"


def test_graph6_hand_decoded():
    # "D?{": n=5; bits 000000 111100 -> columns (0,1) (0,2) (1,2) (0,3) (1,3) (2,3) (0,4) ...
    g = parse_graph6("D?{")
    assert g.n == 5
    assert g.edges() == [(0, 4), (1, 4), (2, 4), (3, 4)]


@pytest.mark.parametrize("bad", ["", "A", "A~", "A\x20", "@?"])
def test_graph6_rejects_malformed(bad):
    with pytest.raises(GraphFormatError):
        parse_graph6(bad)


@given(graphs(max_n=12))
def test_graph6_round_trip(g):
    text = write_graph6(g)
    assert parse_graph6(text) == g
    assert write_graph6(parse_graph6(text)) == text


@given(graphs(max_n=9))
def test_edge_list_round_trip(g):
    assert parse_edge_list(write_edge_list(g)) == g


@given(graphs(max_n=9))
def test_adjacency_symmetric_and_loop_free(g):
    for v in g.vertices():
        assert v not in g.neighbours(v)
        assert all(g.has_edge(w, v) for w in g.neighbours(v))


def test_invalid_adjacency_rejected():
    with pytest.raises(ValueError):
        Graph(2, ((1,), ()))
    with pytest.raises(ValueError):
        Graph(1, ((0,),))


def test_induced_subgraph_examples():
    sub, _ = induced_subgraph(cycle_graph(5), [0, 1, 2])
    assert sub == path_graph(3)
    sub, _ = induced_subgraph(complete_graph(4), [1, 3])
    assert sub == complete_graph(2)
    p = petersen_graph()
    sub, _ = induced_subgraph(p, [0, *p.neighbours(0)])
    assert sorted(sub.degree(v) for v in sub.vertices()) == [1, 1, 1, 3]


def test_induced_subgraph_out_of_range():
    with pytest.raises(ValueError):
        induced_subgraph(path_graph(3), [0, 5])


@given(graphs(max_n=8))
def test_induced_subgraph_on_all_vertices_is_identity(g):
    sub, mapping = induced_subgraph(g, g.vertices())
    assert sub == g
    assert all(mapping[v] == v for v in g.vertices())


def test_components_examples():
    assert sorted(map(len, components(Graph.empty(2)))) == [1, 1]
    assert len(components(cycle_graph(5))) == 1
    assert sorted(map(len, components(disjoint_union(cycle_graph(3), path_graph(2))))) == [2, 3]


def test_is_connected_conventions():
    assert is_connected(cycle_graph(5))
    assert not is_connected(Graph.empty(2))
    assert is_connected(Graph.empty(1))
    assert is_connected(Graph.empty(0))


def test_colouring_range_and_text():
    c = EdgeColouring({(1, 0): 2, (1, 2): 1}, 2)
    assert c[(0, 1)] == 2
    assert c.to_text() == "0-1:2,1-2:1"
    assert EdgeColouring.from_text(c.to_text()) == c
    with pytest.raises(ValueError):
        EdgeColouring({(0, 1): 3}, 2)
