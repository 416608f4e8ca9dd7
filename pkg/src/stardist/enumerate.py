"""Exhaustive generation of small graphs up to isomorphism.

Graphs on ``n`` vertices are grown from those on ``n - 1`` by adding one
vertex with every possible neighbourhood; duplicates are rejected by the
canonical certificate. Meant for ``n <= 7``; larger streams should come from
an external generator as graph6.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations

from .automorphism import canonical_form, canonical_graph
from .graph import Graph, is_connected
from .starfree import is_k1n_free


@lru_cache(maxsize=None)
def all_graphs(n: int) -> tuple[Graph, ...]:
    """One canonical representative of every graph on ``n`` vertices."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return (Graph.empty(0),)
    found: dict[tuple, Graph] = {}
    for base in all_graphs(n - 1):
        edges = base.edges()
        for r in range(n):
            for nb in combinations(range(n - 1), r):
                g = Graph.from_edges(n, edges + [(v, n - 1) for v in nb])
                cf = canonical_form(g)
                if cf.certificate not in found:
                    found[cf.certificate] = canonical_graph(g, cf)
    return tuple(sorted(found.values(), key=lambda h: (h.size, h.edges())))


def connected_graphs(n: int) -> tuple[Graph, ...]:
    return tuple(g for g in all_graphs(n) if is_connected(g))


def connected_k1n_free(n_vertices: int, n: int) -> tuple[Graph, ...]:
    return tuple(g for g in connected_graphs(n_vertices) if is_k1n_free(g, n))
