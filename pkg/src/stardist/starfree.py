"""Induced stars K_{1,n} and the small exceptional graphs."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .automorphism import canonical_form
from .graph import Graph, complete_graph, cycle_graph, hourglass, is_connected, star_graph


@dataclass(frozen=True)
class StarWitness:
    centre: int
    leaves: tuple[int, ...]

    def check(self, g: Graph) -> bool:
        ls = self.leaves
        return (
            len(set(ls)) == len(ls)
            and all(g.has_edge(self.centre, x) for x in ls)
            and not any(g.has_edge(a, b) for i, a in enumerate(ls) for b in ls[i + 1:])
        )

    def __str__(self) -> str:
        return f"centre: {self.centre} leaves: {' '.join(map(str, self.leaves))}"


def _independent_subset(g: Graph, cands: list[int], size: int) -> Optional[tuple[int, ...]]:
    """Lexicographically least independent ``size``-subset of ``cands`` (sorted)."""
    chosen: list[int] = []

    def rec(start: int) -> bool:
        if len(chosen) == size:
            return True
        # bound: not enough candidates left
        if len(cands) - start < size - len(chosen):
            return False
        for i in range(start, len(cands)):
            x = cands[i]
            if any(g.has_edge(x, y) for y in chosen):
                continue
            chosen.append(x)
            if rec(i + 1):
                return True
            chosen.pop()
        return False

    return tuple(chosen) if rec(0) else None


def star_at(g: Graph, v: int, n: int) -> Optional[tuple[int, ...]]:
    """Least ``n`` pairwise non-adjacent neighbours of ``v``, if any."""
    if g.degree(v) < n:
        return None
    return _independent_subset(g, list(g.adj[v]), n)


def find_induced_star(g: Graph, n: int) -> Optional[StarWitness]:
    """Lowest-centre, lexicographically least induced K_{1,n}, or None."""
    if n < 1:
        raise ValueError("n must be at least 1")
    for v in range(g.n):
        leaves = star_at(g, v, n)
        if leaves is not None:
            return StarWitness(v, leaves)
    return None


def is_k1n_free(g: Graph, n: int) -> bool:
    return find_induced_star(g, n) is None


@dataclass(frozen=True)
class SpecialKind:
    tag: str  # K1 K2 C3 C4 C5 K4 K5 Star Hourglass None
    m: Optional[int] = None
    centre: Optional[int] = None

    def __str__(self) -> str:
        return f"Star({self.m})" if self.tag == "Star" else self.tag


_FIXED = {
    "K2": complete_graph(2),
    "C3": complete_graph(3),
    "C4": cycle_graph(4),
    "C5": cycle_graph(5),
    "K4": complete_graph(4),
    "K5": complete_graph(5),
    "Hourglass": hourglass(),
}
_CERTS: dict[tuple, str] = {}


def _cert(g: Graph) -> tuple:
    return canonical_form(g).certificate


def classify_special(g: Graph) -> SpecialKind:
    if not is_connected(g):
        raise ValueError("classify_special needs a connected graph")
    if g.n == 1:
        return SpecialKind("K1")
    degs = [g.degree(v) for v in range(g.n)]
    m = g.n - 1
    if m >= 2 and g.size == m and degs.count(m) == 1 and degs.count(1) == m:
        return SpecialKind("Star", m, degs.index(m))
    if g.n > 5 or g.n == 0:
        return SpecialKind("None")
    if not _CERTS:
        _CERTS.update({_cert(h): tag for tag, h in _FIXED.items()})
    tag = _CERTS.get(_cert(g), "None")
    if tag == "Hourglass":
        return SpecialKind(tag, centre=degs.index(4))
    return SpecialKind(tag)


def is_star_centre(g: Graph, r: int, m: int) -> bool:
    kind = classify_special(g)
    return kind.tag == "Star" and kind.m == m and kind.centre == r


def is_hourglass_centre(g: Graph, r: int) -> bool:
    kind = classify_special(g)
    return kind.tag == "Hourglass" and kind.centre == r


def reference_graph(kind: SpecialKind) -> Graph:
    if kind.tag == "K1":
        return Graph.empty(1)
    if kind.tag == "Star":
        return star_graph(kind.m)
    return _FIXED[kind.tag]
