"""Finite simple graphs, edge colourings and graph6 I/O."""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

Edge = tuple[int, int]

BLUE, RED, YELLOW = 1, 2, 3


class GraphFormatError(ValueError):
    pass


def norm_edge(u: int, v: int) -> Edge:
    if u == v:
        raise ValueError(f"loop at vertex {u}")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    ``adj[v]`` is the strictly increasing tuple of neighbours of ``v``.
    """

    n: int
    adj: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.n < 0 or len(self.adj) != self.n:
            raise ValueError("adjacency length does not match n")
        for v, nb in enumerate(self.adj):
            for i, w in enumerate(nb):
                if not 0 <= w < self.n:
                    raise ValueError(f"neighbour {w} of {v} out of range")
                if w == v:
                    raise ValueError(f"loop at vertex {v}")
                if i and nb[i - 1] >= w:
                    raise ValueError(f"neighbour list of {v} not strictly increasing")
        for v, nb in enumerate(self.adj):
            for w in nb:
                if v not in self._nbset(w):
                    raise ValueError(f"asymmetric adjacency {v}-{w}")

    def _nbset(self, v: int) -> frozenset[int]:
        cache = self.__dict__.get("_sets")
        if cache is None:
            cache = tuple(frozenset(nb) for nb in self.adj)
            object.__setattr__(self, "_sets", cache)
        return cache[v]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {u}-{v} out of range for n={n}")
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(n, tuple(tuple(sorted(s)) for s in nbrs))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, tuple(() for _ in range(n)))

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._nbset(u)

    def neighbours(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    def neighbour_set(self, v: int) -> frozenset[int]:
        return self._nbset(v)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def max_degree(self) -> int:
        return max((len(nb) for nb in self.adj), default=0)

    def edges(self) -> list[Edge]:
        """All edges ``(u, v)`` with ``u < v`` in lexicographic order."""
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    @property
    def size(self) -> int:
        return sum(len(nb) for nb in self.adj) // 2

    def vertices(self) -> range:
        return range(self.n)

    def relabel(self, perm: list[int] | tuple[int, ...]) -> "Graph":
        """Graph with vertex ``v`` renamed to ``perm[v]``."""
        return Graph.from_edges(self.n, ((perm[u], perm[v]) for u, v in self.edges()))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edges()})"


def induced_subgraph(g: Graph, s: Iterable[int]) -> tuple[Graph, dict[int, int]]:
    """Induced subgraph on ``s``; new ids follow increasing old ids."""
    verts = sorted(set(s))
    for v in verts:
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} out of range")
    mapping = {v: i for i, v in enumerate(verts)}
    edges = [(mapping[u], mapping[w]) for u in verts for w in g.adj[u] if w in mapping and u < w]
    return Graph.from_edges(len(verts), edges), mapping


def components(g: Graph, within: Iterable[int] | None = None) -> list[list[int]]:
    """Connected components (sorted vertex lists, ordered by least vertex)."""
    allowed = set(range(g.n)) if within is None else set(within)
    seen: set[int] = set()
    out = []
    for s in sorted(allowed):
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        stack = [s]
        while stack:
            v = stack.pop()
            for w in g.adj[v]:
                if w in allowed and w not in seen:
                    seen.add(w)
                    comp.append(w)
                    stack.append(w)
        out.append(sorted(comp))
    return out


def is_connected(g: Graph) -> bool:
    return len(components(g)) <= 1


# -- edge colourings ---------------------------------------------------------


@dataclass(frozen=True)
class EdgeColouring:
    """A (possibly partial) map from normalized edges to colours ``1..k``."""

    assignment: Mapping[Edge, int]
    k: int
    _items: tuple = field(init=False, repr=False, compare=True)

    def __post_init__(self) -> None:
        clean = {}
        for e, c in dict(self.assignment).items():
            e = norm_edge(*e)
            if not isinstance(c, int) or not 1 <= c <= self.k:
                raise ValueError(f"colour {c!r} on {e} outside 1..{self.k}")
            clean[e] = c
        object.__setattr__(self, "assignment", MappingProxyType(clean))
        object.__setattr__(self, "_items", tuple(sorted(clean.items())))

    @classmethod
    def from_vector(cls, g: Graph, colours: Iterable[int], k: int | None = None) -> "EdgeColouring":
        colours = list(colours)
        edges = g.edges()
        if len(colours) != len(edges):
            raise ValueError("colour vector length differs from edge count")
        return cls(dict(zip(edges, colours)), k if k is not None else max(colours, default=1))

    def __getitem__(self, e: Edge) -> int:
        return self.assignment[norm_edge(*e)]

    def get(self, u: int, v: int) -> int | None:
        return self.assignment.get(norm_edge(u, v))

    def __contains__(self, e: object) -> bool:
        return isinstance(e, tuple) and norm_edge(*e) in self.assignment

    def __len__(self) -> int:
        return len(self.assignment)

    def items(self) -> Iterator[tuple[Edge, int]]:
        return iter(self._items)

    def vector(self, g: Graph) -> tuple[int, ...]:
        """Colours over ``g.edges()``; 0 marks an uncoloured edge."""
        return tuple(self.assignment.get(e, 0) for e in g.edges())

    def is_total(self, g: Graph) -> bool:
        return all(e in self.assignment for e in g.edges())

    def colours_used(self) -> set[int]:
        return set(self.assignment.values())

    def validate_for(self, g: Graph) -> None:
        for (u, v) in self.assignment:
            if not (0 <= v < g.n and g.has_edge(u, v)):
                raise ValueError(f"coloured pair {u}-{v} is not an edge")

    def with_palette(self, k: int) -> "EdgeColouring":
        return EdgeColouring(dict(self.assignment), k)

    def to_text(self) -> str:
        return ",".join(f"{u}-{v}:{c}" for (u, v), c in self._items)

    @classmethod
    def from_text(cls, text: str, k: int | None = None) -> "EdgeColouring":
        assignment = {}
        for tok in filter(None, (t.strip() for t in text.split(","))):
            pair, c = tok.split(":")
            u, v = pair.split("-")
            assignment[norm_edge(int(u), int(v))] = int(c)
        return cls(assignment, k if k is not None else max(assignment.values(), default=1))


def pull_back(colouring: EdgeColouring, mapping: Mapping[int, int], k: int | None = None) -> EdgeColouring:
    """Transport a colouring along a vertex map ``old -> new`` (``mapping[u]`` = new id)."""
    return EdgeColouring(
        {norm_edge(mapping[u], mapping[v]): c for (u, v), c in colouring.items()},
        colouring.k if k is None else k,
    )


# -- graph6 -----------------------------------------------------------------


def parse_graph6(text: str) -> Graph:
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    if not s:
        raise GraphFormatError("empty graph6 string")
    data = [ord(ch) - 63 for ch in s]
    if any(not 0 <= x <= 63 for x in data):
        raise GraphFormatError("byte outside 63..126")
    if data[0] < 63:
        n, pos = data[0], 1
    elif len(data) >= 4 and data[1] < 63:
        n = (data[1] << 12) | (data[2] << 6) | data[3]
        pos = 4
        if n <= 62:
            raise GraphFormatError("non-minimal length header")
    elif len(data) >= 8 and data[1] == 63:
        n = 0
        for x in data[2:8]:
            n = (n << 6) | x
        pos = 8
        if n <= 258047:
            raise GraphFormatError("non-minimal length header")
    else:
        raise GraphFormatError("malformed length header")
    nbits = n * (n - 1) // 2
    body = data[pos:]
    if len(body) != (nbits + 5) // 6:
        raise GraphFormatError(f"expected {(nbits + 5) // 6} data bytes, got {len(body)}")
    edges = []
    bit = 0
    for c in range(1, n):
        for r in range(c):
            if (body[bit // 6] >> (5 - bit % 6)) & 1:
                edges.append((r, c))
            bit += 1
    total = len(body) * 6
    for b in range(nbits, total):
        if (body[b // 6] >> (5 - b % 6)) & 1:
            raise GraphFormatError("nonzero padding bits")
    return Graph.from_edges(n, edges)


def write_graph6(g: Graph) -> str:
    n = g.n
    if n <= 62:
        out = [n + 63]
    elif n <= 258047:
        out = [126, (n >> 12) + 63, ((n >> 6) & 63) + 63, (n & 63) + 63]
    else:
        raise GraphFormatError(f"n={n} exceeds supported header range")
    bits = [1 if g.has_edge(r, c) else 0 for c in range(1, n) for r in range(c)]
    bits += [0] * (-len(bits) % 6)
    for i in range(0, len(bits), 6):
        x = 0
        for b in bits[i:i + 6]:
            x = (x << 1) | b
        out.append(x + 63)
    return "".join(map(chr, out))


def read_graph6_lines(text: str) -> list[Graph]:
    return [parse_graph6(line) for line in text.splitlines() if line.strip()]


def parse_edge_list(text: str) -> Graph:
    """The fallback ``n m`` + ``u v`` lines format."""
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows:
        raise GraphFormatError("empty edge list")
    try:
        n, m = int(rows[0][0]), int(rows[0][1])
        edges = [(int(a), int(b)) for a, b in rows[1:]]
    except (ValueError, IndexError) as exc:
        raise GraphFormatError(f"bad edge list: {exc}") from None
    if len(edges) != m:
        raise GraphFormatError(f"header says {m} edges, found {len(edges)}")
    return Graph.from_edges(n, edges)


def write_edge_list(g: Graph) -> str:
    lines = [f"{g.n} {g.size}"] + [f"{u} {v}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


# -- named graphs used throughout the tests and the CLI ----------------------


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def star_graph(m: int) -> Graph:
    """K_{1,m} with centre 0."""
    return Graph.from_edges(m + 1, [(0, i) for i in range(1, m + 1)])


def hourglass() -> Graph:
    """Two triangles sharing vertex 0."""
    return Graph.from_edges(5, [(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)])


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def disjoint_union(*gs: Graph) -> Graph:
    edges, off = [], 0
    for g in gs:
        edges += [(u + off, v + off) for u, v in g.edges()]
        off += g.n
    return Graph.from_edges(off, edges)
