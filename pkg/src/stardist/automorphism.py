"""Automorphism groups, canonical forms and colour-preserving maps.

The engine is a plain individualization/refinement search. Ordered
partitions are refined to equitable form (neighbour cell/label multisets),
target cells are the first largest non-singleton cell, and ties go to the
lowest vertex id. Automorphisms are searched level by level along the first
path, so the generators form a strong generating set for the pointwise
stabilizer chain of the first-path vertices and the group order is the
product of the basic orbit sizes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Iterator, Mapping, Sequence

from .graph import Edge, EdgeColouring, Graph, components, induced_subgraph, norm_edge

Perm = tuple[int, ...]


# -- permutations and groups --------------------------------------------------


def identity(n: int) -> Perm:
    return tuple(range(n))


def compose(p: Perm, q: Perm) -> Perm:
    """``p`` after ``q``."""
    return tuple(p[x] for x in q)


def inverse(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


def perm_text(p: Perm) -> str:
    return " ".join(map(str, p))


def is_automorphism(g: Graph, p: Sequence[int], colouring: EdgeColouring | None = None) -> bool:
    if sorted(p) != list(range(g.n)):
        return False
    for u, v in g.edges():
        if not g.has_edge(p[u], p[v]):
            return False
        if colouring is not None:
            a, b = colouring.get(u, v), colouring.get(p[u], p[v])
            if a is not None and b is not None and a != b:
                return False
    return True


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        a, b = self.find(a), self.find(b)
        if a != b:
            if a < b:
                self.parent[b] = a
            else:
                self.parent[a] = b


def orbits_of(n: int, generators: Iterable[Perm]) -> list[list[int]]:
    uf = _UnionFind(n)
    for p in generators:
        for i, x in enumerate(p):
            uf.union(i, x)
    groups: dict[int, list[int]] = {}
    for v in range(n):
        groups.setdefault(uf.find(v), []).append(v)
    return sorted(groups.values())


@dataclass(frozen=True)
class PermGroup:
    n: int
    generators: tuple[Perm, ...]
    order: int
    base: tuple[int, ...] = ()

    def orbits(self) -> list[list[int]]:
        return orbits_of(self.n, self.generators)

    def orbit(self, v: int) -> list[int]:
        return next(o for o in self.orbits() if v in o)

    def fixed_points(self) -> list[int]:
        return [o[0] for o in self.orbits() if len(o) == 1]

    def is_trivial(self) -> bool:
        return self.order == 1

    def elements(self, limit: int = 2_000_000) -> list[Perm]:
        """All group elements by closure over the generators."""
        if self.order > limit:
            raise OverflowError(f"group order {self.order} exceeds element limit {limit}")
        ident = identity(self.n)
        seen = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for h in frontier:
                for s in self.generators:
                    x = compose(s, h)
                    if x not in seen:
                        seen.add(x)
                        nxt.append(x)
            frontier = nxt
        if len(seen) != self.order:
            raise AssertionError(f"closure gave {len(seen)} elements, expected {self.order}")
        return sorted(seen)


# -- refinement machinery -----------------------------------------------------


class _Structure:
    """Graph with edge labels and an initial ordered vertex partition."""

    def __init__(self, g: Graph, edge_labels: Mapping[Edge, Hashable] | None,
                 vertex_labels: Sequence[Hashable] | None):
        self.g = g
        self.n = g.n
        lab = {} if edge_labels is None else dict(edge_labels)
        self.nbrs: list[list[tuple[int, Hashable]]] = [
            [(w, lab.get(norm_edge(v, w), 0)) for w in g.adj[v]] for v in range(g.n)
        ]
        self.edge_label = {e: lab.get(e, 0) for e in g.edges()}
        vl = [0] * g.n if vertex_labels is None else list(vertex_labels)
        self.vertex_labels = vl
        keys = sorted(set(vl))
        self.label_header = tuple((k, vl.count(k)) for k in keys)
        rank = {k: i for i, k in enumerate(keys)}
        cells: list[list[int]] = [[] for _ in keys]
        for v in range(g.n):
            cells[rank[vl[v]]].append(v)
        self.initial = [c for c in cells if c]

    def refine(self, cells: list[list[int]]) -> tuple[list[list[int]], tuple]:
        """Equitable refinement; returns the new partition and a trace.

        The trace depends only on the isomorphism type of the labelled,
        partitioned graph, so it is safe to prune on and to certify with.
        """
        nbrs = self.nbrs
        trace = []
        while True:
            cell_of = [0] * self.n
            for i, cell in enumerate(cells):
                for v in cell:
                    cell_of[v] = i
            new_cells: list[list[int]] = []
            split_info = []
            for i, cell in enumerate(cells):
                if len(cell) == 1:
                    new_cells.append(cell)
                    continue
                groups: dict[tuple, list[int]] = {}
                for v in cell:
                    sig = tuple(sorted((cell_of[w], l) for w, l in nbrs[v]))
                    groups.setdefault(sig, []).append(v)
                if len(groups) == 1:
                    new_cells.append(cell)
                    continue
                keys = sorted(groups)
                split_info.append((i, tuple((k, len(groups[k])) for k in keys)))
                new_cells.extend(groups[k] for k in keys)
            if not split_info:
                break
            trace.append(tuple(split_info))
            cells = new_cells
        return cells, (tuple(len(c) for c in cells), tuple(trace))

    def is_automorphism(self, p: Sequence[int]) -> bool:
        vl = self.vertex_labels
        el = self.edge_label
        g = self.g
        for v in range(self.n):
            if vl[p[v]] != vl[v]:
                return False
        for (u, v), l in el.items():
            a, b = p[u], p[v]
            if not g.has_edge(a, b):
                return False
            if el[norm_edge(a, b)] != l:
                return False
        return True


def _target(cells: list[list[int]]) -> int:
    best, size = -1, 1
    for i, c in enumerate(cells):
        if len(c) > size:
            best, size = i, len(c)
    return best


def _individualize(cells: list[list[int]], i: int, v: int) -> list[list[int]]:
    rest = [x for x in cells[i] if x != v]
    return cells[:i] + [[v], rest] + cells[i + 1:]


@dataclass
class _Node:
    cells: list[list[int]]
    inv: tuple


class _Search:
    def __init__(self, st: _Structure, fixed: Iterable[int] = ()):
        self.st = st
        fixed = sorted(set(fixed))
        for f in fixed:
            if not 0 <= f < st.n:
                raise ValueError(f"fixed vertex {f} out of range")
        fset = set(fixed)
        cells = [[f] for f in fixed] + [[v for v in c if v not in fset] for c in st.initial]
        cells = [c for c in cells if c]
        root_cells, inv = st.refine(cells)
        self.root = _Node(root_cells, inv)
        # first path
        self.path: list[_Node] = [self.root]
        self.targets: list[int] = []
        node = self.root
        while True:
            t = _target(node.cells)
            if t < 0:
                break
            v = node.cells[t][0]
            self.targets.append(t)
            cells, inv = st.refine(_individualize(node.cells, t, v))
            node = _Node(cells, inv)
            self.path.append(node)
        self.first_leaf = [c[0] for c in node.cells]
        self.base = tuple(self.path[i].cells[t][0] for i, t in enumerate(self.targets))

    def _leaf_perm(self, cells: list[list[int]]) -> Perm:
        p = [0] * self.st.n
        for a, c in zip(self.first_leaf, cells):
            p[a] = c[0]
        return tuple(p)

    def _find_equivalent(self, node: _Node, depth: int) -> Perm | None:
        if node.inv != self.path[depth].inv:
            return None
        t = _target(node.cells)
        if t < 0:
            p = self._leaf_perm(node.cells)
            return p if self.st.is_automorphism(p) else None
        if t != self.targets[depth]:
            return None
        for v in node.cells[t]:
            cells, inv = self.st.refine(_individualize(node.cells, t, v))
            found = self._find_equivalent(_Node(cells, inv), depth + 1)
            if found is not None:
                return found
        return None

    def group(self) -> tuple[list[Perm], int, list[list[Perm]]]:
        """Generators, order, and generators per level (deepest last)."""
        gens: list[Perm] = []
        per_level: list[list[Perm]] = [[] for _ in self.targets]
        order = 1
        n = self.st.n
        for level in range(len(self.targets) - 1, -1, -1):
            node = self.path[level]
            cell = node.cells[self.targets[level]]
            v0 = cell[0]
            failed: set[int] = set()
            for w in cell[1:]:
                orbs = orbits_of(n, gens)
                orbit_of = {x: o for o in orbs for x in o}
                if w in orbit_of[v0] or w in failed:
                    continue
                cells, inv = self.st.refine(_individualize(node.cells, self.targets[level], w))
                p = self._find_equivalent(_Node(cells, inv), level + 1)
                if p is None:
                    failed.update(orbit_of[w])
                else:
                    gens.append(p)
                    per_level[level].append(p)
            orbs = orbits_of(n, gens)
            order *= len(next(o for o in orbs if v0 in o))
        return gens, order, per_level


def _structure(g: Graph, colouring: EdgeColouring | Mapping[Edge, Hashable] | None,
               vertex_labels: Sequence[Hashable] | None) -> _Structure:
    if isinstance(colouring, EdgeColouring):
        colouring = dict(colouring.assignment)
    return _Structure(g, colouring, vertex_labels)


def automorphism_group(g: Graph, colouring: EdgeColouring | Mapping[Edge, Hashable] | None = None,
                       fixed: Iterable[int] = (),
                       vertex_labels: Sequence[Hashable] | None = None) -> PermGroup:
    """Automorphisms of ``g`` preserving edge labels and vertex labels, fixing ``fixed`` pointwise.

    Uncoloured edges carry label 0, so a partial ``colouring`` is treated as
    a total one with an extra colour here. Use :func:`find_colour_preserving`
    for the partial-colouring semantics.
    """
    if g.n == 0:
        return PermGroup(0, (), 1)
    search = _Search(_structure(g, colouring, vertex_labels), fixed)
    gens, order, _ = search.group()
    return PermGroup(g.n, tuple(gens), order, search.base)


def pointwise_stabilizer(g: Graph, fixed: Iterable[int]) -> PermGroup:
    return automorphism_group(g, fixed=fixed)


# -- canonical forms ------------------------------------------------------------


@dataclass(frozen=True)
class CanonicalForm:
    certificate: tuple
    labelling: tuple[int, ...]  # canonical position -> original vertex

    def position(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.labelling)}


def canonical_form(g: Graph, colouring: EdgeColouring | Mapping[Edge, Hashable] | None = None,
                   fixed: Iterable[int] = (),
                   vertex_labels: Sequence[Hashable] | None = None) -> CanonicalForm:
    """Canonical labelling of a labelled graph.

    Two inputs get equal certificates iff an isomorphism carries one onto
    the other, preserving edge and vertex labels. Vertices in ``fixed`` are
    treated as carrying their own id as a label.
    """
    fixed = set(fixed)
    base_labels = [0] * g.n if vertex_labels is None else list(vertex_labels)
    labels = [(1, v) if v in fixed else (0, base_labels[v]) for v in range(g.n)]
    st = _structure(g, colouring, labels)
    if g.n == 0:
        return CanonicalForm((st.label_header, (), ()), ())
    search = _Search(st)
    _, _, per_level = search.group()
    # generators fixing the first-path prefix of each level
    level_gens = []
    acc: list[Perm] = []
    for level in range(len(per_level) - 1, -1, -1):
        acc = acc + per_level[level]
        level_gens.append(list(acc))
    level_gens.reverse()

    best: list = [None, None]  # (key, leaf cells)

    def leaf_key(cells: list[list[int]]) -> tuple:
        pos = {c[0]: i for i, c in enumerate(cells)}
        es = sorted((min(pos[u], pos[v]), max(pos[u], pos[v]), repr(l)) for (u, v), l in st.edge_label.items())
        return tuple(es)

    def dfs(node: _Node, invs: tuple, on_path: bool, depth: int) -> None:
        invs = invs + (node.inv,)
        # any leaf below has a key extending invs
        if best[0] is not None and invs > best[0][0][:len(invs)]:
            return
        t = _target(node.cells)
        if t < 0:
            key = (invs, leaf_key(node.cells))
            if best[0] is None or key < best[0]:
                best[0], best[1] = key, node.cells
            return
        cell = node.cells[t]
        if on_path:
            # children in one orbit of the prefix stabilizer have isomorphic subtrees
            orbs = orbits_of(g.n, level_gens[depth])
            rep = {x: o[0] for o in orbs for x in o}
            seen = {rep[cell[0]]}
            children = [cell[0]]
            for v in cell:
                if rep[v] not in seen:
                    seen.add(rep[v])
                    children.append(v)
        else:
            children = cell
        for v in children:
            cells, inv = st.refine(_individualize(node.cells, t, v))
            dfs(_Node(cells, inv), invs, on_path and v == cell[0], depth + 1)

    dfs(search.root, (), True, 0)
    key, cells = best
    labelling = tuple(c[0] for c in cells)
    return CanonicalForm((st.label_header, key), labelling)


def canonical_graph(g: Graph, cf: CanonicalForm | None = None) -> Graph:
    cf = cf or canonical_form(g)
    return g.relabel([cf.position()[v] for v in range(g.n)])


def are_isomorphic(g: Graph, h: Graph) -> bool:
    return g.n == h.n and g.size == h.size and canonical_form(g).certificate == canonical_form(h).certificate


# -- colourings -------------------------------------------------------------------


def _refined_cells(g: Graph, fixed: Iterable[int]) -> list[list[int]]:
    search = _Search(_Structure(g, None, None), fixed)
    return search.root.cells


def iter_colour_preserving(g: Graph, c: EdgeColouring, fixed: Iterable[int] = ()) -> Iterator[Perm]:
    """All automorphisms fixing ``fixed`` pointwise that ``c`` does not break.

    ``c`` breaks ``p`` only on an edge ``e`` where both ``c(e)`` and
    ``c(p(e))`` are defined and differ.
    """
    n = g.n
    cells = _refined_cells(g, fixed)
    cell_of = {v: i for i, cell in enumerate(cells) for v in cell}
    # order: singletons first, then grow along adjacency
    order: list[int] = []
    placed: set[int] = set()
    for cell in cells:
        if len(cell) == 1:
            order.append(cell[0])
            placed.add(cell[0])
    while len(order) < n:
        best, score = None, None
        for v in range(n):
            if v in placed:
                continue
            s = (-sum(1 for w in g.adj[v] if w in placed), len(cells[cell_of[v]]), v)
            if score is None or s < score:
                best, score = v, s
        order.append(best)
        placed.add(best)
    assign = c.assignment
    image = [-1] * n
    used = [False] * n

    def ok(v: int, x: int) -> bool:
        for u in order:
            if image[u] < 0:
                continue
            adj_v = g.has_edge(u, v)
            if adj_v != g.has_edge(image[u], x):
                return False
            if adj_v:
                a = assign.get(norm_edge(u, v))
                b = assign.get(norm_edge(image[u], x))
                if a is not None and b is not None and a != b:
                    return False
        return True

    def rec(i: int) -> Iterator[Perm]:
        if i == n:
            yield tuple(image)
            return
        v = order[i]
        for x in cells[cell_of[v]]:
            if used[x] or not ok(v, x):
                continue
            image[v] = x
            used[x] = True
            yield from rec(i + 1)
            image[v] = -1
            used[x] = False

    yield from rec(0)


def find_colour_preserving(g: Graph, c: EdgeColouring, fixed: Iterable[int] = ()) -> Perm | None:
    """A non-identity automorphism fixing ``fixed`` that ``c`` preserves, or None."""
    fixed = list(fixed)
    if g.n == 0:
        return None
    if c.is_total(g):
        grp = automorphism_group(g, c, fixed)
        return grp.generators[0] if grp.generators else None
    ident = identity(g.n)
    for p in iter_colour_preserving(g, c, fixed):
        if p != ident:
            return p
    return None


def is_distinguishing(g: Graph, c: EdgeColouring, fixed: Iterable[int] = ()) -> bool:
    return find_colour_preserving(g, c, fixed) is None


def are_colourings_isomorphic(g: Graph, fixed: Iterable[int], c: EdgeColouring, d: EdgeColouring) -> bool:
    """Is there a ``p`` fixing ``fixed`` pointwise with ``d(p(e)) == c(e)`` for all edges?"""
    if not (c.is_total(g) and d.is_total(g)):
        raise ValueError("isomorphism of colourings needs total colourings")
    fixed = list(fixed)
    if sorted(c.assignment.values()) != sorted(d.assignment.values()):
        return False
    return canonical_form(g, c, fixed).certificate == canonical_form(g, d, fixed).certificate


# -- component orbits -----------------------------------------------------------


def component_orbits(g: Graph, f: Iterable[int]) -> list[list[list[int]]]:
    """Classes of components of ``g - f`` under automorphisms fixing ``f`` pointwise.

    Components are compared by isomorphisms that preserve each vertex's exact
    neighbour set inside ``f``.
    """
    fset = set(f)
    rest = [v for v in range(g.n) if v not in fset]
    classes: dict[tuple, list[list[int]]] = {}
    for comp in components(g, rest):
        classes.setdefault(component_signature(g, comp, fset), []).append(comp)
    return sorted(classes.values())


def component_signature(g: Graph, comp: Sequence[int], attach_to: set[int]) -> tuple:
    sub, mapping = induced_subgraph(g, comp)
    labels = [None] * sub.n
    for v, i in mapping.items():
        labels[i] = tuple(sorted(w for w in g.adj[v] if w in attach_to))
    return canonical_form(sub, vertex_labels=labels).certificate
