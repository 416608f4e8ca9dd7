"""Eventually periodic infinite graphs given by a finite description.

A description has a finite *prefix* graph and one or more *arms*. Each arm
is an infinite sequence of copies ``0, 1, 2, ...`` of a finite *unit* graph;
``splice_unit`` pairs ``(x, y)`` join ``x`` in copy ``k`` to ``y`` in copy
``k + 1`` and ``splice_prefix`` pairs ``(p, y)`` join prefix vertex ``p`` to
``y`` in copy 0.

Vertices of the infinite graph are keys ``(arm, copy, unit vertex)``; prefix
vertices use arm ``-1`` and copy ``0``. Key order matches the vertex order
of every truncation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Optional

from ..graph import Graph, GraphFormatError
from ..starfree import star_at

Key = tuple[int, int, int]
PREFIX = -1


class DescriptionError(ValueError):
    pass


@dataclass(frozen=True)
class Arm:
    name: str
    unit: Graph
    splice_prefix: tuple[tuple[int, int], ...]
    splice_unit: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class PeriodicGraphDescription:
    prefix: Graph
    arms: tuple[Arm, ...]
    max_degree: Optional[int] = None

    def __post_init__(self):
        if not self.arms:
            raise DescriptionError("at least one arm is required")
        for a in self.arms:
            if a.unit.n < 1:
                raise DescriptionError(f"arm {a.name}: unit needs at least one vertex")
            for p, y in a.splice_prefix:
                if not (0 <= p < self.prefix.n and 0 <= y < a.unit.n):
                    raise DescriptionError(f"arm {a.name}: splice_prefix pair {p}-{y} out of range")
            for x, y in a.splice_unit:
                if not (0 <= x < a.unit.n and 0 <= y < a.unit.n):
                    raise DescriptionError(f"arm {a.name}: splice_unit pair {x}-{y} out of range")
            if len(set(a.splice_prefix)) != len(a.splice_prefix) or len(set(a.splice_unit)) != len(a.splice_unit):
                raise DescriptionError(f"arm {a.name}: repeated splice pair")

    def arm_index(self, name: str) -> int:
        for i, a in enumerate(self.arms):
            if a.name == name:
                return i
        raise KeyError(name)

    def neighbours(self, key: Key) -> list[Key]:
        """Neighbours of a vertex of the infinite graph, sorted."""
        a, k, u = key
        out: list[Key] = []
        if a == PREFIX:
            out += [(PREFIX, 0, w) for w in self.prefix.adj[u]]
            for i, arm in enumerate(self.arms):
                out += [(i, 0, y) for p, y in arm.splice_prefix if p == u]
        else:
            arm = self.arms[a]
            out += [(a, k, w) for w in arm.unit.adj[u]]
            out += [(a, k + 1, y) for x, y in arm.splice_unit if x == u]
            if k > 0:
                out += [(a, k - 1, x) for x, y in arm.splice_unit if y == u]
            else:
                out += [(PREFIX, 0, p) for p, y in arm.splice_prefix if y == u]
        return sorted(out)

    def adjacent(self, x: Key, y: Key) -> bool:
        return y in self.neighbours(x)

    def is_vertex(self, key: Key) -> bool:
        a, k, u = key
        if a == PREFIX:
            return k == 0 and 0 <= u < self.prefix.n
        return 0 <= a < len(self.arms) and k >= 0 and 0 <= u < self.arms[a].unit.n


def key_label(d: PeriodicGraphDescription, key: Key) -> str:
    a, k, u = key
    return f"prefix:{u}" if a == PREFIX else f"{d.arms[a].name}[{k}].{u}"


# -- parsing ---------------------------------------------------------------

_PAIR = re.compile(r"^(\d+)-(\d+)$")


def _pairs(text: str, where: str) -> list[tuple[int, int]]:
    out = []
    for tok in re.split(r"[\s,]+", text.strip()):
        if not tok:
            continue
        m = _PAIR.match(tok)
        if not m:
            raise DescriptionError(f"{where}: bad pair {tok!r}")
        out.append((int(m.group(1)), int(m.group(2))))
    return out


def _section_graph(fields: dict, edge_key: str, extra: list[int], where: str) -> Graph:
    edges = _pairs(fields.get(edge_key, ""), where)
    if "vertices" in fields:
        try:
            n = int(fields["vertices"])
        except ValueError:
            raise DescriptionError(f"{where}: vertices must be an integer") from None
    else:
        ids = [v for e in edges for v in e] + extra
        n = max(ids) + 1 if ids else 0
    try:
        return Graph.from_edges(n, edges)
    except (GraphFormatError, ValueError) as exc:
        raise DescriptionError(f"{where}: {exc}") from None


def parse_igd(text: str, check: bool = True) -> PeriodicGraphDescription:
    """Parse an IGD text; with ``check`` also test connectivity and degree bounds."""
    sections: list[tuple[str, Optional[str], dict]] = []
    top: dict = {}
    current = top
    last_key = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.match(r"^\[\s*(prefix|arm)(?:\s+([^\]\s]+))?\s*\]$", line)
        if m:
            kind, name = m.group(1), m.group(2)
            if kind == "arm" and not name:
                raise DescriptionError(f"line {lineno}: arm section needs a name")
            if kind == "prefix" and name:
                raise DescriptionError(f"line {lineno}: prefix section takes no name")
            current = {}
            sections.append((kind, name, current))
            last_key = None
            continue
        if line.startswith("["):
            raise DescriptionError(f"line {lineno}: unknown section {line!r}")
        m = re.match(r"^([a-z_]+)\s*:(.*)$", line)
        if m:
            key, value = m.group(1), m.group(2)
            if key == "edges":
                key = "unit" if sections and sections[-1][0] == "arm" else "edges"
            allowed = {"max_degree"} if current is top else (
                {"vertices", "edges", "max_degree"} if sections[-1][0] == "prefix"
                else {"vertices", "unit", "splice_prefix", "splice_unit"})
            if key not in allowed:
                raise DescriptionError(f"line {lineno}: unexpected key {key!r}")
            if key in current:
                raise DescriptionError(f"line {lineno}: repeated key {key!r}")
            current[key] = value
            last_key = key
        elif last_key is not None:
            current[last_key] += " " + line
        else:
            raise DescriptionError(f"line {lineno}: cannot parse {line!r}")

    prefixes = [s for s in sections if s[0] == "prefix"]
    if len(prefixes) > 1:
        raise DescriptionError("more than one [prefix] section")
    pfields = prefixes[0][2] if prefixes else {}
    arm_secs = [s for s in sections if s[0] == "arm"]
    if not arm_secs:
        raise DescriptionError("no [arm] section")
    names = [s[1] for s in arm_secs]
    if len(set(names)) != len(names):
        raise DescriptionError("repeated arm name")

    splices = {name: (_pairs(f.get("splice_prefix", ""), f"arm {name}"),
                      _pairs(f.get("splice_unit", ""), f"arm {name}"))
               for _, name, f in arm_secs}
    prefix = _section_graph(pfields, "edges", [p for sp, _ in splices.values() for p, _ in sp], "prefix")
    arms = []
    for _, name, f in arm_secs:
        sp, su = splices[name]
        extra = [y for _, y in sp] + [v for e in su for v in e]
        arms.append(Arm(name, _section_graph(f, "unit", extra, f"arm {name}"), tuple(sp), tuple(su)))
    bound = top.get("max_degree", pfields.get("max_degree"))
    try:
        max_degree = int(bound) if bound is not None else None
    except ValueError:
        raise DescriptionError("max_degree must be an integer") from None
    d = PeriodicGraphDescription(prefix, tuple(arms), max_degree)
    if check:
        validate(d)
    return d


def format_igd(d: PeriodicGraphDescription) -> str:
    def pairs(ps) -> str:
        return " ".join(f"{a}-{b}" for a, b in ps)

    lines = []
    if d.max_degree is not None:
        lines.append(f"max_degree: {d.max_degree}")
    lines += ["[prefix]", f"vertices: {d.prefix.n}", f"edges: {pairs(d.prefix.edges())}"]
    for a in d.arms:
        lines += [f"[arm {a.name}]", f"vertices: {a.unit.n}", f"unit: {pairs(a.unit.edges())}",
                  f"splice_prefix: {pairs(a.splice_prefix)}", f"splice_unit: {pairs(a.splice_unit)}"]
    return "\n".join(lines) + "\n"


# -- truncation ------------------------------------------------------------


@dataclass(frozen=True)
class Truncation:
    graph: Graph
    depth: int
    boundary: frozenset[int]
    origin: tuple[Key, ...]  # truncation id -> key
    index: dict  # key -> truncation id

    def depth_of(self, v: int) -> int:
        a, k, _ = self.origin[v]
        return 0 if a == PREFIX else k + 1


def truncate(d: PeriodicGraphDescription, depth: int) -> Truncation:
    """Prefix plus copies ``0..depth-1`` of every arm, as an induced subgraph."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    keys: list[Key] = [(PREFIX, 0, u) for u in range(d.prefix.n)]
    for a, arm in enumerate(d.arms):
        keys += [(a, k, u) for k in range(depth) for u in range(arm.unit.n)]
    index = {key: i for i, key in enumerate(keys)}
    edges = []
    for i, key in enumerate(keys):
        for w in d.neighbours(key):
            j = index.get(w)
            if j is not None and i < j:
                edges.append((i, j))
    boundary = frozenset(index[(a, depth - 1, u)] for a, arm in enumerate(d.arms) for u in range(arm.unit.n))
    return Truncation(Graph.from_edges(len(keys), edges), depth, boundary, tuple(keys), index)


# -- connectivity ----------------------------------------------------------


def _classes(n: int, pairs: list[tuple[int, int]]) -> list[int]:
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x, y in pairs:
        parent[find(x)] = find(y)
    return [find(x) for x in range(n)]


def tail_classes(unit: Graph, splice_unit, allowed: Optional[set[int]] = None) -> list[int]:
    """Connectivity of copy-``k`` vertices inside copies ``k, k+1, ...``.

    Returns a class representative per unit vertex (``-1`` for vertices not
    in ``allowed``). Computed as the fixed point of contracting copy
    ``k + 1`` by the current classes; every finite path is captured after
    as many rounds as its height.
    """
    n = unit.n
    ok = set(range(n)) if allowed is None else set(allowed)
    inner = [(x, y) for x, y in unit.edges() if x in ok and y in ok]
    cls = _classes(n, inner)
    while True:
        # copy k: ids 0..n-1, copy k+1 collapsed: ids n + class
        pairs = inner + [(x, n + cls[y]) for x, y in splice_unit if x in ok and y in ok]
        merged = _classes(2 * n, pairs)
        new = _classes(n, [(x, y) for x in ok for y in ok if x < y and merged[x] == merged[y]])
        if len({new[x] for x in ok}) == len({cls[x] for x in ok}):
            return [cls[x] if x in ok else -1 for x in range(n)]
        cls = new


def check_connected(d: PeriodicGraphDescription) -> None:
    for arm in d.arms:
        cls = tail_classes(arm.unit, arm.splice_unit)
        targets = {cls[y] for _, y in arm.splice_unit}
        for u in range(arm.unit.n):
            if cls[u] not in targets:
                raise DescriptionError(f"arm {arm.name}: vertex {u} of copy 1 has no path back to copy 0")
    # prefix plus copy 0 with tail classes merged
    keys: list[Key] = [(PREFIX, 0, u) for u in range(d.prefix.n)]
    for a, arm in enumerate(d.arms):
        keys += [(a, 0, u) for u in range(arm.unit.n)]
    index = {k: i for i, k in enumerate(keys)}
    pairs = [(index[(PREFIX, 0, x)], index[(PREFIX, 0, y)]) for x, y in d.prefix.edges()]
    for a, arm in enumerate(d.arms):
        cls = tail_classes(arm.unit, arm.splice_unit)
        pairs += [(index[(PREFIX, 0, p)], index[(a, 0, y)]) for p, y in arm.splice_prefix]
        pairs += [(index[(a, 0, u)], index[(a, 0, cls[u])]) for u in range(arm.unit.n)]
    if len(set(_classes(len(keys), pairs))) != 1:
        raise DescriptionError("described graph is disconnected")


def validate(d: PeriodicGraphDescription) -> None:
    check_connected(d)
    if d.max_degree is not None:
        t = truncate(d, 3)
        for v in range(t.graph.n):
            if t.depth_of(v) <= 2 and t.graph.degree(v) > d.max_degree:
                raise DescriptionError(
                    f"vertex {key_label(d, t.origin[v])} has degree {t.graph.degree(v)} > {d.max_degree}")


# -- stars -----------------------------------------------------------------


def find_star(d: PeriodicGraphDescription, n: int) -> Optional[tuple[Key, tuple[Key, ...]]]:
    """An induced ``K_{1,n}`` of the infinite graph, as (centre, leaves) keys.

    Stars have radius one, so centres in the prefix, copy 0 and copy 1 of a
    depth-3 truncation cover every translate.
    """
    t = truncate(d, 3)
    for v in range(t.graph.n):
        if t.depth_of(v) > 2:
            continue
        leaves = star_at(t.graph, v, n)
        if leaves is not None:
            return t.origin[v], tuple(t.origin[x] for x in leaves)
    return None


def is_k1n_free(d: PeriodicGraphDescription, n: int) -> bool:
    return find_star(d, n) is None


def iter_keys(d: PeriodicGraphDescription, depth: int) -> Iterator[Key]:
    yield from ((PREFIX, 0, u) for u in range(d.prefix.n))
    for a, arm in enumerate(d.arms):
        for k in range(depth):
            yield from ((a, k, u) for u in range(arm.unit.n))
