"""Families of disjoint induced rays and the data hung on them.

A ray is stored as a finite ``head`` of vertex keys followed by a periodic
``body``: the same induced path through every block of ``block``
consecutive copies of its arm, starting at block 0. The family is chosen so
that every component left after deleting the rays is finite; that is the
checkable consequence of maximality that the colouring argument relies on.
Endvertices are then pushed back while the ray stays induced.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterator, Optional

from ..automorphism import canonical_form
from ..graph import Graph
from ..starfree import classify_special
from .igd import PREFIX, Key, PeriodicGraphDescription, key_label, tail_classes

R0, RINF = "R0", "RInf"
SUPPORTED, SUPPORTING, PLAIN = "Supported", "Supporting", "Plain"
FIRST_INDEX = 2
MAX_PATHS = 20000


class RayFamilyError(ValueError):
    pass


class ConstructionError(RuntimeError):
    """A step that cannot fail on valid input did fail; carries the evidence."""


@dataclass(frozen=True)
class Ray:
    index: int
    arm: int
    head: tuple[Key, ...]
    body: tuple[tuple[int, int], ...]  # (copy offset inside the block, unit vertex)
    block: int

    @cached_property
    def _body_pos(self) -> dict:
        return {b: i for i, b in enumerate(self.body)}

    @cached_property
    def _head_pos(self) -> dict:
        return {k: i for i, k in enumerate(self.head)}

    def vertex(self, j: int) -> Key:
        if j < 0:
            raise IndexError(j)
        if j < len(self.head):
            return self.head[j]
        blk, i = divmod(j - len(self.head), len(self.body))
        off, u = self.body[i]
        return (self.arm, blk * self.block + off, u)

    def position(self, key: Key) -> Optional[int]:
        if key in self._head_pos:
            return self._head_pos[key]
        a, k, u = key
        if a != self.arm:
            return None
        blk, off = divmod(k, self.block)
        i = self._body_pos.get((off, u))
        return None if i is None else len(self.head) + blk * len(self.body) + i

    def vertices(self, limit: int) -> Iterator[Key]:
        """Vertices in ray order while their copy stays below ``limit``."""
        j = 0
        while True:
            v = self.vertex(j)
            if v[0] != PREFIX and v[1] >= limit:
                return
            yield v
            j += 1


@dataclass(frozen=True)
class RayFamily:
    rays: tuple[Ray, ...]
    tags: dict = field(default_factory=dict)  # ray index -> R0 / RInf
    k: dict = field(default_factory=dict)  # R0 ray index -> k(i)
    favourites: dict = field(default_factory=dict)  # RInf ray index -> position of favourite
    favourite_rank: dict = field(default_factory=dict)  # RInf ray index -> m (rank among attached vertices)
    notes: tuple[str, ...] = ()

    def ray(self, index: int) -> Ray:
        return self.rays[index - FIRST_INDEX]


# -- block geometry --------------------------------------------------------


def _block_graph(d: PeriodicGraphDescription, a: int, t: int) -> tuple[Graph, list[tuple[int, int]]]:
    """``t`` consecutive copies as one unit, plus splices to the next block."""
    arm = d.arms[a]
    u = arm.unit.n
    edges = [(off * u + x, off * u + y) for off in range(t) for x, y in arm.unit.edges()]
    edges += [(off * u + x, (off + 1) * u + y) for off in range(t - 1) for x, y in arm.splice_unit]
    nxt = [((t - 1) * u + x, y) for x, y in arm.splice_unit]
    return Graph.from_edges(t * u, edges), nxt


def _expand(body: list[int], u: int, t: int, blocks: int) -> list[tuple[int, int]]:
    """Body vertices (as block ids) spread over several blocks, as (copy, vertex)."""
    return [(b * t + v // u, v % u) for b in range(blocks) for v in body]


def _is_induced_path(d: PeriodicGraphDescription, a: int, seq: list[tuple[int, int]]) -> bool:
    keys = [(a, k, x) for k, x in seq]
    pos = {k: i for i, k in enumerate(keys)}
    if len(pos) != len(keys):
        return False
    for i, k in enumerate(keys):
        near = {pos[w] for w in d.neighbours(k) if w in pos}
        want = {j for j in (i - 1, i + 1) if 0 <= j < len(keys)}
        if near != want:
            return False
    return True


def _patterns(d: PeriodicGraphDescription, a: int, t: int, used: set[int]) -> Iterator[list[int]]:
    """Candidate periodic bodies, shortest first."""
    g, nxt = _block_graph(d, a, t)
    u = d.arms[a].unit.n
    found = []
    for x, y in nxt:
        if x in used or y in used:
            continue
        # simple paths y -> x inside the block
        stack = [(y, [y])]
        while stack and len(found) < MAX_PATHS:
            v, path = stack.pop()
            if v == x:
                found.append(list(path))
                continue
            for w in g.adj[v]:
                if w not in used and w not in path:
                    stack.append((w, path + [w]))
    found.sort(key=lambda p: (len(p), p))
    for p in found:
        if _is_induced_path(d, a, _expand(p, u, t, 3)):
            yield p


def _leftover_finite(d: PeriodicGraphDescription, a: int, t: int, used: set[int]) -> bool:
    g, nxt = _block_graph(d, a, t)
    left = set(range(g.n)) - used
    if not left:
        return True
    cls = tail_classes(g, nxt, left)
    succ: dict[int, set[int]] = {}
    for x, y in nxt:
        if x in left and y in left:
            succ.setdefault(cls[x], set()).add(cls[y])
    # an infinite leftover component is an infinite walk up the class graph
    state: dict[int, int] = {}

    def cyclic(c: int) -> bool:
        state[c] = 1
        for e in succ.get(c, ()):
            if state.get(e) == 1 or (e not in state and cyclic(e)):
                return True
        state[c] = 2
        return False

    return not any(c not in state and cyclic(c) for c in {cls[v] for v in left})


def ray_family(d: PeriodicGraphDescription, max_block: int = 2) -> RayFamily:
    bodies: list[tuple[int, int, list[int]]] = []  # (arm, t, body)
    for a, arm in enumerate(d.arms):
        u = arm.unit.n
        for t in range(1, max_block + 1):
            used: set[int] = set()
            chosen: list[list[int]] = []
            ok = False
            while True:
                p = next(_patterns(d, a, t, used), None)
                if p is None:
                    break
                chosen.append(p)
                used |= set(p)
                if _leftover_finite(d, a, t, used):
                    ok = True
                    break
            if ok:
                bodies += [(a, t, p) for p in chosen]
                break
        else:
            raise RayFamilyError(
                f"arm {arm.name}: no family of periodic induced rays with block <= {max_block} "
                f"leaves only finite components")
    rays = []
    for i, (a, t, p) in enumerate(bodies):
        u = d.arms[a].unit.n
        body = tuple((v // u, v % u) for v in p)
        rays.append(Ray(FIRST_INDEX + i, a, (), body, t))
    rays = _extend_backwards(d, rays)
    return RayFamily(tuple(rays))


def _extend_backwards(d: PeriodicGraphDescription, rays: list[Ray]) -> list[Ray]:
    """Prepend vertices to endvertices while each ray stays induced."""
    rays = list(rays)
    for i in range(len(rays)):
        while True:
            fam = _Membership(rays)
            r = rays[i]
            end = r.vertex(0)
            grown = None
            for w in d.neighbours(end):
                if fam.ray_of(w) is not None:
                    continue
                if all(z == end or fam.ray_of(z) != r.index for z in d.neighbours(w)):
                    grown = w
                    break
            if grown is None:
                break
            rays[i] = replace(r, head=(grown,) + r.head)
    return rays


class _Membership:
    def __init__(self, rays):
        self.head = {k: r.index for r in rays for k in r.head}
        self.body = {}
        for r in rays:
            for b in r.body:
                self.body[(r.arm, b)] = r
        self.block = {r.arm: r.block for r in rays}

    def ray_of(self, key: Key) -> Optional[int]:
        if key in self.head:
            return self.head[key]
        a, k, u = key
        if a == PREFIX or a not in self.block:
            return None
        r = self.body.get((a, (k % self.block[a], u)))
        return None if r is None else r.index


# -- structure around a family ---------------------------------------------


class Structure:
    """Lazy view of ``G``, ``F`` and the finite components of ``G - V(F)``."""

    def __init__(self, d: PeriodicGraphDescription, family: RayFamily):
        self.d = d
        self.family = family
        self._member = _Membership(family.rays)
        self._comp: dict[Key, frozenset] = {}
        self._sig: dict[frozenset, tuple] = {}

    def ray_of(self, key: Key) -> Optional[int]:
        return self._member.ray_of(key)

    def in_f(self, key: Key) -> bool:
        return self.ray_of(key) is not None

    def position(self, key: Key) -> tuple[int, int]:
        i = self.ray_of(key)
        if i is None:
            raise ValueError(f"{key_label(self.d, key)} is not on a ray")
        return i, self.family.ray(i).position(key)

    def succ(self, key: Key) -> Key:
        i, j = self.position(key)
        return self.family.ray(i).vertex(j + 1)

    def pred(self, key: Key) -> Optional[Key]:
        i, j = self.position(key)
        return self.family.ray(i).vertex(j - 1) if j > 0 else None

    def component(self, w: Key, cap: int = 100000) -> frozenset:
        if w in self._comp:
            return self._comp[w]
        seen = {w}
        todo = [w]
        while todo:
            x = todo.pop()
            for y in self.d.neighbours(x):
                if y not in seen and not self.in_f(y):
                    seen.add(y)
                    todo.append(y)
                    if len(seen) > cap:
                        raise ConstructionError(f"component of {key_label(self.d, w)} exceeds {cap} vertices")
        comp = frozenset(seen)
        for x in comp:
            self._comp[x] = comp
        return comp

    def attached(self, v: Key) -> tuple[frozenset, ...]:
        """B(v): the components of G - V(F) adjacent to ``v``, by least vertex."""
        comps = {self.component(w) for w in self.d.neighbours(v) if not self.in_f(w)}
        return tuple(sorted(comps, key=min))

    def attachments(self, comp: frozenset) -> list[Key]:
        return sorted({y for x in comp for y in self.d.neighbours(x) if self.in_f(y)})

    def component_graph(self, comp: frozenset) -> tuple[Graph, list[Key]]:
        keys = sorted(comp)
        pos = {k: i for i, k in enumerate(keys)}
        edges = [(pos[x], pos[y]) for x in keys for y in self.d.neighbours(x) if y in pos and pos[x] < pos[y]]
        return Graph.from_edges(len(keys), edges), keys

    def signature(self, comp: frozenset, colours: Optional[dict] = None) -> tuple:
        """Isomorphism type of ``comp`` together with its attachments to F.

        Two components share a signature iff an automorphism fixing F
        pointwise (and, with ``colours``, preserving those edge colours)
        swaps them.
        """
        if colours is None and comp in self._sig:
            return self._sig[comp]
        g, keys = self.component_graph(comp)
        labels = []
        for x in keys:
            att = [y for y in self.d.neighbours(x) if self.in_f(y)]
            if colours is None:
                labels.append(tuple(att))
            else:
                labels.append(tuple((y, colours.get(_edge(x, y))) for y in att))
        sig = canonical_form(g, vertex_labels=labels).certificate
        if colours is None:
            self._sig[comp] = sig
        return sig

    def orbits(self, v: Key) -> list[list[frozenset]]:
        """B(v) split into orbits of Aut(G, F), in order of least vertex."""
        groups: dict[tuple, list[frozenset]] = {}
        for c in self.attached(v):
            groups.setdefault(self.signature(c), []).append(c)
        return sorted(groups.values(), key=lambda cs: min(cs[0]))

    def support(self, v: Key, w: Key) -> str:
        if not self.in_f(v):
            raise ValueError(f"{key_label(self.d, v)} is not on a ray")
        if self.in_f(w) or w not in self.d.neighbours(v):
            raise ValueError("edge must join a ray vertex to a vertex off the rays")
        if self.d.adjacent(self.succ(v), w):
            return SUPPORTED
        p = self.pred(v)
        if p is not None and self.d.adjacent(p, w):
            return SUPPORTING
        return PLAIN

    def has_supported_edge(self, v: Key) -> bool:
        return any(not self.in_f(w) and self.support(v, w) == SUPPORTED for w in self.d.neighbours(v))

    def kind(self, comp: frozenset):
        g, _ = self.component_graph(comp)
        return classify_special(g)


def _edge(x: Key, y: Key) -> tuple[Key, Key]:
    return (x, y) if x < y else (y, x)


def edge_support(d: PeriodicGraphDescription, family: RayFamily, v: Key, w: Key) -> str:
    return Structure(d, family).support(v, w)


# -- classification --------------------------------------------------------


def classify_rays(d: PeriodicGraphDescription, family: RayFamily) -> RayFamily:
    """Tag each ray R0 (eventually no outside neighbours) or RInf."""
    s = Structure(d, family)
    tags = {}
    for r in family.rays:
        # body vertices of block 1 stand for every later block
        block1 = [(r.arm, r.block + off, u) for off, u in r.body]
        dirty = any(not s.in_f(w) for v in block1 for w in d.neighbours(v))
        tags[r.index] = RINF if dirty else R0
    return replace(family, tags=tags)


def last_dirty_position(s: Structure, r: Ray) -> int:
    """Largest position on an R0 ray with a neighbour off F (-1 if none)."""
    last = -1
    limit = len(r.head) + 2 * len(r.body)
    for j in range(limit):
        if any(not s.in_f(w) for w in s.d.neighbours(r.vertex(j))):
            last = j
    return last


def _k_conflict(s: Structure, ri: Ray, ki: int, rj: Ray, kj: int) -> bool:
    a = [ri.vertex(ki), ri.vertex(2 * ki + 1)]
    b = [rj.vertex(kj - 1), rj.vertex(2 * kj)]
    return any(s.d.adjacent(x, y) for x in a for y in b)


def select_k(d: PeriodicGraphDescription, family: RayFamily) -> RayFamily:
    """Least even k(i) > 2 per R0 ray meeting the separator conditions."""
    if not family.tags:
        family = classify_rays(d, family)
    s = Structure(d, family)
    ks: dict[int, int] = {}
    for r in family.rays:
        if family.tags[r.index] != R0:
            continue
        k = max(4, 2 * (last_dirty_position(s, r) + 1))
        k += k % 2
        while True:
            clash = k in ks.values() or any(
                _k_conflict(s, r, k, family.ray(i), kj) or _k_conflict(s, family.ray(i), kj, r, k)
                for i, kj in ks.items())
            if not clash:
                break
            k += 2
        ks[r.index] = k
    return replace(family, k=ks)


def attached_positions(s: Structure, r: Ray) -> Iterator[int]:
    """Positions of the vertices of ``r`` with B(v) non-empty, in ray order."""
    j = 0
    while True:
        if s.attached(r.vertex(j)):
            yield j
        j += 1


def select_favourites(d: PeriodicGraphDescription, family: RayFamily, n: int) -> RayFamily:
    """Favourite vertex on every RInf ray, least admissible rank first."""
    if not family.tags:
        family = classify_rays(d, family)
    s = Structure(d, family)
    fav: dict[int, int] = {}
    rank: dict[int, int] = {}
    notes = list(family.notes)
    for r in family.rays:
        if family.tags[r.index] != RINF:
            continue
        forbidden = set(s.attached(r.vertex(0)))
        for i, j in fav.items():
            forbidden |= set(s.attached(family.ray(i).vertex(j)))
        last_bad = max((r.position(y) for c in forbidden for y in s.attachments(c)
                        if s.ray_of(y) == r.index), default=-1)
        floor = max([1] + list(rank.values())) + 1
        ranked = attached_positions(s, r)
        m, pos = 0, next(ranked)
        while m < floor or pos <= last_bad:
            m, pos = m + 1, next(ranked)
        v = r.vertex(pos)
        if not (len(s.attached(v)) <= n - 3 or s.has_supported_edge(v)):
            m, pos = m + 1, next(ranked)
            notes.append(f"ray {r.index}: favourite moved one step to rank {m}")
        fav[r.index], rank[r.index] = pos, m
    out = replace(family, favourites=fav, favourite_rank=rank, notes=tuple(notes))
    bad = check_favourites(s.d, out, n)
    if bad:
        raise ConstructionError("; ".join(bad))
    return out


# -- predicate checks ------------------------------------------------------


def check_favourites(d: PeriodicGraphDescription, family: RayFamily, n: int) -> list[str]:
    """Violations of the three favourite-vertex conditions (empty if all hold)."""
    s = Structure(d, family)
    out = []
    favs = {i: family.ray(i).vertex(j) for i, j in family.favourites.items()}
    for i, tag in family.tags.items():
        if tag == RINF and i not in favs:
            out.append(f"RInf ray {i} has no favourite")
    items = sorted(favs.items())
    for x, (i, v) in enumerate(items):
        bv = set(s.attached(v))
        for j, u in items[x + 1:]:
            if bv & set(s.attached(u)):
                out.append(f"disjoint favourites: favourites of rays {i} and {j} share a component")
        if bv & set(s.attached(family.ray(i).vertex(0))):
            out.append(f"endvertex clearance: favourite of ray {i} shares a component with its endvertex")
        if family.ray(i).position(v) == 0:
            out.append(f"favourite of ray {i} is its endvertex")
        supported = s.has_supported_edge(v)
        for orbit in s.orbits(v):
            if len(orbit) > n - 3 and not supported:
                out.append(f"orbit size: favourite of ray {i} has an orbit of size {len(orbit)} and no supported edge")
    ranks = list(family.favourite_rank.values())
    if len(set(ranks)) != len(ranks):
        out.append("favourite ranks repeat")
    return out


def check_k(d: PeriodicGraphDescription, family: RayFamily) -> list[str]:
    """Violations of the four separator conditions on k(i)."""
    s = Structure(d, family)
    out = []
    for i, k in family.k.items():
        if k <= 2 or k % 2:
            out.append(f"even separator: k({i}) = {k}")
        if last_dirty_position(s, family.ray(i)) >= k // 2:
            out.append(f"clean subray: ray {i} has outside neighbours at or beyond position {k // 2}")
    for tag_i, k in family.tags.items():
        if k == R0 and tag_i not in family.k:
            out.append(f"R0 ray {tag_i} has no k")
    ks = list(family.k.values())
    if len(set(ks)) != len(ks):
        out.append("distinct separators: repeated k")
    items = sorted(family.k.items())
    for i, ki in items:
        for j, kj in items:
            if i != j and _k_conflict(s, family.ray(i), ki, family.ray(j), kj):
                out.append(f"separator adjacency: rays {i} and {j}")
    return out


def orbit_bound_violations(d: PeriodicGraphDescription, family: RayFamily, n: int, depth: int) -> list[str]:
    """Orbit-size bounds at every ray vertex below copy ``depth``."""
    s = Structure(d, family)
    out = []
    for r in family.rays:
        for v in r.vertices(depth):
            att = s.attached(v)
            if len(att) > n - 1:
                out.append(f"{key_label(d, v)}: |B(v)| = {len(att)} > {n - 1}")
            for orbit in s.orbits(v):
                if len(orbit) > n - 2:
                    out.append(f"{key_label(d, v)}: orbit of size {len(orbit)} > {n - 2}")
                elif len(orbit) == n - 2 and r.position(v) != 0:
                    kinds = {s.support(v, w) for c in orbit for w in d.neighbours(v) if w in c}
                    if not kinds & {SUPPORTED, SUPPORTING}:
                        out.append(f"{key_label(d, v)}: orbit of size {n - 2} with neither edge kind")
    return out
