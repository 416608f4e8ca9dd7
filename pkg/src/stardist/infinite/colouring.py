"""Distinguishing edge colouring of an eventually periodic star-free graph.

Colours: 1 blue, 2 red, 3 yellow, 4.. the rest. The construction runs on
the infinite graph lazily up to a copy limit:

1. edges between different rays are red; RInf rays are blue; each R0 ray
   is blue except for two red separator edges placed by ``k(i)``;
2. ray vertices are visited ray by ray, in order along each ray. At each
   vertex one edge is chosen into every attached component (supported
   edges first, then supporting, then the rest; never the centre of an
   exceptional star or hourglass), orbits of attached components are
   coloured by size class, and the red overrides are applied;
3. every non-trivial component gets one of two fixed rooted colourings at
   the endpoint of its unique non-red edge to the rays.

The colours on a finite window are then folded into a pre-period and a
repeating pattern per arm, and the fold is checked against a window of
twice the size.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..graph import EdgeColouring, Graph, RED, BLUE, YELLOW, norm_edge
from ..rooted import rooted_form, theorem3_colourings
from .igd import PREFIX, Key, PeriodicGraphDescription, Truncation, find_star, key_label
from .rays import (
    R0,
    RINF,
    SUPPORTED,
    SUPPORTING,
    ConstructionError,
    RayFamily,
    Structure,
    classify_rays,
    ray_family,
    select_favourites,
    select_k,
)

Edge = tuple[Key, Key]


def _edge(x: Key, y: Key) -> Edge:
    return (x, y) if x < y else (y, x)


def _copy(key: Key) -> int:
    return -1 if key[0] == PREFIX else key[1]


# -- periodic colourings ---------------------------------------------------


@dataclass(frozen=True)
class ArmPattern:
    """Colours of one arm: prefix splices, a pre-period, then a repeating cycle.

    Copy colourings map ``('u', x, y)`` (unit edge in the copy) and
    ``('s', x, y)`` (splice from this copy to the next) to colours.
    """

    entry: dict
    head: tuple[dict, ...]
    cycle: tuple[dict, ...]

    def copy_colours(self, k: int) -> dict:
        if k < len(self.head):
            return self.head[k]
        return self.cycle[(k - len(self.head)) % len(self.cycle)]


@dataclass(frozen=True)
class PeriodicColouring:
    n: int
    prefix: dict  # (u, v) -> colour
    arms: tuple[ArmPattern, ...]

    def colour(self, x: Key, y: Key) -> int:
        x, y = _edge(x, y)
        if x[0] == PREFIX and y[0] == PREFIX:
            return self.prefix[(x[2], y[2])]
        if x[0] == PREFIX:
            return self.arms[y[0]].entry[(x[2], y[2])]
        a, k, u = x
        _, k2, v = y
        if k2 == k:
            return self.arms[a].copy_colours(k)[("u",) + norm_edge(u, v)]
        return self.arms[a].copy_colours(k)[("s", u, v)]

    def expand(self, t: Truncation) -> EdgeColouring:
        k = max(self.n - 1, 1)
        return EdgeColouring({(i, j): self.colour(t.origin[i], t.origin[j]) for i, j in t.graph.edges()}, k)

    def to_json(self) -> dict:
        def enc(m: dict) -> dict:
            return {"-".join(map(str, key)): c for key, c in sorted(m.items())}

        return {
            "n": self.n,
            "prefix": enc(self.prefix),
            "arms": [{"entry": enc(a.entry), "head": [enc(c) for c in a.head],
                      "cycle": [enc(c) for c in a.cycle]} for a in self.arms],
        }


def _fold(d: PeriodicGraphDescription, colours: dict, limit: int) -> PeriodicColouring:
    prefix, entries = {}, [dict() for _ in d.arms]
    copies = [[dict() for _ in range(limit)] for _ in d.arms]
    for (x, y), c in colours.items():
        if x[0] == PREFIX and y[0] == PREFIX:
            prefix[(x[2], y[2])] = c
        elif x[0] == PREFIX:
            entries[y[0]][(x[2], y[2])] = c
        elif y[1] < limit:
            a, k, u = x
            if y[1] == k:
                copies[a][k][("u",) + norm_edge(u, y[2])] = c
            else:
                copies[a][k][("s", u, y[2])] = c
    arms = []
    for a, cs in enumerate(copies):
        cs = cs[:limit - 1]
        best = None
        for p in range(1, 5):
            for q in range(0, len(cs)):
                if len(cs) - q < 3 * p:
                    break
                if all(cs[k] == cs[k + p] for k in range(q, len(cs) - p)):
                    best = (q, p)
                    break
            if best:
                break
        if best is None:
            raise ConstructionError(f"arm {d.arms[a].name}: colouring shows no period <= 4 in {limit} copies")
        q, p = best
        arms.append(ArmPattern(entries[a], tuple(cs[:q]), tuple(cs[q:q + p])))
    return PeriodicColouring(0, prefix, tuple(arms))


# -- rooted component colourings -------------------------------------------


class ComponentColourer:
    """c(B, w, 0) and c(B, w, 1): the first two rooted colourings, one per class."""

    def __init__(self, n: int):
        self.n = n
        self._cache: dict[tuple, tuple[EdgeColouring, EdgeColouring]] = {}

    def colourings(self, g: Graph, root: int) -> tuple[EdgeColouring, EdgeColouring]:
        cf = rooted_form(g, root)
        if cf.certificate not in self._cache:
            pos = cf.position()
            canon = g.relabel([pos[v] for v in range(g.n)])
            out = theorem3_colourings(canon, pos[root], self.n)
            if out.is_exception:
                raise ConstructionError(f"component rooted at an exceptional vertex ({out.exception})")
            self._cache[cf.certificate] = (out.colourings[0], out.colourings[1])
        back = dict(enumerate(cf.labelling))
        return tuple(EdgeColouring({norm_edge(back[u], back[v]): c for (u, v), c in col.items()}, self.n - 1)
                     for col in self._cache[cf.certificate])


# -- the construction ------------------------------------------------------


@dataclass
class ComponentRecord:
    vertices: tuple[Key, ...]
    root: Optional[Key]
    variant: Optional[int]
    reason: str


@dataclass
class Construction:
    d: PeriodicGraphDescription
    n: int
    family: RayFamily
    depth: int
    colours: dict = field(default_factory=dict)
    chosen: dict = field(default_factory=dict)  # edge -> case label
    components: list = field(default_factory=list)
    span: int = 0
    violations: list = field(default_factory=list)

    @property
    def reliable(self) -> int:
        """Copies below this index carry final colours."""
        return self.depth - self.span - 2


def _red_separators(r, k: int) -> set[int]:
    return {k - 1, 2 * k}


def build(d: PeriodicGraphDescription, n: int, depth: int, family: Optional[RayFamily] = None,
          colourer: Optional[ComponentColourer] = None) -> Construction:
    if family is None:
        family = prepare(d, n)
    s = Structure(d, family)
    con = Construction(d, n, family, depth)
    col = con.colours
    favs = {family.ray(i).vertex(j) for i, j in family.favourites.items()}

    # rays and the edges between them
    for r in family.rays:
        seps = _red_separators(r, family.k[r.index]) if family.tags[r.index] == R0 else set()
        for j, v in enumerate(r.vertices(depth)):
            col[_edge(v, r.vertex(j + 1))] = RED if j in seps else BLUE
            for w in d.neighbours(v):
                if s.in_f(w) and s.ray_of(w) != r.index:
                    col[_edge(v, w)] = RED

    # edges from rays to the components, vertex by vertex
    seen_comps: dict[frozenset, None] = {}
    for r in family.rays:
        for j, v in enumerate(r.vertices(depth)):
            _visit(s, con, r, j, v, favs)
            for c in s.attached(v):
                seen_comps.setdefault(c, None)

    # component colourings
    colourer = colourer or ComponentColourer(n)
    done = {v for r in family.rays for v in r.vertices(depth)}
    complete = [c for c in seen_comps if all(y in done for y in s.attachments(c))]
    con.span = max([max(_copy(x) for x in c) - min(_copy(x) for x in c) + 1 for c in complete] + [1])
    roots: dict[frozenset, Key] = {}
    for c in complete:
        if len(c) == 1:
            con.components.append(ComponentRecord(tuple(c), next(iter(c)), None, "single"))
            continue
        live = [(x, y) for x in c for y in d.neighbours(x) if s.in_f(y) and col[_edge(x, y)] != RED]
        if len(live) != 1:
            con.violations.append(
                f"component at {key_label(d, min(c))} has {len(live)} non-red edges to the rays")
        if live:
            roots[c] = min(live)[0]
    variant: dict[frozenset, tuple[int, str]] = {}
    # components not stabilized by the partial colouring: break them pairwise
    by_vertex: dict[Key, list[frozenset]] = {}
    for c in roots:
        for y in s.attachments(c):
            by_vertex.setdefault(y, []).append(c)
    for v, cs in sorted(by_vertex.items()):
        groups: dict[tuple, list[frozenset]] = {}
        for c in sorted(cs, key=min):
            groups.setdefault(s.signature(c, col), []).append(c)
        for g in groups.values():
            if len(g) < 2 or any(c in variant for c in g):
                continue
            if s.family.ray(s.ray_of(v)).position(v) != 0:
                con.violations.append(f"unstabilized components at non-endvertex {key_label(d, v)}")
            if len(g) > 2:
                con.violations.append(f"{len(g)} interchangeable components at {key_label(d, v)}")
            for i, c in enumerate(g):
                variant[c] = (min(i, 1), f"sibling-{min(i, 1)}")
    for c, w in roots.items():
        if c in variant:
            continue
        at_fav = [u for u in s.attachments(c) if u in favs]
        if at_fav:
            if not any(col[_edge(w, u)] != RED for u in at_fav if d.adjacent(w, u)):
                con.violations.append(f"component at {key_label(d, min(c))} meets a favourite by red edges only")
            variant[c] = (1, "favourite")
        else:
            variant[c] = (0, "plain")
    for c, w in sorted(roots.items(), key=lambda cw: min(cw[0])):
        g, keys = s.component_graph(c)
        idx = keys.index(w)
        v, why = variant[c]
        rooted = colourer.colourings(g, idx)[v]
        for (a, b), colour in rooted.items():
            col[_edge(keys[a], keys[b])] = colour
        con.components.append(ComponentRecord(tuple(keys), w, v, why))
    return con


def _distinct(count: int, palette: list[int]) -> list[int]:
    if count > len(palette):
        raise ConstructionError(f"need {count} distinct colours from {palette}")
    return palette[:count]


def _visit(s: Structure, con: Construction, r, j: int, v: Key, favs: set[Key]) -> None:
    d, n, col = s.d, con.n, con.colours
    endvertex = j == 0
    succ = r.vertex(j + 1)
    pred = r.vertex(j - 1) if j else None
    comps = s.attached(v)
    if len(comps) > n - 1:
        raise ConstructionError(f"{key_label(d, v)}: {len(comps)} attached components, graph has an induced star")
    chosen: dict[frozenset, Key] = {}
    for c in comps:
        targets = [w for w in d.neighbours(v) if w in c]
        kind = s.kind(c)
        if kind.tag == "Star" and kind.m == n - 1 or (n == 3 and kind.tag == "Hourglass"):
            _, keys = s.component_graph(c)
            centre = keys[kind.centre]
            targets = [w for w in targets if w != centre]
            if not targets:
                raise ConstructionError(f"{key_label(d, v)}: exceptional component attached only at its centre")

        def rank(w: Key) -> tuple:
            if d.adjacent(succ, w):
                return (0, w)
            if pred is not None and d.adjacent(pred, w):
                return (1, w)
            return (2, w)

        chosen[c] = min(targets, key=rank)

    for orbit in s.orbits(v):
        size = len(orbit)
        ws = sorted(chosen[c] for c in orbit)
        kinds = {w: s.support(v, w) for w in ws}
        base: dict[Key, int] = {}
        if size <= n - 3:
            case = "small"
            base[ws[0]] = YELLOW
            for w, c in zip(ws[1:], _distinct(size - 1, list(range(4, n)))):
                base[w] = c
        elif size == n - 2:
            single = all(len(c) == 1 for c in orbit)
            if endvertex and (single or n == 3):
                case = "C1"
                base[ws[0]] = BLUE
                for w, c in zip(ws[1:], _distinct(size - 1, list(range(2, n)))):
                    base[w] = c
            elif endvertex:
                case = "C2"
                base[ws[0]] = base[ws[1]] = BLUE
                for w, c in zip(ws[2:], _distinct(size - 2, list(range(3, n)))):
                    base[w] = c
            else:
                sup = [w for w in ws if kinds[w] == SUPPORTED]
                spt = [w for w in ws if kinds[w] == SUPPORTING]
                if sup:
                    case, first, colour = "C3", sup[0], BLUE
                elif spt:
                    case, first, colour = "C4", spt[0], RED
                else:
                    raise ConstructionError(
                        f"{key_label(d, v)}: orbit of size {size} with no supported or supporting edge")
                base[first] = colour
                rest = [w for w in ws if w != first]
                for w, c in zip(rest, _distinct(len(rest), list(range(3, n)))):
                    base[w] = c
        else:
            raise ConstructionError(f"{key_label(d, v)}: orbit of {size} components exceeds {n - 2}")

        for c in orbit:
            w = chosen[c]
            colour = base[w]
            tag = case
            if colour != RED:
                bare = len(c) == 1 and v not in favs and not endvertex
                if any(u != v and u in favs for u in s.attachments(c)):
                    colour, tag = RED, case + "+R1"
                elif any(col.get(_edge(x, u), RED) != RED for x in c for u in d.neighbours(x) if s.in_f(u)):
                    colour, tag = RED, case + "+R2"
                elif bare and colour == BLUE:
                    colour, tag = RED, case + "+R3"
                elif bare and colour == YELLOW and size <= n - 3:
                    colour, tag = RED, case + "+R3y"
            col[_edge(v, w)] = colour
            con.chosen[_edge(v, w)] = tag
            for x in d.neighbours(v):
                if x in c and x != w:
                    col[_edge(v, x)] = RED


def prepare(d: PeriodicGraphDescription, n: int) -> RayFamily:
    """Ray family with tags, k values and favourites, after the star check."""
    if n < 3:
        raise ValueError("n must be at least 3")
    star = find_star(d, n)
    if star is not None:
        centre, leaves = star
        raise ConstructionError(
            f"induced K_1,{n}: centre {key_label(d, centre)} leaves "
            + " ".join(key_label(d, x) for x in leaves))
    fam = classify_rays(d, ray_family(d))
    fam = select_k(d, fam)
    return select_favourites(d, fam, n)


def _needed_depth(d: PeriodicGraphDescription, fam: RayFamily) -> int:
    marks = [0]
    for r in fam.rays:
        marks += [_copy(v) for v in r.head]
        if r.index in fam.k:
            marks.append(_copy(r.vertex(2 * fam.k[r.index] + 2)))
        if r.index in fam.favourites:
            marks.append(_copy(r.vertex(fam.favourites[r.index] + 1)))
        marks.append(2 * r.block)
    return max(marks) + 1


def construct(d: PeriodicGraphDescription, n: int, depth: Optional[int] = None) -> tuple[Construction, PeriodicColouring]:
    fam = prepare(d, n)
    colourer = ComponentColourer(n)
    if depth is None:
        probe = build(d, n, _needed_depth(d, fam) + 6, fam, colourer)
        depth = _needed_depth(d, fam) + 3 * (probe.span + 2) + 12
    con = build(d, n, depth, fam, colourer)
    if con.reliable < 8:
        raise ConstructionError("window too small for a periodic fold")
    pc = _fold(d, con.colours, con.reliable)
    pc = PeriodicColouring(n, pc.prefix, pc.arms)
    # the fold must predict a window twice as deep
    wide = build(d, n, 2 * depth, fam, colourer)
    for (x, y), c in wide.colours.items():
        if max(_copy(x), _copy(y)) < wide.reliable and pc.colour(x, y) != c:
            raise ConstructionError(
                f"fold disagrees with a wider window at {key_label(d, x)}-{key_label(d, y)}")
    return con, pc


def construct_colouring(d: PeriodicGraphDescription, n: int) -> PeriodicColouring:
    return construct(d, n)[1]


# -- structural laws -------------------------------------------------------


def check_laws(con: Construction, colourer: Optional[ComponentColourer] = None) -> list[str]:
    """Violations of the structural laws on the reliable part of the window."""
    d, fam, col = con.d, con.family, con.colours
    s = Structure(d, fam)
    lim = con.reliable
    out = list(con.violations)

    def inside(*keys: Key) -> bool:
        return all(_copy(k) < lim for k in keys)

    for r in fam.rays:
        verts = list(r.vertices(lim))
        for j, v in enumerate(verts[:-1]):
            c = col[_edge(v, verts[j + 1])]
            if fam.tags[r.index] == RINF and c != BLUE:
                out.append(f"(b) RInf ray {r.index} edge {j} is {c}")
            if fam.tags[r.index] == R0:
                k = fam.k[r.index]
                want = RED if j in (k - 1, 2 * k) else BLUE
                if c != want:
                    out.append(f"(c) R0 ray {r.index} edge {j} is {c}, expected {want}")
            for w in d.neighbours(v):
                if s.in_f(w) and s.ray_of(w) != r.index and inside(w) and col[_edge(v, w)] != RED:
                    out.append(f"(a) inter-ray edge at {key_label(d, v)} is not red")
    colourer = colourer or ComponentColourer(con.n)
    favs = {fam.ray(i).vertex(j) for i, j in fam.favourites.items()}
    for rec in con.components:
        if not inside(*rec.vertices) or len(rec.vertices) == 1:
            continue
        c = frozenset(rec.vertices)
        live = [(x, y) for x in c for y in d.neighbours(x) if s.in_f(y) and col[_edge(x, y)] != RED]
        if len(live) != 1:
            out.append(f"(d) component at {key_label(d, rec.vertices[0])} has {len(live)} non-red edges to F")
        at_fav = any(y in favs for y in s.attachments(c))
        want = 1 if at_fav or rec.reason == "sibling-1" else 0
        if rec.variant != want:
            out.append(f"(e) component at {key_label(d, rec.vertices[0])} uses variant {rec.variant}")
        g, keys = s.component_graph(c)
        ref = colourer.colourings(g, keys.index(rec.root))[rec.variant]
        for (a, b), colour in ref.items():
            if col[_edge(keys[a], keys[b])] != colour:
                out.append(f"(e) component at {key_label(d, rec.vertices[0])} deviates from its rooted colouring")
                break
    return out


def corrupt(con: Construction) -> PeriodicColouring:
    """Negative control: every separator and inter-ray edge recoloured blue."""
    s = Structure(con.d, con.family)
    col = dict(con.colours)
    for (x, y), c in col.items():
        if s.in_f(x) and s.in_f(y) and c == RED:
            col[(x, y)] = BLUE
    pc = _fold(con.d, col, con.reliable)
    return PeriodicColouring(con.n, pc.prefix, pc.arms)
