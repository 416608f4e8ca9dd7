"""Non-isomorphic distinguishing colourings of rooted star-free graphs.

For a connected finite K_{1,n}-free graph ``g`` with root ``r`` either
``n - 1`` pairwise non-isomorphic distinguishing colourings of ``(g, r)``
with colours ``1..n-1`` exist, or ``(g, r)`` is one of three exceptions:
``K1``, ``K_{1,n-1}`` rooted at its centre, or (for ``n = 3``) the hourglass
rooted at its centre.

The construction recurses on the size of ``g``:

* small complete graphs and short cycles: colour a Hamiltonian path from the
  root with one colour and everything else with another;
* ``r`` adjacent to everything: split ``N(r)`` by the orbit of its least
  vertex, or, when that orbit is all of ``N(r)``, colour the edges from
  ``r`` into the isomorphic components of ``g - r``;
* otherwise: colour the closed neighbourhood ``H`` of ``r`` so that every
  colour-preserving automorphism fixes ``H`` pointwise, complete the rest,
  and take variants on ``H`` (or, when ``(H, r)`` is exceptional, on the
  star at a neighbour ``x`` of ``r`` that reaches outside ``H``).

Each branch produces candidate colourings; they are filtered for being
distinguishing and pairwise non-isomorphic. A branch that yields too few
survivors falls back to the exhaustive oracle on that sub-instance, and the
fallback is recorded in the outcome's route.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from .automorphism import (
    are_colourings_isomorphic,
    automorphism_group,
    canonical_form,
    is_distinguishing,
)
from .graph import EdgeColouring, Graph, components, induced_subgraph, is_connected, norm_edge, pull_back
from .oracle import Budget, BudgetExceeded, first_distinguishing, nonisomorphic_distinguishing
from .starfree import classify_special, find_induced_star

BASE_TAGS = {"K2", "C3", "C4", "C5", "K4", "K5"}
EXCEPTIONS = {"C2": "HourglassCentre", "C3": "StarCentre", "C4": "K1"}
DEFAULT_MAX_VERTICES = 16


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class Theorem3Outcome:
    colourings: tuple[EdgeColouring, ...] = ()
    exception: Optional[str] = None
    route: tuple[str, ...] = ()

    @property
    def is_exception(self) -> bool:
        return self.exception is not None


def _check(g: Graph, r: int, n: int) -> None:
    if n < 3:
        raise PreconditionError("n must be at least 3")
    if not 0 <= r < g.n:
        raise PreconditionError(f"root {r} is not a vertex")
    if not is_connected(g):
        raise PreconditionError("graph is not connected")
    w = find_induced_star(g, n)
    if w is not None:
        raise PreconditionError(f"graph contains an induced K_1,{n}: {w}")


def _classify(g: Graph, r: int, n: int) -> str:
    kind = classify_special(g)
    if kind.tag == "K1":
        return "C4"
    if kind.tag == "Star" and kind.m == n - 1 and kind.centre == r:
        return "C3"
    if n == 3 and kind.tag == "Hourglass" and kind.centre == r:
        return "C2"
    return "C1"


def theorem3_classify(g: Graph, r: int, n: int) -> str:
    _check(g, r, n)
    return _classify(g, r, n)


def rooted_form(g: Graph, r: int, c: EdgeColouring | None = None):
    # root as a vertex label rather than a fixed id, so memo keys ignore numbering
    return canonical_form(g, c, vertex_labels=[int(v == r) for v in range(g.n)])


def _hamiltonian_path(g: Graph, r: int) -> list[int]:
    path = [r]
    seen = {r}

    def rec() -> bool:
        if len(path) == g.n:
            return True
        for w in g.adj[path[-1]]:
            if w not in seen:
                path.append(w)
                seen.add(w)
                if rec():
                    return True
                path.pop()
                seen.discard(w)
        return False

    if not rec():
        raise ValueError("no Hamiltonian path from the root")
    return path


def base_case_colouring(g: Graph, r: int, n: int) -> list[EdgeColouring]:
    """Path colour ``j`` on a Hamiltonian path from ``r``, colour ``j mod (n-1) + 1`` elsewhere."""
    if n < 3:
        raise PreconditionError("n must be at least 3")
    if not 0 <= r < g.n or not is_connected(g) or classify_special(g).tag not in BASE_TAGS:
        raise PreconditionError("base case needs K2, K3, K4, K5, C4 or C5")
    path = _hamiltonian_path(g, r)
    on_path = {norm_edge(a, b) for a, b in zip(path, path[1:])}
    out = []
    for j in range(1, n):
        other = j % (n - 1) + 1
        out.append(EdgeColouring({e: (j if e in on_path else other) for e in g.edges()}, n - 1))
    return out


def _col(a: int, n: int) -> int:
    """Colour for a 0-based proof colour index, cyclically in ``1..n-1``."""
    return a % (n - 1) + 1


@dataclass
class _Builder:
    n: int
    budget: Budget
    max_vertices: int = DEFAULT_MAX_VERTICES
    memo: dict = field(default_factory=dict)
    route: list = field(default_factory=list)

    # -- bookkeeping -------------------------------------------------------

    def note(self, tag: str) -> None:
        self.route.append(tag)

    def lift(self, c: EdgeColouring, mapping: dict[int, int]) -> dict:
        """Colours of a subgraph colouring in the parent's vertex ids."""
        back = {new: old for old, new in mapping.items()}
        return {norm_edge(back[u], back[v]): col for (u, v), col in c.items()}

    def colouring(self, g: Graph, assignment: dict) -> EdgeColouring:
        return EdgeColouring(assignment, self.n - 1)

    # -- recursion ---------------------------------------------------------

    def solve(self, g: Graph, r: int) -> Optional[list[EdgeColouring]]:
        """``n-1`` colourings for a C1 instance, None for an exception."""
        if _classify(g, r, self.n) != "C1":
            return None
        if g.n > self.max_vertices:
            raise BudgetExceeded(f"{g.n} vertices exceeds constructive cap {self.max_vertices}")
        cf = rooted_form(g, r)
        key = cf.certificate
        if key not in self.memo:
            canon = g.relabel([cf.position()[v] for v in range(g.n)])
            croot = cf.position()[r]
            self.memo[key] = self._solve(canon, croot)
        pos = cf.position()
        back = {i: v for v, i in pos.items()}
        return [pull_back(c, back, self.n - 1) for c in self.memo[key]]

    def one(self, g: Graph, r: int) -> EdgeColouring:
        """Some distinguishing colouring of ``(g, r)``, exceptions included."""
        tag = _classify(g, r, self.n)
        if tag == "C4":
            return self.colouring(g, {})
        if tag == "C3":
            return self.colouring(g, {norm_edge(r, x): i + 1 for i, x in enumerate(g.adj[r])})
        if tag == "C2":
            a, b, c, d = (v for comp in components(g, [v for v in range(g.n) if v != r]) for v in comp)
            return self.colouring(g, {
                norm_edge(r, a): 1, norm_edge(r, b): 2, norm_edge(a, b): 1,
                norm_edge(r, c): 1, norm_edge(r, d): 2, norm_edge(c, d): 2,
            })
        return self.solve(g, r)[0]

    def _solve(self, g: Graph, r: int) -> list[EdgeColouring]:
        if classify_special(g).tag in BASE_TAGS:
            self.note("base")
            return self.select(g, r, base_case_colouring(g, r, self.n), "base")
        if len(g.adj[r]) == g.n - 1:
            return self._star_case(g, r)
        return self._outer_case(g, r)

    def select(self, g: Graph, r: int, candidates: list[EdgeColouring], branch: str) -> list[EdgeColouring]:
        need = self.n - 1
        kept, certs = [], set()
        for c in candidates:
            if not is_distinguishing(g, c, [r]):
                continue
            cert = rooted_form(g, r, c).certificate
            if cert in certs:
                continue
            certs.add(cert)
            kept.append(c)
            if len(kept) == need:
                return kept
        self.note(f"fallback:{branch}")
        found = nonisomorphic_distinguishing(g, [r], need, need, self.budget)
        if len(found) < need:
            raise AssertionError(f"oracle found only {len(found)} classes for a C1 instance")
        return found

    # r adjacent to every other vertex
    def _star_case(self, g: Graph, r: int) -> list[EdgeColouring]:
        n = self.n
        nr = list(g.adj[r])
        grp = automorphism_group(g, fixed=[r])
        x = nr[0]
        orbit = grp.orbit(x)
        if len(orbit) != len(nr):
            return self._split_case(g, r, orbit)
        comps = components(g, nr)
        k = len(comps)
        xs = [comp[0] for comp in comps]
        inner = []
        for comp, xi in zip(comps, xs):
            sub, m = induced_subgraph(g, comp)
            inner.append((sub, m, xi))
        cands = []
        if k <= n - 2:
            self.note("orbit-small")
            base = {}
            for sub, m, xi in inner:
                base.update(self.lift(self.one(sub, m[xi]), m))
            for t in range(n - 1):
                a = dict(base)
                for i, comp in enumerate(comps):
                    for v in comp:
                        a[norm_edge(r, v)] = _col(i + t, n) if v == xs[i] else _col(k + t, n)
                cands.append(self.colouring(g, a))
            return self.select(g, r, cands, "orbit-small")
        if k != n - 1:
            raise AssertionError("more than n-1 components in N(r) despite K_1,n-freeness")
        self.note("orbit-full")
        # every X_i is complete and not K1 here
        sub0, m0, x0 = inner[0]
        first = self.solve(sub0, m0[x0])
        if first is None or len(first) < 2:
            return self.select(g, r, [], "orbit-full")
        rest = {}
        for i in range(1, k):
            sub, m, xi = inner[i]
            rest.update(self.lift(self.one(sub, m[xi]), m))
            for v in comps[i]:
                rest[norm_edge(r, v)] = _col(0, n) if v == xi else _col(i, n)

        def variant(d0: EdgeColouring, shift: int) -> EdgeColouring:
            a = dict(rest)
            for e, c in self.lift(d0, m0).items():
                a[e] = _col(c - 1 + shift, n)
            for v in comps[0]:
                a[norm_edge(r, v)] = _col(shift, n) if v == x0 else _col(1 + shift, n)
            return self.colouring(g, a)

        cands = [variant(first[1], t) for t in range(n - 1)]
        cands += [variant(d, 0) for d in first[1:]]
        cands += [variant(d, t) for d in first for t in range(n - 1)]
        return self.select(g, r, cands, "orbit-full")

    def _split_case(self, g: Graph, r: int, orbit: list[int]) -> list[EdgeColouring]:
        n = self.n
        s1 = set(orbit) | {r}
        s2 = set(range(g.n)) - set(orbit)
        g1, m1 = induced_subgraph(g, s1)
        g2, m2 = induced_subgraph(g, s2)
        cross = [e for e in g.edges() if not ((e[0] in s1 and e[1] in s1) or (e[0] in s2 and e[1] in s2))]
        sols = [self.solve(g1, m1[r]), self.solve(g2, m2[r])]
        parts = [(g1, m1), (g2, m2)]
        cands = []
        if sols[0] is not None or sols[1] is not None:
            self.note("split")
            i = 0 if sols[0] is not None else 1
            j = 1 - i
            gj, mj = parts[j]
            fixed_part = self.lift(self.one(gj, mj[r]), mj)
            for c in sols[i]:
                a = dict(fixed_part)
                a.update(self.lift(c, parts[i][1]))
                a.update({e: 1 for e in cross})
                cands.append(self.colouring(g, a))
            return self.select(g, r, cands, "split")
        self.note("split-exceptional")
        base = {}
        for gi, mi in parts:
            base.update(self.lift(self.one(gi, mi[r]), mi))
        for t in range(1, n):
            a = dict(base)
            a.update({e: t for e in cross})
            cands.append(self.colouring(g, a))
        return self.select(g, r, cands, "split-exceptional")

    # N[r] is a proper subset of V(g)
    def _outer_case(self, g: Graph, r: int) -> list[EdgeColouring]:
        n = self.n
        closed = set(g.adj[r]) | {r}
        h, mh = induced_subgraph(g, closed)
        sol_h = self.solve(h, mh[r])
        if sol_h is not None:
            self.note("outer")
            variants = [self.lift(c, mh) for c in sol_h]
            preset = dict(variants[0])
            branch = "outer"
        else:
            self.note("outer-exceptional")
            branch = "outer-exceptional"
            preset = self.lift(self.one(h, mh[r]), mh)
            x = next(v for v in sorted(g.adj[r]) if any(w not in closed for w in g.adj[v]))
            s = {x} | {w for w in g.adj[x] if w not in closed}
            hp, mp = induced_subgraph(g, s)
            sol_p = self.solve(hp, mp[x])
            if sol_p is None:
                return self.select(g, r, [], branch)
            variants = [self.lift(c, mp) for c in sol_p]
            preset.update(variants[0])
        completion = first_distinguishing(g, n - 1, fixed=sorted(closed), budget=self.budget, preset=preset)
        if completion is None:
            return self.select(g, r, [], branch)
        cands = []
        for var in variants:
            a = dict(completion.assignment)
            a.update(var)
            cands.append(self.colouring(g, a))
        return self.select(g, r, cands, branch)


def theorem3_colourings(g: Graph, r: int, n: int, budget: Budget | None = None,
                        max_vertices: int = DEFAULT_MAX_VERTICES) -> Theorem3Outcome:
    _check(g, r, n)
    tag = _classify(g, r, n)
    if tag != "C1":
        return Theorem3Outcome(exception=EXCEPTIONS[tag], route=(tag,))
    b = _Builder(n, budget or Budget(), max_vertices)
    cols = b.solve(g, r)
    verify_outcome(g, r, n, cols)
    return Theorem3Outcome(tuple(cols), route=tuple(b.route))


def verify_outcome(g: Graph, r: int, n: int, cols: list[EdgeColouring]) -> None:
    """Raise AssertionError unless ``cols`` are n-1 valid, pairwise non-isomorphic colourings."""
    if len(cols) != n - 1:
        raise AssertionError(f"expected {n - 1} colourings, got {len(cols)}")
    for c in cols:
        if not c.is_total(g) or len(c) != g.size:
            raise AssertionError("colouring is not total")
        if any(not 1 <= x <= n - 1 for x in c.assignment.values()):
            raise AssertionError("colour outside 1..n-1")
        if not is_distinguishing(g, c, [r]):
            raise AssertionError(f"colouring {c.to_text()} is not distinguishing")
    for i in range(len(cols)):
        for j in range(i + 1, len(cols)):
            if are_colourings_isomorphic(g, [r], cols[i], cols[j]):
                raise AssertionError(f"colourings {i} and {j} are isomorphic")


def route_summary(outcome: Theorem3Outcome) -> Counter:
    return Counter(outcome.route)
