"""Brute-force ground truth for distinguishing edge colourings of small graphs.

Colourings are walked in lexicographic order of the colour vector over
``g.edges()``. Symmetry is used only through early distinguishing checks:

* an automorphism is *broken* as soon as two assigned edges ``e`` and
  ``p(e)`` carry different colours, and stays broken in every completion;
* once every non-identity automorphism is broken, every completion is
  distinguishing;
* once an unbroken automorphism has all of its moved edges assigned, no
  completion can break it and the subtree is skipped.

There is no orbit-canonical enumeration, so the oracle stays easy to trust.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional

import numpy as np

from .automorphism import automorphism_group, identity
from .graph import Edge, EdgeColouring, Graph, is_connected, norm_edge

DEFAULT_NODE_BUDGET = 10**8
DEFAULT_TIME_BUDGET = 600.0


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class Budget:
    """Caps on search-tree nodes visited and on wall-clock seconds."""

    nodes: int = DEFAULT_NODE_BUDGET
    seconds: Optional[float] = DEFAULT_TIME_BUDGET
    used: int = 0
    _start: Optional[float] = None

    def tick(self, amount: int = 1) -> None:
        if self._start is None:
            self._start = time.monotonic()
        self.used += amount
        if self.used > self.nodes:
            raise BudgetExceeded(f"search exceeded node budget {self.nodes}")
        if self.seconds is not None and self.used % 1024 == 0:
            if time.monotonic() - self._start > self.seconds:
                raise BudgetExceeded(f"search exceeded time budget {self.seconds}s")


class EdgeAction:
    """The action of Aut(g, fixed pointwise) on the sorted edge list of ``g``."""

    def __init__(self, g: Graph, fixed: Iterable[int] = (), max_order: int = 2_000_000):
        self.g = g
        self.fixed = tuple(sorted(set(fixed)))
        self.edges = g.edges()
        index = {e: i for i, e in enumerate(self.edges)}
        grp = automorphism_group(g, fixed=self.fixed)
        self.order = grp.order
        elems = grp.elements(limit=max_order)
        rows = [[index[norm_edge(p[u], p[v])] for (u, v) in self.edges] for p in elems]
        m = len(self.edges)
        self.full = np.array(rows, dtype=np.int64).reshape(len(elems), m)
        ident = identity(g.n)
        nontriv = [i for i, p in enumerate(elems) if p != ident]
        self.perms = self.full[nontriv]
        self.inv = np.argsort(self.perms, axis=1) if m else self.perms.copy()
        moved = self.perms != np.arange(m)[None, :]
        if m:
            self.last_moved = np.where(moved.any(axis=1), m - 1 - np.argmax(moved[:, ::-1], axis=1), -1)
        else:
            self.last_moved = np.full(len(nontriv), -1, dtype=np.int64)

    @property
    def faithful(self) -> bool:
        """True iff only the identity fixes every edge."""
        return bool((self.last_moved >= 0).all())

    def preserved(self, vec: np.ndarray) -> np.ndarray:
        """Mask of non-identity elements preserving a total colour vector."""
        return (vec[self.perms] == vec[None, :]).all(axis=1)

    def canonical_key(self, vec: np.ndarray) -> tuple[int, ...]:
        """Lexicographically least colouring in the orbit of ``vec``."""
        rows = vec[self.full]
        if rows.shape[1] == 0:
            return ()
        best = np.lexsort(rows.T[::-1])[0]
        return tuple(int(x) for x in rows[best])


def _search(act: EdgeAction, k: int, budget: Budget,
            preset: Mapping[int, int] | None = None) -> Iterator[np.ndarray]:
    m = len(act.edges)
    preset = dict(preset or {})
    col = np.zeros(m, dtype=np.int64)
    perms, inv, last = act.perms, act.inv, act.last_moved
    domains = [[preset[i]] if i in preset else list(range(1, k + 1)) for i in range(m)]

    def rec(d: int, alive: np.ndarray) -> Iterator[np.ndarray]:
        budget.tick()
        if alive.size == 0:
            for tail in itertools.product(*domains[d:]):
                budget.tick()
                col[d:] = tail
                yield col.copy()
            return
        if (last[alive] < d).any():
            return
        for x in domains[d]:
            col[d] = x
            j = perms[alive, d]
            i = inv[alive, d]
            broken = ((j <= d) & (col[j] != x)) | ((i <= d) & (col[i] != x))
            yield from rec(d + 1, alive[~broken])

    yield from rec(0, np.arange(perms.shape[0]))


def _check_inputs(g: Graph, k: int) -> None:
    if k < 1:
        raise ValueError("palette size must be at least 1")


def iter_distinguishing_vectors(g: Graph, k: int, fixed: Iterable[int] = (),
                                budget: Budget | None = None,
                                preset: Mapping[Edge, int] | None = None,
                                action: EdgeAction | None = None) -> Iterator[np.ndarray]:
    _check_inputs(g, k)
    act = action or EdgeAction(g, fixed)
    index = {e: i for i, e in enumerate(act.edges)}
    pre = {index[norm_edge(*e)]: c for e, c in (preset or {}).items()}
    yield from _search(act, k, budget or Budget(), pre)


def enumerate_distinguishing(g: Graph, k: int, fixed: Iterable[int] = (),
                             budget: Budget | None = None) -> Iterator[EdgeColouring]:
    """Distinguishing colourings of ``(g, fixed)`` with palette ``1..k``, lexicographically."""
    edges = g.edges()
    for vec in iter_distinguishing_vectors(g, k, fixed, budget):
        yield EdgeColouring(dict(zip(edges, vec.tolist())), k)


def first_distinguishing(g: Graph, k: int, fixed: Iterable[int] = (),
                         budget: Budget | None = None,
                         preset: Mapping[Edge, int] | None = None) -> Optional[EdgeColouring]:
    edges = g.edges()
    for vec in iter_distinguishing_vectors(g, k, fixed, budget, preset):
        return EdgeColouring(dict(zip(edges, vec.tolist())), k)
    return None


@dataclass(frozen=True)
class DistResult:
    """``value`` None with ``exceeds`` None means no finite palette works."""

    value: Optional[int]
    witness: Optional[EdgeColouring] = None
    exceeds: Optional[int] = None

    @property
    def no_finite(self) -> bool:
        return self.value is None and self.exceeds is None

    def __str__(self) -> str:
        if self.value is not None:
            return f"D'={self.value}"
        if self.exceeds is not None:
            return f"D'>{self.exceeds}"
        return "D'=infinity"


def distinguishing_index(g: Graph, max_k: int | None = None, budget: Budget | None = None) -> DistResult:
    if not is_connected(g):
        raise ValueError("distinguishing_index needs a connected graph")
    if g.size < 1:
        raise ValueError("distinguishing_index needs at least one edge")
    budget = budget or Budget()
    act = EdgeAction(g)
    # an automorphism fixing every edge survives every colouring
    if not act.faithful:
        return DistResult(None)
    top = g.size if max_k is None else min(max_k, g.size)
    for k in range(1, top + 1):
        for vec in _search(act, k, budget):
            return DistResult(k, EdgeColouring(dict(zip(act.edges, vec.tolist())), k))
    return DistResult(None, exceeds=top)


def count_nonisomorphic_distinguishing(g: Graph, root: Iterable[int], k: int,
                                       limit: int | None = None,
                                       budget: Budget | None = None) -> int:
    """Number of root-fixing isomorphism classes of distinguishing colourings of ``(g, root)``.

    With ``limit`` the count stops as soon as it reaches ``limit``.
    """
    act = EdgeAction(g, root)
    keys: set[tuple[int, ...]] = set()
    for vec in _search(act, k, budget or Budget()):
        keys.add(act.canonical_key(vec))
        if limit is not None and len(keys) >= limit:
            break
    return len(keys)


def nonisomorphic_distinguishing(g: Graph, root: Iterable[int], k: int, limit: int,
                                 budget: Budget | None = None) -> list[EdgeColouring]:
    """First ``limit`` pairwise non-isomorphic distinguishing colourings, in search order."""
    act = EdgeAction(g, root)
    keys: set[tuple[int, ...]] = set()
    out = []
    for vec in _search(act, k, budget or Budget()):
        key = act.canonical_key(vec)
        if key in keys:
            continue
        keys.add(key)
        out.append(EdgeColouring(dict(zip(act.edges, vec.tolist())), k))
        if len(out) >= limit:
            break
    return out
