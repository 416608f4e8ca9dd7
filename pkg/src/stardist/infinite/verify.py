"""Rigidity of a periodic colouring, checked on finite truncations.

The proxy for automorphisms of the infinite graph is the group of
colour-preserving automorphisms of a truncation that map its boundary (the
last copy of every arm) onto itself. A vertex is in the *fixed core* when
every such automorphism fixes it. The check passes when the core contains
every vertex at depth at most ``depth - margin``, the margin absorbing the
extra freedom near the cut.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..automorphism import automorphism_group
from .colouring import PeriodicColouring
from .igd import PeriodicGraphDescription, key_label, truncate


@dataclass(frozen=True)
class FixedCoreReport:
    depth: int
    margin: int
    passed: bool
    vertices: int
    group_order: int
    unfixed: tuple[str, ...]  # required vertices some automorphism moves
    witness: Optional[dict] = None  # a moving automorphism, label -> label

    def to_json(self) -> dict:
        return {"depth": self.depth, "margin": self.margin, "passed": self.passed,
                "vertices": self.vertices, "group_order": self.group_order,
                "unfixed": list(self.unfixed), "witness": self.witness}


def verify_fixed_core(d: PeriodicGraphDescription, col: PeriodicColouring, depth: int,
                      margin: int) -> FixedCoreReport:
    if not depth > margin >= 1:
        raise ValueError("need depth > margin >= 1")
    t = truncate(d, depth)
    labels = [int(v in t.boundary) for v in range(t.graph.n)]
    grp = automorphism_group(t.graph, col.expand(t), vertex_labels=labels)
    required = [v for v in range(t.graph.n) if t.depth_of(v) <= depth - margin]
    orbit_of = {}
    for orb in grp.orbits():
        for v in orb:
            orbit_of[v] = orb
    unfixed = [v for v in required if len(orbit_of[v]) > 1]
    witness = None
    if unfixed:
        for p in grp.generators:
            if any(p[v] != v for v in unfixed):
                witness = {key_label(d, t.origin[v]): key_label(d, t.origin[p[v]])
                           for v in range(t.graph.n) if p[v] != v}
                break
    return FixedCoreReport(depth, margin, not unfixed, t.graph.n, grp.order,
                           tuple(key_label(d, t.origin[v]) for v in unfixed), witness)
