"""Distinguishing edge colourings of graphs without large induced stars."""

from .automorphism import (
    PermGroup,
    are_colourings_isomorphic,
    automorphism_group,
    canonical_form,
    is_distinguishing,
)
from .graph import BLUE, RED, YELLOW, EdgeColouring, Graph, parse_graph6, write_graph6
from .oracle import Budget, BudgetExceeded, DistResult, count_nonisomorphic_distinguishing, distinguishing_index
from .rooted import Theorem3Outcome, base_case_colouring, theorem3_classify, theorem3_colourings
from .starfree import StarWitness, classify_special, find_induced_star, is_k1n_free

__all__ = [
    "BLUE", "RED", "YELLOW", "Budget", "BudgetExceeded", "DistResult", "EdgeColouring", "Graph",
    "PermGroup", "StarWitness", "Theorem3Outcome", "are_colourings_isomorphic", "automorphism_group",
    "base_case_colouring", "canonical_form", "classify_special", "count_nonisomorphic_distinguishing",
    "distinguishing_index", "find_induced_star", "is_distinguishing", "is_k1n_free", "parse_graph6",
    "theorem3_classify", "theorem3_colourings", "write_graph6",
]
