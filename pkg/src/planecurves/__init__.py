"""Chord diagrams and averaged a2 of plane immersed graphs."""

__version__ = "0.1.0"

from .curves import C1, C2, ChordDiagram, CurveError, PlaneCurve, chord_diagram, contains_subchord, curve_from_word
from .diagram import ImmersedDiagram, convex_drawing, restrict_to_cycle, validate
from .graphs import Cycle, Graph, complete_graph, cycle_graph, graph_from_shorthand
from .knots import KnotDiagram, ResolutionCapExceeded, a2, a2_avg, alpha, d_value
from .moves import apply_move, enumerate_moves, random_walk
from .theorems import (
    TheoremViolation,
    check_alpha_congruence,
    check_d_parity,
    detect_projection,
    find_nontrivial_projection,
    force_chord_diagram,
    search_fig8_in_K12,
)

__all__ = [
    "C1", "C2", "ChordDiagram", "CurveError", "Cycle", "Graph", "ImmersedDiagram", "KnotDiagram",
    "PlaneCurve", "ResolutionCapExceeded", "TheoremViolation", "a2", "a2_avg", "alpha", "apply_move",
    "check_alpha_congruence", "check_d_parity", "chord_diagram", "complete_graph", "contains_subchord",
    "convex_drawing", "curve_from_word", "cycle_graph", "d_value", "detect_projection", "enumerate_moves",
    "find_nontrivial_projection", "force_chord_diagram", "graph_from_shorthand", "random_walk",
    "restrict_to_cycle", "search_fig8_in_K12", "validate",
]
