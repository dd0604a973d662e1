"""Knotoid invariants: winding homology and its polynomial shadows.

Compute, for open-ended knot diagrams (knotoids), the triply-graded homology
whose graded Euler characteristic is the two-variable Turaev polynomial,
together with the Kauffman bracket, Jones, Turaev, and plane-refined
polynomial invariants, all over exact arithmetic.
"""

from .algebra import LaurentPoly, SparseMatrix, rank, substitute
from .cube import (TriGradedComplex, build_complex, build_unreduced_complex,
                   verify_d_squared)
from .diagram import (AmbiguityError, CrossingRecord, KnotoidError, KnotoidPD,
                      ValidationError, crossing_sign, cut_knot_to_knotoid,
                      disjoint_union, faces, insert_r1, insert_r2, mirror,
                      parse_pd, product, reorder_crossings, reverse,
                      rotate_closed_labels, serialize_pd, sym,
                      trivial_knotoid)
from .geometry import (DegeneracyError, GeometricDiagram, GeometricLayout,
                       analyze_geometric, default_shortcut, geometric_diagram,
                       lemma_head_leg_check, parse_geometric, pd_from_geometric,
                       serialize_geometric, shortcut_trace, state_winding_pair,
                       surrounds, winding_potential)
from .homology import (HomologyTable, homology_ranks, poincare,
                       reduce_complex, specialize, unreduced_poincare,
                       unreduced_ranks)
from .resolution import (Resolution, ShortcutTrace, mu_combinatorial,
                         mu_from_shortcut, resolve)
from .statesum import (jones_A, kauffman_bracket, refined_bracket_bullet,
                       refined_turaev, turaev_Au, turaev_qu)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
