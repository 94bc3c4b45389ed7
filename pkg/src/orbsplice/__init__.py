"""Exact invariants of decorated plumbing graphs: discriminant and orbifold
homology groups, diagonal representations, splice diagrams with their
semigroup and congruence conditions, and splice diagram equations."""

from .errors import (
    ConditionsFail, DecoratedInterior, GenerationFailure, GraphError, NoInteriorVertex,
    NoNodes, NotALeaf, NotBlowDownable, NotNegativeDefinite, OrbspliceError, ParseError,
    SingularMatrix, UnknownEdge, UnknownVertex,
)
from .exactlin import AbelianGroup, cokernel, smith_normal_form
from .graphs import (
    DecoratedGraph, PlumbingGraph, blow_down, blow_up_edge, blow_up_free,
    intersection_matrix, is_isomorphic, parse_graph, serialize, validate,
)
from .homology import (
    discriminant_group, kernel_type, linking_matrix, orbifold_homology,
    projection_hom, red_green, select_generators,
)
from .reps import PowerMap, diagonal_rep, orbifold_diagonal_rep, power_map_square_check
from .splice import (
    admissible_monomials, congruence_check, generate_equations, leaf_weights,
    semigroup_check, splice_diagram, substitute_powers, verify_equivariance,
)
from .dot import render_dot
from .report import build_report

__version__ = "0.1.0"
