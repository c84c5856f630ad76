"""Finite exhausters of positively homogeneous functions.

A lower (upper) exhauster represents a positively homogeneous function as
a max of mins (min of maxes) of linear functions over a finite family of
closed convex bodies.  This package evaluates such representations,
removes redundant members via the m1/m2 set order relations and sharp-set
coverings, and checks the associated zero-maximality conditions, with a
JSON/CSV command-line front-end and optional matplotlib figures.
"""

from .config import DEFAULT_TOLERANCE, set_tolerance, tolerance
from .errors import (ConversionUnavailable, DimensionMismatch, DomainMismatch,
                     DomainNotFullSpace, DomainViolationWarning,
                     ExhausterError, KindMismatch, MissingConfiguration,
                     PointNotInSet, ProblemFormatError, UnsupportedPair,
                     WrongKind)
from .numeric import (LE, GE, EQ, LinearConstraint, LPOutcome, lp_feasible,
                      lp_solve, strict_margin)
from .bodies import (Ball, Body, EmptyBody, HPolyhedron, VPolytope,
                     as_singleton, bodies_equal, bounding_box, contains,
                     contains_point, inf_support, is_bounded, is_empty,
                     minkowski_diff, negate, singleton, support, to_hrep,
                     translate, vertices_of)
from .cones import (Cone, cone_contains, contingent_cone, intersect_nonempty,
                    negate_cone, negative_dual, positive_dual,
                    project_onto_cone)
from .order import (OrderCheck, m1_minimal_family, m2_maximal_family,
                    precedes_m1, precedes_m2)
from .exhauster import (LOWER, UPPER, CoverOutcome, EquivalenceReport,
                        Exhauster, OptimalityReport, ReductionReport, Removal,
                        evaluate, evaluate_many, lemma41_check,
                        optimality_check, reduce_by_cover, reduce_pairwise,
                        sharp_cover_removable, strongly_extremal,
                        verify_equivalence)
from .problem import (Problem, load_problem, parse_problem, problem_to_dict,
                      save_problem)

__version__ = "0.1.0"
