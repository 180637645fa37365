"""Exact analyzer for constrained l0-minimization at desk scale.

Given exact rational data (A, B, y, b, epsilon), the package enumerates
the sparsest points of {x : ||y - Ax||_2 <= epsilon, Bx <= b}, verifies
the rank-based necessary conditions on each, classifies the multiplicity
conditions that certify infinitely many same-support solutions, builds the
certified lambda intervals of those solution families, and decides the
sufficient boundedness criteria including the spark of A.
"""

from .conditions import (BoundednessReport, ConditionContext, MultiplicityReport,
                         build_context, check_boundedness, check_mstar,
                         check_necessary, classify_multiplicity, spark)
from .enumerator import EnumerationResult, empirical_gamma, enumerate_sparsest, \
    max_active_cardinality
from .errors import (DimensionError, EmptyPolyhedron, InfeasiblePoint,
                     InvalidDirection, NoSolutionWithinCap, ParseError,
                     VerificationFailure, WorkCapExceeded)
from .families import (Bound, LambdaInterval, SignPartition, SolutionFamily,
                       build_family, sample_and_verify)
from .linalg import Mat, null_space_basis, rref, solve_eq_least_squares
from .lp import LPOutcome, cone_is_trivial, exists_nonkernel_point, lp_max, \
    strict_cone_feasible
from .model import (ProblemInstance, SolutionRecord, is_feasible, make_record,
                    parse_instance, parse_point, parse_rational, serialize_instance)
from .qp import RestrictedResult, min_residual, region_nonempty, support_feasible

__version__ = "0.1.0"
