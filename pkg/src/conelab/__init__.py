"""Exact polyhedral analysis of normal cones to sets ``{y | q(y) <= 0}`` cut out by smooth constraints.

Everything is computed over the rationals: multiplier polyhedra, critical
cones, regular and limiting normal cones of the normal-cone graph, and the
Aubin property of parameterized generalized equations built on them.
"""

from .assembly import ConeUnion, LimitingResult, full_limiting, hypotheses, limiting_licq, regular_normal_graph, tangent_graph
from .aubin import GEModel, aubin_verdict, build_ge
from .errors import ConelabError, InputError
from .model import ProblemData, build_problem, geometry, problem_from_jets
from .multipliers import directional_lambda, lambda_set, mbar
from .polyexpr import Poly, parse_poly
from .polyhedra import Cone, Polyhedron, union_contains
from .regularity import classic_cq, soscms, two_licq, two_regular

__version__ = "0.1.0"

__all__ = [
    "Cone",
    "ConeUnion",
    "ConelabError",
    "GEModel",
    "InputError",
    "LimitingResult",
    "Poly",
    "Polyhedron",
    "ProblemData",
    "aubin_verdict",
    "build_ge",
    "build_problem",
    "classic_cq",
    "directional_lambda",
    "full_limiting",
    "geometry",
    "hypotheses",
    "lambda_set",
    "limiting_licq",
    "mbar",
    "parse_poly",
    "problem_from_jets",
    "regular_normal_graph",
    "soscms",
    "tangent_graph",
    "two_licq",
    "two_regular",
    "union_contains",
]
