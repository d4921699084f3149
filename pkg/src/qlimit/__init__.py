"""Exact rewriting and numeric checks for presented quantum groups and their inverse limits."""

from .algebra import Gen, StarPolynomial, tensor, u, w
from .errors import (
    CoherenceError, ContextMismatch, DivisionByZero, EvaluationPole, MorphismDomainError,
    NotARepresentation, OrientationError, ParseError, QLimitError, SectionsUnavailable,
    UnknownGenerator,
)
from .morphisms import (
    apply, coassociativity_check, comultiplication, density_certificate, density_report,
    diagram_check, pi, projection_theta, section_naive, well_defined,
)
from .parser import parse_expression, parse_ratfunc
from .presentations import build_circle, build_contraction, build_preset, build_suq, e_symbol
from .prolimit import (
    CoherentElement, InverseSystem, check_coherence, gamma_split, hypothesis_check, iota,
    kappa_factor, limit_delta_apply, validate_system,
)
from .report import CheckReport
from .rewrite import RewriteSystem, complete_bounded, orient, span_membership
from .scalars import RatFunc, rf_arith, rf_eval, rf_reduce

__version__ = "0.1.0"
