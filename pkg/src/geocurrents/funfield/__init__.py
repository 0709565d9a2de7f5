"""Rational-function field arithmetic and degenerations of triangle-group representations."""

from .examples import (
    TriangleRep,
    boundary_systole_check,
    example_rep_334,
    example_rep_pqr,
    hyperbolic_census,
    parse_rep,
    specialization_limits,
)
from .jordan import ChamberVector, chamber_norm, jordan_projection_at, jordan_projection_ff, jordan_projection_real, specialize
from .matrix import PoleError, PolyMatrix, char_poly
from .newton import NewtonPolygon, root_valuations
from .ratfunc import X, RationalFunction

__all__ = [
    "ChamberVector",
    "NewtonPolygon",
    "PoleError",
    "PolyMatrix",
    "RationalFunction",
    "TriangleRep",
    "X",
    "boundary_systole_check",
    "chamber_norm",
    "char_poly",
    "example_rep_334",
    "example_rep_pqr",
    "hyperbolic_census",
    "jordan_projection_at",
    "jordan_projection_ff",
    "jordan_projection_real",
    "parse_rep",
    "root_valuations",
    "specialization_limits",
    "specialize",
]
