"""Newton polygons over the valued field R(X) with v(X) = -1."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .ratfunc import RationalFunction


@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull of the points ``(i, v(c_i))`` of ``sum c_i lambda^i``."""

    points: tuple  # (i, v(c_i)), v = inf for zero coefficients
    vertices: tuple  # hull vertices, left to right
    slopes: tuple  # (slope, multiplicity), slopes increasing

    @classmethod
    def of(cls, coeffs: Sequence) -> "NewtonPolygon":
        cs = [RationalFunction.coerce(c) for c in coeffs]
        pts = tuple((i, c.valuation()) for i, c in enumerate(cs))
        finite = [(i, Fraction(v)) for i, v in pts if v != math.inf]
        if not finite:
            raise ValueError("zero polynomial has no Newton polygon")
        hull: list = []
        for p in finite:
            while len(hull) >= 2 and _cross(hull[-2], hull[-1], p) <= 0:
                hull.pop()
            hull.append(p)
        slopes = tuple(
            (Fraction(b[1] - a[1]) / (b[0] - a[0]), b[0] - a[0]) for a, b in zip(hull, hull[1:])
        )
        return cls(pts, tuple(hull), slopes)

    @property
    def degree(self) -> int:
        return self.vertices[-1][0]

    @property
    def zero_roots(self) -> int:
        """Multiplicity of the root 0 (leading zero coefficients)."""
        return self.vertices[0][0]


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def root_valuations(coeffs: Sequence) -> list:
    """Valuations of the roots (with multiplicity), increasing; a slope ``s`` gives roots of valuation ``-s``.

    Roots equal to zero have valuation ``inf``.
    """
    poly = NewtonPolygon.of(coeffs)
    out: list = [math.inf] * poly.zero_roots
    for s, m in poly.slopes:
        out.extend([-s] * m)
    return sorted(out)
