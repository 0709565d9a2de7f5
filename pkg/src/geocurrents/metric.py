"""The pseudo-distance induced by a discrete current, lengths and systoles.

``d(x, y)`` averages the weighted number of support lifts crossing ``[x, y)``
and ``(x, y]``.  With integer or rational weights every value is an exact
``Fraction``/``int``, so additivity along geodesics holds exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real
from typing import Sequence

import numpy as np

from .currents import (
    DEFAULT_BUDGET,
    Current,
    IntersectionResult,
    LiftCrossingBudget,
    _exact,
    _json_number,
    _require_torsion_free,
    _root_matrix,
    _stable,
    intersection_cc,
)
from .fuchsian import ClosedGeodesicRep, conjugacy_representatives, cusp_excursion
from .hyp_geom import GeodesicSegment, get_tolerance, hyp_distance, segment_crossings
from .lifts import lift_table


@dataclass(frozen=True)
class PseudoDistanceContext:
    current: Current
    budget: LiftCrossingBudget = DEFAULT_BUDGET

    def __post_init__(self):
        if not self.current.is_discrete:
            raise ValueError("the pseudo-distance is computed for discrete currents")
        _require_torsion_free(self.current.group)

    @property
    def group(self):
        return self.current.group

    def tables(self):
        """``(lift table, weight per lift)`` for each atom; a k-th power weighs k per lift."""
        L = self.budget.max_word_len
        return [(lift_table(self.group, _root_matrix(c), L), w * c.power) for c, w in self.current.atoms]


def _half_open_profiles(table, x: complex, y: complex, L: int):
    inner, at_x, at_y = segment_crossings(table.u, table.v, GeodesicSegment(x, y))
    lens = table.min_len.astype(np.int64)
    left = np.cumsum(np.bincount(lens[inner | at_x], minlength=L + 1))[: L + 1]
    right = np.cumsum(np.bincount(lens[inner | at_y], minlength=L + 1))[: L + 1]
    return left, right


def pseudo_distance(ctx: PseudoDistanceContext, x: complex, y: complex) -> IntersectionResult:
    """``(mu(lifts crossing [x, y)) + mu(lifts crossing (x, y])) / 2``."""
    x, y = complex(x), complex(y)
    L = ctx.budget.max_word_len
    if x == y or hyp_distance(x, y) <= get_tolerance():
        return IntersectionResult(0, True, (0,) * (L + 1))
    hist = [0] * (L + 1)
    for table, w in ctx.tables():
        left, right = _half_open_profiles(table, x, y, L)
        for k in range(L + 1):
            hist[k] += w * Fraction(int(left[k]) + int(right[k]), 2)
    hist = [_exact(h) for h in hist]
    return IntersectionResult(hist[-1], _stable(np.array(hist, dtype=object), ctx.budget.stabilization_window), tuple(hist))


def path_length(ctx: PseudoDistanceContext, path: Sequence[complex]) -> IntersectionResult:
    """Length of the piecewise-geodesic path through the given vertices."""
    if len(path) < 2:
        raise ValueError("a path needs at least two vertices")
    total, conv = 0, True
    for x, y in zip(path, path[1:]):
        r = pseudo_distance(ctx, x, y)
        total += r.value
        conv &= r.converged
    return IntersectionResult(_exact(total), conv)


def closed_geodesic_length(ctx: PseudoDistanceContext, c: ClosedGeodesicRep) -> IntersectionResult:
    """``d(p, gamma p)`` for ``p`` the apex of the axis of ``gamma``."""
    if c.group != ctx.group:
        raise ValueError("curve and current live in different groups")
    p = c.axis.apex()
    return pseudo_distance(ctx, p, c.matrix.apply(p))


def self_intersection(c: ClosedGeodesicRep, budget: LiftCrossingBudget | None = None) -> IntersectionResult:
    """Number of double points: half of ``intersection_cc(c, c)``."""
    r = intersection_cc(c, c, budget)
    return IntersectionResult(r.value // 2, r.converged, tuple(h // 2 for h in r.history))


@dataclass(frozen=True)
class SystoleReport:
    value: Real
    witness: ClosedGeodesicRep
    curve_census: int
    length_bound: float
    simple_only: bool = False
    converged: bool = True
    census_max_word_len: int = 12
    budget: LiftCrossingBudget = DEFAULT_BUDGET
    # (word, value) for every curve examined, in census order
    table: tuple = field(default=(), compare=False, repr=False)

    def to_json(self) -> dict:
        return {
            "value": _json_number(self.value),
            "witness": self.witness.word,
            "witness_length": self.witness.length,
            "curve_census": self.curve_census,
            "length_bound": self.length_bound,
            "simple_only": self.simple_only,
            "converged": self.converged,
            "census_max_word_len": self.census_max_word_len,
            "budget": self.budget.to_json(),
        }


def systole(
    ctx: PseudoDistanceContext,
    length_bound: float,
    simple_only: bool = False,
    census_max_word_len: int = 12,
) -> SystoleReport:
    """Minimum of closed-geodesic lengths over the census of curves with hyperbolic length <= bound.

    Ties are broken by hyperbolic length, then word.
    """
    census = conjugacy_representatives(ctx.group, census_max_word_len, length_bound)
    if simple_only:
        census = [c for c in census if self_intersection(c, ctx.budget).value == 0]
    if not census:
        raise ValueError(f"empty census below length bound {length_bound}")
    rows = []
    conv = True
    for c in census:
        r = closed_geodesic_length(ctx, c)
        conv &= r.converged
        rows.append((r.value, c.length, c.word, c))
    best = min(rows, key=lambda t: t[:3])
    return SystoleReport(
        best[0],
        best[3],
        len(census),
        float(length_bound),
        simple_only,
        conv,
        census_max_word_len,
        ctx.budget,
        tuple((w, v) for v, _, w, _ in rows),
    )


def census_intersections(
    atoms: Sequence[ClosedGeodesicRep], census: Sequence[ClosedGeodesicRep], budget: LiftCrossingBudget | None = None
) -> tuple[np.ndarray, bool]:
    """Integer matrix ``M[i, j] = i(census[i], atoms[j])`` and a joint convergence flag."""
    M = np.zeros((len(census), len(atoms)), dtype=np.int64)
    conv = True
    for i, c in enumerate(census):
        for j, a in enumerate(atoms):
            r = intersection_cc(c, a, budget)
            M[i, j] = r.value
            conv &= r.converged
    return M, conv


def systole_from_matrix(M: np.ndarray, weights: Sequence[float]) -> float:
    """Census systole as a function of the weights: a minimum of linear forms."""
    return float((M @ np.asarray(weights, float)).min())


@dataclass
class RatioReport:
    ratios: dict
    excluded: list
    lower: float
    upper: float
    max_cusp_run: int


def bilipschitz_ratios(
    mu: Current,
    census: Sequence[ClosedGeodesicRep],
    budget: LiftCrossingBudget | None = None,
    max_cusp_run: int = 3,
) -> RatioReport:
    """``i(mu, c) / l(c)`` over census curves whose cusp excursions are at most ``max_cusp_run`` letters."""
    atoms = [c for c, _ in mu.atoms]
    weights = np.array([float(w) for _, w in mu.atoms])
    kept = [c for c in census if cusp_excursion(mu.group, c.word) <= max_cusp_run]
    excluded = [c.word for c in census if c not in kept]
    M, _ = census_intersections(atoms, kept, budget)
    vals = M @ weights
    ratios = {c.word: float(v) / c.length for c, v in zip(kept, vals)}
    if not ratios:
        raise ValueError("no census curve in the compact part")
    return RatioReport(ratios, excluded, min(ratios.values()), max(ratios.values()), max_cusp_run)


def hyperbolic_length(c: ClosedGeodesicRep) -> float:
    return 2.0 * math.acosh(abs(float(c.trace)) / 2.0)
