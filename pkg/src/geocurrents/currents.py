"""Geodesic currents on a Fuchsian surface and their intersection numbers.

A discrete current is a finite weighted sum of Dirac currents of closed
geodesics; the Liouville current is carried as a scale factor.  Intersections
of closed geodesics are counted by enumerating lifts over a word ball and
testing them against a fundamental segment of the other axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real
from typing import Iterable

import numpy as np
from scipy import integrate

from .fuchsian import ClosedGeodesicRep, GroupPresentation, closed_geodesic, fixed_points
from .hyp_geom import Geodesic, GeodesicSegment, crosses_many, get_tolerance, is_inf
from .lifts import axis_key, lift_table


@dataclass(frozen=True)
class LiftCrossingBudget:
    """Truncation of orbit enumeration: word-ball radius and stabilization window."""

    max_word_len: int = 8
    stabilization_window: int = 2

    def __post_init__(self):
        if self.max_word_len < 1 or self.stabilization_window < 1:
            raise ValueError("budget parameters must be >= 1")

    def to_json(self) -> dict:
        return {"max_word_len": self.max_word_len, "stabilization_window": self.stabilization_window}


DEFAULT_BUDGET = LiftCrossingBudget()


@dataclass(frozen=True)
class IntersectionResult:
    value: Real
    converged: bool
    # value obtained with the ball truncated at word length 0, 1, ..., max_word_len
    history: tuple = field(default=(), compare=False)

    def __float__(self):
        return float(self.value)

    def to_json(self) -> dict:
        return {"value": _json_number(self.value), "converged": self.converged}


def _exact(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    return x


def _json_number(x):
    x = _exact(x)
    if isinstance(x, int):
        return x
    return float(x)


def _require_torsion_free(G: GroupPresentation) -> None:
    if G.relators or G.has_torsion():
        raise ValueError(f"{G.name}: intersection numbers need a torsion-free (free) group")


def _stable(history: np.ndarray, window: int) -> bool:
    if len(history) <= window:
        return False
    tail = history[-window - 1:]
    return bool(np.all(tail == tail[-1]))


def _root_matrix(c: ClosedGeodesicRep):
    return c.group.evaluate(c.root) if c.power > 1 else c.matrix


def crossing_profile(seg: ClosedGeodesicRep, other: ClosedGeodesicRep, max_len: int) -> np.ndarray:
    """Lifts of ``other`` crossing ``[p, gamma p)`` on the axis of ``seg``, counted per ball radius.

    Entry ``L`` counts distinct lifts reached by words of length <= L.  The
    axis is normalized so that the repelling point sits at 0 and the attracting
    point at infinity; a lift with normalized endpoints ``(c, d)`` crosses iff
    ``c d < 0``, at log-height ``ln(-c d) / 2``.
    """
    G = seg.group
    table = lift_table(G, _root_matrix(other), max_len)
    r, s = fixed_points(seg.matrix)
    ell = seg.length
    tol = get_tolerance()

    def norm(x):
        x = np.asarray(x, float)
        with np.errstate(divide="ignore", invalid="ignore"):
            if is_inf(s):
                y = x - r
            elif is_inf(r):
                y = 1.0 / (s - x)
            else:
                y = (x - r) / (s - x)
                y = np.where(np.isinf(x), -1.0, y)
        return y

    cu, cv = norm(table.u), norm(table.v)
    with np.errstate(invalid="ignore", divide="ignore"):
        prod = cu * cv
        ok = np.isfinite(prod) & (prod < 0)
        t = 0.5 * np.log(np.where(ok, -prod, 1.0))
    hit = ok & (t >= -tol) & (t < ell - tol)
    if hit.any():
        key = axis_key(_root_matrix(seg))
        same = np.array([tuple(k) == key for k in table.keys[hit]])
        idx = np.nonzero(hit)[0][same]
        hit[idx] = False
    counts = np.bincount(table.min_len[hit].astype(np.int64), minlength=max_len + 1)
    return np.cumsum(counts)[: max_len + 1]


def _order_pair(c: ClosedGeodesicRep, c2: ClosedGeodesicRep):
    # the segment goes on the shorter word; this also makes the count symmetric
    k1 = (len(c.word), c.class_key)
    k2 = (len(c2.word), c2.class_key)
    return (c, c2) if k1 <= k2 else (c2, c)


def intersection_cc(
    c: ClosedGeodesicRep, c2: ClosedGeodesicRep, budget: LiftCrossingBudget | None = None
) -> IntersectionResult:
    """Geometric intersection number i(c, c2) of two closed geodesics.

    Lifts of one curve are weighted by its power and counted on the full
    segment ``[p, gamma p)`` of the other, so ``i(c^j, c2^k) = j k i(c, c2)``.
    For ``c == c2`` every double point is met twice along the segment.
    """
    budget = budget or DEFAULT_BUDGET
    if c.group != c2.group:
        raise ValueError("curves live in different groups")
    _require_torsion_free(c.group)
    seg, other = _order_pair(c, c2)
    prof = crossing_profile(seg, other, budget.max_word_len) * other.power
    return IntersectionResult(
        int(prof[-1]), _stable(prof, budget.stabilization_window), tuple(int(x) for x in prof)
    )


# -- currents ----------------------------------------------------------------


def _weight(w):
    if isinstance(w, str):
        w = Fraction(w)
    if isinstance(w, bool) or not isinstance(w, Real):
        raise TypeError(f"weight must be a real number, got {w!r}")
    if isinstance(w, float) and w.is_integer():
        w = int(w)
    return _exact(w)


@dataclass(frozen=True)
class Current:
    """A discrete current (weighted closed geodesics) or a scaled Liouville current."""

    group: GroupPresentation = field(repr=False)
    kind: str = "discrete"
    atoms: tuple[tuple[ClosedGeodesicRep, Real], ...] = ()
    scale: Real = 1

    def __post_init__(self):
        if self.kind not in ("discrete", "liouville"):
            raise ValueError(f"unknown current kind {self.kind!r}")
        if self.kind == "liouville" and not self.scale > 0:
            raise ValueError("Liouville scale must be positive")
        keys = [c.class_key for c, _ in self.atoms]
        if len(set(keys)) != len(keys):
            raise ValueError("atoms must be pairwise non-conjugate")
        if any(not w > 0 for _, w in self.atoms):
            raise ValueError("atom weights must be positive")

    @classmethod
    def discrete(cls, group: GroupPresentation, atoms: Iterable = ()) -> "Current":
        """Atoms are ``(curve, weight)`` pairs; a curve may be given as a word."""
        merged: dict[tuple, list] = {}
        for c, w in atoms:
            if isinstance(c, str):
                c = closed_geodesic(group, c)
            w = _weight(w)
            if w == 0:
                continue
            if c.class_key in merged:
                merged[c.class_key][1] += w
            else:
                merged[c.class_key] = [c, w]
        return cls(group, "discrete", tuple((c, _exact(w)) for c, w in merged.values()))

    @classmethod
    def dirac(cls, group: GroupPresentation, word: str, weight=1) -> "Current":
        return cls.discrete(group, [(word, weight)])

    @classmethod
    def liouville(cls, group: GroupPresentation, scale=1) -> "Current":
        return cls(group, "liouville", (), _weight(scale))

    @property
    def is_discrete(self) -> bool:
        return self.kind == "discrete"

    @property
    def is_zero(self) -> bool:
        return self.is_discrete and not self.atoms

    def __add__(self, other: "Current") -> "Current":
        if not (self.is_discrete and other.is_discrete):
            if self.kind == other.kind == "liouville":
                return Current.liouville(self.group, self.scale + other.scale)
            raise ValueError("only currents of the same kind can be added")
        if self.group != other.group:
            raise ValueError("currents live in different groups")
        return Current.discrete(self.group, list(self.atoms) + list(other.atoms))

    def __mul__(self, k) -> "Current":
        k = _weight(k)
        if k < 0:
            raise ValueError("currents are positive measures")
        if self.kind == "liouville":
            return Current.liouville(self.group, self.scale * k) if k else Current.discrete(self.group)
        return Current.discrete(self.group, [(c, w * k) for c, w in self.atoms])

    __rmul__ = __mul__

    def to_json(self) -> dict:
        if self.kind == "liouville":
            return {"kind": "liouville", "scale": _json_number(self.scale)}
        return {
            "kind": "discrete",
            "atoms": [{"word": c.word, "weight": _json_weight(w)} for c, w in self.atoms],
        }

    @classmethod
    def from_json(cls, d: dict, group: GroupPresentation) -> "Current":
        kind = d.get("kind")
        if kind == "liouville":
            return cls.liouville(group, d.get("scale", 1))
        if kind == "discrete":
            return cls.discrete(group, [(a["word"], a.get("weight", 1)) for a in d.get("atoms", [])])
        raise ValueError(f"unknown current kind {kind!r}")


def _json_weight(w):
    w = _exact(w)
    if isinstance(w, Fraction):
        return str(w)
    return w


def intersection(mu: Current, nu: Current, budget: LiftCrossingBudget | None = None) -> IntersectionResult:
    """Intersection number of two currents; bilinear over atoms."""
    if mu.kind == nu.kind == "liouville":
        raise ValueError("the Liouville current has infinite self-intersection")
    if mu.group != nu.group:
        raise ValueError("currents live in different groups")
    if mu.kind == "liouville" or nu.kind == "liouville":
        liou, disc = (mu, nu) if mu.kind == "liouville" else (nu, mu)
        total = sum(w * c.length for c, w in disc.atoms)
        return IntersectionResult(liou.scale * total, True)
    total = 0
    converged = True
    for c, w in mu.atoms:
        for c2, w2 in nu.atoms:
            r = intersection_cc(c, c2, budget)
            total += w * w2 * r.value
            converged &= r.converged
    return IntersectionResult(_exact(total), converged)


def mu_short(g: Geodesic | ClosedGeodesicRep, mu: Current, budget: LiftCrossingBudget | None = None) -> bool:
    """True iff no enumerated lift of the support of ``mu`` crosses ``g`` transversally."""
    budget = budget or DEFAULT_BUDGET
    if mu.kind == "liouville":
        return False  # full support
    if isinstance(g, ClosedGeodesicRep):
        return all(intersection_cc(g, c, budget).value == 0 for c, _ in mu.atoms)
    for c, _ in mu.atoms:
        table = lift_table(mu.group, _root_matrix(c), budget.max_word_len)
        if crosses_many(g, table.u, table.v).any():
            return False
    return True


# -- Liouville quadrature ----------------------------------------------------


def _angle(x) -> float:
    """Boundary point of the upper half-plane as an angle on the unit circle (Cayley map)."""
    if is_inf(x):
        return 0.0
    w = complex(x, 0) - 1j
    w /= complex(x, 0) + 1j
    return math.atan2(w.imag, w.real)


def _far_end(a: float, z: complex) -> float:
    """Other endpoint of the geodesic from boundary point ``a`` through ``z``."""
    if is_inf(a):
        return z.real
    dx = z.real - a
    if abs(dx) < 1e-15 * max(1.0, abs(a)):
        return math.inf
    m = (abs(z) ** 2 - a * a) / (2 * dx)
    return 2 * m - a


def _from_angle(th: float) -> float:
    # inverse Cayley map on the boundary: angle th -> real point (or infinity)
    s = math.sin(th)
    if abs(1 - math.cos(th)) < 1e-300:
        return math.inf
    return -s / (1 - math.cos(th))


def liouville_segment_measure(seg: GeodesicSegment, scale=1.0, epsabs: float = 1e-11) -> float:
    """Liouville measure of the geodesics crossing ``seg``, by 2D quadrature.

    Integrates ``dθ dφ / (4 sin²((θ - φ)/2))`` over ordered boundary pairs
    whose geodesic meets the segment, then halves for unordered pairs.
    """
    x, y = seg.x, seg.y

    def arc(th):
        a = _from_angle(th)
        p1, p2 = _angle(_far_end(a, x)), _angle(_far_end(a, y))
        # unwrap the two far ends onto the arc that avoids th
        lo = (p1 - th) % (2 * math.pi)
        hi = (p2 - th) % (2 * math.pi)
        if lo > hi:
            lo, hi = hi, lo
        return th + lo, th + hi

    def dens(phi, th):
        return 0.25 / math.sin((th - phi) / 2) ** 2

    val, _ = integrate.dblquad(
        dens, -math.pi, math.pi, lambda th: arc(th)[0], lambda th: arc(th)[1], epsabs=epsabs, epsrel=1e-11
    )
    return scale * val / 2
