"""Hyperbolic plane primitives in the upper half-plane model.

Boundary points are extended reals: finite numbers (``int``, ``Fraction`` or
``float``) or ``math.inf``.  Geodesics are unordered endpoint pairs stored in
canonical order (``a < b`` with infinity last), so two constructions of the
same geodesic compare equal.

All comparisons that decide incidence go through a single tolerance, see
:func:`get_tolerance` / :func:`tolerance`.
"""

from __future__ import annotations

import contextlib
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from typing import Iterable, Sequence

import numpy as np

INF = math.inf

_TOL = 1e-9


def get_tolerance() -> float:
    return _TOL


def set_tolerance(tol: float) -> None:
    global _TOL
    if not tol > 0:
        raise ValueError("tolerance must be positive")
    _TOL = float(tol)


@contextlib.contextmanager
def tolerance(tol: float):
    """Temporarily override the boundary comparison tolerance."""
    old = _TOL
    set_tolerance(tol)
    try:
        yield
    finally:
        set_tolerance(old)


class ConditionWarning(UserWarning):
    """An incidence decision was taken within tolerance of a tie."""


def is_inf(x) -> bool:
    return isinstance(x, float) and math.isinf(x)


def _check_boundary(x):
    if isinstance(x, str):
        if x.lower() in ("inf", "infinity", "oo"):
            return INF
        raise ValueError(f"bad boundary point {x!r}")
    if isinstance(x, float) and math.isinf(x):
        return INF  # -inf and inf are the same boundary point
    if isinstance(x, float) and math.isnan(x):
        raise ValueError("boundary point is NaN")
    if not isinstance(x, Real):
        raise TypeError(f"boundary point must be real, got {type(x).__name__}")
    return x


def boundary_eq(x, y, tol: float | None = None) -> bool:
    tol = _TOL if tol is None else tol
    if is_inf(x) or is_inf(y):
        return is_inf(x) and is_inf(y)
    if isinstance(x, (int, Fraction)) and isinstance(y, (int, Fraction)):
        return x == y
    return abs(x - y) <= tol * max(1.0, abs(x), abs(y))


def _order_key(x):
    return (1, 0) if is_inf(x) else (0, x)


@dataclass(frozen=True)
class Geodesic:
    """Complete unoriented geodesic, stored as its sorted endpoint pair."""

    a: Real
    b: Real

    def __post_init__(self):
        a, b = _check_boundary(self.a), _check_boundary(self.b)
        if boundary_eq(a, b):
            raise ValueError(f"degenerate geodesic: endpoints {a!r}, {b!r} coincide")
        if _order_key(b) < _order_key(a):
            a, b = b, a
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def endpoints(self) -> tuple:
        return (self.a, self.b)

    @property
    def is_vertical(self) -> bool:
        return is_inf(self.b)

    @property
    def center(self) -> float:
        if self.is_vertical:
            raise ValueError("vertical geodesic has no center")
        return (self.a + self.b) / 2

    @property
    def radius(self) -> float:
        if self.is_vertical:
            raise ValueError("vertical geodesic has no radius")
        return (self.b - self.a) / 2

    def apex(self) -> complex:
        """Highest point of the semicircle, or ``a + i`` for a vertical line."""
        if self.is_vertical:
            return complex(float(self.a), 1.0)
        return complex(float(self.center), float(self.radius))

    def point_at(self, s: float) -> complex:
        """Point at signed hyperbolic distance ``s`` from :meth:`apex`, towards ``b``."""
        if self.is_vertical:
            return complex(float(self.a), math.exp(s))
        m, r = float(self.center), float(self.radius)
        theta = 2 * math.atan(math.exp(-s))  # cos = tanh s, sin = sech s
        return complex(m + r * math.cos(theta), r * math.sin(theta))

    def contains(self, z: complex, tol: float | None = None) -> bool:
        tol = _TOL if tol is None else tol
        if self.is_vertical:
            return abs(z.real - float(self.a)) <= tol * max(1.0, abs(z))
        m, r = float(self.center), float(self.radius)
        return abs(abs(z - m) - r) <= tol * max(1.0, r)

    def to_json(self) -> dict:
        return {"a": _bp_json(self.a), "b": _bp_json(self.b)}

    @classmethod
    def from_json(cls, d: dict) -> "Geodesic":
        return cls(_bp_from_json(d["a"]), _bp_from_json(d["b"]))

    def __repr__(self):
        return f"Geodesic({self.a!r}, {self.b!r})"


def _bp_json(x):
    if is_inf(x):
        return "inf"
    if isinstance(x, int):
        return x
    return float(x)


def _bp_from_json(x):
    if isinstance(x, str):
        return _check_boundary(x)
    return x


@dataclass(frozen=True)
class MobiusMap:
    """Element of PSL(2, R) given by a determinant-one real matrix ``[[a, b], [c, d]]``."""

    a: Real
    b: Real
    c: Real
    d: Real

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        if self.is_exact:
            if det != 1:
                raise ValueError(f"determinant {det} != 1")
        elif abs(det - 1) > 1e-6:
            raise ValueError(f"determinant {det} != 1")

    @property
    def is_exact(self) -> bool:
        return all(isinstance(x, (int, Fraction)) for x in (self.a, self.b, self.c, self.d))

    @classmethod
    def from_rows(cls, rows) -> "MobiusMap":
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    @classmethod
    def identity(cls) -> "MobiusMap":
        return cls(1, 0, 0, 1)

    def rows(self):
        return ((self.a, self.b), (self.c, self.d))

    def __matmul__(self, other: "MobiusMap") -> "MobiusMap":
        return MobiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "MobiusMap":
        return MobiusMap(self.d, -self.b, -self.c, self.a)

    def __pow__(self, n: int) -> "MobiusMap":
        if n < 0:
            return self.inverse() ** (-n)
        out, base = MobiusMap.identity(), self
        while n:
            if n & 1:
                out = out @ base
            base = base @ base
            n >>= 1
        return out

    def trace(self):
        return self.a + self.d

    def classify(self, tol: float | None = None) -> str:
        tol = _TOL if tol is None else tol
        t = abs(self.trace())
        if self.is_exact:
            return "elliptic" if t < 2 else "parabolic" if t == 2 else "hyperbolic"
        if abs(t - 2) <= tol:
            return "parabolic"
        return "elliptic" if t < 2 else "hyperbolic"

    def equals(self, other: "MobiusMap", tol: float | None = None) -> bool:
        """Equality in PSL(2, R), i.e. up to sign."""
        tol = _TOL if tol is None else tol
        m, n = self.as_array(), other.as_array()
        scale = max(1.0, float(np.abs(m).max()))
        return bool(np.abs(m - n).max() <= tol * scale or np.abs(m + n).max() <= tol * scale)

    def as_array(self) -> np.ndarray:
        return np.array([[float(self.a), float(self.b)], [float(self.c), float(self.d)]])

    def __call__(self, z):
        return self.apply(z)

    def apply(self, z):
        """Act on a point of the upper half-plane or on a boundary point."""
        if isinstance(z, complex):
            return (self.a * z + self.b) / (self.c * z + self.d)
        if is_inf(z):
            return INF if self.c == 0 else self.a / self.c
        den = self.c * z + self.d
        if den == 0 or (not isinstance(den, (int, Fraction)) and abs(den) < 1e-300):
            return INF
        num = self.a * z + self.b
        if isinstance(num, int) and isinstance(den, int):
            return Fraction(num, den)
        return num / den

    def apply_geodesic(self, g: Geodesic) -> Geodesic:
        return Geodesic(self.apply(g.a), self.apply(g.b))

    def to_json(self) -> list:
        return [_num_json(x) for x in (self.a, self.b, self.c, self.d)]


def _num_json(x):
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else float(x)
    return float(x)


def moving_to_standard(g: Geodesic) -> MobiusMap:
    """A Mobius map sending ``g.a`` to 0 and ``g.b`` to infinity."""
    a, b = g.a, g.b
    if is_inf(b):
        return MobiusMap(1, -a, 0, 1)
    s = math.sqrt(float(b - a))
    return MobiusMap(1 / s, -float(a) / s, -1 / s, float(b) / s)


@dataclass(frozen=True)
class GeodesicSegment:
    """Segment of a geodesic between two interior points with open/closed ends."""

    x: complex
    y: complex
    closed_x: bool = True
    closed_y: bool = True

    def __post_init__(self):
        x, y = complex(self.x), complex(self.y)
        if x.imag <= 0 or y.imag <= 0:
            raise ValueError("segment endpoints must lie in the upper half-plane")
        if hyp_distance(x, y) <= _TOL:
            raise ValueError("segment endpoints coincide")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def carrier(self) -> Geodesic:
        return geodesic_through(self.x, self.y)

    @property
    def length(self) -> float:
        return hyp_distance(self.x, self.y)

    def split(self, z: complex) -> tuple["GeodesicSegment", "GeodesicSegment"]:
        """Split at an interior point: ``[x, z)`` and ``[z, y]`` keeping the outer flags."""
        return (
            GeodesicSegment(self.x, z, self.closed_x, False),
            GeodesicSegment(z, self.y, True, self.closed_y),
        )


def hyp_distance(x: complex, y: complex) -> float:
    """Hyperbolic distance in the upper half-plane (numerically stable form)."""
    x, y = complex(x), complex(y)
    if x.imag <= 0 or y.imag <= 0:
        raise ValueError("points must lie in the upper half-plane")
    return 2.0 * math.asinh(abs(x - y) / (2.0 * math.sqrt(x.imag * y.imag)))


def geodesic_through(z: complex, w: complex) -> Geodesic:
    """The complete geodesic through two distinct interior points."""
    z, w = complex(z), complex(w)
    dx = w.real - z.real
    if abs(dx) <= _TOL * max(1.0, abs(z), abs(w)):
        return Geodesic((z.real + w.real) / 2, INF)
    # center m on the real line equidistant from z and w
    m = (abs(w) ** 2 - abs(z) ** 2) / (2 * dx)
    r = abs(z - m)
    return Geodesic(m - r, m + r)


def cross_ratio(a, b, c, d) -> float:
    """``(a - c)(b - d) / ((a - d)(b - c))`` with infinity handled by cancellation."""
    def diff(x, y):
        return None if is_inf(x) or is_inf(y) else x - y

    num = [diff(a, c), diff(b, d)]
    den = [diff(a, d), diff(b, c)]
    num = [t for t in num if t is not None]
    den = [t for t in den if t is not None]
    # each infinite entry kills exactly one factor upstairs and one downstairs
    p = 1
    for t in num:
        p *= t
    q = 1
    for t in den:
        q *= t
    return p / q


def _side(g: Geodesic, t, tol) -> int:
    """+1 if ``t`` lies in the boundary arc (a, b) avoiding infinity, -1 in the other arc, 0 on an endpoint."""
    if boundary_eq(t, g.a, tol) or boundary_eq(t, g.b, tol):
        return 0
    if is_inf(t):
        return -1
    if g.is_vertical:
        return 1 if t > g.a else -1
    return 1 if g.a < t < g.b else -1


def intersect_transversally(g: Geodesic, h: Geodesic, tol: float | None = None) -> int:
    """1 iff the endpoint pairs strictly separate each other on the circle at infinity."""
    tol = _TOL if tol is None else tol
    s1, s2 = _side(g, h.a, tol), _side(g, h.b, tol)
    return 1 if s1 * s2 == -1 else 0


def intersection_point(g: Geodesic, h: Geodesic) -> complex | None:
    """Point where two transversal geodesics cross, else ``None``."""
    if not intersect_transversally(g, h):
        return None
    c1, c2 = _circle(g), _circle(h)
    return _meet(c1, c2)


def _circle(g: Geodesic):
    """Coefficients (alpha, beta, gamma) of alpha |z|^2 + beta Re z + gamma = 0."""
    if g.is_vertical:
        return (0.0, 1.0, -float(g.a))
    a, b = float(g.a), float(g.b)
    return (1.0, -(a + b), a * b)


def _meet(c1, c2) -> complex:
    a1, b1, g1 = c1
    a2, b2, g2 = c2
    det = a1 * b2 - a2 * b1
    s = (b1 * g2 - b2 * g1) / det
    x = (a2 * g1 - a1 * g2) / det
    y2 = s - x * x
    return complex(x, math.sqrt(max(y2, 0.0)))


def crosses_segment(g: Geodesic, seg: GeodesicSegment, tol: float | None = None) -> int:
    """1 iff ``g`` meets ``seg`` in exactly one point, honoring open/closed ends.

    A geodesic containing the carrier meets it in infinitely many points and
    returns 0.  When the crossing is within tolerance of an end, the end's
    flag decides and a :class:`ConditionWarning` is emitted.
    """
    tol = _TOL if tol is None else tol
    carrier = seg.carrier
    q = intersection_point(g, carrier)
    if q is None:
        return 0
    length = hyp_distance(seg.x, seg.y)
    dx, dy = hyp_distance(seg.x, q), hyp_distance(q, seg.y)
    if dx <= tol or dy <= tol:
        warnings.warn(f"crossing within {tol:g} of a segment end", ConditionWarning, stacklevel=2)
        if dx <= tol:
            return int(seg.closed_x)
        return int(seg.closed_y)
    return int(dx < length and dy < length)


def hull_boundary(A: Iterable[Geodesic]) -> list[Geodesic]:
    """Boundary geodesics of the closed convex hull of a finite set of geodesics."""
    A = list(dict.fromkeys(A))
    if not A:
        raise ValueError("hull of an empty set")
    if len(A) == 1:
        return A
    pts = []
    for g in A:
        for t in g.endpoints:
            if not any(boundary_eq(t, s) for s in pts):
                pts.append(t)
    pts.sort(key=_order_key)
    if len(pts) == 2:
        return [Geodesic(*pts)]
    out = []
    for i, t in enumerate(pts):
        out.append(Geodesic(t, pts[(i + 1) % len(pts)]))
    return list(dict.fromkeys(out))


# -- vectorized helpers ------------------------------------------------------


def endpoint_arrays(geodesics: Sequence[Geodesic]) -> tuple[np.ndarray, np.ndarray]:
    u = np.array([float(g.a) for g in geodesics], dtype=float)
    v = np.array([float(g.b) for g in geodesics], dtype=float)
    return u, v


def _side_vec(a, b, t, tol):
    """Vectorized :func:`_side`: ``a < b`` with ``b`` possibly inf; ``t`` any shape broadcastable."""
    def close(x, y):
        both_inf = np.isinf(x) & np.isinf(y)
        fin = np.isfinite(x) & np.isfinite(y)
        with np.errstate(invalid="ignore"):
            scale = np.maximum(1.0, np.maximum(np.abs(np.where(fin, x, 0)), np.abs(np.where(fin, y, 0))))
            near = fin & (np.abs(np.where(fin, x - y, 0)) <= tol * scale)
        return both_inf | near

    on = close(t, a) | close(t, b)
    vert = np.isinf(b)
    with np.errstate(invalid="ignore"):
        inside = np.where(vert, t > a, (a < t) & (t < b))
    inside = inside & np.isfinite(t)
    return np.where(on, 0, np.where(inside, 1, -1))


def crossing_matrix(u1, v1, u2, v2, tol: float | None = None) -> np.ndarray:
    """Boolean matrix ``M[i, j] = i(g_i, h_j)`` for endpoint arrays (canonical order)."""
    tol = _TOL if tol is None else tol
    a = np.asarray(u1, float)[:, None]
    b = np.asarray(v1, float)[:, None]
    s1 = _side_vec(a, b, np.asarray(u2, float)[None, :], tol)
    s2 = _side_vec(a, b, np.asarray(v2, float)[None, :], tol)
    return (s1 * s2) == -1


def crosses_many(g: Geodesic, u, v, tol: float | None = None) -> np.ndarray:
    """Boolean array: does ``g`` cross each geodesic ``(u[k], v[k])``."""
    return crossing_matrix([float(g.a)], [float(g.b)], u, v, tol)[0]


def _dist_vec(x: complex, qx, qy):
    return 2.0 * np.arcsinh(np.hypot(qx - x.real, qy - x.imag) / (2.0 * np.sqrt(x.imag * qy)))


def segment_crossings(u, v, seg: GeodesicSegment, tol: float | None = None):
    """Vectorized :func:`crosses_segment` over geodesics ``(u[k], v[k])``.

    Returns ``(hit, at_x, at_y)`` boolean arrays: geodesic crosses the closed
    segment; crossing within tolerance of ``x``; of ``y``.  Callers combine
    these with the end flags.
    """
    tol = _TOL if tol is None else tol
    u = np.asarray(u, float)
    v = np.asarray(v, float)
    car = seg.carrier
    trans = crosses_many(car, u, v, tol)
    a1, b1, g1 = _circle(car)
    vert = np.isinf(v)
    a2 = np.where(vert, 0.0, 1.0)
    b2 = np.where(vert, 1.0, -(u + np.where(vert, 0.0, v)))
    g2 = np.where(vert, -u, u * np.where(vert, 0.0, v))
    det = a1 * b2 - a2 * b1
    safe = np.where(trans & (det != 0), det, 1.0)
    s = (b1 * g2 - b2 * g1) / safe
    qx = (a2 * g1 - a1 * g2) / safe
    qy = np.sqrt(np.maximum(s - qx * qx, 1e-300))
    length = hyp_distance(seg.x, seg.y)
    dx = _dist_vec(seg.x, qx, qy)
    dy = _dist_vec(seg.y, qx, qy)
    at_x = trans & (dx <= tol)
    at_y = trans & (dy <= tol) & ~at_x
    inner = trans & (dx < length) & (dy < length) & ~at_x & ~at_y
    return inner, at_x, at_y


def segment_hits(u, v, seg: GeodesicSegment, tol: float | None = None) -> np.ndarray:
    """Boolean array of geodesics meeting ``seg`` once, with its end flags applied."""
    inner, at_x, at_y = segment_crossings(u, v, seg, tol)
    hit = inner.copy()
    if seg.closed_x:
        hit |= at_x
    if seg.closed_y:
        hit |= at_y
    return hit


def random_geodesics(rng: np.random.Generator, n: int) -> list[Geodesic]:
    """Geodesics with endpoints uniform on the circle at infinity."""
    out = []
    while len(out) < n:
        th = rng.uniform(-math.pi, math.pi, size=2)
        a, b = (math.tan(t / 2) for t in th)
        if abs(a - b) > 1e-6:
            out.append(Geodesic(a, b))
    return out
