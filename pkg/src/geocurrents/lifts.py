"""Orbit lifts of closed geodesics: the translates ``g . axis(gamma)`` over a word ball.

For integer groups a lift is keyed exactly by the binary quadratic form
``c x^2 + (d - a) x - b`` of the conjugate ``g gamma g^-1``, reduced by its
gcd and sign-normalized.  Float groups fall back to rounded boundary angles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .fuchsian import GroupPresentation, WordBall, word_ball
from .hyp_geom import MobiusMap

_SAFE = 2**62


def _rows(m: MobiusMap, dtype):
    vals = (m.a, m.b, m.c, m.d)
    if dtype is float:
        return tuple(float(x) for x in vals)
    return tuple(int(x) for x in vals)


def conjugate_forms(mats: np.ndarray, m: MobiusMap):
    """Axis forms ``(A, B, C)`` of ``g m g^-1`` for every ``g`` in ``mats`` (shape (N, 2, 2))."""
    exact = mats.dtype != float and m.is_exact
    if exact and not all(isinstance(x, int) for x in (m.a, m.b, m.c, m.d)):
        exact = False
    if not exact:
        g = mats.astype(float)
        a, b, c, d = _rows(m, float)
    else:
        a, b, c, d = _rows(m, int)
        g = mats
        if g.dtype == np.int64:
            gmax = int(np.abs(g).max())
            if 8 * gmax * gmax * max(abs(a), abs(b), abs(c), abs(d), 1) >= _SAFE:
                g = g.astype(object)
    p, q, r, s = g[:, 0, 0], g[:, 0, 1], g[:, 1, 0], g[:, 1, 1]
    # g m = [[pa + qc, pb + qd], [ra + sc, rb + sd]]; g^-1 = [[s, -q], [-r, p]]
    x00, x01 = p * a + q * c, p * b + q * d
    x10, x11 = r * a + s * c, r * b + s * d
    n00 = x00 * s - x01 * r
    n01 = -x00 * q + x01 * p
    n10 = x10 * s - x11 * r
    n11 = -x10 * q + x11 * p
    return n10, n11 - n00, -n01, exact


def normalize_forms(A, B, C, exact: bool):
    """Primitive, sign-normalized forms (first nonzero coefficient positive)."""
    if exact:
        g = np.gcd(np.gcd(A, B), C)
        g = np.where(g == 0, 1, g)
        A, B, C = A // g, B // g, C // g
    else:
        scale = np.maximum(np.maximum(np.abs(A), np.abs(B)), np.abs(C))
        A, B, C = A / scale, B / scale, C / scale
    lead = np.where(A != 0, A, B)
    sgn = np.where(lead < 0, -1, 1)
    return A * sgn, B * sgn, C * sgn


def _as_float(x) -> np.ndarray:
    x = np.asarray(x)
    if x.dtype == object:
        return np.array([float(t) for t in x], dtype=float)
    return x.astype(float)


def form_endpoints(A, B, C):
    """Real roots of ``A x^2 + B x + C`` in canonical order (``u < v``, infinity last)."""
    Af, Bf, Cf = _as_float(A), _as_float(B), _as_float(C)
    kind = np.asarray(A).dtype.kind
    if kind in "iO":
        if kind == "i" and max(np.abs(A).max(initial=0), np.abs(B).max(initial=0), np.abs(C).max(initial=0)) >= 2**30:
            A, B, C = (np.asarray(x).astype(object) for x in (A, B, C))
        Df = _as_float(B * B - 4 * A * C)  # exact discriminant, then rounded
    else:
        Df = Bf * Bf - 4 * Af * Cf
    sq = np.sqrt(np.maximum(Df, 0.0))
    q = -0.5 * (Bf + np.where(Bf >= 0, sq, -sq))
    lin = Af == 0
    with np.errstate(divide="ignore", invalid="ignore"):
        x1 = np.where(lin, -Cf / np.where(lin, Bf, 1.0), q / np.where(lin, 1.0, Af))
        x2 = np.where(lin, np.inf, Cf / np.where(q == 0, 1.0, q))
    u = np.where(np.isinf(x2), x1, np.minimum(x1, x2))
    v = np.where(np.isinf(x2), np.inf, np.maximum(x1, x2))
    return u, v


def _angle_keys(u, v, digits: int = 9):
    ta = np.round(2 * np.arctan(u), digits)
    tb = np.where(np.isinf(v), np.round(math.pi, digits), np.round(2 * np.arctan(v), digits))
    return np.stack([ta, tb], axis=1)


@dataclass(frozen=True)
class LiftTable:
    """Distinct lifts of one closed geodesic found in a word ball.

    ``keys`` identify lifts exactly (integer forms) or approximately (angles);
    ``min_len`` is the shortest word ``g`` producing each lift.
    """

    keys: np.ndarray
    u: np.ndarray
    v: np.ndarray
    min_len: np.ndarray
    exact: bool

    def __len__(self):
        return len(self.u)

    def index_of(self, key) -> int | None:
        for i, k in enumerate(self.keys):
            if tuple(k) == tuple(key):
                return i
        return None


def _unique_rows(keys: np.ndarray):
    if keys.dtype == object:
        first: dict[tuple, int] = {}
        for i, row in enumerate(map(tuple, keys)):
            first.setdefault(row, i)
        idx = np.fromiter(first.values(), dtype=np.int64, count=len(first))
        return idx
    _, idx = np.unique(keys, axis=0, return_index=True)
    return np.sort(idx)


def axis_key(m: MobiusMap):
    """Lift key of the axis of ``m`` itself (same convention as :func:`lift_table`)."""
    mats = np.array([[[1, 0], [0, 1]]], dtype=np.int64 if m.is_exact else float)
    A, B, C, exact = conjugate_forms(mats, m)
    if exact:
        A, B, C = normalize_forms(A, B, C, True)
        return (A[0], B[0], C[0])
    u, v = form_endpoints(A, B, C)
    return tuple(_angle_keys(u, v)[0])


@lru_cache(maxsize=256)
def lift_table(G: GroupPresentation, m: MobiusMap, max_len: int) -> LiftTable:
    """All distinct ``g . axis(m)`` for reduced words ``g`` of length <= max_len."""
    ball: WordBall = word_ball(G, max_len)
    A, B, C, exact = conjugate_forms(ball.mats, m)
    if exact:
        A, B, C = normalize_forms(A, B, C, True)
        keys = np.stack([A, B, C], axis=1)
        idx = _unique_rows(keys)
        u, v = form_endpoints(A[idx], B[idx], C[idx])
        keys = keys[idx]
    else:
        u, v = form_endpoints(A, B, C)
        keys = _angle_keys(u, v)
        idx = _unique_rows(keys)
        u, v, keys = u[idx], v[idx], keys[idx]
    # ball rows are sorted by length, so the first occurrence is the shortest word
    return LiftTable(keys, u, v, ball.lengths[idx], exact)
