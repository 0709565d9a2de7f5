"""Jordan projections over R(X) (valuations) and over R (log-moduli), and chamber norms."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from .matrix import PolyMatrix, char_poly
from .newton import root_valuations

SL, SP = "SL", "Sp"


@dataclass(frozen=True)
class ChamberVector:
    """A point of the closed Weyl chamber of type SL(n) or Sp(2m)."""

    entries: tuple
    kind: str = SL
    tol: float = 1e-12

    def __post_init__(self):
        e = tuple(self.entries)
        object.__setattr__(self, "entries", e)
        exact = all(isinstance(x, (int, Fraction)) for x in e)
        tol = 0 if exact else self.tol
        if any(a < b - tol for a, b in zip(e, e[1:])):
            raise ValueError(f"entries not decreasing: {e}")
        if self.kind == SL:
            if abs(sum(e)) > tol * max(1, len(e)):
                raise ValueError(f"SL chamber vector must sum to 0: {e}")
        elif self.kind == SP:
            if e and e[-1] < -tol:
                raise ValueError(f"Sp chamber vector must be nonnegative: {e}")
        else:
            raise ValueError(f"unknown chamber kind {self.kind!r}")

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def as_floats(self) -> tuple:
        return tuple(float(x) for x in self.entries)

    def to_json(self) -> list:
        return [str(x) if isinstance(x, Fraction) and x.denominator != 1 else float(x) if isinstance(x, float) else int(x) for x in self.entries]


_NORM_KINDS = {"sl_gap": (SL,), "sp_sum": (SP,), "euclid": (SL, SP)}


def chamber_norm(v: ChamberVector, kind: str = "sl_gap"):
    """``sl_gap`` = x1 - xn, ``sp_sum`` = sum of entries, ``euclid`` = Euclidean norm."""
    if kind not in _NORM_KINDS:
        raise ValueError(f"unknown norm {kind!r}")
    if v.kind not in _NORM_KINDS[kind]:
        raise ValueError(f"norm {kind!r} does not apply to a {v.kind} chamber vector")
    e = v.entries
    if not e:
        return 0
    if kind == "sl_gap":
        return e[0] - e[-1]
    if kind == "sp_sum":
        return sum(e)
    return math.sqrt(sum(float(x) ** 2 for x in e))


def jordan_projection_ff(M: PolyMatrix) -> ChamberVector:
    """Negated root valuations of the characteristic polynomial, sorted decreasingly."""
    vals = root_valuations(char_poly(M))
    if any(v == math.inf for v in vals):
        raise ValueError("singular matrix")
    return ChamberVector(tuple(sorted((-v for v in vals), reverse=True)))


def jordan_projection_real(M, tol: float = 1e-9) -> ChamberVector:
    """Log-moduli of the eigenvalues of a real determinant-one matrix, sorted decreasingly."""
    if isinstance(M, mpmath.matrix):
        ev = mpmath.eig(M, left=False, right=False)
        logs = [float(mpmath.log(abs(x))) for x in ev]
    else:
        ev = np.linalg.eigvals(np.asarray(M, dtype=float))
        logs = [math.log(abs(x)) for x in ev]
    return ChamberVector(tuple(sorted(logs, reverse=True)), SL, tol)


def jordan_projection_at(M: PolyMatrix, t, extra_digits: int = 30) -> ChamberVector:
    """Jordan projection of the specialization at ``t``, with precision scaled to the entry sizes."""
    with mpmath.workdps(30):
        A = M.specialize_mp(t)
        big = max(float(mpmath.log10(abs(x) + 1)) for x in A)
    # the smallest eigenvalue is about 10^-(n-1)big relative to the largest
    dps = int(extra_digits + M.n * big)
    with mpmath.workdps(dps):
        return jordan_projection_real(M.specialize_mp(t))


def specialize(M: PolyMatrix, t) -> np.ndarray:
    return M.specialize(t)
