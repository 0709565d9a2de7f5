"""Square matrices over the rational-function field and their characteristic polynomials."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from .ratfunc import RationalFunction


class PoleError(ZeroDivisionError):
    """Specialization at a pole of some matrix entry."""


class PolyMatrix:
    """Immutable n x n matrix with :class:`RationalFunction` entries."""

    __slots__ = ("rows",)

    def __init__(self, rows: Sequence[Sequence]):
        rows = tuple(tuple(RationalFunction.coerce(x) for x in r) for r in rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("PolyMatrix must be square and nonempty")
        self.rows = rows

    @property
    def n(self) -> int:
        return len(self.rows)

    @classmethod
    def identity(cls, n: int) -> "PolyMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    @property
    def numeric(self) -> bool:
        return any(x.numeric for r in self.rows for x in r)

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        n = self.n
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = RationalFunction.const(0)
                for k in range(n):
                    a, b = self.rows[i][k], other.rows[k][j]
                    if a.is_zero() or b.is_zero():
                        continue
                    acc = acc + a * b
                row.append(acc)
            out.append(row)
        return PolyMatrix(out)

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        return PolyMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        return PolyMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def scale(self, c) -> "PolyMatrix":
        return PolyMatrix([[a * c for a in r] for r in self.rows])

    def __neg__(self):
        return self.scale(-1)

    def __pow__(self, k: int) -> "PolyMatrix":
        if k < 0:
            return self.inverse() ** (-k)
        out, base = PolyMatrix.identity(self.n), self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def trace(self) -> RationalFunction:
        acc = RationalFunction.const(0)
        for i in range(self.n):
            acc = acc + self.rows[i][i]
        return acc

    def minor(self, i: int, j: int) -> "PolyMatrix":
        return PolyMatrix([[x for c, x in enumerate(r) if c != j] for k, r in enumerate(self.rows) if k != i])

    def det(self) -> RationalFunction:
        n = self.n
        if n == 1:
            return self.rows[0][0]
        if n == 2:
            (a, b), (c, d) = self.rows
            return a * d - b * c
        acc = RationalFunction.const(0)
        for j in range(n):
            x = self.rows[0][j]
            if x.is_zero():
                continue
            term = x * self.minor(0, j).det()
            acc = acc + term if j % 2 == 0 else acc - term
        return acc

    def adjugate(self) -> "PolyMatrix":
        n = self.n
        if n == 1:
            return PolyMatrix([[1]])
        cof = [[self.minor(i, j).det() * (1 if (i + j) % 2 == 0 else -1) for j in range(n)] for i in range(n)]
        return PolyMatrix([[cof[j][i] for j in range(n)] for i in range(n)])

    def inverse(self) -> "PolyMatrix":
        d = self.det()
        adj = self.adjugate()
        if d == 1:
            return adj
        return adj.scale(d.inverse())

    def close_to(self, other: "PolyMatrix", tol: float = 1e-9) -> bool:
        return all(a.close_to(b, tol) for r, s in zip(self.rows, other.rows) for a, b in zip(r, s))

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def is_scalar_identity(self, sign: int = 1, tol: float = 0.0) -> bool:
        target = PolyMatrix.identity(self.n).scale(sign)
        return self.close_to(target, tol) if (tol or self.numeric) else self == target

    def specialize(self, t) -> np.ndarray:
        """Entrywise evaluation at a real ``t`` (float precision)."""
        out = np.empty((self.n, self.n))
        for i, r in enumerate(self.rows):
            for j, x in enumerate(r):
                try:
                    out[i, j] = float(x.evaluate(t))
                except ZeroDivisionError:
                    raise PoleError(f"entry ({i}, {j}) = {x} has a pole at X = {t}") from None
        return out

    def specialize_mp(self, t) -> mpmath.matrix:
        """Entrywise evaluation in the current mpmath precision."""
        tt = mpmath.mpf(t) if not isinstance(t, Fraction) else mpmath.mpf(t.numerator) / t.denominator
        out = mpmath.matrix(self.n, self.n)
        for i, r in enumerate(self.rows):
            for j, x in enumerate(r):
                try:
                    out[i, j] = x.evaluate(tt, _mp)
                except ZeroDivisionError:
                    raise PoleError(f"entry ({i}, {j}) = {x} has a pole at X = {t}") from None
        return out

    def __str__(self):
        return "[" + "; ".join(", ".join(str(x) for x in r) for r in self.rows) + "]"

    def __repr__(self):
        return f"PolyMatrix({self})"


def _mp(c):
    if isinstance(c, Fraction):
        return mpmath.mpf(c.numerator) / c.denominator
    return mpmath.mpf(c)


def char_poly(M: PolyMatrix) -> list[RationalFunction]:
    """Coefficients ``[c_0, ..., c_n]`` of ``det(lambda I - M)``, by Faddeev-LeVerrier."""
    n = M.n
    coeffs = [RationalFunction.const(0)] * (n + 1)
    coeffs[n] = RationalFunction.const(1)
    Mk = PolyMatrix.identity(n)
    for k in range(1, n + 1):
        AM = M @ Mk
        c = AM.trace() * Fraction(-1, k)
        coeffs[n - k] = c
        if k < n:
            Mk = AM + PolyMatrix.identity(n).scale(c)
    return coeffs
