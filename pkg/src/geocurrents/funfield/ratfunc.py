"""Univariate rational functions in ``X`` with exact or fixed-precision coefficients.

Polynomials are coefficient tuples, lowest degree first.  Exact mode uses
``int``/``Fraction`` coefficients and reduces by the gcd; numeric mode
(any ``float`` coefficient) drops coefficients below a relative cutoff and
only cancels common powers of ``X``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational, Real

CUTOFF = 1e-12

Poly = tuple


# -- polynomial helpers ------------------------------------------------------


def _is_numeric(p: Poly) -> bool:
    return any(isinstance(c, float) for c in p)


def p_trim(p, numeric: bool | None = None) -> Poly:
    p = list(p)
    if numeric is None:
        numeric = _is_numeric(p)
    if numeric:
        scale = max((abs(c) for c in p), default=0.0)
        cut = CUTOFF * max(1.0, scale)
        p = [0.0 if abs(c) <= cut else float(c) for c in p]
    while p and p[-1] == 0:
        p.pop()
    return tuple(p) if p else (0,)


def p_is_zero(p: Poly) -> bool:
    return len(p) == 1 and p[0] == 0


def p_deg(p: Poly) -> int:
    return -1 if p_is_zero(p) else len(p) - 1


def p_add(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return p_trim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def p_neg(p: Poly) -> Poly:
    return tuple(-c for c in p)


def p_mul(p: Poly, q: Poly) -> Poly:
    if p_is_zero(p) or p_is_zero(q):
        return (0,)
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return p_trim(out)


def _div(a, b):
    if isinstance(a, float) or isinstance(b, float):
        return a / b
    if isinstance(a, int) and isinstance(b, int) and a % b == 0:
        return a // b
    r = Fraction(a) / Fraction(b)
    return r.numerator if r.denominator == 1 else r


def p_scale(p: Poly, c) -> Poly:
    return p_trim([_div(x, c) for x in p])


def p_divmod(p: Poly, q: Poly) -> tuple[Poly, Poly]:
    if p_is_zero(q):
        raise ZeroDivisionError("polynomial division by zero")
    r = list(p)
    dq = p_deg(q)
    out = [0] * max(len(p) - dq, 1)
    lc = q[-1]
    for k in range(len(p) - dq - 1, -1, -1):
        c = _div(r[k + dq], lc)
        out[k] = c
        if c != 0:
            for j in range(dq + 1):
                r[k + j] -= c * q[j]
    rem = p_trim(r[:dq] if dq > 0 else [0])
    return p_trim(out), rem


def p_gcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd over the rationals."""
    while not p_is_zero(q):
        p, q = q, p_divmod(p, q)[1]
    return p_scale(p, p[-1]) if not p_is_zero(p) else (1,)


def p_low(p: Poly) -> int:
    """Lowest degree with a nonzero coefficient."""
    for i, c in enumerate(p):
        if c != 0:
            return i
    return 0


def p_eval(p: Poly, t, conv=None):
    acc = 0
    for c in reversed(p):
        acc = acc * t + (conv(c) if conv else c)
    return acc


def p_str(p: Poly, var: str = "X") -> str:
    """Descending-degree string such as ``2X^2-3X+6``."""
    if p_is_zero(p):
        return "0"
    parts = []
    for k in range(len(p) - 1, -1, -1):
        c = p[k]
        if c == 0:
            continue
        neg = c < 0
        a = -c if neg else c
        if isinstance(a, float):
            s = f"{a:.12g}"
        elif isinstance(a, Fraction) and a.denominator != 1:
            s = f"({a})" if k else str(a)
        else:
            s = str(int(a))
        if k:
            s = "" if s == "1" else s
            s += var if k == 1 else f"{var}^{k}"
        parts.append(("-" if neg else "+") + s)
    out = "".join(parts)
    return out[1:] if out.startswith("+") else out


# -- rational functions ------------------------------------------------------


def _coef(c):
    if isinstance(c, bool) or not isinstance(c, Real):
        raise TypeError(f"coefficient must be real, got {c!r}")
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    if isinstance(c, Rational) and not isinstance(c, (int, Fraction)):
        return Fraction(c)
    return c


class RationalFunction:
    """``num / den`` with a monic denominator; immutable."""

    __slots__ = ("num", "den")

    def __init__(self, num=(0,), den=(1,), _normalized: bool = False):
        if isinstance(num, (int, float, Fraction)):
            num = (num,)
        if isinstance(den, (int, float, Fraction)):
            den = (den,)
        if _normalized:
            self.num, self.den = num, den
            return
        num = tuple(_coef(c) for c in num)
        den = tuple(_coef(c) for c in den)
        numeric = _is_numeric(num) or _is_numeric(den)
        num, den = p_trim(num, numeric), p_trim(den, numeric)
        if p_is_zero(den):
            raise ZeroDivisionError("zero denominator")
        if p_is_zero(num):
            self.num, self.den = (0.0,) if numeric else (0,), (1,)
            return
        k = min(p_low(num), p_low(den))
        if k:
            num, den = num[k:], den[k:]
        if not numeric and len(den) > 1:
            g = p_gcd(num, den)
            if len(g) > 1:
                num, den = p_divmod(num, g)[0], p_divmod(den, g)[0]
        lc = den[-1]
        if lc != 1:
            num, den = p_scale(num, lc), p_scale(den, lc)
        self.num, self.den = num, den

    # construction
    @classmethod
    def const(cls, c) -> "RationalFunction":
        return cls((c,))

    @classmethod
    def X(cls) -> "RationalFunction":
        return cls((0, 1), _normalized=True)

    @classmethod
    def coerce(cls, x) -> "RationalFunction":
        return x if isinstance(x, RationalFunction) else cls((x,))

    # predicates
    @property
    def numeric(self) -> bool:
        return _is_numeric(self.num) or _is_numeric(self.den)

    @property
    def is_polynomial(self) -> bool:
        return self.den == (1,)

    def is_zero(self) -> bool:
        return p_is_zero(self.num)

    # arithmetic
    def __add__(self, other):
        o = RationalFunction.coerce(other)
        if self.den == o.den:
            if self.den == (1,):
                return RationalFunction(p_add(self.num, o.num), (1,), _normalized=True)
            return RationalFunction(p_add(self.num, o.num), self.den)
        return RationalFunction(p_add(p_mul(self.num, o.den), p_mul(o.num, self.den)), p_mul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(p_neg(self.num), self.den, _normalized=True)

    def __sub__(self, other):
        return self + (-RationalFunction.coerce(other))

    def __rsub__(self, other):
        return RationalFunction.coerce(other) - self

    def __mul__(self, other):
        o = RationalFunction.coerce(other)
        if self.den == (1,) and o.den == (1,):
            return RationalFunction(p_mul(self.num, o.num), (1,), _normalized=True)
        return RationalFunction(p_mul(self.num, o.num), p_mul(self.den, o.den))

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        return self * RationalFunction.coerce(other).inverse()

    def __rtruediv__(self, other):
        return RationalFunction.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out, base = RationalFunction.const(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, (RationalFunction, int, float, Fraction)):
            return NotImplemented
        o = RationalFunction.coerce(other)
        if self.numeric or o.numeric:
            return self.close_to(o, 0.0)
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def close_to(self, other, tol: float = 1e-9) -> bool:
        """Coefficientwise comparison of ``num1 den2`` and ``num2 den1``."""
        o = RationalFunction.coerce(other)
        d = p_add(p_mul(self.num, o.den), p_neg(p_mul(o.num, self.den)))
        return all(abs(c) <= tol for c in d)

    # valuation at infinity: v(X) = -1
    def valuation(self):
        if self.is_zero():
            return math.inf
        return p_deg(self.den) - p_deg(self.num)

    def leading_coefficient(self):
        """Coefficient of the dominant term at infinity."""
        return _div(self.num[-1], self.den[-1]) if not self.is_zero() else 0

    def laurent(self) -> dict | None:
        """``{exponent: coefficient}`` when the denominator is a power of X, else ``None``."""
        if any(c != 0 for c in self.den[:-1]):
            return None
        k = len(self.den) - 1
        return {i - k: c for i, c in enumerate(self.num) if c != 0}

    def __call__(self, t):
        return self.evaluate(t)

    def evaluate(self, t, conv=None):
        """Value at ``t``; raises ``ZeroDivisionError`` at a pole."""
        d = p_eval(self.den, t, conv)
        if d == 0:
            raise ZeroDivisionError(f"pole of {self} at {t}")
        n = p_eval(self.num, t, conv)
        if conv is None and isinstance(n, int) and isinstance(d, int):
            return Fraction(n, d)
        return n / d

    def __str__(self):
        if self.den == (1,):
            return p_str(self.num)
        lau = self.laurent()
        if lau is not None:
            return _laurent_str(lau)
        return f"({p_str(self.num)})/({p_str(self.den)})"

    def __repr__(self):
        return f"RationalFunction({self})"


def _laurent_str(terms: dict) -> str:
    parts = []
    for k in sorted(terms, reverse=True):
        c = terms[k]
        neg = c < 0
        a = -c if neg else c
        s = f"{a:.12g}" if isinstance(a, float) else f"({a})" if isinstance(a, Fraction) and k else str(a)
        if k:
            s = "" if s == "1" else s
            s += "X" if k == 1 else f"X^{k}"
        parts.append(("-" if neg else "+") + s)
    out = "".join(parts)
    return out[1:] if out.startswith("+") else out


X = RationalFunction.X()
