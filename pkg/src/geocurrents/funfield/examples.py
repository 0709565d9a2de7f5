"""Explicit triangle-group representations into SL(3, R(X)) and census checks on them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from ..fuchsian import (
    GroupPresentation,
    cyclic_reduce,
    enumerate_words,
    triangle_group,
)
from .jordan import ChamberVector, chamber_norm, jordan_projection_at, jordan_projection_ff
from .matrix import PolyMatrix
from .ratfunc import X, RationalFunction


@dataclass(frozen=True, eq=False)
class TriangleRep:
    """Images of the generators ``a, b`` of a triangle group; ``A, B`` denote inverses.

    ``orders = (p, q, r)`` records the relations realized by the matrices:
    ``a^p = b^q = (ab)^r = I``.
    """

    name: str
    a: PolyMatrix
    b: PolyMatrix
    orders: tuple
    _cache: dict = field(default_factory=dict, repr=False)

    @cached_property
    def fuchsian(self) -> GroupPresentation:
        return triangle_group(*self.orders)

    def image(self, word: str) -> PolyMatrix:
        if word in self._cache:
            return self._cache[word]
        if not word:
            m = PolyMatrix.identity(self.a.n)
        elif len(word) == 1:
            m = {"a": self.a, "b": self.b, "A": self.a.inverse(), "B": self.b.inverse()}[word]
        else:
            m = self.image(word[:-1]) @ self.image(word[-1])
        self._cache[word] = m
        return m

    def relations_hold(self, tol: float = 0.0) -> bool:
        p, q, r = self.orders
        one = PolyMatrix.identity(self.a.n)
        checks = [self.a ** p, self.b ** q, (self.a @ self.b) ** r]
        if self.a.numeric or self.b.numeric or tol:
            return all(m.close_to(one, tol or 1e-9) for m in checks)
        return all(m == one for m in checks)

    def determinants_one(self, tol: float = 0.0) -> bool:
        dets = [self.a.det(), self.b.det()]
        if tol or self.a.numeric or self.b.numeric:
            return all(d.close_to(1, tol or 1e-9) for d in dets)
        return all(d == 1 for d in dets)


def example_rep_334() -> TriangleRep:
    """A representation of Delta(3, 3, 4) into SL(3, Z[X])."""
    a = PolyMatrix([[0, 0, 1], [1, 0, 0], [0, 1, 0]])
    b = PolyMatrix(
        [
            [1, 2 - X + X**2, 3 + X**2],
            [0, -2 + 2 * X - X**2, -1 + X - X**2],
            [0, 3 - 3 * X + X**2, (X - 1) ** 2],
        ]
    )
    rep = TriangleRep("334", a, b, (3, 3, 4))
    if not (rep.relations_hold() and rep.determinants_one()):
        raise AssertionError("Delta(3,3,4) relations fail")
    return rep


def eps(s: int) -> float:
    return math.cos(2 * math.pi / s)


def cartan_matrix(p: int, q: int, r: int) -> PolyMatrix:
    ep, eq, er = eps(p), eps(q), eps(r)
    Xi = RationalFunction((1,), (0, 1))
    return PolyMatrix(
        [
            [1.0, -ep * Xi, -eq],
            [-ep * X, 1.0, -er],
            [-eq, -er, 1.0],
        ]
    )


def _reflection(B: PolyMatrix, i: int) -> PolyMatrix:
    # -Id + 2 B e_i e_i^t: column i becomes 2 B[:, i] - e_i, the others -e_j
    n = B.n
    rows = []
    for k in range(n):
        row = []
        for j in range(n):
            if j == i:
                row.append(B[k, i] * 2.0 - (1.0 if k == i else 0.0))
            else:
                row.append(-1.0 if k == j else 0.0)
        rows.append(row)
    return PolyMatrix(rows)


def example_rep_pqr(p: int, q: int, r: int) -> TriangleRep:
    """Products of three reflections built from a Cartan-type matrix ``B(X)``.

    ``a = r1 r2`` and ``b = r2 r3``.  Since ``a b = r1 r3``, the realized
    relations are ``a^p = b^r = (ab)^q = I``.
    """
    if min(p, q, r) < 3:
        raise ValueError("need min(p, q, r) >= 3")
    B = cartan_matrix(p, q, r)
    r1, r2, r3 = (_reflection(B, i) for i in range(3))
    rep = TriangleRep(f"pqr:{p},{q},{r}", r1 @ r2, r2 @ r3, (p, r, q))
    if not rep.relations_hold(1e-9):
        raise AssertionError(f"relations fail for ({p},{q},{r})")
    return rep


def parse_rep(spec: str) -> TriangleRep:
    """``334`` or ``pqr:p,q,r``."""
    spec = spec.strip()
    if spec == "334":
        return example_rep_334()
    if spec.startswith("pqr:"):
        p, q, r = (int(x) for x in spec[4:].split(","))
        return example_rep_pqr(p, q, r)
    raise ValueError(f"unknown representation {spec!r}")


# -- census ------------------------------------------------------------------


@dataclass
class CensusRow:
    word: str
    trace: RationalFunction
    jordan_ff: ChamberVector
    gap: Fraction
    euclid: float
    hyp_length: float

    @property
    def ratio(self) -> float:
        return self.euclid / self.hyp_length


def _min_rotation(w: str) -> str:
    return min(w[i:] + w[:i] for i in range(len(w)))


def hyperbolic_census(rep: TriangleRep, max_word_len: int) -> list[CensusRow]:
    """One row per oriented hyperbolic class (cyclic word up to rotation) among words of length <= max_word_len.

    Orientation is kept because ``g`` and ``g^-1`` have different traces in
    SL(3).  Each row is labelled by the least rotation of its word.
    Hyperbolicity is decided in the Fuchsian realization of the triangle group.
    """
    G = rep.fuchsian
    seen: set = set()
    rows = []
    for e in enumerate_words(G, max_word_len):
        if not e.is_hyperbolic:
            continue
        w = _min_rotation(cyclic_reduce(e.word))
        if w in seen:
            continue
        seen.add(w)
        M = rep.image(w)
        lam = jordan_projection_ff(M)
        ell = 2 * math.acosh(abs(float(e.trace)) / 2)
        rows.append(CensusRow(w, M.trace(), lam, chamber_norm(lam, "sl_gap"), chamber_norm(lam, "euclid"), ell))
    return rows


@dataclass
class BoundarySystoleReport:
    rep: str
    max_word_len: int
    census: int
    min_gap: Fraction | None
    argmin: str | None
    violations: list
    ratio_interval: tuple | None
    rows: list = field(repr=False, default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "rep": self.rep,
            "max_word_len": self.max_word_len,
            "census": self.census,
            "min_gap": None if self.min_gap is None else str(self.min_gap),
            "argmin": self.argmin,
            "violations": self.violations,
            "ratio_interval": self.ratio_interval,
        }


def boundary_systole_check(rep: TriangleRep, max_word_len: int) -> BoundarySystoleReport:
    """Minimum SL gap norm of the valuation Jordan projection over hyperbolic words; expected >= 1/(n)."""
    if max_word_len < 1:
        raise ValueError("max_word_len must be >= 1")
    rows = hyperbolic_census(rep, max_word_len)
    if not rows:
        return BoundarySystoleReport(rep.name, max_word_len, 0, None, None, [], None, [])
    best = min(rows, key=lambda r: (r.gap, len(r.word), r.word))
    step = Fraction(1, rep.a.n)
    violations = [r.word for r in rows if r.gap < step]
    ratios = [r.ratio for r in rows]
    return BoundarySystoleReport(
        rep.name, max_word_len, len(rows), best.gap, best.word, violations, (min(ratios), max(ratios)), rows
    )


@dataclass
class LimitRow:
    word: str
    jordan_ff: ChamberVector
    errors: tuple  # sup-norm error of lambda(rho_t)/ln t per t

    @property
    def monotone(self) -> bool:
        return all(b < a for a, b in zip(self.errors, self.errors[1:]))


def specialization_limits(rep: TriangleRep, words, t_grid=(1e3, 1e4, 1e5, 1e6)) -> list[LimitRow]:
    """``|| lambda(rho_t(w)) / ln t - lambda_ff(w) ||_inf`` over a grid of ``t``."""
    out = []
    for w in words:
        M = rep.image(w)
        lam = jordan_projection_ff(M).as_floats()
        errs = []
        for t in t_grid:
            lt = jordan_projection_at(M, t).as_floats()
            errs.append(max(abs(x / math.log(t) - y) for x, y in zip(lt, lam)))
        out.append(LimitRow(w, jordan_projection_ff(M), tuple(errs)))
    return out
