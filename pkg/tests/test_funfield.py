import math
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from geocurrents.funfield import (
    ChamberVector,
    PoleError,
    PolyMatrix,
    RationalFunction,
    X,
    boundary_systole_check,
    chamber_norm,
    char_poly,
    example_rep_334,
    example_rep_pqr,
    hyperbolic_census,
    jordan_projection_at,
    jordan_projection_ff,
    jordan_projection_real,
    parse_rep,
    root_valuations,
    specialization_limits,
)
from geocurrents.funfield.examples import eps

SX = sympy.Symbol("X")

small = st.fractions(min_value=-5, max_value=5, max_denominator=4)
polys = st.lists(small, min_size=1, max_size=4)


@st.composite
def ratfuncs(draw):
    num = draw(polys)
    den = draw(polys.filter(lambda p: any(c != 0 for c in p)))
    return RationalFunction(num, den)


def _sym(p):
    return sum(sympy.Rational(c.numerator, c.denominator) * SX**i for i, c in enumerate(map(Fraction, p)))


@given(ratfuncs(), ratfuncs(), ratfuncs())
def test_field_axioms(f, g, h):
    assert (f + g) * h == f * h + g * h
    assert f * g == g * f
    assert (f + g) + h == f + (g + h)
    if not f.is_zero():
        assert f * f.inverse() == RationalFunction.const(1)


@given(ratfuncs(), ratfuncs())
def test_valuation_rules(f, g):
    if f.is_zero() or g.is_zero():
        return
    assert (f * g).valuation() == f.valuation() + g.valuation()
    if not (f + g).is_zero():
        assert (f + g).valuation() >= min(f.valuation(), g.valuation())


@given(polys, polys.filter(lambda p: any(c != 0 for c in p)))
def test_matches_sympy(num, den):
    f = RationalFunction(num, den)
    expected = sympy.cancel(_sym(num) / _sym(den))
    got = sympy.cancel(_sym(f.num) / _sym(f.den))
    assert sympy.simplify(got - expected) == 0


def test_trace_string_format():
    assert str(2 * X**2 - 3 * X + 6) == "2X^2-3X+6"


def test_evaluate_and_pole():
    f = RationalFunction((1,), (-1, 1))  # 1/(X - 1)
    assert f.evaluate(3) == Fraction(1, 2)
    with pytest.raises(ZeroDivisionError):
        f.evaluate(1)
    M = PolyMatrix([[1, f], [0, 1]])
    with pytest.raises(PoleError, match=r"\(0, 1\)|0,1|\[0, 1\]"):
        M.specialize(1)


def test_char_poly_examples():
    one = RationalFunction.const(1)
    cp = char_poly(PolyMatrix.identity(3))  # (lambda - 1)^3
    assert cp == [RationalFunction.const(c) for c in (-1, 3, -3, 1)]
    Xi = X.inverse()
    s = X + 1 + Xi
    cp = char_poly(PolyMatrix([[X, 0, 0], [0, 1, 0], [0, 0, Xi]]))
    assert cp == [-one, s, -s, one]


@given(st.lists(st.lists(polys, min_size=3, max_size=3), min_size=3, max_size=3))
@settings(max_examples=25, deadline=None)
def test_char_poly_matches_sympy(rows):
    M = PolyMatrix([[RationalFunction(p) for p in row] for row in rows])
    S = sympy.Matrix([[_sym(p) for p in row] for row in rows])
    lam = sympy.Symbol("lam")
    expected = sympy.Poly(S.charpoly(lam).as_expr(), lam).all_coeffs()[::-1]
    got = char_poly(M)
    for e, g in zip(expected, got):
        assert sympy.expand(e - _sym(g.num) / _sym(g.den)) == 0


def test_root_valuation_examples():
    one, zero = RationalFunction.const(1), RationalFunction.const(0)
    assert root_valuations([one, -X, one]) == [-1, 1]
    assert root_valuations([-one, zero, zero, one]) == [0, 0, 0]
    Xm2 = X ** -2
    p = [-(X * X * Xm2), X * X + 2 * X * Xm2, -(2 * X + Xm2), one]
    assert root_valuations(p) == [-1, -1, 2]


def test_jordan_examples():
    assert jordan_projection_ff(PolyMatrix.identity(3)).entries == (0, 0, 0)
    assert jordan_projection_ff(PolyMatrix([[X, 0, 0], [0, 1, 0], [0, 0, X.inverse()]])).entries == (1, 0, -1)
    assert jordan_projection_real(np.eye(3)).entries == pytest.approx((0, 0, 0))
    v = jordan_projection_real(np.diag([4.0, 1.0, 0.25])).entries
    assert v == pytest.approx((math.log(4), 0, -math.log(4)))


def test_chamber_norms():
    v = ChamberVector((1, 0, -1))
    assert chamber_norm(v, "sl_gap") == 2
    assert chamber_norm(v, "euclid") == pytest.approx(math.sqrt(2))
    assert chamber_norm(ChamberVector((0, 0, 0)), "euclid") == 0
    assert chamber_norm(ChamberVector((2, 1), "Sp"), "sp_sum") == 3
    with pytest.raises(ValueError):
        ChamberVector((0, 1, -1))
    with pytest.raises(ValueError):
        chamber_norm(v, "sp_sum")


def test_example_334():
    rep = example_rep_334()
    assert rep.relations_hold() and rep.determinants_one()
    assert rep.image("Ab").trace() == 2 * X**2 - 3 * X + 6
    assert rep.b.specialize(0).tolist() == [[1, 2, 3], [0, -2, -1], [0, 3, 1]]
    lam = jordan_projection_ff(rep.image("Ab"))
    # dominant eigenvalue is about 2X^2; the oracle is the numeric log-modulus at large t
    assert lam.entries[0] == 2
    num = jordan_projection_at(rep.image("Ab"), 1e12).as_floats()
    assert num[0] / math.log(1e12) == pytest.approx(2, abs=0.03)
    assert lam.entries == (2, 0, -2)
    cp = char_poly(rep.image("Ab"))
    assert cp[2] == -(2 * X**2 - 3 * X + 6)


def test_specialization_error_is_log2_over_logt():
    # the top eigenvalue of rho_t(a^-1 b) is 2 t^2 (1 + o(1)), so the normalized error tends to ln 2 / ln t
    rep = example_rep_334()
    (row,) = specialization_limits(rep, ["Ab"], (1e6,))
    assert row.errors[0] == pytest.approx(math.log(2) / math.log(1e6), abs=1e-4)


def test_specialization_limit_example():
    rep = example_rep_334()
    (row,) = specialization_limits(rep, ["Ab"], (1e3, 1e4, 1e5, 1e6))
    assert row.monotone
    assert row.errors[-1] <= 0.05


def _expected_trace(p, q, r):
    ep, eq, er = eps(p), eps(q), eps(r)
    return 8 * ep * eq * er, 16 * ep**2 * er**2 + 4 * eq**2 - 1


@pytest.mark.parametrize("pqr", [(3, 3, 5), (5, 5, 5), (3, 4, 5), (3, 3, 4)])
def test_example_pqr_trace(pqr):
    rep = example_rep_pqr(*pqr)
    tr = rep.image("Ab").trace()
    lin, const = _expected_trace(*pqr)
    expected = lin * X + const + lin * X.inverse()
    assert tr.close_to(expected, 1e-9)
    if 4 in pqr:
        assert abs(lin) < 1e-15


def test_example_pqr_relations():
    rep = example_rep_pqr(3, 4, 5)
    assert rep.orders == (3, 5, 4)
    assert rep.relations_hold(1e-9)
    with pytest.raises(ValueError):
        example_rep_pqr(2, 3, 7)


def test_parse_rep():
    assert parse_rep("334").name == "334"
    assert parse_rep("pqr:3,3,5").orders == (3, 5, 3)
    with pytest.raises(ValueError):
        parse_rep("nope")


def test_boundary_systole_census():
    rep = example_rep_334()
    r = boundary_systole_check(rep, 6)
    assert r.min_gap >= Fraction(1, 3)
    gaps = {row.word: row.gap for row in r.rows}
    assert gaps["Ab"] >= 2
    lo, hi = r.ratio_interval
    assert 0 < lo <= hi < math.inf


def test_empty_census():
    rep = example_rep_334()
    r = boundary_systole_check(rep, 1)
    assert r.census == 0 and r.ok and r.argmin is None


def test_homogeneity():
    rep = example_rep_334()
    for row in hyperbolic_census(rep, 3):
        lam = row.jordan_ff.entries
        assert jordan_projection_ff(rep.image(row.word) ** 2).entries == tuple(2 * x for x in lam)
