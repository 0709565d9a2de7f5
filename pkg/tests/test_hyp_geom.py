import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geocurrents.hyp_geom import (
    INF,
    ConditionWarning,
    Geodesic,
    GeodesicSegment,
    MobiusMap,
    cross_ratio,
    crosses_segment,
    geodesic_through,
    hull_boundary,
    hyp_distance,
    intersect_transversally,
    intersection_point,
    segment_crossings,
    tolerance,
)

coord = st.floats(-20, 20, allow_nan=False).filter(lambda x: abs(x) > 1e-3)


@st.composite
def geodesics(draw):
    a, b = draw(coord), draw(coord)
    if abs(a - b) < 1e-3:
        b = a + 1.0
    if draw(st.booleans()) and draw(st.integers(0, 5)) == 0:
        return Geodesic(a, INF)
    return Geodesic(a, b)


@st.composite
def mobius(draw):
    a = draw(st.floats(0.3, 3))
    b, c = draw(st.floats(-3, 3)), draw(st.floats(-3, 3))
    return MobiusMap(a, b, c, (1 + b * c) / a)


@st.composite
def points(draw):
    return complex(draw(st.floats(-5, 5)), draw(st.floats(0.05, 5)))


def test_geodesic_canonical_order():
    assert Geodesic(2, 1) == Geodesic(1, 2)
    assert Geodesic(INF, -1).endpoints == (-1, INF)
    with pytest.raises(ValueError):
        Geodesic(1, 1)


def test_geodesic_json_roundtrip():
    for g in (Geodesic(-1, 1), Geodesic(0, INF), Geodesic(0.25, 3)):
        assert Geodesic.from_json(g.to_json()) == g


@pytest.mark.parametrize(
    "g, h, expected",
    [((0, INF), (-1, 1), 1), ((0, INF), (1, 2), 0), ((0, 1), (0, 2), 0)],
)
def test_intersect_transversally_examples(g, h, expected):
    assert intersect_transversally(Geodesic(*g), Geodesic(*h)) == expected


def test_segment_endpoint_inclusion():
    g = Geodesic(-1, 1)
    assert crosses_segment(g, GeodesicSegment(0.5j, 2j, True, True)) == 1
    with pytest.warns(ConditionWarning):
        assert crosses_segment(g, GeodesicSegment(1j, 2j, True, False)) == 1
    with pytest.warns(ConditionWarning):
        assert crosses_segment(g, GeodesicSegment(1j, 2j, False, True)) == 0


def test_hull_boundary_examples():
    assert hull_boundary([Geodesic(0, INF)]) == [Geodesic(0, INF)]
    quad = {Geodesic(-1, 0), Geodesic(0, 1), Geodesic(1, INF), Geodesic(-1, INF)}
    assert set(hull_boundary([Geodesic(0, INF), Geodesic(-1, 1)])) == quad
    quad2 = {Geodesic(0, 1), Geodesic(1, 2), Geodesic(2, 3), Geodesic(0, 3)}
    assert set(hull_boundary([Geodesic(0, 2), Geodesic(1, 3)])) == quad2


def test_hyp_distance_examples():
    assert hyp_distance(1j, 1j) == 0
    assert hyp_distance(1j, 2j) == pytest.approx(math.log(2), abs=1e-12)
    # oracle: cosh d = 1 + |x - y|^2 / (2 Im x Im y)
    assert hyp_distance(1j, 1 + 1j) == pytest.approx(math.acosh(1.5), abs=1e-12)


def test_intersection_point_lies_on_both():
    g, h = Geodesic(0, INF), Geodesic(-1, 1)
    z = intersection_point(g, h)
    assert z == pytest.approx(1j)
    assert intersection_point(Geodesic(0, 1), Geodesic(2, 3)) is None


def test_crossing_away_from_ends_is_silent():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert crosses_segment(Geodesic(-1, 1), GeodesicSegment(0.5j, 2j, True, False)) == 1


def test_tolerance_context_restores():
    with tolerance(1e-6):
        from geocurrents.hyp_geom import get_tolerance

        assert get_tolerance() == 1e-6
    assert get_tolerance() == 1e-9


@given(geodesics(), geodesics())
def test_transversality_symmetric(g, h):
    assert intersect_transversally(g, h) == intersect_transversally(h, g)


@given(geodesics(), geodesics(), mobius())
def test_transversality_invariant(g, h, m):
    if min(abs(float(x) - float(y)) for x in g.endpoints for y in h.endpoints if not (math.isinf(float(x)) or math.isinf(float(y)))) < 1e-3:
        return
    assert intersect_transversally(g, h) == intersect_transversally(m.apply_geodesic(g), m.apply_geodesic(h))


@given(points(), points(), mobius())
def test_distance_invariant(x, y, m):
    assert hyp_distance(m.apply(x), m.apply(y)) == pytest.approx(hyp_distance(x, y), abs=1e-7, rel=1e-7)


@given(points(), points(), points())
def test_triangle_inequality(x, y, z):
    assert hyp_distance(x, z) <= hyp_distance(x, y) + hyp_distance(y, z) + 1e-9


@given(points(), points(), st.floats(0.1, 0.9))
def test_segment_split_is_partition(x, y, s):
    if hyp_distance(x, y) < 1e-2:
        return
    car = geodesic_through(x, y)
    seg = GeodesicSegment(x, y, True, False)
    sign = 1 if _param(car, y) > _param(car, x) else -1
    z = car.point_at(_param(car, x) + sign * s * hyp_distance(x, y))
    left, right = seg.split(z)
    assert left.length + right.length == pytest.approx(seg.length, abs=1e-7)


def _param(g, z):
    if g.is_vertical:
        return math.log(z.imag)
    p = g.apex()
    d = hyp_distance(p, z)
    return d if z.real > p.real else -d


@given(st.lists(geodesics(), min_size=1, max_size=8))
@settings(max_examples=60)
def test_hull_boundary_noncrossing(gs):
    hb = hull_boundary(gs)
    assert all(intersect_transversally(a, b) == 0 for a in hb for b in hb)


def test_cross_ratio_invariant():
    m = MobiusMap(2, 1, 1, 1)
    pts = (0.0, 1.0, 3.0, -2.0)
    assert cross_ratio(*(m.apply(p) for p in pts)) == pytest.approx(cross_ratio(*pts))


def test_segment_crossings_vectorized_matches_scalar():
    rng = np.random.default_rng(3)
    from geocurrents.hyp_geom import endpoint_arrays, random_geodesics

    gs = random_geodesics(rng, 200)
    seg = GeodesicSegment(0.5j, 3j, True, False)
    u, v = endpoint_arrays(gs)
    inner, at_x, at_y = segment_crossings(u, v, seg)
    total = int(inner.sum() + at_x.sum())
    assert total == sum(crosses_segment(g, seg) for g in gs)
