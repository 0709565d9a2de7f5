import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geocurrents.currents import Current, LiftCrossingBudget
from geocurrents.fuchsian import conjugacy_representatives
from geocurrents.hyp_geom import INF, Geodesic, intersect_transversally, random_geodesics
from geocurrents.lamination import (
    GeodesicConfig,
    a_zero,
    decompose_config,
    decompose_current,
    intersection_graph,
    lambda_A,
    solitary_short_closed,
    verify_lamination,
)

B8 = LiftCrossingBudget(8, 2)


def cfg(*pairs):
    return GeodesicConfig.of(Geodesic(*p) for p in pairs)


def test_components():
    assert [len(c) for c in intersection_graph(cfg((0, INF), (-1, 1))).components] == [2]
    assert [len(c) for c in intersection_graph(cfg((0, 1), (2, 3))).components] == [1, 1]
    assert sorted(len(c) for c in intersection_graph(cfg((0, 2), (1, 3), (4, 5))).components) == [1, 2]


def test_lambda_A_examples():
    assert lambda_A(cfg((0, INF))) == [Geodesic(0, INF)]
    assert set(lambda_A(cfg((0, INF), (-1, 1)))) == {Geodesic(-1, 0), Geodesic(0, 1), Geodesic(1, INF), Geodesic(-1, INF)}
    assert set(lambda_A(cfg((0, 2), (1, 3)))) == {Geodesic(0, 1), Geodesic(1, 2), Geodesic(2, 3), Geodesic(0, 3)}


def test_a_zero_examples():
    assert a_zero([Geodesic(0, INF)], [Geodesic(1, 2), Geodesic(-1, 1)]) == [Geodesic(1, 2)]
    cands = [Geodesic(1, 2), Geodesic(3, 7)]
    assert a_zero([], cands) == cands
    pair = [Geodesic(0, INF), Geodesic(-1, 1)]
    assert a_zero(pair, pair) == []


def test_lamination_probes_examples():
    rng = np.random.default_rng(0)
    assert verify_lamination(cfg((0, INF), (-1, 1)), random_geodesics(rng, 100)).ok
    rep = verify_lamination(cfg((0, 1), (2, 3)), random_geodesics(rng, 100))
    assert rep.ok
    assert {r.tag for r in rep.regions} == {"avoided"}
    assert verify_lamination(GeodesicConfig.of(random_geodesics(rng, 8)), random_geodesics(rng, 500)).ok


def test_filled_region_tagged():
    dec = decompose_config(cfg((0, INF), (-1, 1)))
    assert [r.tag for r in dec.regions].count("filled") == 1


@st.composite
def configs(draw):
    seed = draw(st.integers(0, 2**32 - 1))
    n = draw(st.integers(1, 12))
    rng = np.random.default_rng(seed)
    return GeodesicConfig.of(random_geodesics(rng, n)), random_geodesics(rng, 100)


@given(configs())
@settings(max_examples=30, deadline=None)
def test_lamination_probes_random(data):
    A, probes = data
    rep = verify_lamination(A, probes)
    assert rep.ok, rep.violations[:3]
    leaves = lambda_A(A)
    assert all(intersect_transversally(g, h) == 0 for g in leaves for h in leaves)


def test_solitary_examples(torus):
    census = conjugacy_representatives(torus, 6)
    assert solitary_short_closed(Current.discrete(torus, [("A", 1), ("B", 1)]), census, B8) == []
    assert [c.word for c in solitary_short_closed(Current.dirac(torus, "A"), census, B8)] == ["A"]
    sol = solitary_short_closed(Current.discrete(torus), census, B8)
    assert all(intersect_transversally(a.axis, b.axis) == 0 or a == b for a in sol for b in sol)


def test_decompose_current_examples(torus):
    census = conjugacy_representatives(torus, 6)
    d = decompose_current(Current.dirac(torus, "A"), census, B8)
    assert [c.word for c in d.solitary] == ["A"] and not d.parts and not d.violations
    d = decompose_current(Current.discrete(torus, [("A", 1), ("B", 1)]), census, B8)
    assert d.solitary == [] and len(d.parts) == 1 and not d.violations
    d = decompose_current(Current.discrete(torus), census, B8)
    assert not d.parts and d.mu_lambda.is_zero and not d.violations


def test_decomposition_json(torus):
    census = conjugacy_representatives(torus, 4)
    d = decompose_current(Current.discrete(torus, [("A", 1), ("AA", 3)]), census, B8).to_json()
    assert d["E_mu"] == ["A"]
    assert d["parts"] == []
