"""Randomized property suites, runnable from the command line (``geocurrents check``)."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import funfield as ff
from .currents import Current, LiftCrossingBudget, intersection, intersection_cc
from .fuchsian import axis, builtin_group, closed_geodesic, conjugacy_representatives, enumerate_words
from .hyp_geom import (
    GeodesicSegment,
    MobiusMap,
    crosses_segment,
    geodesic_through,
    hull_boundary,
    hyp_distance,
    intersect_transversally,
    random_geodesics,
)
from .lamination import GeodesicConfig, verify_lamination
from .metric import PseudoDistanceContext, closed_geodesic_length, pseudo_distance


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


def _random_mobius(rng) -> MobiusMap:
    a, b, c = rng.normal(size=3)
    while abs(a) < 0.2:
        a = rng.normal()
    return MobiusMap(a, b, c, (1 + b * c) / a)


def check_transversality_invariance(rng, n: int = 300) -> CheckResult:
    gs = random_geodesics(rng, 2 * n)
    bad = 0
    for g, h in zip(gs[::2], gs[1::2]):
        m = _random_mobius(rng)
        i0 = intersect_transversally(g, h)
        bad += i0 != intersect_transversally(h, g)
        bad += i0 != intersect_transversally(m.apply_geodesic(g), m.apply_geodesic(h))
    return CheckResult("hyp_geom.transversality_invariance", bad == 0, f"{bad} mismatches over {n} pairs")


def check_segment_partition(rng, n: int = 200) -> CheckResult:
    bad = 0
    for carrier in random_geodesics(rng, n):
        s = np.sort(rng.uniform(-1.5, 1.5, size=3))
        x, y, z = (carrier.point_at(t) for t in s)
        h = random_geodesics(rng, 1)[0]
        whole = crosses_segment(h, GeodesicSegment(x, z, True, False))
        parts = crosses_segment(h, GeodesicSegment(x, y, True, False)) + crosses_segment(h, GeodesicSegment(y, z, True, False))
        bad += whole != parts
        d = hyp_distance(x, y) + hyp_distance(y, z) - hyp_distance(x, z)
        bad += abs(d) > 1e-9
    return CheckResult("hyp_geom.segment_partition", bad == 0, f"{bad} failures over {n} triples")


def check_hull_noncrossing(rng, n: int = 50) -> CheckResult:
    bad = 0
    for _ in range(n):
        hb = hull_boundary(random_geodesics(rng, int(rng.integers(1, 8))))
        bad += sum(intersect_transversally(g, h) for g in hb for h in hb)
    return CheckResult("hyp_geom.hull_noncrossing", bad == 0, f"{bad} crossing pairs")


def check_axes() -> CheckResult:
    G = builtin_group("punctured_torus")
    bad = 0
    for e in enumerate_words(G, 4):
        if not e.is_hyperbolic:
            continue
        ax = axis(e)
        for t in ax.endpoints:
            s = float(e.matrix.apply(t))
            t = float(t)
            bad += not (math.isinf(s) and math.isinf(t) or abs(s - t) <= 1e-9 * max(1, abs(t)))
        p = ax.apex()
        ell = 2 * math.acosh(abs(float(e.trace)) / 2)
        bad += abs(hyp_distance(p, e.matrix.apply(p)) - ell) > 1e-8
    return CheckResult("fuchsian.axes", bad == 0, f"{bad} failures")


def check_relators() -> CheckResult:
    bad = []
    for name in ("triangle(3,3,4)", "triangle(2,3,7)", "triangle(4,4,5)"):
        G = builtin_group(name)
        for r in G.relators:
            if not G.evaluate(r).equals(MobiusMap.identity(), 1e-9):
                bad.append((name, r))
    return CheckResult("fuchsian.relators", not bad, str(bad))


def check_intersection_algebra(rng, budget: LiftCrossingBudget) -> CheckResult:
    G = builtin_group("punctured_torus")
    census = [c for c in conjugacy_representatives(G, 4) if c.primitive][:8]
    bad = []
    for _ in range(6):
        i, j = rng.integers(0, len(census), size=2)
        c, d = census[i], census[j]
        if intersection_cc(c, d, budget).value != intersection_cc(d, c, budget).value:
            bad.append(("symmetry", c.word, d.word))
        base = intersection_cc(c, d, budget).value
        for k in (2, 3):
            ck = closed_geodesic(G, c.word * k)
            if intersection_cc(ck, d, budget).value != k * base:
                bad.append(("power", c.word, d.word, k))
    a, b = int(rng.integers(1, 4)), int(rng.integers(1, 4))
    m1, m2, nu = Current.dirac(G, "A"), Current.dirac(G, "AB"), Current.dirac(G, "Ab")
    lhs = intersection(a * m1 + b * m2, nu, budget).value
    rhs = a * intersection(m1, nu, budget).value + b * intersection(m2, nu, budget).value
    if lhs != rhs:
        bad.append(("bilinearity", lhs, rhs))
    return CheckResult("currents.algebra", not bad, str(bad))


def _random_point(rng, box: float = 0.6) -> complex:
    return complex(rng.uniform(-box, box), math.exp(rng.uniform(-box, box)))


def _collinear(rng):
    """Three points in order along the geodesic through two random points."""
    x = _random_point(rng)
    car = geodesic_through(x, _random_point(rng))
    s0 = _param(car, x)
    s1, s2 = s0 + rng.uniform(0.05, 1.0), s0 + rng.uniform(1.05, 2.0)
    return x, car.point_at(s1), car.point_at(s2)


def _param(g, z) -> float:
    if g.is_vertical:
        return math.log(z.imag)
    p = g.apex()
    d = hyp_distance(p, z)
    return d if z.real > p.real else -d


def check_straightness(rng, budget: LiftCrossingBudget, n: int = 40) -> CheckResult:
    G = builtin_group("punctured_torus")
    ctx = PseudoDistanceContext(Current.discrete(G, [("A", 1), ("B", 2), ("AB", 1)]), budget)
    bad = 0
    for _ in range(n):
        x, y, z = _collinear(rng)
        dxy, dyz, dxz = (pseudo_distance(ctx, p, q).value for p, q in ((x, y), (y, z), (x, z)))
        bad += dxy + dyz != dxz
        w = _random_point(rng)
        bad += pseudo_distance(ctx, x, w).value > pseudo_distance(ctx, x, y).value + pseudo_distance(ctx, y, w).value
    return CheckResult("metric.straightness", bad == 0, f"{bad} failures over {n} triples")


def check_closed_length(budget: LiftCrossingBudget) -> CheckResult:
    G = builtin_group("punctured_torus")
    mu = Current.discrete(G, [("A", 1), ("B", 1)])
    ctx = PseudoDistanceContext(mu, budget)
    bad = []
    for c in conjugacy_representatives(G, 4):
        a = intersection(mu, Current.dirac(G, c.word), budget).value
        b = closed_geodesic_length(ctx, c).value
        if a != b:
            bad.append((c.word, a, b))
    return CheckResult("metric.closed_length_equals_intersection", not bad, str(bad))


def check_lamination(rng, n: int = 10, probes: int = 200) -> CheckResult:
    bad = 0
    for _ in range(n):
        A = GeodesicConfig.of(random_geodesics(rng, int(rng.integers(1, 13))))
        bad += len(verify_lamination(A, random_geodesics(rng, probes)).violations)
    return CheckResult("lamination.probes", bad == 0, f"{bad} violations over {n} configurations")


def _rand_rf(r: random.Random) -> ff.RationalFunction:
    num = [Fraction(r.randint(-5, 5), r.randint(1, 3)) for _ in range(r.randint(1, 4))]
    den = [Fraction(r.randint(-5, 5), r.randint(1, 3)) for _ in range(r.randint(1, 3))]
    if all(c == 0 for c in den):
        den = [1]
    return ff.RationalFunction(num, den)


def check_field_axioms(seed: int, n: int = 60) -> CheckResult:
    r = random.Random(seed)
    bad = 0
    for _ in range(n):
        f, g, h = _rand_rf(r), _rand_rf(r), _rand_rf(r)
        bad += (f + g) * h != f * h + g * h
        bad += f * g != g * f
        bad += (f + g) + h != f + (g + h)
        if not f.is_zero() and not g.is_zero():
            bad += (f * g).valuation() != f.valuation() + g.valuation()
        if not (f + g).is_zero():
            bad += (f + g).valuation() < min(f.valuation(), g.valuation())
    return CheckResult("funfield.field_axioms", bad == 0, f"{bad} failures")


def check_newton_oracle(seed: int, n: int = 50) -> CheckResult:
    r = random.Random(seed)
    X = ff.X
    bad = 0
    for _ in range(n):
        vals, poly = [], [ff.RationalFunction.const(1)]
        for _ in range(r.randint(1, 4)):
            k = r.randint(-3, 3)
            c = Fraction(r.choice([-3, -2, -1, 1, 2, 3]), r.randint(1, 2))
            root = c * X ** (-k)  # valuation k
            vals.append(Fraction(k))
            # multiply (lambda - root) into the coefficient list
            new = [ff.RationalFunction.const(0)] * (len(poly) + 1)
            for i, a in enumerate(poly):
                new[i + 1] = new[i + 1] + a
                new[i] = new[i] - a * root
            poly = new
        bad += ff.root_valuations(poly) != sorted(vals)
    return CheckResult("funfield.newton_oracle", bad == 0, f"{bad} failures over {n} products")


def check_homogeneity() -> CheckResult:
    rep = ff.example_rep_334()
    bad = []
    for row in ff.hyperbolic_census(rep, 4):
        lam = row.jordan_ff.entries
        for k in (2, 3):
            lk = ff.jordan_projection_ff(rep.image(row.word) ** k).entries
            if lk != tuple(k * x for x in lam):
                bad.append((row.word, k))
        if sum(lam) != 0:
            bad.append((row.word, "sum"))
    return CheckResult("funfield.homogeneity", not bad, str(bad))


def run_all(seed: int = 0, budget: LiftCrossingBudget | None = None) -> list[CheckResult]:
    budget = budget or LiftCrossingBudget(8, 2)
    rng = np.random.default_rng(seed)
    suites: list[Callable[[], CheckResult]] = [
        lambda: check_transversality_invariance(rng),
        lambda: check_segment_partition(rng),
        lambda: check_hull_noncrossing(rng),
        check_axes,
        check_relators,
        lambda: check_intersection_algebra(rng, budget),
        lambda: check_straightness(rng, budget),
        lambda: check_closed_length(budget),
        lambda: check_lamination(rng),
        lambda: check_field_axioms(seed),
        lambda: check_newton_oracle(seed),
        check_homogeneity,
    ]
    out = []
    for s in suites:
        try:
            out.append(s())
        except Exception as exc:  # a crashing suite is a failing suite
            out.append(CheckResult(getattr(s, "__name__", "suite"), False, f"{type(exc).__name__}: {exc}"))
    return out
