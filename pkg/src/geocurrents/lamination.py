"""Intersection graphs, the lamination generated by a geodesic set, and current decompositions.

For a finite set ``A`` the lamination is the union of the convex-hull
boundaries of the connected components of its intersection graph.  Statements
quantifying over all geodesics are checked against explicit probe sets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .currents import Current, LiftCrossingBudget, intersection_cc, mu_short
from .fuchsian import ClosedGeodesicRep, canonical_cyclic_word
from .hyp_geom import (
    INF,
    Geodesic,
    crossing_matrix,
    endpoint_arrays,
    hull_boundary,
    intersect_transversally,
    is_inf,
)


@dataclass(frozen=True)
class GeodesicConfig:
    geodesics: tuple[Geodesic, ...]
    # free-form provenance, e.g. group name and word-ball radius of an orbit sample
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        gs = tuple(self.geodesics)
        if len(set(gs)) != len(gs):
            raise ValueError("duplicate geodesics in configuration")
        object.__setattr__(self, "geodesics", gs)

    @classmethod
    def of(cls, geodesics: Iterable, **meta) -> "GeodesicConfig":
        gs = [g if isinstance(g, Geodesic) else Geodesic(*g) for g in geodesics]
        return cls(tuple(dict.fromkeys(gs)), meta)

    def __len__(self):
        return len(self.geodesics)

    def __iter__(self):
        return iter(self.geodesics)

    def arrays(self):
        return endpoint_arrays(self.geodesics)

    def to_json(self) -> dict:
        return {"geodesics": [g.to_json() for g in self.geodesics], "meta": self.meta}


def _cross(A: Sequence[Geodesic], B: Sequence[Geodesic]) -> np.ndarray:
    if not len(A) or not len(B):
        return np.zeros((len(A), len(B)), dtype=bool)
    u1, v1 = endpoint_arrays(A)
    u2, v2 = endpoint_arrays(B)
    return crossing_matrix(u1, v1, u2, v2)


@dataclass
class IntersectionGraph:
    adjacency: np.ndarray
    components: list[list[int]]


def _components(adj: np.ndarray) -> list[list[int]]:
    if adj.shape[0] == 0:
        return []
    n, labels = connected_components(csr_matrix(adj), directed=False)
    comps: list[list[int]] = [[] for _ in range(n)]
    for i, lab in enumerate(labels):
        comps[lab].append(i)
    return sorted(comps, key=lambda c: c[0])


def intersection_graph(A: GeodesicConfig) -> IntersectionGraph:
    adj = _cross(A.geodesics, A.geodesics)
    return IntersectionGraph(adj, _components(adj))


def lambda_A(A: GeodesicConfig) -> list[Geodesic]:
    """Union of the hull boundaries of the connected components of ``A``."""
    out: dict[Geodesic, None] = {}
    for comp in intersection_graph(A).components:
        for g in hull_boundary([A.geodesics[i] for i in comp]):
            out[g] = None
    return list(out)


def a_zero(A: GeodesicConfig | Sequence[Geodesic], candidates: GeodesicConfig | Sequence[Geodesic]) -> list[Geodesic]:
    """Candidates crossing no geodesic of ``A``."""
    A, cand = list(A), list(candidates)
    if not A:
        return cand
    M = _cross(cand, A)
    return [g for g, row in zip(cand, M) if not row.any()]


# -- regions -----------------------------------------------------------------


def _inside(leaf: Geodesic, z: complex) -> bool:
    """Which side of ``leaf`` the point ``z`` lies on (True: bounded side, or right of a vertical line)."""
    if leaf.is_vertical:
        return z.real > float(leaf.a)
    return abs(z - float(leaf.center)) < float(leaf.radius)


def _signature(leaves: Sequence[Geodesic], z: complex) -> tuple[bool, ...]:
    return tuple(_inside(l, z) for l in leaves)


def _near_points(g: Geodesic, eps: float = 1e-6) -> tuple[complex, complex]:
    if g.is_vertical:
        return complex(float(g.a) - eps, 1.0), complex(float(g.a) + eps, 1.0)
    m, r = float(g.center), float(g.radius)
    return complex(m, r * (1 + eps)), complex(m, r * (1 - eps))


def _samples_on(g: Geodesic, n: int = 5) -> list[complex]:
    return [g.point_at(s) for s in np.linspace(-2.0, 2.0, n)]


@dataclass
class Region:
    signature: tuple[bool, ...]
    tag: str  # "filled" or "avoided"
    component: int | None = None

    def to_json(self) -> dict:
        return {"signature": "".join("1" if s else "0" for s in self.signature), "tag": self.tag, "component": self.component}


@dataclass
class DecompositionResult:
    components: list[list[Geodesic]]
    lambda_A: list[Geodesic]
    regions: list[Region]

    def to_json(self) -> dict:
        return {
            "components": [[g.to_json() for g in c] for c in self.components],
            "lambda_A": [g.to_json() for g in self.lambda_A],
            "regions": [r.to_json() for r in self.regions],
        }


def decompose_config(A: GeodesicConfig) -> DecompositionResult:
    """Components, lamination and tagged complementary regions of a finite configuration."""
    graph = intersection_graph(A)
    comps = [[A.geodesics[i] for i in c] for c in graph.components]
    leaves = lambda_A(A)
    sigs: dict[tuple, Region] = {}
    for g in leaves:
        for z in _near_points(g):
            s = _signature(leaves, z)
            sigs.setdefault(s, Region(s, "avoided"))
    for k, comp in enumerate(comps):
        if len(comp) < 2:
            continue
        # a member of a crossing component runs through the interior of its hull
        s = _signature(leaves, comp[0].apex())
        sigs.setdefault(s, Region(s, "avoided"))
        sigs[s].tag, sigs[s].component = "filled", k
    return DecompositionResult(comps, leaves, list(sigs.values()))


def _theta(x) -> float:
    return math.pi if is_inf(x) else 2 * math.atan(float(x))


def _from_theta(t: float):
    t = (t + math.pi) % (2 * math.pi) - math.pi
    if abs(abs(t) - math.pi) < 1e-15:
        return INF
    return math.tan(t / 2)


def _witnesses(g: Geodesic, A: Sequence[Geodesic], points: Sequence[float]) -> list[Geodesic]:
    """Small rotations of ``g`` that cross ``g`` and avoid ``A`` (candidates for A0 members crossing g)."""
    ta, tb = _theta(g.a), _theta(g.b)
    others = [p for p in points if abs(p - ta) > 1e-12 and abs(p - tb) > 1e-12]

    def circ(p, t):
        return abs((p - t + math.pi) % (2 * math.pi) - math.pi)

    def gap(t):
        return min([circ(p, t) for p in others] + [circ(ta, tb) / 2]) / 3

    da, db = gap(ta), gap(tb)
    out = []
    for sa in (-1, 1):
        for sb in (-1, 1):
            try:
                h = Geodesic(_from_theta(ta + sa * da), _from_theta(tb + sb * db))
            except ValueError:
                continue
            if intersect_transversally(g, h) and not any(intersect_transversally(h, a) for a in A):
                out.append(h)
    return out


@dataclass
class LaminationReport:
    violations: list = field(default_factory=list)
    probes: int = 0
    lambda_size: int = 0
    regions: list = field(default_factory=list)
    checks: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "violations": self.violations,
            "probes": self.probes,
            "lambda_size": self.lambda_size,
            "regions": [r.to_json() for r in self.regions],
            "checks": self.checks,
        }


def verify_lamination(A: GeodesicConfig, sample: GeodesicConfig | Sequence[Geodesic]) -> LaminationReport:
    """Check the lamination statements for ``A`` against a probe set; violations are reported, not raised.

    Checks: leaves avoid ``A`` and each other; a probe crossing a hull edge of
    a component crosses that component; a probe entering a filled region
    crosses ``A``; ``A`` never enters an avoided region; and on the probe set
    together with the leaves, membership in the leaf set coincides with
    avoiding ``A`` while admitting no ``A``-avoiding geodesic across it.
    """
    dec = decompose_config(A)
    leaves = dec.lambda_A
    geos = list(A.geodesics)
    probes = list(sample)
    rep = LaminationReport(probes=len(probes), lambda_size=len(leaves), regions=dec.regions)
    counts = dict.fromkeys(("leaf_in_A0", "leaves_disjoint", "hull_edge", "filled_region", "avoided_region", "A0_A00"), 0)

    # leaves are in A0 and pairwise disjoint
    LA = _cross(leaves, geos)
    for i in np.nonzero(LA.any(axis=1))[0]:
        rep.violations.append({"check": "leaf_in_A0", "leaf": leaves[i].to_json()})
    counts["leaf_in_A0"] = len(leaves)
    LL = _cross(leaves, leaves)
    for i, j in zip(*np.nonzero(np.triu(LL))):
        rep.violations.append({"check": "leaves_disjoint", "leaves": [leaves[i].to_json(), leaves[j].to_json()]})
    counts["leaves_disjoint"] = len(leaves) * (len(leaves) - 1) // 2

    # a probe crossing a hull edge of a component crosses the component
    for comp in dec.components:
        edges = hull_boundary(comp)
        PE = _cross(probes, edges).any(axis=1)
        PC = _cross(probes, comp).any(axis=1)
        for k in np.nonzero(PE & ~PC)[0]:
            rep.violations.append({"check": "hull_edge", "probe": probes[k].to_json()})
        counts["hull_edge"] += int(PE.sum())

    # filled regions: a probe with polygon vertices strictly on both sides enters it
    for r in dec.regions:
        if r.tag != "filled":
            continue
        comp = dec.components[r.component]
        verts = sorted({t for g in comp for t in g.endpoints}, key=_theta)
        PC = _cross(probes, comp).any(axis=1)
        for k, h in enumerate(probes):
            sides = {_side_of(h, t) for t in verts}
            if 1 in sides and -1 in sides:
                counts["filled_region"] += 1
                if not PC[k]:
                    rep.violations.append({"check": "filled_region", "probe": h.to_json(), "component": r.component})

    # no geodesic of A enters an avoided region
    avoided = {r.signature for r in dec.regions if r.tag == "avoided"}
    for g in geos:
        for z in _samples_on(g):
            counts["avoided_region"] += 1
            if any(l.contains(z, 1e-9) for l in leaves):
                continue
            if _signature(leaves, z) in avoided:
                rep.violations.append({"check": "avoided_region", "geodesic": g.to_json()})
                break

    # leaves = A0 cap A00 on the probe set extended by the leaves
    pool = list(dict.fromkeys(leaves + probes))
    A0 = a_zero(geos, pool)
    leafset = set(leaves)
    points = sorted({_theta(t) for g in geos for t in g.endpoints})
    if A0:
        X = _cross(A0, A0)
        for i, g in enumerate(A0):
            in_a00 = not X[i].any() and not _witnesses(g, geos, points)
            counts["A0_A00"] += 1
            if in_a00 != (g in leafset):
                rep.violations.append({"check": "A0_A00", "geodesic": g.to_json(), "in_lambda": g in leafset})
    rep.checks = counts
    return rep


def _side_of(h: Geodesic, t) -> int:
    if h.a == t or h.b == t:
        return 0
    if is_inf(t):
        return -1
    if h.is_vertical:
        return 1 if t > h.a else -1
    return 1 if h.a < t < h.b else -1


# -- currents ----------------------------------------------------------------


def solitary_short_closed(
    mu: Current, census: Sequence[ClosedGeodesicRep], budget: LiftCrossingBudget | None = None
) -> list[ClosedGeodesicRep]:
    """Primitive census curves that are short for ``mu``, simple, and disjoint from every other short census curve."""
    if not mu.is_discrete:
        raise ValueError("solitary short curves are defined for discrete currents")
    short = [c for c in census if mu_short(c, mu, budget)]
    out = []
    for c in short:
        if not c.primitive:
            continue
        if all(intersection_cc(c, d, budget).value == 0 for d in short):
            out.append(c)
    for i, c in enumerate(out):
        for d in out[i + 1:]:
            if intersection_cc(c, d, budget).value:
                raise AssertionError(f"solitary curves {c.word} and {d.word} cross")
    return out


@dataclass
class CurrentDecomposition:
    solitary: list[ClosedGeodesicRep]
    mu_lambda: Current
    parts: dict  # region key -> Current
    region_members: dict  # region key -> census words in that region
    violations: list
    census_size: int
    budget: LiftCrossingBudget

    def to_json(self) -> dict:
        return {
            "E_mu": [c.word for c in self.solitary],
            "mu_lambda": self.mu_lambda.to_json(),
            "parts": [
                {"region": k, "current": p.to_json(), "census_curves": self.region_members.get(k, [])}
                for k, p in self.parts.items()
            ],
            "violations": self.violations,
            "census_size": self.census_size,
            "budget": self.budget.to_json(),
        }


def decompose_current(
    mu: Current, census: Sequence[ClosedGeodesicRep], budget: LiftCrossingBudget | None = None
) -> CurrentDecomposition:
    """Split ``mu`` along its solitary short multicurve and check the region dichotomy on the census.

    Atoms that are powers of a solitary curve form the lamination part.  The
    remaining atoms and the census curves disjoint from the multicurve are
    grouped into regions by connectivity of their crossing graph.  A census
    curve in a region carrying mass must cross the support of ``mu``.
    """
    budget = budget or LiftCrossingBudget()
    if not mu.is_discrete:
        raise ValueError("decomposition is implemented for discrete currents")
    G = mu.group
    E = solitary_short_closed(mu, census, budget)
    violations: list = []
    lam_atoms, rest = [], []
    for c, w in mu.atoms:
        if any(_same_axis(c, e) for e in E):
            lam_atoms.append((c, w))
            continue
        crossing = [e.word for e in E if intersection_cc(c, e, budget).value]
        if crossing:
            violations.append({"check": "atom_crosses_E", "atom": c.word, "E": crossing})
        rest.append((c, w))

    atom_keys = {c.class_key for c, _ in mu.atoms}
    free = [
        c
        for c in census
        if c.class_key not in atom_keys
        and not any(_same_axis(c, e) for e in E)
        and all(intersection_cc(c, e, budget).value == 0 for e in E)
    ]
    nodes = [c for c, _ in rest] + free
    n = len(nodes)
    adj = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            if intersection_cc(nodes[i], nodes[j], budget).value:
                adj[i, j] = adj[j, i] = True
    comps = _components(adj)
    parts: dict[str, Current] = {}
    members: dict[str, list[str]] = {}
    for k, comp in enumerate(comps):
        atoms_here = [(nodes[i], dict(rest)[nodes[i]]) for i in comp if i < len(rest)]
        key = f"R{k}"
        members[key] = [nodes[i].word for i in comp if i >= len(rest)]
        if atoms_here:
            parts[key] = Current.discrete(G, atoms_here)
            for i in comp:
                if i < len(rest):
                    continue
                c = nodes[i]
                if all(intersection_cc(c, a, budget).value == 0 for a, _ in mu.atoms):
                    violations.append({"check": "dichotomy", "region": key, "curve": c.word})
    # mass conservation
    total = Current.discrete(G, lam_atoms + [aw for p in parts.values() for aw in p.atoms])
    if {(c.class_key, w) for c, w in total.atoms} != {(c.class_key, w) for c, w in mu.atoms}:
        violations.append({"check": "mass", "detail": "split parts do not add up to mu"})
    return CurrentDecomposition(E, Current.discrete(G, lam_atoms), parts, members, violations, len(census), budget)


def _same_axis(c: ClosedGeodesicRep, e: ClosedGeodesicRep) -> bool:
    """Whether ``c`` is a power of (a conjugate of) ``e``, decided on primitive roots."""
    return canonical_cyclic_word(c.root) == canonical_cyclic_word(e.root)
