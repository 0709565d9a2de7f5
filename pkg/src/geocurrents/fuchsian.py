"""Finitely generated Fuchsian groups: presentations, words, axes, conjugacy classes.

Words are strings over the generator symbols; the inverse of a letter is the
same letter with swapped case.  The punctured torus uses ``A, B`` (inverses
``a, b``), triangle groups use ``a, b`` (inverses ``A, B``).
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Iterator

import numpy as np

from .hyp_geom import INF, Geodesic, MobiusMap, get_tolerance, hyp_distance


# -- words -------------------------------------------------------------------


def inverse_word(w: str) -> str:
    return w[::-1].swapcase()


def free_reduce(w: str) -> str:
    out: list[str] = []
    for ch in w:
        if out and out[-1] == ch.swapcase():
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


def cyclic_reduce(w: str) -> str:
    w = free_reduce(w)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == w[j - 1].swapcase():
        i += 1
        j -= 1
    return w[i:j]


def primitive_root(w: str) -> tuple[str, int]:
    """``(u, k)`` with ``w == u * k`` and ``k`` maximal."""
    n = len(w)
    for p in range(1, n + 1):
        if n % p == 0 and w[:p] * (n // p) == w:
            return w[:p], n // p
    return w, 1


def canonical_cyclic_word(w: str) -> str:
    """Representative of the unoriented cyclic word: min over rotations of ``w`` and its inverse."""
    w = cyclic_reduce(w)
    if not w:
        return w
    cands = []
    for x in (w, inverse_word(w)):
        cands.extend(x[i:] + x[:i] for i in range(len(x)))
    return min(cands)


_POW = re.compile(r"([A-Za-z])(?:\^(-?\d+))?")


def parse_word(text: str) -> str:
    """Parse ``"a^-1b"``, ``"A B a^2"`` or a plain swapcase string into a word."""
    text = text.replace(" ", "").replace("⁻¹", "^-1")
    out = []
    pos = 0
    for m in _POW.finditer(text):
        if m.start() != pos:
            raise ValueError(f"cannot parse word {text!r}")
        pos = m.end()
        ch, e = m.group(1), m.group(2)
        k = 1 if e is None else int(e)
        out.append((ch if k > 0 else ch.swapcase()) * abs(k))
    if pos != len(text):
        raise ValueError(f"cannot parse word {text!r}")
    return free_reduce("".join(out))


def pretty_word(w: str, symbols: tuple[str, ...]) -> str:
    """Render inverse letters as ``x^-1`` relative to the generator symbols."""
    if not w:
        return "e"
    parts = []
    for ch in w:
        parts.append(ch if ch in symbols else ch.swapcase() + "^-1")
    return "".join(parts)


# -- presentations -----------------------------------------------------------


@dataclass(frozen=True)
class GroupPresentation:
    name: str
    symbols: tuple[str, ...]
    matrices: tuple[MobiusMap, ...]
    relators: tuple[str, ...] = ()
    # peripheral words, used to measure cusp excursions of cyclic words
    cusp_words: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if len(self.symbols) != len(self.matrices):
            raise ValueError("one matrix per generator symbol")
        lower = [s.lower() for s in self.symbols]
        if len(set(lower)) != len(lower) or not all(len(s) == 1 and s.isalpha() for s in self.symbols):
            raise ValueError("generator symbols must be distinct letters (case-insensitively)")
        tol = max(get_tolerance(), 1e-9)
        for r in self.relators:
            m = self.evaluate(r)
            if not m.equals(MobiusMap.identity(), tol=1e-7 if not m.is_exact else tol):
                raise ValueError(f"relator {r!r} does not evaluate to +-I")

    @cached_property
    def letters(self) -> tuple[str, ...]:
        return tuple(self.symbols) + tuple(s.swapcase() for s in self.symbols)

    @cached_property
    def _letter_mats(self) -> dict[str, MobiusMap]:
        d = {}
        for s, m in zip(self.symbols, self.matrices):
            d[s] = m
            d[s.swapcase()] = m.inverse()
        return d

    def letter_matrix(self, ch: str) -> MobiusMap:
        try:
            return self._letter_mats[ch]
        except KeyError:
            raise ValueError(f"letter {ch!r} is not a generator of {self.name}") from None

    def evaluate(self, word: str) -> MobiusMap:
        m = MobiusMap.identity()
        for ch in word:
            m = m @ self.letter_matrix(ch)
        return m

    def element(self, word: str) -> "GroupElement":
        word = free_reduce(word)
        return GroupElement(word, self.evaluate(word))

    @property
    def is_free(self) -> bool:
        return not self.relators

    @property
    def is_exact(self) -> bool:
        return all(m.is_exact for m in self.matrices)

    def has_torsion(self) -> bool:
        return any(m.classify() == "elliptic" for m in self.matrices)

    def require_torsion_free(self) -> None:
        if self.has_torsion() or self.relators:
            raise ValueError(f"{self.name}: a torsion-free group is required")

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "generators": {s: m.to_json() for s, m in zip(self.symbols, self.matrices)},
            "relators": list(self.relators),
            "cusp_words": list(self.cusp_words),
        }

    @classmethod
    def from_json(cls, d: dict) -> "GroupPresentation":
        syms, mats = [], []
        for s, entries in d["generators"].items():
            syms.append(s)
            mats.append(MobiusMap(*entries))
        return cls(
            d.get("name", "custom"),
            tuple(syms),
            tuple(mats),
            tuple(d.get("relators", ())),
            tuple(d.get("cusp_words", ())),
        )


def _rotation(alpha: float) -> MobiusMap:
    return MobiusMap(math.cos(alpha), math.sin(alpha), -math.sin(alpha), math.cos(alpha))


@lru_cache(maxsize=None)
def triangle_group(p: int, q: int, r: int) -> GroupPresentation:
    """Delta(p, q, r) as rotations about two vertices of a hyperbolic triangle.

    ``a`` rotates by 2 pi/p about ``i`` and ``b`` by 2 pi/q about ``i y0``;
    ``y0`` is chosen so that ``ab`` is a rotation of order ``r``.
    """
    if min(p, q, r) < 2:
        raise ValueError("triangle group parameters must be >= 2")
    if Fraction(1, p) + Fraction(1, q) + Fraction(1, r) >= 1:
        raise ValueError(f"Delta({p},{q},{r}) is not hyperbolic: need 1/p + 1/q + 1/r < 1")
    al, be, ga = math.pi / p, math.pi / q, math.pi / r
    cosh_d = (math.cos(ga) + math.cos(al) * math.cos(be)) / (math.sin(al) * math.sin(be))
    y0 = math.exp(math.acosh(cosh_d))
    a = _rotation(al)
    s = math.sqrt(y0)
    rb = _rotation(be)
    b = MobiusMap(rb.a, rb.b * y0, rb.c / y0, rb.d)
    assert abs(s * s - y0) < 1e-12
    return GroupPresentation(
        f"triangle({p},{q},{r})",
        ("a", "b"),
        (a, b),
        relators=("a" * p, "b" * q, "ab" * r),
    )


PUNCTURED_TORUS = GroupPresentation(
    "punctured_torus",
    ("A", "B"),
    (MobiusMap(1, 1, 1, 2), MobiusMap(1, -1, -1, 2)),
    cusp_words=("ABab",),
)

# principal congruence subgroup Gamma(2); the third cusp is A b
THRICE_PUNCTURED_SPHERE = GroupPresentation(
    "thrice_punctured_sphere",
    ("A", "B"),
    (MobiusMap(1, 2, 0, 1), MobiusMap(1, 0, 2, 1)),
    cusp_words=("A", "B", "Ab"),
)

_TRIANGLE = re.compile(r"triangle[(:]\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)?$")


def builtin_group(name: str) -> GroupPresentation:
    """``punctured_torus``, ``thrice_punctured_sphere`` or ``triangle(p,q,r)``."""
    key = name.strip().lower()
    if key == "punctured_torus":
        return PUNCTURED_TORUS
    if key == "thrice_punctured_sphere":
        return THRICE_PUNCTURED_SPHERE
    m = _TRIANGLE.match(key)
    if m:
        return triangle_group(*map(int, m.groups()))
    raise ValueError(f"unknown builtin group {name!r}")


def load_group(spec: str) -> GroupPresentation:
    """A builtin name or a path to a group JSON file."""
    path = Path(spec)
    if path.suffix == ".json" or path.exists():
        return GroupPresentation.from_json(json.loads(path.read_text()))
    return builtin_group(spec)


# -- elements ----------------------------------------------------------------


@dataclass(frozen=True)
class GroupElement:
    word: str
    matrix: MobiusMap

    @property
    def trace(self):
        return self.matrix.trace()

    def classify(self) -> str:
        return self.matrix.classify()

    @property
    def is_hyperbolic(self) -> bool:
        return self.classify() == "hyperbolic"


def fixed_points(m: MobiusMap) -> tuple:
    """``(repelling, attracting)`` fixed points of a hyperbolic map."""
    if m.classify() != "hyperbolic":
        raise ValueError(f"{m.classify()} element has no axis")
    a, b, c, d = (float(x) for x in (m.a, m.b, m.c, m.d))
    if c == 0:
        x = b / (d - a)
        # z -> (a z + b)/d: infinity attracts iff |a| > |d|
        return (x, INF) if abs(a) > abs(d) else (INF, x)
    # c x^2 + (d - a) x - b = 0, solved without cancellation
    B, C = d - a, -b
    disc = math.sqrt((a + d) ** 2 - 4)
    qq = -0.5 * (B + math.copysign(disc, B))
    x1, x2 = qq / c, C / qq
    rep, att = (x1, x2) if abs(c * x1 + d) < abs(c * x2 + d) else (x2, x1)
    return rep, att


def axis(e: GroupElement | MobiusMap) -> Geodesic:
    """Axis of a hyperbolic element: the geodesic joining its real fixed points."""
    m = e.matrix if isinstance(e, GroupElement) else e
    return Geodesic(*fixed_points(m))


def translation_length(m: MobiusMap) -> float:
    t = abs(float(m.trace()))
    if t <= 2:
        raise ValueError("not hyperbolic")
    return 2.0 * math.acosh(t / 2.0)


@dataclass(frozen=True)
class ClosedGeodesicRep:
    """A hyperbolic conjugacy class, viewed as an (unoriented) closed geodesic."""

    group: GroupPresentation = field(repr=False)
    word: str
    matrix: MobiusMap = field(repr=False)
    power: int = 1  # w = root ** power
    root: str = ""

    @property
    def element(self) -> GroupElement:
        return GroupElement(self.word, self.matrix)

    @property
    def primitive(self) -> bool:
        return self.power == 1

    @property
    def trace(self):
        return self.matrix.trace()

    @cached_property
    def axis(self) -> Geodesic:
        return axis(self.matrix)

    @cached_property
    def length(self) -> float:
        return translation_length(self.matrix)

    @cached_property
    def class_key(self) -> tuple:
        cw = canonical_cyclic_word(self.word)
        if self.group.is_free:
            return (cw,)
        return (round(abs(float(self.trace)), 6), cw)

    def pretty(self) -> str:
        return pretty_word(self.word, self.group.symbols)

    def __eq__(self, other):
        if not isinstance(other, ClosedGeodesicRep):
            return NotImplemented
        return self.group == other.group and self.class_key == other.class_key

    def __hash__(self):
        return hash((self.group.name, self.class_key))


def closed_geodesic(group: GroupPresentation, word: str) -> ClosedGeodesicRep:
    """The closed geodesic represented by ``word`` (cyclically reduced first)."""
    w = cyclic_reduce(parse_word(word) if not set(word) <= set(group.letters) else word)
    if not w:
        raise ValueError("trivial word")
    m = group.evaluate(w)
    if m.classify() != "hyperbolic":
        raise ValueError(f"word {word!r} is {m.classify()}, not hyperbolic")
    root, k = primitive_root(w)
    return ClosedGeodesicRep(group, w, m, k, root)


# -- enumeration -------------------------------------------------------------


def _matrix_key(m: MobiusMap, digits: int = 6) -> tuple:
    vals = [float(x) for x in (m.a, m.b, m.c, m.d)]
    for v in vals:
        if abs(v) > 10.0 ** (-digits):
            if v < 0:
                vals = [-x for x in vals]
            break
    return tuple(round(v, digits) + 0.0 for v in vals)


def enumerate_words(G: GroupPresentation, max_len: int) -> Iterator[GroupElement]:
    """Reduced words of length 1..max_len in shortlex order, each with its matrix.

    For groups with relators, a word whose matrix equals (up to sign) one
    already emitted is suppressed, and only surviving words are extended.
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    letters = G.letters
    seen = {_matrix_key(MobiusMap.identity())} if G.relators else None
    frontier = [("", MobiusMap.identity())]
    for _ in range(max_len):
        nxt = []
        for w, m in frontier:
            for ch in letters:
                if w and w[-1] == ch.swapcase():
                    continue
                mm = m @ G.letter_matrix(ch)
                if seen is not None:
                    key = _matrix_key(mm)
                    if key in seen:
                        continue
                    seen.add(key)
                nxt.append((w + ch, mm))
                yield GroupElement(w + ch, mm)
        frontier = nxt


@dataclass
class WordBall:
    """All freely reduced words of length <= L as stacked matrices.

    ``mats`` has shape (N, 2, 2) and rows are sorted by word length;
    ``first``/``last`` hold letter indices (-1 for the identity) and
    ``parent`` the index of the word with its last letter removed.
    """

    group: GroupPresentation
    max_len: int
    mats: np.ndarray
    lengths: np.ndarray
    first: np.ndarray
    last: np.ndarray
    parent: np.ndarray

    def word(self, i: int) -> str:
        letters = self.group.letters
        out = []
        while i > 0:
            out.append(letters[self.last[i]])
            i = int(self.parent[i])
        return "".join(reversed(out))


_INT_LIMIT = 2**31


def _letter_stack(G: GroupPresentation, dtype) -> np.ndarray:
    out = np.empty((len(G.letters), 2, 2), dtype=dtype)
    for k, ch in enumerate(G.letters):
        m = G.letter_matrix(ch)
        for (i, j), x in zip(((0, 0), (0, 1), (1, 0), (1, 1)), (m.a, m.b, m.c, m.d)):
            out[k, i, j] = x if dtype is object else float(x) if dtype == float else int(x)
    return out


def _matmul_rows(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    if A.dtype == object or B.dtype == object:
        out = np.empty(A.shape, dtype=object)
        out[:, 0, 0] = A[:, 0, 0] * B[:, 0, 0] + A[:, 0, 1] * B[:, 1, 0]
        out[:, 0, 1] = A[:, 0, 0] * B[:, 0, 1] + A[:, 0, 1] * B[:, 1, 1]
        out[:, 1, 0] = A[:, 1, 0] * B[:, 0, 0] + A[:, 1, 1] * B[:, 1, 0]
        out[:, 1, 1] = A[:, 1, 0] * B[:, 0, 1] + A[:, 1, 1] * B[:, 1, 1]
        return out
    return A @ B


@lru_cache(maxsize=32)
def word_ball(G: GroupPresentation, max_len: int) -> WordBall:
    """Vectorized enumeration of the free word ball (relators are ignored)."""
    if G.is_exact:
        ints = all(isinstance(x, int) for m in G.matrices for x in (m.a, m.b, m.c, m.d))
        dtype = np.int64 if ints else object
    else:
        dtype = float
    gens = _letter_stack(G, dtype)
    n = len(G.symbols)
    nl = 2 * n
    mats = [np.eye(2, dtype=dtype if dtype is not object else np.int64).astype(dtype)[None]]
    lengths = [np.zeros(1, dtype=np.int64)]
    first = [np.full(1, -1)]
    last = [np.full(1, -1)]
    parent = [np.full(1, -1)]
    offset = 0
    cur_m, cur_first, cur_last = mats[0], first[0], last[0]
    for L in range(1, max_len + 1):
        new_m, new_f, new_l, new_p = [], [], [], []
        idx = np.arange(len(cur_m)) + offset
        for k in range(nl):
            inv_k = (k + n) % nl
            sel = cur_last != inv_k
            if not sel.any():
                continue
            block = _matmul_rows(cur_m[sel], np.broadcast_to(gens[k], (int(sel.sum()), 2, 2)))
            new_m.append(block)
            new_f.append(np.where(cur_first[sel] < 0, k, cur_first[sel]))
            new_l.append(np.full(int(sel.sum()), k))
            new_p.append(idx[sel])
        offset += len(cur_m)
        cur_m = np.concatenate(new_m)
        if cur_m.dtype == np.int64 and np.abs(cur_m).max() >= _INT_LIMIT:
            cur_m = cur_m.astype(object)
            mats = [m.astype(object) for m in mats]
            gens = gens.astype(object)
        cur_first = np.concatenate(new_f)
        cur_last = np.concatenate(new_l)
        mats.append(cur_m)
        lengths.append(np.full(len(cur_m), L))
        first.append(cur_first)
        last.append(cur_last)
        parent.append(np.concatenate(new_p))
    if any(m.dtype == object for m in mats):
        mats = [m.astype(object) for m in mats]
    return WordBall(
        G,
        max_len,
        np.concatenate(mats),
        np.concatenate(lengths),
        np.concatenate(first),
        np.concatenate(last),
        np.concatenate(parent),
    )


def conjugacy_representatives(
    G: GroupPresentation, max_len: int, length_bound: float | None = None
) -> list[ClosedGeodesicRep]:
    """One representative per unoriented hyperbolic conjugacy class among words of length <= max_len.

    Free groups: cyclically reduced words up to rotation and inversion, which
    is exact.  Groups with relators: dedup key is (|trace|, canonical cyclic
    word), which may keep several representatives of one class.
    Sorted by (length, word).
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    tol = get_tolerance()
    out: dict[tuple, ClosedGeodesicRep] = {}
    if G.is_free:
        ball = word_ball(G, max_len)
        n = len(G.symbols)
        nl = 2 * n
        tr = ball.mats[:, 0, 0] + ball.mats[:, 1, 1]
        atr = np.abs(tr.astype(float))
        keep = (ball.lengths > 0) & (ball.first != (ball.last + n) % nl)
        keep &= atr > 2 + (0 if G.is_exact else tol)
        if G.is_exact:
            keep &= np.array([abs(t) > 2 for t in tr]) if tr.dtype == object else np.abs(tr) > 2
        if length_bound is not None:
            keep &= atr <= 2 * math.cosh(length_bound / 2) * (1 + 1e-12)
        for i in np.nonzero(keep)[0]:
            w = ball.word(int(i))
            cw = canonical_cyclic_word(w)
            if (cw,) in out:
                continue
            out[(cw,)] = closed_geodesic(G, cw)
    else:
        for e in enumerate_words(G, max_len):
            w = cyclic_reduce(e.word)
            if not w or not e.is_hyperbolic:
                continue
            rep = closed_geodesic(G, w)
            if length_bound is not None and rep.length > length_bound * (1 + 1e-12):
                continue
            out.setdefault(rep.class_key, rep)
    return sorted(out.values(), key=lambda r: (r.length, len(r.word), r.word))


def cusp_excursion(G: GroupPresentation, word: str) -> int:
    """Longest cyclic subword of ``word`` that is a subword of a power of a peripheral word."""
    if not G.cusp_words or not word:
        return 0
    w = cyclic_reduce(word)
    n = len(w)
    periodic = []
    for cw in G.cusp_words:
        for x in (cw, inverse_word(cw)):
            for i in range(len(x)):
                periodic.append(x[i:] + x[:i])
    best = 0
    ww = w * 3
    for start in range(n):
        for p in periodic:
            k = 0
            while k < 2 * n and ww[start + k] == p[k % len(p)]:
                k += 1
            best = max(best, k)
    return min(best, n)


def displacement(m: MobiusMap, z: complex = 1j) -> float:
    return hyp_distance(z, m.apply(complex(z)))
