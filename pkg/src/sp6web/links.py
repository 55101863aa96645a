"""Coloured braids, their closures and the resulting link invariants.

Crossings are expanded into webs.  ``link_invariant`` closes a braid and
evaluates the closed web with the ladder engine; ``annular_invariant`` keeps
the closure in the annulus and returns a polynomial in the characters.
``dubrovnik_oracle`` is an independent skein-theoretic computation of the
one-coloured invariant which never touches webs or ladders.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .engine import ChiPolynomial, Engine, _engine
from .qfield import ONE, ZERO, QScalar, as_scalar, qint, qpow
from .webs import (
    WebSum,
    WebTypeError,
    cap,
    cup,
    evaluate_sum,
    identity,
    ladderize,
    merge,
    plat_closure,
    split,
    trace_closure,
)

__all__ = [
    "BraidError",
    "ColoredBraidWord",
    "parse_braid",
    "crossing",
    "braid_web",
    "closed_web",
    "link_invariant",
    "annular_invariant",
    "twist_value",
    "writhes",
    "dubrovnik_oracle",
    "dubrovnik_braid",
    "OracleBudgetExceeded",
    "BMWCheck",
    "bmw_relations",
    "bmw_harness",
    "CATALOG",
    "chi_values",
]


class BraidError(ValueError):
    pass


# ---------------------------------------------------------------------------
# crossings


def _e(a: int) -> WebSum:
    return cup(a).compose(cap(a))


def _H(x: int, y: int, m: int, u: int, v: int) -> WebSum:
    """Merge x,y into m, then split into u,v."""
    return split(m, u, v).compose(merge(x, y, m))


def _R(x: int, y: int, m: int, u: int, v: int) -> WebSum:
    """The rotated H: an m-labelled rung passed from the right strand to the left."""
    return (merge(x, m, u) @ identity((v,))).compose(identity((x,)) @ split(y, m, v))


def _square(lower: tuple, mid: int, upper: tuple, outer: tuple) -> WebSum:
    """split pair, cap(mid)+cup(mid) in the middle, merge pair."""
    (za, xa, ya), (zb, xb, yb) = lower
    (ua, pa, qa), (ub, pb, qb) = upper
    a, b = outer
    bottom = split(za, xa, ya) @ split(zb, xb, yb)
    middle = identity((a,)) @ cup(mid).compose(cap(mid)) @ identity((b,))
    top = merge(pa, qa, ua) @ merge(pb, qb, ub)
    return top.compose(middle).compose(bottom)


def _c(*parts: tuple[QScalar, WebSum]) -> WebSum:
    out = None
    for coef, w in parts:
        term = w.scale(coef)
        out = term if out is None else out + term
    return out


@lru_cache(maxsize=None)
def _positive(k: int, l: int) -> WebSum:
    q = qpow(1)
    i2, i3 = qint(2), qint(3)
    if (k, l) == (1, 1):
        return _c((q, identity((1, 1))), (qpow(-3) / i3, _e(1)), (-i3.inverse(), _H(1, 1, 2, 1, 1)))
    if (k, l) == (1, 2):
        return _c(
            (i2.inverse(), _H(1, 2, 3, 2, 1)),
            (-q / i3, _R(1, 2, 1, 2, 1)),
            (-qpow(-2) / (i2 * i3), _H(1, 2, 1, 2, 1)),
        )
    if (k, l) == (2, 2):
        sq = _square(((2, 1, 1), (2, 1, 1)), 1, ((2, 1, 1), (2, 1, 1)), (1, 1))
        return _c(
            (qpow(4) / i3, identity((2, 2))),
            (qpow(-4) / i3, _e(2)),
            (-q / i3, _R(2, 2, 2, 2, 2)),
            (-qpow(-1) / i3, _H(2, 2, 2, 2, 2)),
            (ONE / (i3 * i3), sq),
        )
    if (k, l) == (1, 3):
        return _c((q / i2, _R(1, 3, 2, 3, 1)), (qpow(-1) / i2, _H(1, 3, 2, 3, 1)))
    if (k, l) == (2, 3):
        # the middle cap is 2-labelled, the cup 1-labelled
        sq = (merge(2, 1, 3) @ merge(1, 1, 2)).compose(
            identity((2,)) @ cup(1) @ identity((1,))
        ).compose(identity((2,)) @ cap(2) @ identity((1,))).compose(split(2, 2, 2) @ split(3, 2, 1))
        return _c(
            (qpow(2) / i2, _R(2, 3, 1, 3, 2)),
            (qpow(-2) / i2, _H(2, 3, 1, 3, 2)),
            (ONE / (i2 * i3), sq),
        )
    if (k, l) == (3, 3):
        sq_a = _square(((3, 2, 1), (3, 1, 2)), 1, ((3, 2, 1), (3, 1, 2)), (2, 2))
        sq_b = _square(((3, 1, 2), (3, 2, 1)), 2, ((3, 1, 2), (3, 2, 1)), (1, 1))
        return _c(
            (qpow(3), identity((3, 3))),
            (qpow(-3), _e(3)),
            (q / (i2 * i2), sq_a),
            (qpow(-1) / (i2 * i2), sq_b),
        )
    if k > l:
        return _positive(l, k).mirror()
    raise BraidError(f"no crossing for colours {k},{l}")


def crossing(k: int, l: int, sign: int = 1) -> WebSum:
    """Web expansion of the crossing with bottom colours (k, l).

    The positive crossing carries the bottom-left strand over to the top
    right.  The negative one is the upside-down positive crossing of the
    swapped colours with bar-conjugated coefficients.
    """
    if k not in (1, 2, 3) or l not in (1, 2, 3):
        raise BraidError(f"crossing colours must be 1, 2 or 3, got {k},{l}")
    if sign > 0:
        return _positive(k, l)
    return _positive(l, k).flip().bar()


# ---------------------------------------------------------------------------
# braid words

_LETTER = re.compile(r"^(-?)[sS](\d+)(\^-1|\^\{-1\}|')?$")


@dataclass(frozen=True)
class ColoredBraidWord:
    """A coloured braid with a closure convention (blackboard framing)."""

    strands: int
    colors: tuple[int, ...]
    word: tuple[int, ...]  # signed generator indices, 1-based
    closure: str = "trace"  # trace | plat | open (a tangle, never closed)

    def __post_init__(self) -> None:
        if self.strands < 1:
            raise BraidError("a braid needs at least one strand")
        if len(self.colors) != self.strands:
            raise BraidError(f"{self.strands} strands but {len(self.colors)} colours")
        if any(c not in (1, 2, 3) for c in self.colors):
            raise BraidError(f"colours must lie in 1..3, got {list(self.colors)}")
        for g in self.word:
            if not g or abs(g) >= self.strands:
                raise BraidError(f"generator s{abs(g)} needs 1 <= i <= {self.strands - 1}")
        if self.closure not in ("trace", "plat", "open"):
            raise BraidError(f"unknown closure {self.closure!r}")
        top = self.top_colors()
        if self.closure == "trace" and top != self.colors:
            raise BraidError("trace closure joins strands of different colours")
        if self.closure == "plat":
            if self.strands % 2:
                raise BraidError("plat closure needs an even number of strands")
            for cs in (self.colors, top):
                if any(cs[i] != cs[i + 1] for i in range(0, self.strands, 2)):
                    raise BraidError("plat closure pairs strands of different colours")

    def top_colors(self) -> tuple[int, ...]:
        cs = list(self.colors)
        for g in self.word:
            i = abs(g) - 1
            cs[i], cs[i + 1] = cs[i + 1], cs[i]
        return tuple(cs)

    @property
    def crossings(self) -> int:
        return len(self.word)

    def to_json(self) -> dict:
        return {
            "strands": self.strands,
            "colors": list(self.colors),
            "word": [("-" if g < 0 else "") + f"s{abs(g)}" for g in self.word],
            "closure": self.closure,
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "ColoredBraidWord":
        if isinstance(data, str):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as exc:
                raise BraidError(f"link JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise BraidError("link JSON must be an object")
        try:
            word = data.get("word", [])
            if isinstance(word, str):
                word = word.split()
            return cls(
                int(data["strands"]),
                tuple(int(c) for c in data["colors"]),
                tuple(_letter(str(t)) for t in word),
                str(data.get("closure", "trace")),
            )
        except KeyError as exc:
            raise BraidError(f"link JSON lacks field {exc}") from exc
        except (TypeError, ValueError) as exc:
            if isinstance(exc, BraidError):
                raise
            raise BraidError(f"link JSON: {exc}") from exc


def _letter(tok: str) -> int:
    m = _LETTER.match(tok.strip())
    if not m:
        raise BraidError(f"bad braid letter {tok!r}; expected s<i>, -s<i> or s<i>^-1")
    i = int(m.group(2))
    inv = bool(m.group(1)) != bool(m.group(3))
    return -i if inv else i


def parse_braid(word: str | Sequence[str], colors: str | Sequence[int], closure: str = "trace") -> ColoredBraidWord:
    """Inline form: ``parse_braid("s1 -s2", "1,1,1")``."""
    toks = word.replace(",", " ").split() if isinstance(word, str) else list(word)
    if isinstance(colors, str):
        try:
            cs = tuple(int(c) for c in colors.replace(" ", "").split(",") if c)
        except ValueError as exc:
            raise BraidError(f"bad colour list {colors!r}") from exc
    else:
        cs = tuple(int(c) for c in colors)
    return ColoredBraidWord(len(cs), cs, tuple(_letter(t) for t in toks), closure)


# ---------------------------------------------------------------------------
# braid webs and the planar invariant


def braid_web(b: ColoredBraidWord) -> WebSum:
    """The braid as a web endomorphism (bottom colours to top colours)."""
    cs = list(b.colors)
    w = identity(tuple(cs))
    for g in b.word:
        i = abs(g) - 1
        x = identity(tuple(cs[:i])) @ crossing(cs[i], cs[i + 1], 1 if g > 0 else -1) @ identity(tuple(cs[i + 2 :]))
        w = x.compose(w)
        cs[i], cs[i + 1] = cs[i + 1], cs[i]
    return w


def closed_web(b: ColoredBraidWord) -> WebSum:
    if b.closure == "open":
        raise BraidError("an open braid has no closure")
    w = braid_web(b)
    return trace_closure(w) if b.closure == "trace" else plat_closure(w)


def link_invariant(b: ColoredBraidWord, normalize_framing: bool = False, engine: Engine | None = None) -> QScalar:
    """P of the closed braid, framed as drawn unless ``normalize_framing``."""
    value = evaluate_sum(closed_web(b), engine)
    if normalize_framing:
        for color, w in writhes(b):
            value = value / twist_value(color, engine) ** w
    return value


def annular_invariant(b: ColoredBraidWord, engine: Engine | None = None) -> ChiPolynomial:
    """Class of the braid closure in the annulus, as a polynomial in x1, x2, x3."""
    if b.closure != "trace":
        raise BraidError("the annular invariant needs a trace closure")
    eng = engine or _engine()
    return eng.trace_normalize(ladderize(braid_web(b)))


def chi_values() -> tuple[QScalar, QScalar, QScalar]:
    """The circle scalars that x1, x2, x3 specialize to."""
    i = qint
    return (
        -(i(3) * i(8)) / i(4),
        i(7) * i(8) / i(4),
        -(i(6) * i(7) * i(8)) / (i(2) * i(3) * i(4)),
    )


@lru_cache(maxsize=None)
def _twist(color: int) -> QScalar:
    kink = evaluate_sum(trace_closure(crossing(color, color, 1)))
    return kink / chi_values()[color - 1]


def twist_value(color: int, engine: Engine | None = None) -> QScalar:
    """Scalar of a positive kink on a strand of the given colour (engine-derived)."""
    if color not in (1, 2, 3):
        raise BraidError(f"no colour {color}")
    return _twist(color)


# ---------------------------------------------------------------------------
# diagrams for the oracle and for writhe bookkeeping
#
# A crossing is (p0, p1, p2, p3, odd): four edge ids listed counter-clockwise
# and a flag telling whether the pair (p1, p3) passes over.  A strand runs
# straight through, from p_s to p_(s+2).  Switching a crossing only flips the
# flag, so traversals and base points survive it.

Crossing = tuple[int, int, int, int, bool]


@dataclass(frozen=True)
class _Diagram:
    crossings: tuple[Crossing, ...]
    loops: int = 0  # crossingless circles


def _diagram(b: ColoredBraidWord) -> tuple[_Diagram, dict[int, int]]:
    """Braid closure as a diagram, plus the colour of every edge."""
    n = b.strands
    fresh = iter(range(1, 10**9))
    bottom = [next(fresh) for _ in range(n)]
    pos = list(bottom)
    color = {e: c for e, c in zip(bottom, b.colors)}
    xs = []
    for g in b.word:
        i = abs(g) - 1
        a, bb = pos[i], pos[i + 1]
        c, d = next(fresh), next(fresh)
        color[c], color[d] = color[bb], color[a]
        # a -> d runs south-west to north-east, bb -> c south-east to north-west;
        # listed counter-clockwise from south-east
        xs.append((bb, d, c, a, g > 0))
        pos[i], pos[i + 1] = c, d
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        while parent.get(x, x) != x:
            x = parent[x]
        return x

    def join(x: int, y: int) -> None:
        x, y = find(x), find(y)
        if x != y:
            parent[y] = x

    if b.closure == "trace":
        for s in range(n):
            join(bottom[s], pos[s])
    else:
        for s in range(0, n, 2):
            join(bottom[s], bottom[s + 1])
            join(pos[s], pos[s + 1])
    xs = [tuple(find(e) for e in x[:4]) + (x[4],) for x in xs]
    used = {e for x in xs for e in x[:4]}
    loops = len({find(e) for e in color} - used)
    colors = {find(e): c for e, c in color.items()}
    return _Diagram(tuple(xs), loops), colors


def _components(d: _Diagram) -> list[list[tuple[int, int]]]:
    """Traverse components; each is a list of (crossing, entry position)."""
    where: dict[int, list[tuple[int, int]]] = {}
    for k, x in enumerate(d.crossings):
        for s in range(4):
            where.setdefault(x[s], []).append((k, s))
    seen: set[tuple[int, int]] = set()
    comps = []
    for k in range(len(d.crossings)):
        for s0 in (0, 1):
            if (k, s0) in seen or (k, s0 + 2) in seen:
                continue
            comp = []
            k1, s1 = k, s0
            while (k1, s1) not in seen:
                seen.add((k1, s1))
                comp.append((k1, s1))
                out = (s1 + 2) % 4
                occ = where[d.crossings[k1][out]]
                k1, s1 = occ[1] if occ[0] == (k1, out) else occ[0]
            comps.append(comp)
    return comps


def _frame(x: Crossing, s: int) -> int:
    """Position relative to the incoming-under slot frame (over pair at 1, 3)."""
    return s if x[4] else (s - 1) % 4


def _signs(d: _Diagram, comps: list[list[tuple[int, int]]]) -> dict[int, int]:
    under: dict[int, int] = {}
    over: dict[int, int] = {}
    for comp in comps:
        for k, s in comp:
            f = _frame(d.crossings[k], s)
            if f % 2 == 0:
                under[k] = f
            else:
                over[k] = f
    # positive: under-strand south-east to north-west, over-strand south-west
    # to north-east (or both reversed)
    return {k: (1 if under[k] == 0 else -1) * (1 if over[k] == 3 else -1) for k in under}


def writhes(b: ColoredBraidWord) -> list[tuple[int, int]]:
    """(colour, self-writhe) for every link component."""
    d, colors = _diagram(b)
    comps = _components(d)
    sign = _signs(d, comps)
    owners: dict[int, set[int]] = {}
    for ci, comp in enumerate(comps):
        for k, _ in comp:
            owners.setdefault(k, set()).add(ci)
    out = []
    for ci, comp in enumerate(comps):
        w = sum(sign[k] for k in {k for k, _ in comp} if owners[k] == {ci})
        k, s = comp[0]
        out.append((colors[d.crossings[k][s]], w))
    used = {e for x in d.crossings for e in x[:4]}
    out.extend((c, 0) for e, c in colors.items() if e not in used)
    return out


# ---------------------------------------------------------------------------
# the Dubrovnik oracle: unoriented skein recursion, shares only the field


class OracleBudgetExceeded(RuntimeError):
    pass


def _smooth(d: _Diagram, idx: int, pairs: tuple[tuple[int, int], tuple[int, int]]) -> _Diagram:
    xs = [list(x) for n, x in enumerate(d.crossings) if n != idx]
    loops = d.loops
    todo = [list(p) for p in pairs]
    for n, (u, v) in enumerate(todo):
        if u == v:
            loops += 1
            continue
        # glue edge v onto edge u everywhere, including the pending pair
        for x in xs + todo[n + 1 :]:
            for s in range(len(x)):
                if x[s] == v:
                    x[s] = u
    return _Diagram(tuple(tuple(x) for x in xs), loops)


class _Dubrovnik:
    def __init__(self, a: QScalar, z: QScalar, budget: int) -> None:
        self.a, self.z = a, z
        self.delta = ONE + (a - a.inverse()) / z
        self.budget = budget
        self.calls = 0
        self.memo: dict[_Diagram, QScalar] = {}

    def __call__(self, d: _Diagram) -> QScalar:
        hit = self.memo.get(d)
        if hit is not None:
            return hit
        self.calls += 1
        if self.calls > self.budget:
            raise OracleBudgetExceeded(f"crossing budget exceeded ({self.budget} resolutions)")
        comps = _components(d)
        bad = self._first_bad(d, comps)
        if bad is None:
            w = sum(_signs(d, comps).values())
            value = self.a**w * self.delta ** (len(comps) + d.loops)
        else:
            x = d.crossings[bad]
            # read the crossing in its own frame, where it is the positive picture
            i, j, k, l = x[:4] if x[4] else (x[1], x[2], x[3], x[0])
            switched = _Diagram(d.crossings[:bad] + (x[:4] + (not x[4],),) + d.crossings[bad + 1 :], d.loops)
            vertical = _smooth(d, bad, ((i, j), (k, l)))
            horizontal = _smooth(d, bad, ((l, i), (j, k)))
            value = self(switched) + self.z * (self(vertical) - self(horizontal))
        self.memo[d] = value
        return value

    @staticmethod
    def _first_bad(d: _Diagram, comps: list[list[tuple[int, int]]]) -> int | None:
        """First crossing met from below when walking the components in order."""
        seen: set[int] = set()
        for comp in comps:
            for k, s in comp:
                if k in seen:
                    continue
                seen.add(k)
                if _frame(d.crossings[k], s) % 2 == 0:
                    return k
        return None


def dubrovnik_braid(
    b: ColoredBraidWord,
    a: QScalar | None = None,
    z: QScalar | None = None,
    budget: int = 10**6,
) -> QScalar:
    """Dubrovnik polynomial of a closed braid with loop value 1 + (a - 1/a)/z."""
    if any(c != 1 for c in b.colors):
        raise BraidError("the oracle handles 1-coloured links only")
    a = as_scalar(a) if a is not None else -qpow(7)
    z = as_scalar(z) if z is not None else qpow(1) - qpow(-1)
    d, _ = _diagram(b)
    return _Dubrovnik(a, z, budget)(d)


def dubrovnik_oracle(b: ColoredBraidWord, budget: int = 10**6) -> QScalar:
    """Independent value of the 1-coloured invariant at a = -q^7, z = q - 1/q."""
    return dubrovnik_braid(b, budget=budget)


# ---------------------------------------------------------------------------
# catalog


CATALOG: dict[str, ColoredBraidWord] = {
    "unknot": parse_braid("", "1"),
    "unlink2": parse_braid("", "1,1"),
    "hopf": parse_braid("s1 s1", "1,1"),
    "trefoil": parse_braid("s1 s1 s1", "1,1"),
    "figure-eight": parse_braid("s1 -s2 s1 -s2", "1,1,1"),
    "cinquefoil": parse_braid("s1 s1 s1 s1 s1", "1,1"),
    "three-twist": parse_braid("s1 s1 s1 s2 -s1 s2", "1,1,1"),
    "whitehead": parse_braid("s1 s1 -s2 s1 -s2", "1,1,1"),
    "borromean": parse_braid("s1 -s2 s1 -s2 s1 -s2", "1,1,1"),
    "torus-3-4": parse_braid("s1 s2 s1 s2 s1 s2 s1 s2", "1,1,1"),
    "plat-trefoil": parse_braid("s2 s2 s2", "1,1,1,1", "plat"),
    "hopf-12": parse_braid("s1 s1", "1,2"),
}


# ---------------------------------------------------------------------------
# BMW relations
#
# Algebra elements are dictionaries from words to coefficients.  A word is a
# tuple of atom ids, read top to bottom (the product xy stacks x on top of y);
# an atom is one crossing-free term of a generator image placed on strands
# (i, i+1).  Traces of words are memoized up to cyclic rotation.

Element = dict[tuple[int, ...], QScalar]


@dataclass(frozen=True)
class BMWCheck:
    relation: str
    instance: str
    monomials: int
    passed: bool
    witness: str = ""
    lhs_value: QScalar | None = None
    rhs_value: QScalar | None = None


class _BMWAlgebra:
    def __init__(self, k: int, engine: Engine | None = None) -> None:
        if k < 2:
            raise BraidError("BMW checks need at least two strands")
        self.k = k
        self.engine = engine
        self.atoms: list[tuple[int, tuple]] = []
        self._atom_ids: dict[tuple[int, tuple], int] = {}
        self._traces: dict[tuple[int, ...], QScalar] = {}

    def _atom(self, i: int, ops: tuple) -> int:
        key = (i, ops)
        if key not in self._atom_ids:
            self._atom_ids[key] = len(self.atoms)
            self.atoms.append(key)
        return self._atom_ids[key]

    def _from_web(self, i: int, w: WebSum) -> Element:
        return {((self._atom(i, ops),) if ops else ()): c for c, ops in w.terms}

    def gen(self, kind: str, i: int) -> Element:
        """kind is 'g', 'G' (inverse) or 'e'; i is 1-based."""
        if not 1 <= i < self.k:
            raise BraidError(f"generator index {i} outside 1..{self.k - 1}")
        if kind == "e":
            return self._from_web(i, _e(1))
        return self._from_web(i, crossing(1, 1, 1 if kind == "g" else -1))

    @staticmethod
    def mul(x: Element, y: Element) -> Element:
        out: Element = {}
        for u, a in x.items():
            for v, b in y.items():
                w = u + v
                out[w] = out.get(w, ZERO) + a * b
        return {w: c for w, c in out.items() if not c.is_zero()}

    @staticmethod
    def lin(*parts: tuple[QScalar | int, Element]) -> Element:
        out: Element = {}
        for c, x in parts:
            c = as_scalar(c)
            for w, a in x.items():
                out[w] = out.get(w, ZERO) + c * a
        return {w: c for w, c in out.items() if not c.is_zero()}

    def one(self) -> Element:
        return {(): ONE}

    def web(self, word: tuple[int, ...]) -> WebSum:
        ident = (1,) * self.k
        w = identity(ident)
        for a in reversed(word):
            i, ops = self.atoms[a]
            piece = WebSum.single((1, 1), ops)
            w = (identity((1,) * (i - 1)) @ piece @ identity((1,) * (self.k - i - 1))).compose(w)
        return w

    def trace(self, word: tuple[int, ...]) -> QScalar:
        key = min((word[r:] + word[:r] for r in range(len(word))), default=())
        hit = self._traces.get(key)
        if hit is None:
            hit = evaluate_sum(trace_closure(self.web(key)), self.engine)
            self._traces[key] = hit
        return hit

    def pair(self, x: Element, word: tuple[int, ...]) -> QScalar:
        total = ZERO
        for u, c in x.items():
            total = total + c * self.trace(u + word)
        return total


def _monomials(k: int, length: int) -> Iterable[tuple[tuple[str, int], ...]]:
    letters = [(kind, i) for i in range(1, k) for kind in ("g", "G", "e")]
    level: list[tuple] = [()]
    yield ()
    for _ in range(length):
        level = [m + (x,) for m in level for x in letters]
        yield from level


def _mono_name(m: tuple[tuple[str, int], ...]) -> str:
    names = {"g": "g{}", "G": "g{}^-1", "e": "e{}"}
    return " ".join(names[kind].format(i) for kind, i in m) or "1"


def bmw_relations(k: int, engine: Engine | None = None) -> tuple[_BMWAlgebra, list[tuple[str, str, Element, Element]]]:
    """Instances of the eight defining relations on k strands, as (label, text, lhs, rhs)."""
    A = _BMWAlgebra(k, engine)
    r = -qpow(7)
    z = qpow(1) - qpow(-1)
    g = lambda i: A.gen("g", i)  # noqa: E731
    G = lambda i: A.gen("G", i)  # noqa: E731
    e = lambda i: A.gen("e", i)  # noqa: E731
    m = A.mul
    out = []
    for i in range(1, k):
        out.append(("1", f"g{i} - g{i}^-1 = z(1 - e{i})", A.lin((1, g(i)), (-1, G(i))), A.lin((z, A.one()), (-z, e(i)))))
        out.append(("2", f"e{i}^2 = (1 - [7]) e{i}", m(e(i), e(i)), A.lin((ONE + (r - r.inverse()) / z, e(i)))))
        out.append(("7", f"e{i} g{i} = r^-1 e{i}", m(e(i), g(i)), A.lin((r.inverse(), e(i)))))
        out.append(("7", f"g{i} e{i} = r^-1 e{i}", m(g(i), e(i)), A.lin((r.inverse(), e(i)))))
        out.append(("inv", f"g{i} g{i}^-1 = 1", m(g(i), G(i)), A.one()))
    for i in range(1, k - 1):
        j = i + 1
        out.append(("3", f"g{i} g{j} g{i} = g{j} g{i} g{j}", m(m(g(i), g(j)), g(i)), m(m(g(j), g(i)), g(j))))
        out.append(("5", f"e{i} e{j} e{i} = e{i}", m(m(e(i), e(j)), e(i)), e(i)))
        out.append(("5", f"e{j} e{i} e{j} = e{j}", m(m(e(j), e(i)), e(j)), e(j)))
        out.append(("6", f"g{i} g{j} e{i} = e{j} e{i}", m(m(g(i), g(j)), e(i)), m(e(j), e(i))))
        out.append(("6", f"g{j} g{i} e{j} = e{i} e{j}", m(m(g(j), g(i)), e(j)), m(e(i), e(j))))
        out.append(("8", f"e{i} g{j} e{i} = r e{i}", m(m(e(i), g(j)), e(i)), A.lin((r, e(i)))))
        out.append(("8", f"e{j} g{i} e{j} = r e{j}", m(m(e(j), g(i)), e(j)), A.lin((r, e(j)))))
    for i in range(1, k):
        for j in range(i + 2, k):
            out.append(("4", f"g{i} g{j} = g{j} g{i}", m(g(i), g(j)), m(g(j), g(i))))
    return A, out


def bmw_harness(k: int = 3, length: int = 4, engine: Engine | None = None) -> list[BMWCheck]:
    """Certify the BMW relations on k strands by closure pairings.

    Each side is paired with the trace closure of every monomial in
    g_i, g_i^-1, e_i of length at most ``length``.  Monomials expand into
    words of crossing-free atoms, so the two sides are first compared on
    every such word; agreement there implies agreement on every monomial by
    linearity.  Otherwise the monomials are paired one by one to find a
    witness.
    """
    A, rels = bmw_relations(k, engine)
    monos = list(_monomials(k, length))
    expanded = []
    for mono in monos:
        x = A.one()
        for kind, i in mono:
            x = A.mul(x, A.gen(kind, i))
        expanded.append(x)
    words = sorted({w for x in expanded for w in x}, key=lambda w: (len(w), w))
    report = []
    for label, text, lhs, rhs in rels:
        diff = A.lin((1, lhs), (-1, rhs))
        if all(A.pair(diff, w).is_zero() for w in words):
            report.append(BMWCheck(label, text, len(monos), True))
            continue
        for mono, x in zip(monos, expanded):
            a = sum((c * A.pair(lhs, w) for w, c in x.items()), ZERO)
            b = sum((c * A.pair(rhs, w) for w, c in x.items()), ZERO)
            if a != b:
                report.append(BMWCheck(label, text, len(monos), False, _mono_name(mono), a, b))
                break
        else:
            report.append(BMWCheck(label, text, len(monos), True))
    return report
