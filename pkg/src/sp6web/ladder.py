"""Ladder category data model: labelled objects, rungs, ladders and linear combinations.

Orientation: an F-rung moves mass from its left upright to its right upright,
an E-rung moves mass from right to left.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

from .qfield import ONE, QScalar, as_scalar

__all__ = [
    "LabeledObject",
    "Rung",
    "Ladder",
    "Morphism",
    "LadderError",
    "MassViolation",
    "VertexViolation",
    "NegativeExponent",
    "ObjectMismatch",
    "E",
    "F",
    "mass",
    "vertex_ok",
    "validate_rung",
    "make_rung",
    "obj",
    "compose",
    "tensor",
    "total_mass",
]

E = "E"
F = "F"


class LadderError(ValueError):
    pass


class MassViolation(LadderError):
    pass


class VertexViolation(LadderError):
    pass


class NegativeExponent(LadderError):
    pass


class ObjectMismatch(LadderError):
    pass


class LabeledObject(NamedTuple):
    label: int
    exponent: int = 0

    @property
    def mass(self) -> int:
        return self.label + 2 * self.exponent

    def __str__(self) -> str:
        return f"{self.label}^{self.exponent}"


def mass(x: LabeledObject) -> int:
    return x.label + 2 * x.exponent


def total_mass(slice_: Sequence[LabeledObject]) -> int:
    return sum(x.label + 2 * x.exponent for x in slice_)


def obj(*entries: int | tuple[int, int] | str) -> tuple[LabeledObject, ...]:
    """Build a ladder object: obj(1, (0, 1), "2^3")."""
    out = []
    for e in entries:
        if isinstance(e, LabeledObject):
            out.append(e)
        elif isinstance(e, int):
            out.append(LabeledObject(e, 0))
        elif isinstance(e, str):
            lab, _, ex = e.partition("^")
            out.append(LabeledObject(int(lab), int(ex or 0)))
        else:
            out.append(LabeledObject(*e))
    return tuple(out)


def _two_equal_other_zero(a: int, b: int, c: int) -> bool:
    return (a == b and c == 0) or (a == c and b == 0) or (b == c and a == 0)


def _vertex_clauses(a: int, b: int, c: int) -> int:
    n = 0
    if _two_equal_other_zero(a, b, c):
        n += 1
    if sorted((a, b, c)) == [1, 1, 2]:
        n += 1
    if a and b and c and len({a, b, c}) == 3:
        n += 1
    return n


_VALID_TRIPLES = frozenset(
    (a, b, c) for a in range(4) for b in range(4) for c in range(4) if _vertex_clauses(a, b, c) == 1
)


def vertex_ok(a: int, c: int, x: int) -> bool:
    """Exactly one clause of the vertex trichotomy holds for the labels."""
    return (a, c, x) in _VALID_TRIPLES


class Rung(NamedTuple):
    """A rung between uprights ``column`` and ``column + 1``.

    ``left``/``right`` are the upright entries just above the rung; the rung
    exponent is derived from them by mass preservation.
    """

    column: int
    direction: str
    label: int
    left: LabeledObject
    right: LabeledObject

    def __str__(self) -> str:
        return f"({self.column},{self.direction},{self.label})[{self.left} {self.right}]"


def validate_rung(slice_: Sequence[LabeledObject], rung: Rung) -> tuple[int, tuple[LabeledObject, ...]]:
    """Check a rung against the slice below it; return (rung exponent, new slice)."""
    c = rung.column
    if not 0 <= c < len(slice_) - 1:
        raise LadderError(f"rung column {c} out of range for slice of width {len(slice_)}")
    if rung.direction not in (E, F):
        raise LadderError(f"bad rung direction {rung.direction!r}")
    if rung.left.exponent < 0 or rung.right.exponent < 0:
        raise NegativeExponent(f"negative exponent in {rung}")
    bl, br = slice_[c], slice_[c + 1]
    tl, tr = rung.left, rung.right
    if rung.direction == F:
        m, m2 = mass(bl) - mass(tl), mass(tr) - mass(br)
    else:
        m, m2 = mass(tl) - mass(bl), mass(br) - mass(tr)
    if m != m2 or m <= 0 or (m - rung.label) % 2 or m < rung.label:
        raise MassViolation(f"mass violation for {rung} on {bl} {br}")
    if not vertex_ok(bl.label, rung.label, tl.label) or not vertex_ok(br.label, rung.label, tr.label):
        raise VertexViolation(f"vertex violation for {rung} on {bl} {br}")
    new = tuple(slice_[:c]) + (tl, tr) + tuple(slice_[c + 2 :])
    return (m - rung.label) // 2, new


def make_rung(
    slice_: Sequence[LabeledObject], column: int, direction: str, label: int, exponent: int,
    left_label: int, right_label: int,
) -> Rung:
    """Rung of the given label/exponent landing on uprights of the given labels.

    Upright exponents are solved from mass preservation; raises LadderError
    if no valid solution exists.
    """
    m = label + 2 * exponent
    bl, br = slice_[column], slice_[column + 1]
    if direction == F:
        ml, mr = mass(bl) - m, mass(br) + m
    else:
        ml, mr = mass(bl) + m, mass(br) - m
    if (ml - left_label) % 2 or (mr - right_label) % 2:
        raise MassViolation(f"parity mismatch placing {direction}{label}^{exponent} at {column}")
    el, er = (ml - left_label) // 2, (mr - right_label) // 2
    if el < 0 or er < 0:
        raise NegativeExponent(f"negative exponent placing {direction}{label}^{exponent} at {column}")
    if m <= 0:
        raise MassViolation("rung mass must be positive")
    if not vertex_ok(bl.label, label, left_label) or not vertex_ok(br.label, label, right_label):
        raise VertexViolation(f"vertex violation placing {direction}{label} at {column} on {bl} {br}")
    return Rung(column, direction, label, LabeledObject(left_label, el), LabeledObject(right_label, er))


def rung_exponent(before: Sequence[LabeledObject], rung: Rung) -> int:
    bl = before[rung.column]
    tl = rung.left
    m = mass(bl) - mass(tl) if rung.direction == F else mass(tl) - mass(bl)
    return (m - rung.label) // 2


def canonical_order(rungs: tuple[Rung, ...]) -> tuple[Rung, ...]:
    """Lexicographic normal form under commutation of rungs two or more columns apart.

    Repeatedly emits the leftmost rung that has no non-commuting rung below it.
    """
    n = len(rungs)
    if n < 2:
        return rungs
    cols = [r.column for r in rungs]
    if _is_lex_minimal(cols):
        return rungs
    remaining = list(range(n))
    out = []
    while remaining:
        best = None
        for k, i in enumerate(remaining):
            c = cols[i]
            blocked = False
            for j in remaining[:k]:
                if abs(cols[j] - c) <= 1:
                    blocked = True
                    break
            if not blocked and (best is None or c < cols[remaining[best]]):
                best = k
        out.append(rungs[remaining.pop(best)])
    return tuple(out)


def _is_lex_minimal(cols: list[int]) -> bool:
    # a sequence is lex-minimal iff no rung could be moved earlier past a larger column
    for i in range(1, len(cols)):
        c = cols[i]
        j = i - 1
        while j >= 0 and abs(cols[j] - c) >= 2:
            if cols[j] > c:
                return False
            j -= 1
    return True


@dataclass(frozen=True)
class Ladder:
    """A vertical stack of rungs on ``domain``, listed bottom to top."""

    domain: tuple[LabeledObject, ...]
    rungs: tuple[Rung, ...] = ()
    _hash: int = field(default=0, compare=False, repr=False)

    def __post_init__(self) -> None:
        rungs = canonical_order(self.rungs)
        if rungs != self.rungs:
            object.__setattr__(self, "rungs", rungs)
        object.__setattr__(self, "_hash", hash((self.domain, rungs)))

    def __hash__(self) -> int:
        return self._hash

    @classmethod
    def build(cls, domain: Iterable, rungs: Iterable[Rung] = ()) -> "Ladder":
        """Construct and fully validate."""
        lad = cls(obj(*domain), tuple(rungs))
        lad.validate()
        return lad

    @property
    def width(self) -> int:
        return len(self.domain)

    def slices(self) -> list[tuple[LabeledObject, ...]]:
        out = [self.domain]
        cur = self.domain
        for r in self.rungs:
            c = r.column
            cur = cur[:c] + (r.left, r.right) + cur[c + 2 :]
            out.append(cur)
        return out

    @property
    def codomain(self) -> tuple[LabeledObject, ...]:
        cur = self.domain
        for r in self.rungs:
            c = r.column
            cur = cur[:c] + (r.left, r.right) + cur[c + 2 :]
        return cur

    def validate(self) -> None:
        cur = self.domain
        for x in cur:
            if x.exponent < 0:
                raise NegativeExponent(f"negative exponent in domain {self}")
            if x.label not in (0, 1, 2, 3):
                raise LadderError(f"bad label {x.label}")
        m0 = total_mass(cur)
        for r in self.rungs:
            _, cur = validate_rung(cur, r)
            assert total_mass(cur) == m0
        return None

    def exponents(self) -> list[int]:
        """Derived rung exponents, bottom to top."""
        out = []
        cur = self.domain
        for r in self.rungs:
            out.append(rung_exponent(cur, r))
            c = r.column
            cur = cur[:c] + (r.left, r.right) + cur[c + 2 :]
        return out

    def serialize(self) -> str:
        parts = [" ".join(str(x) for x in self.domain) or "-"]
        for r in self.rungs:
            parts.append(str(r))
        return " | ".join(parts)

    __str__ = serialize

    def vertical_flip(self) -> "Ladder":
        """Upside-down reflection: rung order reversed, E and F exchanged."""
        sl = self.slices()
        rungs = []
        for i in range(len(self.rungs) - 1, -1, -1):
            r = self.rungs[i]
            below = sl[i]
            rungs.append(Rung(r.column, E if r.direction == F else F, r.label, below[r.column], below[r.column + 1]))
        return Ladder(sl[-1], tuple(rungs))

    def horizontal_mirror(self) -> "Ladder":
        """Left-right reflection: columns reversed, E and F exchanged."""
        n = len(self.domain)
        rungs = tuple(
            Rung(n - 2 - r.column, E if r.direction == F else F, r.label, r.right, r.left) for r in self.rungs
        )
        return Ladder(tuple(reversed(self.domain)), rungs)


class Morphism:
    """A formal Q(q)-linear combination of ladders with shared domain and codomain."""

    __slots__ = ("domain", "codomain", "terms")

    def __init__(
        self,
        domain: Sequence[LabeledObject],
        codomain: Sequence[LabeledObject],
        terms: Mapping[Ladder, QScalar] | Iterable[tuple[Ladder, QScalar]] | None = None,
    ):
        self.domain = tuple(domain)
        self.codomain = tuple(codomain)
        clean: dict[Ladder, QScalar] = {}
        items = terms.items() if isinstance(terms, Mapping) else (terms or ())
        for lad, c in items:
            c = as_scalar(c)
            if lad.domain != self.domain or lad.codomain != self.codomain:
                raise ObjectMismatch(f"ladder {lad} does not match {self.domain} -> {self.codomain}")
            if c:
                clean[lad] = clean[lad] + c if lad in clean else c
                if not clean[lad]:
                    del clean[lad]
        self.terms = clean

    @classmethod
    def identity(cls, domain: Sequence) -> "Morphism":
        d = obj(*domain)
        return cls(d, d, {Ladder(d): ONE})

    @classmethod
    def from_ladder(cls, lad: Ladder, coeff: QScalar | int = 1) -> "Morphism":
        return cls(lad.domain, lad.codomain, {lad: as_scalar(coeff)})

    @classmethod
    def zero(cls, domain: Sequence, codomain: Sequence) -> "Morphism":
        return cls(obj(*domain), obj(*codomain), {})

    def is_zero(self) -> bool:
        return not self.terms

    def __iter__(self) -> Iterator[tuple[Ladder, QScalar]]:
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def __add__(self, other: "Morphism") -> "Morphism":
        if (self.domain, self.codomain) != (other.domain, other.codomain):
            raise ObjectMismatch(f"cannot add {self.domain}->{self.codomain} and {other.domain}->{other.codomain}")
        out = dict(self.terms)
        for lad, c in other.terms.items():
            v = out[lad] + c if lad in out else c
            if v:
                out[lad] = v
            else:
                out.pop(lad, None)
        m = Morphism(self.domain, self.codomain)
        m.terms = out
        return m

    def __neg__(self) -> "Morphism":
        return self.scale(-ONE)

    def __sub__(self, other: "Morphism") -> "Morphism":
        return self + (-other)

    def scale(self, c: QScalar | int) -> "Morphism":
        c = as_scalar(c)
        m = Morphism(self.domain, self.codomain)
        if c:
            m.terms = {lad: v * c for lad, v in self.terms.items()}
        return m

    __rmul__ = scale

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Morphism):
            return NotImplemented
        return (self.domain, self.codomain, self.terms) == (other.domain, other.codomain, other.terms)

    def __repr__(self) -> str:
        body = " + ".join(f"({c})*[{lad}]" for lad, c in self.terms.items()) or "0"
        return f"Morphism({body})"

    def vertical_flip(self) -> "Morphism":
        return Morphism(self.codomain, self.domain, {lad.vertical_flip(): c for lad, c in self.terms.items()})

    def horizontal_mirror(self) -> "Morphism":
        return Morphism(
            tuple(reversed(self.domain)),
            tuple(reversed(self.codomain)),
            {lad.horizontal_mirror(): c for lad, c in self.terms.items()},
        )

    def map_coefficients(self, fn) -> "Morphism":
        m = Morphism(self.domain, self.codomain)
        m.terms = {lad: fn(c) for lad, c in self.terms.items() if fn(c)}
        return m


def compose(f: Morphism, g: Morphism) -> Morphism:
    """f after g: g is stacked below f."""
    if g.codomain != f.domain:
        raise ObjectMismatch(f"object mismatch: {g.codomain} vs {f.domain}")
    out: dict[Ladder, QScalar] = {}
    for lg, cg in g.terms.items():
        for lf, cf in f.terms.items():
            lad = Ladder(lg.domain, lg.rungs + lf.rungs)
            v = cg * cf
            if lad in out:
                v = out[lad] + v
            if v:
                out[lad] = v
            else:
                out.pop(lad, None)
    m = Morphism(g.domain, f.codomain)
    m.terms = out
    return m


def tensor(f: Morphism, g: Morphism) -> Morphism:
    """Horizontal juxtaposition; f's rungs are placed below g's."""
    n = len(f.domain)
    out: dict[Ladder, QScalar] = {}
    for lf, cf in f.terms.items():
        top_f = lf.codomain
        for lg, cg in g.terms.items():
            rungs = list(lf.rungs)
            for r in lg.rungs:
                rungs.append(r._replace(column=r.column + n))
            # f-rungs see g's domain on the right: nothing to rewrite, slices are local
            lad = Ladder(lf.domain + lg.domain, tuple(rungs))
            v = cf * cg
            if lad in out:
                v = out[lad] + v
            if v:
                out[lad] = v
            else:
                out.pop(lad, None)
    m = Morphism(f.domain + g.domain, f.codomain + g.codomain)
    m.terms = out
    return m
