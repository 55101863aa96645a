"""Slice-form webs: the DSL, expansion into elementary pieces, ladderization.

A web is given as an object (sequence of labels in 1..3) and a list of
slices; each slice lists atoms consumed left to right that together cover
every strand.  Internally a web is flattened to a sequence of *ops*, each
acting on a contiguous run of strands at a given position:

    ("cup", p, a)          insert a pair (a, a) at position p
    ("cap", p, a)          remove the pair (a, a) at p, p+1
    ("vtx", p, a, b, c)    merge (a, b) at p, p+1 into c
    ("covtx", p, c, a, b)  split c at p into (a, b)
    ("block", p, ladder)   a ladder whose nonzero domain labels start at p

Vertices are read by their planar cyclic order, so rotated vertices are
built from caps, cups and the generating vertices.
"""

from __future__ import annotations

import re
from itertools import permutations
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .ladder import E, F, LabeledObject, Ladder, LadderError, Morphism, Rung, make_rung
from .qfield import ONE, ZERO, QScalar, as_scalar, qint

__all__ = [
    "WebSyntaxError",
    "WebTypeError",
    "SliceAtom",
    "SliceWeb",
    "WebSum",
    "parse_web",
    "expand",
    "ladderize",
    "ladder_terms",
    "evaluate_web",
    "evaluate_sum",
    "merge",
    "split",
    "cup",
    "cap",
    "identity",
    "block",
    "trace_closure",
    "plat_closure",
    "closure_catalog",
    "pairings",
    "trace_closure_ladder",
    "WEB_TRIPLES",
]

VTX_ATOMS = {(1, 1, 2), (1, 2, 3), (2, 1, 3), (2, 2, 2)}
COVTX_ATOMS = {(2, 1, 1), (3, 1, 2), (3, 2, 1), (2, 2, 2)}
WEB_TRIPLES = frozenset(
    {(1, 1, 2), (1, 2, 1), (2, 1, 1)}
    | set(permutations((1, 2, 3)))
    | {(2, 2, 2)}
)


class WebSyntaxError(ValueError):
    def __init__(self, msg: str, line: int = 0, col: int = 0) -> None:
        self.line, self.col = line, col
        super().__init__(f"line {line}, column {col}: {msg}" if line else msg)


class WebTypeError(WebSyntaxError):
    pass


# ---------------------------------------------------------------------------
# slice webs


@dataclass(frozen=True)
class SliceAtom:
    kind: str
    labels: tuple[int, ...] = ()
    payload: object = None  # crossings: sign; blocks: Morphism
    line: int = 0
    col: int = 0

    @property
    def inputs(self) -> tuple[int, ...]:
        k, L = self.kind, self.labels
        if k == "id":
            return L
        if k == "cup":
            return ()
        if k == "cap":
            return (L[0], L[0])
        if k == "vtx":
            return L[:2]
        if k == "covtx":
            return L[:1]
        if k in ("x", "xi"):
            return L
        if k == "ladder":
            return tuple(x.label for x in self.payload.domain if x.label)
        raise WebTypeError(f"unknown atom {k}")

    @property
    def outputs(self) -> tuple[int, ...]:
        k, L = self.kind, self.labels
        if k == "id":
            return L
        if k == "cup":
            return (L[0], L[0])
        if k == "cap":
            return ()
        if k == "vtx":
            return L[2:]
        if k == "covtx":
            return L[1:]
        if k in ("x", "xi"):
            return (L[1], L[0])
        if k == "ladder":
            return tuple(x.label for x in self.payload.codomain if x.label)
        raise WebTypeError(f"unknown atom {k}")

    def __str__(self) -> str:
        k, L = self.kind, self.labels
        if k in ("id", "cup", "cap"):
            return f"{k}({L[0]})"
        if k == "vtx":
            return f"vtx({L[0]},{L[1]}>{L[2]})"
        if k == "covtx":
            return f"covtx({L[0]}>{L[1]},{L[2]})"
        if k in ("x", "xi"):
            return f"{k}({L[0]},{L[1]})"
        return "ladder(...)"


@dataclass(frozen=True)
class SliceWeb:
    domain: tuple[int, ...]
    slices: tuple[tuple[SliceAtom, ...], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "domain", tuple(self.domain))
        object.__setattr__(self, "slices", tuple(tuple(s) for s in self.slices))
        self._check()

    def _check(self) -> None:
        cur = self.domain
        for i, row in enumerate(self.slices):
            pos = 0
            out: list[int] = []
            for atom in row:
                need = atom.inputs
                got = cur[pos : pos + len(need)]
                if got != need:
                    raise WebTypeError(
                        f"atom {atom} expects {list(need)} but finds {list(got)} at strand {pos} of slice {i + 1}",
                        atom.line,
                        atom.col,
                    )
                pos += len(need)
                out.extend(atom.outputs)
            if pos != len(cur):
                line = row[-1].line if row else 0
                raise WebTypeError(f"slice {i + 1} covers {pos} of {len(cur)} strands", line, 0)
            cur = tuple(out)

    @property
    def codomain(self) -> tuple[int, ...]:
        cur = self.domain
        for row in self.slices:
            cur = tuple(x for a in row for x in a.outputs)
        return cur

    def is_closed(self) -> bool:
        return not self.domain and not self.codomain

    def to_text(self) -> str:
        lines = ["obj: " + " ".join(map(str, self.domain))]
        for row in self.slices:
            lines.append("slice: " + " ".join(str(a) for a in row))
        return "\n".join(lines) + "\n"

    def ops(self) -> "WebSum":
        """Expand into elementary ops (crossings and (2,2,2) vertices resolved)."""
        acc = WebSum.identity(self.domain)
        for row in self.slices:
            layer = WebSum.identity(())
            for atom in row:
                layer = layer.tensor(_atom_sum(atom))
            acc = layer.compose(acc)
        return acc


# ---------------------------------------------------------------------------
# parser

_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_]+)\s*\((?P<args>[^)]*)\)|(?P<bad>\S+))")
_ARGS = re.compile(r"^\s*(\d+)\s*(?:,\s*(\d+)\s*)?(?:>\s*(\d+)\s*(?:,\s*(\d+)\s*)?)?$")


def _parse_atom(name: str, args: str, line: int, col: int) -> SliceAtom:
    m = _ARGS.match(args)
    if not m:
        raise WebSyntaxError(f"malformed arguments {args!r} for {name}", line, col)
    a, b, c, d = (int(g) if g is not None else None for g in m.groups())
    for v in (a, b, c, d):
        if v is not None and not 1 <= v <= 3:
            raise WebSyntaxError(f"label {v} outside 1..3", line, col)
    arrow = ">" in args
    if name in ("id", "cup", "cap"):
        if b is not None or arrow:
            raise WebSyntaxError(f"{name} takes one label", line, col)
        return SliceAtom(name, (a,), line=line, col=col)
    if name in ("x", "xi"):
        if b is None or arrow:
            raise WebSyntaxError(f"{name} takes two labels", line, col)
        return SliceAtom(name, (a, b), line=line, col=col)
    if name == "vtx":
        if b is None or c is None or d is not None:
            raise WebSyntaxError("vtx expects (a,b>c)", line, col)
        if (a, b, c) not in VTX_ATOMS:
            raise WebSyntaxError(f"disallowed vertex triple ({a},{b}>{c})", line, col)
        return SliceAtom(name, (a, b, c), line=line, col=col)
    if name == "covtx":
        if b is not None or c is None or d is None:
            raise WebSyntaxError("covtx expects (c>a,b)", line, col)
        if (a, c, d) not in COVTX_ATOMS:
            raise WebSyntaxError(f"disallowed covertex triple ({a}>{c},{d})", line, col)
        return SliceAtom(name, (a, c, d), line=line, col=col)
    raise WebSyntaxError(f"unknown atom {name!r}", line, col)


def _statements(text: str) -> Iterator[tuple[int, int, str]]:
    """Yield (line, column, statement) splitting on newlines and ';'."""
    for ln, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        start = 0
        for part in body.split(";"):
            if part.strip():
                yield ln, start + (len(part) - len(part.lstrip())) + 1, part.strip()
            start += len(part) + 1


def parse_web(text: str) -> SliceWeb:
    """Parse the web DSL; errors cite line and column."""
    domain: tuple[int, ...] | None = None
    rows: list[tuple[SliceAtom, ...]] = []
    for ln, col, stmt in _statements(text):
        head, sep, rest = stmt.partition(":")
        head = head.strip()
        if not sep:
            raise WebSyntaxError(f"expected 'obj:' or 'slice:', got {stmt!r}", ln, col)
        offset = col + stmt.index(":") + 1
        if head == "obj":
            if domain is not None:
                raise WebSyntaxError("duplicate obj header", ln, col)
            if rows:
                raise WebSyntaxError("obj header after slices", ln, col)
            labels = []
            for m in re.finditer(r"\S+", rest):
                tok = m.group()
                if not tok.isdigit() or not 1 <= int(tok) <= 3:
                    raise WebSyntaxError(f"bad object label {tok!r}", ln, offset + m.start())
                labels.append(int(tok))
            domain = tuple(labels)
        elif head == "slice":
            if domain is None:
                raise WebSyntaxError("slice before obj header", ln, col)
            atoms = []
            pos = 0
            while pos < len(rest):
                m = _TOKEN.match(rest, pos)
                if not m or m.end() == pos:
                    break
                acol = offset + m.start() + (len(m.group()) - len(m.group().lstrip()))
                if m.group("bad"):
                    raise WebSyntaxError(f"unexpected {m.group('bad')!r}", ln, acol)
                atoms.append(_parse_atom(m.group("name"), m.group("args"), ln, acol))
                pos = m.end()
            rows.append(tuple(atoms))
        else:
            raise WebSyntaxError(f"unknown header {head!r}", ln, col)
    if domain is None:
        raise WebSyntaxError("missing obj header", 1, 1)
    return SliceWeb(domain, tuple(rows))


# ---------------------------------------------------------------------------
# op sums


def _op_arity(op: tuple) -> tuple[int, int]:
    k = op[0]
    if k == "cup":
        return 0, 2
    if k == "cap":
        return 2, 0
    if k == "vtx":
        return 2, 1
    if k == "covtx":
        return 1, 2
    lad = op[2]
    return sum(1 for x in lad.domain if x.label), sum(1 for x in lad.codomain if x.label)


def _shift_ops(ops: Iterable[tuple], by: int) -> tuple:
    return tuple((o[0], o[1] + by) + tuple(o[2:]) for o in ops)


def _apply_op(obj: tuple[int, ...], op: tuple) -> tuple[int, ...]:
    k, p = op[0], op[1]
    if k == "cup":
        return obj[:p] + (op[2], op[2]) + obj[p:]
    if k == "cap":
        if obj[p : p + 2] != (op[2], op[2]):
            raise WebTypeError(f"cap({op[2]}) on {obj[p:p + 2]}")
        return obj[:p] + obj[p + 2 :]
    if k == "vtx":
        if obj[p : p + 2] != op[2:4]:
            raise WebTypeError(f"vertex {op} on {obj[p:p + 2]}")
        return obj[:p] + (op[4],) + obj[p + 2 :]
    if k == "covtx":
        if obj[p] != op[2]:
            raise WebTypeError(f"covertex {op} on {obj[p]}")
        return obj[:p] + op[3:5] + obj[p + 1 :]
    lad = op[2]
    ins = tuple(x.label for x in lad.domain if x.label)
    if obj[p : p + len(ins)] != ins:
        raise WebTypeError(f"ladder block expects {ins} at {p}, finds {obj[p:p + len(ins)]}")
    return obj[:p] + tuple(x.label for x in lad.codomain if x.label) + obj[p + len(ins) :]


@dataclass(frozen=True)
class WebSum:
    """Linear combination of op sequences sharing a domain and codomain."""

    domain: tuple[int, ...]
    codomain: tuple[int, ...]
    terms: tuple[tuple[QScalar, tuple], ...] = ()

    @classmethod
    def single(cls, domain: Sequence[int], ops: Sequence[tuple], coeff: QScalar | int = 1) -> "WebSum":
        domain = tuple(domain)
        cod = domain
        for op in ops:
            cod = _apply_op(cod, op)
        return cls(domain, cod, ((as_scalar(coeff), tuple(ops)),))

    @classmethod
    def identity(cls, domain: Sequence[int]) -> "WebSum":
        return cls.single(domain, ())

    @classmethod
    def zero(cls, domain: Sequence[int], codomain: Sequence[int]) -> "WebSum":
        return cls(tuple(domain), tuple(codomain), ())

    def _check(self, other: "WebSum") -> None:
        if (self.domain, self.codomain) != (other.domain, other.codomain):
            raise WebTypeError(f"cannot add webs {self.domain}->{self.codomain} and {other.domain}->{other.codomain}")

    def __add__(self, other: "WebSum") -> "WebSum":
        self._check(other)
        return WebSum(self.domain, self.codomain, self.terms + other.terms).simplify()

    def __sub__(self, other: "WebSum") -> "WebSum":
        return self + other.scale(-1)

    def __neg__(self) -> "WebSum":
        return self.scale(-1)

    def scale(self, c: QScalar | int) -> "WebSum":
        c = as_scalar(c)
        if c.is_zero():
            return WebSum.zero(self.domain, self.codomain)
        return WebSum(self.domain, self.codomain, tuple((c * k, ops) for k, ops in self.terms))

    def __rmul__(self, c: QScalar | int) -> "WebSum":
        return self.scale(c)

    def simplify(self) -> "WebSum":
        acc: dict[tuple, QScalar] = {}
        for c, ops in self.terms:
            acc[ops] = acc.get(ops, ZERO) + c
        return WebSum(self.domain, self.codomain, tuple((c, ops) for ops, c in acc.items() if not c.is_zero()))

    def compose(self, below: "WebSum") -> "WebSum":
        """``self`` after ``below``."""
        if below.codomain != self.domain:
            raise WebTypeError(f"cannot compose {below.domain}->{below.codomain} with {self.domain}->{self.codomain}")
        terms = tuple((c1 * c2, o2 + o1) for c1, o1 in self.terms for c2, o2 in below.terms)
        return WebSum(below.domain, self.codomain, terms).simplify()

    def then(self, above: "WebSum") -> "WebSum":
        return above.compose(self)

    def tensor(self, right: "WebSum") -> "WebSum":
        n_out = len(self.codomain)
        terms = tuple(
            (c1 * c2, o1 + _shift_ops(o2, n_out)) for c1, o1 in self.terms for c2, o2 in right.terms
        )
        return WebSum(self.domain + right.domain, self.codomain + right.codomain, terms).simplify()

    def __matmul__(self, right: "WebSum") -> "WebSum":
        return self.tensor(right)

    def flip(self) -> "WebSum":
        """Upside-down reflection."""
        terms = []
        for c, ops in self.terms:
            new = []
            for op in reversed(ops):
                k = op[0]
                if k == "cup":
                    new.append(("cap",) + op[1:])
                elif k == "cap":
                    new.append(("cup",) + op[1:])
                elif k == "vtx":
                    new.append(("covtx", op[1], op[4], op[2], op[3]))
                elif k == "covtx":
                    new.append(("vtx", op[1], op[3], op[4], op[2]))
                else:
                    new.append(("block", op[1], op[2].vertical_flip()))
            terms.append((c, tuple(new)))
        return WebSum(self.codomain, self.domain, tuple(terms))

    def mirror(self) -> "WebSum":
        """Left-right reflection."""
        terms = []
        for c, ops in self.terms:
            obj = self.domain
            new = []
            for op in ops:
                r, _ = _op_arity(op)
                p = len(obj) - op[1] - r
                k = op[0]
                if k in ("cup", "cap"):
                    new.append((k, p, op[2]))
                elif k == "vtx":
                    new.append(("vtx", p, op[3], op[2], op[4]))
                elif k == "covtx":
                    new.append(("covtx", p, op[2], op[4], op[3]))
                else:
                    new.append(("block", p, op[2].horizontal_mirror()))
                obj = _apply_op(obj, op)
            terms.append((c, tuple(new)))
        return WebSum(tuple(reversed(self.domain)), tuple(reversed(self.codomain)), tuple(terms))

    def bar(self) -> "WebSum":
        return WebSum(self.domain, self.codomain, tuple((c.bar(), ops) for c, ops in self.terms))

    def __len__(self) -> int:
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms


def identity(labels: Sequence[int]) -> WebSum:
    return WebSum.identity(labels)


def cup(a: int) -> WebSum:
    return WebSum.single((), [("cup", 0, a)])


def cap(a: int) -> WebSum:
    return WebSum.single((a, a), [("cap", 0, a)])


def block(m: Morphism | Ladder) -> WebSum:
    """A ladder morphism as a web piece."""
    if isinstance(m, Ladder):
        m = Morphism.from_ladder(m)
    dom = tuple(x.label for x in m.domain if x.label)
    cod = tuple(x.label for x in m.codomain if x.label)
    terms = tuple((c, (("block", 0, lad),)) for lad, c in m)
    return WebSum(dom, cod, terms)


@lru_cache(maxsize=None)
def _merge_terms(x: int, y: int, z: int, depth: int = 3) -> tuple[tuple[QScalar, tuple], ...] | None:
    if z == 0:
        return ((ONE, (("cap", 0, x),)),) if x == y else None
    if (x, y, z) == (2, 2, 2):
        return (
            (qint(3).inverse(), (("covtx", 0, 2, 1, 1), ("covtx", 2, 2, 1, 1), ("cap", 1, 1), ("vtx", 0, 1, 1, 2))),
        )
    if (x, y, z) in VTX_ATOMS:
        return ((ONE, (("vtx", 0, x, y, z),)),)
    if (x, y, z) not in WEB_TRIPLES or depth == 0:
        return None
    options = []
    a = _split_terms(x, z, y, depth - 1)  # bend the right leg down
    if a is not None:
        options.append(tuple((c, ops + (("cap", 1, y),)) for c, ops in a))
    b = _split_terms(y, x, z, depth - 1)  # bend the left leg down
    if b is not None:
        options.append(tuple((c, _shift_ops(ops, 1) + (("cap", 0, x),)) for c, ops in b))
    if not options:
        return None
    return min(options, key=lambda t: sum(len(o) for _, o in t))


@lru_cache(maxsize=None)
def _split_terms(z: int, x: int, y: int, depth: int = 3) -> tuple[tuple[QScalar, tuple], ...] | None:
    if z == 0:
        return ((ONE, (("cup", 0, x),)),) if x == y else None
    if (z, x, y) == (2, 2, 2):
        return (
            (qint(3).inverse(), (("covtx", 0, 2, 1, 1), ("cup", 1, 1), ("vtx", 0, 1, 1, 2), ("vtx", 1, 1, 1, 2))),
        )
    if (z, x, y) in COVTX_ATOMS:
        return ((ONE, (("covtx", 0, z, x, y),)),)
    if (x, y, z) not in WEB_TRIPLES or depth == 0:
        return None
    options = []
    c = _merge_terms(x, z, y, depth - 1)  # raise the left leg from a cup
    if c is not None:
        options.append(tuple((k, (("cup", 0, x),) + _shift_ops(ops, 1)) for k, ops in c))
    d = _merge_terms(z, y, x, depth - 1)  # raise the right leg from a cup
    if d is not None:
        options.append(tuple((k, (("cup", 1, y),) + ops) for k, ops in d))
    if not options:
        return None
    return min(options, key=lambda t: sum(len(o) for _, o in t))


def merge(x: int, y: int, z: int) -> WebSum:
    """The trivalent vertex with bottom legs x, y and top leg z."""
    t = _merge_terms(x, y, z)
    if t is None:
        raise WebTypeError(f"no vertex ({x},{y}>{z})")
    return WebSum((x, y), (z,), t)


def split(z: int, x: int, y: int) -> WebSum:
    """The trivalent vertex with bottom leg z and top legs x, y."""
    t = _split_terms(z, x, y)
    if t is None:
        raise WebTypeError(f"no covertex ({z}>{x},{y})")
    return WebSum((z,), (x, y), t)


def _atom_sum(atom: SliceAtom) -> WebSum:
    k, L = atom.kind, atom.labels
    if k == "id":
        return identity(L)
    if k == "cup":
        return cup(L[0])
    if k == "cap":
        return cap(L[0])
    if k == "vtx":
        return merge(*L)
    if k == "covtx":
        return split(*L)
    if k in ("x", "xi"):
        from .links import crossing

        return crossing(L[0], L[1], +1 if k == "x" else -1)
    if k == "ladder":
        return block(atom.payload)
    raise WebTypeError(f"unknown atom {k}")


def expand(w: SliceWeb | WebSum) -> WebSum:
    return w.ops() if isinstance(w, SliceWeb) else w


# ---------------------------------------------------------------------------
# ladderization

_BIG = 1 << 24


class _Builder:
    """Places ops on a growing ladder; strands sit on columns, other columns are vacant."""

    def __init__(self, labels: Sequence[int]) -> None:
        self.slice: list[LabeledObject] = [LabeledObject(a, _BIG) for a in labels]
        self.initial: list[LabeledObject] = list(self.slice)
        self.where: list[int] = list(range(len(labels)))  # strand -> column
        self.low: list[int] = [_BIG] * len(labels)
        self.rungs: list[Rung] = []

    # -- primitives --------------------------------------------------------

    def _append(self) -> None:
        z = LabeledObject(0, _BIG)
        self.slice.append(z)
        self.initial.append(z)
        self.low.append(_BIG)

    def _rung(self, c: int, d: str, label: int, exponent: int, left: int, right: int) -> None:
        r = make_rung(self.slice, c, d, label, exponent, left, right)
        self.rungs.append(r)
        self.slice[c], self.slice[c + 1] = r.left, r.right
        self.low[c] = min(self.low[c], r.left.exponent)
        self.low[c + 1] = min(self.low[c + 1], r.right.exponent)

    def _occupied(self) -> set[int]:
        return set(self.where)

    def _move_right(self, s: int) -> None:
        c = self.where[s]
        if c + 1 >= len(self.slice):
            self._append()
        b = self.slice[c].label
        self._rung(c, F, b, 0, 0, b)
        self.where[s] = c + 1

    def _move_left(self, s: int) -> None:
        c = self.where[s]
        b = self.slice[c].label
        self._rung(c - 1, E, b, 0, b, 0)
        self.where[s] = c - 1

    def arrange(self, p: int, positions: Sequence[int], width: int) -> int:
        """Put strands p.. at base+positions and leave base..base+width-1 otherwise vacant."""
        r = len(positions)
        base = self.where[p - 1] + 1 if p > 0 else 0
        n = len(self.where)
        targets: dict[int, int] = {}
        for s in range(n - 1, p - 1, -1):
            if s < p + r:
                targets[s] = base + positions[s - p]
            else:
                targets[s] = max(self.where[s], base + width + (s - p - r))
        # push right, rightmost first
        for s in range(n - 1, p - 1, -1):
            while self.where[s] < targets[s]:
                self._move_right(s)
        # pull block strands left, leftmost first
        for s in range(p, p + r):
            while self.where[s] > targets[s]:
                self._move_left(s)
        while len(self.slice) < base + width:
            self._append()
        return base

    def place(self, p: int, lad: Ladder) -> None:
        dom = lad.domain
        positions = [i for i, x in enumerate(dom) if x.label]
        base = self.arrange(p, positions, len(dom))
        for i, x in enumerate(dom):
            if self.slice[base + i].label != x.label:
                raise LadderError(f"block label mismatch at column {base + i}")
        before = dom
        for rung in lad.rungs:
            c = rung.column
            m = before[c].mass - rung.left.mass if rung.direction == F else rung.left.mass - before[c].mass
            exp = (m - rung.label) // 2
            self._rung(base + c, rung.direction, rung.label, exp, rung.left.label, rung.right.label)
            before = before[:c] + (rung.left, rung.right) + before[c + 2 :]
        r = len(positions)
        outs = [base + i for i, x in enumerate(lad.codomain) if x.label]
        self.where[p : p + r] = outs

    def op(self, op: tuple) -> None:
        k, p = op[0], op[1]
        if k == "block":
            self.place(p, op[2])
            return
        if k == "cup":
            base = self.arrange(p, [], 2)
            a = op[2]
            self._rung(base, F, a, 0, a, a)
            self.where[p:p] = [base, base + 1]
        elif k == "cap":
            base = self.arrange(p, [0, 1], 2)
            a = op[2]
            self._rung(base, E, a, 0, 0, 0)
            del self.where[p : p + 2]
        elif k == "vtx":
            _, _, a, b, c = op
            base = self.arrange(p, [0, 1], 2)
            self._rung(base, E, b, 0, c, 0)
            del self.where[p + 1]
        elif k == "covtx":
            _, _, c, a, b = op
            base = self.arrange(p, [0], 2)
            self._rung(base, F, b, 0, a, b)
            self.where[p + 1 : p + 1] = [base + 1]
        else:
            raise WebTypeError(f"unknown op {k}")

    def finish(self) -> Ladder:
        low = self.low
        for c, x in enumerate(self.initial):
            low[c] = min(low[c], x.exponent)

        def fix(x: LabeledObject, c: int) -> LabeledObject:
            return LabeledObject(x.label, x.exponent - low[c])

        dom = tuple(fix(x, c) for c, x in enumerate(self.initial))
        rungs = tuple(r._replace(left=fix(r.left, r.column), right=fix(r.right, r.column + 1)) for r in self.rungs)
        return Ladder(dom, rungs)

    def collect(self) -> None:
        """Move strands to columns 0..n-1."""
        for s in range(len(self.where)):
            while self.where[s] > s:
                self._move_left(s)


def _ladder_of_ops(domain: Sequence[int], ops: Sequence[tuple]) -> Ladder:
    b = _Builder(domain)
    for op in ops:
        b.op(op)
    b.collect()
    return b.finish()


def ladder_terms(w: SliceWeb | WebSum) -> list[tuple[QScalar, Ladder]]:
    """Ladderize every term separately (boundary exponents may differ)."""
    ws = expand(w)
    return [(c, _ladder_of_ops(ws.domain, ops)) for c, ops in ws.terms]


def _common_boundary(terms: list[tuple[QScalar, Ladder]], cod_labels: Sequence[int]) -> list[tuple[QScalar, Ladder]]:
    width = max(l.width for _, l in terms)
    padded = []
    for c, l in terms:
        pad = (LabeledObject(0, 0),) * (width - l.width)
        padded.append((c, Ladder(l.domain + pad, l.rungs)))
    top = [max(l.domain[i].exponent for _, l in padded) for i in range(width)]
    out = []
    for c, l in padded:
        lift = [top[i] - l.domain[i].exponent for i in range(width)]

        def up(x: LabeledObject, i: int) -> LabeledObject:
            return LabeledObject(x.label, x.exponent + lift[i])

        dom = tuple(up(x, i) for i, x in enumerate(l.domain))
        rungs = [r._replace(left=up(r.left, r.column), right=up(r.right, r.column + 1)) for r in l.rungs]
        cur = list(Ladder(dom, tuple(rungs)).codomain)
        # gather all exponents on column 0 with 0'-rungs
        for j in range(width - 1, 0, -1):
            while cur[j].exponent:
                r = make_rung(cur, j - 1, E, 0, 1, cur[j - 1].label, cur[j].label)
                rungs.append(r)
                cur[j - 1], cur[j] = r.left, r.right
        if tuple(x.label for x in dom) == tuple(x.label for x in cur):
            # endomorphism: hand the exponents back out to match the domain
            for j in range(width - 1, 0, -1):
                for _ in range(dom[j].exponent):
                    for i in range(j):
                        r = make_rung(cur, i, F, 0, 1, cur[i].label, cur[i + 1].label)
                        rungs.append(r)
                        cur[i], cur[i + 1] = r.left, r.right
        out.append((c, Ladder(dom, tuple(rungs))))
    return out


def ladderize(w: SliceWeb | WebSum) -> Morphism:
    """A ladder morphism mapping onto the web under the comparison functor."""
    ws = expand(w)
    terms = ladder_terms(ws)
    if not terms:
        n, m = len(ws.domain), len(ws.codomain)
        width = max(n, m)
        return Morphism.zero(
            tuple(LabeledObject(a, 0) for a in ws.domain) + (LabeledObject(0, 0),) * (width - n),
            tuple(LabeledObject(a, 0) for a in ws.codomain) + (LabeledObject(0, 0),) * (width - m),
        )
    terms = _common_boundary(terms, ws.codomain)
    first = terms[0][1]
    return Morphism(first.domain, first.codomain, [(l, c) for c, l in terms])


# ---------------------------------------------------------------------------
# evaluation and closures


def evaluate_sum(ws: WebSum, engine=None) -> QScalar:
    from .engine import _engine

    if ws.domain or ws.codomain:
        raise WebTypeError("evaluate_web needs a closed web")
    eng = engine or _engine()
    total = ZERO
    for c, ops in ws.terms:
        total = total + c * eng.evaluate_closed(_ladder_of_ops((), ops))
    return total


def evaluate_web(w: SliceWeb | WebSum | str, engine=None) -> QScalar:
    """Scalar value of a closed web."""
    if isinstance(w, str):
        w = parse_web(w)
    return evaluate_sum(expand(w), engine)


def _cups(labels: Sequence[int]) -> WebSum:
    """Nested cups producing labels followed by their reverse."""
    ops = tuple(("cup", i, a) for i, a in enumerate(labels))
    return WebSum.single((), ops)


def _caps(labels: Sequence[int]) -> WebSum:
    n = len(labels)
    ops = tuple(("cap", n - 1 - i, labels[n - 1 - i]) for i in range(n))
    return WebSum.single(tuple(labels) + tuple(reversed(labels)), ops)


def trace_closure(ws: WebSum) -> WebSum:
    """Close an endomorphism by strands running around its right side."""
    if ws.domain != ws.codomain:
        raise WebTypeError("trace closure needs an endomorphism")
    X = ws.domain
    rest = identity(tuple(reversed(X)))
    return _caps(X).compose(ws.tensor(rest).compose(_cups(X)))


def plat_closure(ws: WebSum) -> WebSum:
    """Cap neighbouring pairs at the top and cup them at the bottom."""
    X, Y = ws.domain, ws.codomain
    if len(X) % 2 or len(Y) % 2 or any(X[i] != X[i + 1] for i in range(0, len(X), 2)) or any(
        Y[i] != Y[i + 1] for i in range(0, len(Y), 2)
    ):
        raise WebTypeError("plat closure needs paired labels")
    bottom = WebSum.single((), tuple(("cup", i, X[i]) for i in range(0, len(X), 2)))
    top = WebSum.single(Y, tuple(("cap", 0, Y[i]) for i in range(0, len(Y), 2)))
    return top.compose(ws.compose(bottom))


def trace_closure_ladder(m: Morphism) -> Morphism:
    """Planar trace closure of a ladder endomorphism, as a closed ladder morphism."""
    return ladderize(trace_closure(block(m)))


def _moves(obj: tuple[int, ...], maxlen: int) -> Iterator[tuple[WebSum, tuple[int, ...]]]:
    n = len(obj)
    for i in range(n - 1):
        x, y = obj[i], obj[i + 1]
        if x == y:
            yield _local(obj, i, 2, cap(x)), obj[:i] + obj[i + 2 :]
        for z in (1, 2, 3):
            if (x, y, z) in WEB_TRIPLES and (x, y, z) != (2, 2, 2):
                yield _local(obj, i, 2, merge(x, y, z)), obj[:i] + (z,) + obj[i + 2 :]
    if n + 1 <= maxlen:
        for i in range(n):
            z = obj[i]
            for x in (1, 2, 3):
                for y in (1, 2, 3):
                    if (x, y, z) in WEB_TRIPLES and (x, y, z) != (2, 2, 2):
                        yield _local(obj, i, 1, split(z, x, y)), obj[:i] + (x, y) + obj[i + 1 :]
    if n + 2 <= maxlen:
        for i in range(n + 1):
            for a in (1, 2, 3):
                yield _local(obj, i, 0, cup(a)), obj[:i] + (a, a) + obj[i:]


def _local(obj: tuple[int, ...], i: int, r: int, piece: WebSum) -> WebSum:
    return identity(obj[:i]).tensor(piece).tensor(identity(obj[i + r :]))


@lru_cache(maxsize=None)
def _path(src: tuple[int, ...], dst: tuple[int, ...]) -> WebSum | None:
    """A shortest web src -> dst built from caps, cups and vertices."""
    if src == dst:
        return identity(src)
    maxlen = max(len(src), len(dst)) + 2
    frontier = {src: identity(src)}
    seen = {src}
    for _ in range(6):
        nxt = {}
        for obj, w in frontier.items():
            for piece, new in _moves(obj, maxlen):
                if new in seen:
                    continue
                seen.add(new)
                nw = piece.compose(w)
                if new == dst:
                    return nw
                nxt[new] = nw
        frontier = nxt
    return None


def _decorations(obj: tuple[int, ...]) -> list[WebSum]:
    """Endomorphisms of obj used to build distinct closures."""
    out = [identity(obj)]
    n = len(obj)
    if not n:
        # scalars: juxtapose coloured circles
        out.extend(cap(a).compose(cup(a)) for a in (1, 2, 3))
    for i in range(n - 1):
        x, y = obj[i], obj[i + 1]
        for m in (0, 1, 2, 3):
            if m == 0 and x != y:
                continue
            if m and ((x, y, m) not in WEB_TRIPLES or (x, y, m) == (2, 2, 2)):
                continue
            h = split(m, x, y).compose(merge(x, y, m)) if m else cup(x).compose(cap(x))
            out.append(_local(obj, i, 2, h))
    for i in range(n):
        z = obj[i]
        for x, y in ((1, 1), (1, 2), (2, 1), (1, 3), (3, 1), (2, 3), (3, 2)):
            if (x, y, z) in WEB_TRIPLES:
                out.append(_local(obj, i, 1, merge(x, y, z).compose(split(z, x, y))))
    return out


def closure_catalog(src: Sequence[int], dst: Sequence[int], count: int = 4) -> list[WebSum]:
    """Webs src -> dst used to close a morphism dst -> src by pairing."""
    src, dst = tuple(src), tuple(dst)
    base = _path(src, dst)
    if base is None:
        return []
    return [d.compose(base) for d in _decorations(dst)[:count]]


def pairings(f: WebSum, g: WebSum | None = None, count: int = 4, engine=None) -> list[tuple[QScalar, QScalar]]:
    """Pair f (and optionally g, same type) with each catalog closure.

    Returns (f-value, g-value) pairs; g defaults to zero.
    """
    if g is not None and (f.domain, f.codomain) != (g.domain, g.codomain):
        raise WebTypeError("pairings: type mismatch")
    out = []
    for h in closure_catalog(f.codomain, f.domain, count):
        a = evaluate_sum(trace_closure(f.compose(h)), engine)
        b = evaluate_sum(trace_closure(g.compose(h)), engine) if g is not None else ZERO
        out.append((a, b))
    return out
