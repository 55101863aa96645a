"""Rewrite rules of the ladder category: explosions, rung swaps and squares.

The tabulated rules are read from ``data/ladder_rules.txt``.  The parametric
rules (generic explosion, rung swap, squares involving 0'-rungs) are coded
below.  All rules are local: they act on a ladder of width 2 or 3 holding one
or two rungs and return a list of ``(coefficient, ladder)`` pairs on the same
local domain.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Iterable, Sequence

from .ladder import (
    E,
    F,
    LabeledObject,
    Ladder,
    LadderError,
    Rung,
    make_rung,
    rung_exponent,
)
from .qfield import ONE, QScalar, parse_scalar, qint

__all__ = [
    "RuleSpec",
    "RungSpec",
    "Rule",
    "RuleSet",
    "RuleError",
    "NoTableEntry",
    "NonTerminalRung",
    "load_rules",
    "reflect_closure",
    "default_rules",
    "is_terminal",
    "explode",
    "swap",
    "square",
    "realize",
    "instantiate",
    "AuditResult",
    "audit_rules",
    "audit_parametric",
]

Term = tuple[QScalar, Ladder]


class RuleError(LadderError):
    pass


class NoTableEntry(RuleError):
    pass


class NonTerminalRung(RuleError):
    pass


# ---------------------------------------------------------------------------
# rule specifications: labels only, exponents derived on application


@dataclass(frozen=True)
class RungSpec:
    column: int
    direction: str
    label: int
    exponent: int
    left: int
    right: int

    def __str__(self) -> str:
        return f"{self.direction}{self.label}{chr(39) * self.exponent}@{self.column}>{self.left}{self.right}"

    def flipped(self) -> "RungSpec":
        return RungSpec(self.column, E if self.direction == F else F, self.label, self.exponent, self.left, self.right)


@dataclass(frozen=True)
class RuleSpec:
    """A local ladder given by label types; ``bottom`` lists the upright labels."""

    bottom: tuple[int, ...]
    rungs: tuple[RungSpec, ...]

    @property
    def width(self) -> int:
        return len(self.bottom)

    def label_slices(self) -> list[tuple[int, ...]]:
        out = [self.bottom]
        cur = list(self.bottom)
        for r in self.rungs:
            cur[r.column], cur[r.column + 1] = r.left, r.right
            out.append(tuple(cur))
        return out

    @property
    def top(self) -> tuple[int, ...]:
        return self.label_slices()[-1]

    def vertical_flip(self) -> "RuleSpec":
        sl = self.label_slices()
        rungs = []
        for i in range(len(self.rungs) - 1, -1, -1):
            r = self.rungs[i]
            below = sl[i]
            rungs.append(
                RungSpec(r.column, E if r.direction == F else F, r.label, r.exponent, below[r.column], below[r.column + 1])
            )
        return RuleSpec(sl[-1], tuple(rungs))

    def horizontal_mirror(self) -> "RuleSpec":
        n = self.width
        return RuleSpec(
            tuple(reversed(self.bottom)),
            tuple(
                RungSpec(n - 2 - r.column, E if r.direction == F else F, r.label, r.exponent, r.right, r.left)
                for r in self.rungs
            ),
        )

    def __str__(self) -> str:
        body = " ".join(str(r) for r in self.rungs) or "id"
        return "".join(map(str, self.bottom)) + " ; " + body


@dataclass(frozen=True)
class Rule:
    tag: str
    lhs: RuleSpec
    rhs: tuple[tuple[tuple[QScalar, RuleSpec], ...], ...]  # alternatives
    reflection: str = ""

    @property
    def key(self) -> tuple:
        return rule_key(self.lhs)

    def transformed(self, how: str) -> "Rule":
        fn = {"v": RuleSpec.vertical_flip, "h": RuleSpec.horizontal_mirror}
        lhs = self.lhs
        rhs = self.rhs
        for ch in how:
            lhs = fn[ch](lhs)
            rhs = tuple(tuple((c, fn[ch](s)) for c, s in alt) for alt in rhs)
        return Rule(self.tag, lhs, rhs, self.reflection + how)

    def __str__(self) -> str:
        return f"{self.tag}{'[' + self.reflection + ']' if self.reflection else ''}: {self.lhs}"


def rule_key(spec: RuleSpec) -> tuple:
    return (spec.bottom, tuple((r.column, r.direction, r.label, r.exponent, r.left, r.right) for r in spec.rungs))


_RUNG_TOKEN = re.compile(r"([EF])(\d)('*)@(\d+)>(\d)(\d)")


def _parse_spec(bottom: str, rungs: str, lineno: int) -> RuleSpec:
    b = tuple(int(ch) for ch in bottom.strip())
    rs = []
    toks = rungs.split()
    if toks == ["id"]:
        toks = []
    for t in toks:
        m = _RUNG_TOKEN.fullmatch(t)
        if not m:
            raise RuleError(f"line {lineno}: bad rung token {t!r}")
        d, lab, primes, col, l, r = m.groups()
        rs.append(RungSpec(int(col), d, int(lab), len(primes), int(l), int(r)))
    return RuleSpec(b, tuple(rs))


def load_rules(text: str) -> list[Rule]:
    """Parse the rule source format."""
    rules: list[Rule] = []
    cur: dict | None = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if head == "rule":
            if cur is not None:
                raise RuleError(f"line {lineno}: nested rule")
            cur = {"tag": rest.strip(), "lhs": None, "alts": [[]], "line": lineno}
        elif cur is None:
            raise RuleError(f"line {lineno}: statement outside a rule")
        elif head == "lhs":
            bottom, _, rungs = rest.partition(";")
            cur["lhs"] = _parse_spec(bottom, rungs, lineno)
        elif head == "term":
            coef, bottom_rungs = rest.split(";", 1)
            spec = _parse_spec("", bottom_rungs, lineno)
            if cur["lhs"] is None:
                raise RuleError(f"line {lineno}: term before lhs")
            spec = RuleSpec(cur["lhs"].bottom, spec.rungs)
            cur["alts"][-1].append((parse_scalar(coef), spec))
        elif head == "zero":
            pass
        elif head == "alt":
            cur["alts"].append([])
        elif head == "end":
            if cur["lhs"] is None:
                raise RuleError(f"line {lineno}: rule without lhs")
            rules.append(Rule(cur["tag"], cur["lhs"], tuple(tuple(a) for a in cur["alts"])))
            cur = None
        else:
            raise RuleError(f"line {lineno}: unknown statement {head!r}")
    if cur is not None:
        raise RuleError("unterminated rule at end of file")
    return rules


def reflect_closure(base: Iterable[Rule]) -> dict[tuple, list[Rule]]:
    """All horizontal/vertical reflections of the base rules, grouped by lhs.

    The first rule of each group is the one used for rewriting (base rules
    come first); the others are reflections landing on the same pattern and
    must agree with it.
    """
    out: dict[tuple, list[Rule]] = {}
    base = list(base)
    for how in ("", "v", "h", "vh"):
        for rule in base:
            img = rule.transformed(how)
            out.setdefault(img.key, []).append(img)
    return out


@dataclass
class RuleSet:
    rules: list[Rule]
    table: dict[tuple, list[Rule]] = field(default_factory=dict)

    @classmethod
    def from_text(cls, text: str) -> "RuleSet":
        rules = load_rules(text)
        return cls(rules, reflect_closure(rules))

    def lookup(self, spec: RuleSpec) -> Rule | None:
        group = self.table.get(rule_key(spec))
        return group[0] if group else None


@lru_cache(maxsize=1)
def default_rules() -> RuleSet:
    text = resources.files("sp6web.data").joinpath("ladder_rules.txt").read_text(encoding="utf-8")
    return RuleSet.from_text(text)


# ---------------------------------------------------------------------------
# realizing specs on concrete uprights


def realize(bottom: Sequence[LabeledObject], rungs: Sequence[RungSpec]) -> Ladder:
    """Place rung specs on a concrete slice, deriving upright exponents."""
    cur = tuple(bottom)
    out = []
    for s in rungs:
        r = make_rung(cur, s.column, s.direction, s.label, s.exponent, s.left, s.right)
        out.append(r)
        c = s.column
        cur = cur[:c] + (r.left, r.right) + cur[c + 2 :]
    return Ladder(tuple(bottom), tuple(out))


def _spec_of(local: Ladder) -> RuleSpec:
    exps = local.exponents()
    return RuleSpec(
        tuple(x.label for x in local.domain),
        tuple(
            RungSpec(r.column, r.direction, r.label, e, r.left.label, r.right.label)
            for r, e in zip(local.rungs, exps)
        ),
    )


def _apply(rule: Rule, local: Ladder) -> list[Term]:
    out = []
    for coef, spec in rule.rhs[0]:
        try:
            lad = realize(local.domain, spec.rungs)
        except LadderError as exc:
            raise RuleError(f"{rule}: right-hand side {spec} invalid on {local}: {exc}") from exc
        if lad.codomain != local.codomain:
            raise RuleError(f"{rule}: right-hand side {spec} does not reach {local.codomain}")
        out.append((coef, lad))
    return out


def is_terminal(label: int, exponent: int) -> bool:
    """Terminal rungs are 1 = 1^(0) and 0' = 0^(1)."""
    return (label, exponent) in ((1, 0), (0, 1))


def _flip_terms(terms: list[Term]) -> list[Term]:
    return [(c, lad.vertical_flip()) for c, lad in terms]


# ---------------------------------------------------------------------------
# explosion


def explode(local: Ladder, rules: RuleSet | None = None) -> list[Term]:
    """Explode the single rung of a width-2 local ladder."""
    rules = rules or default_rules()
    (rung,) = local.rungs
    r = rung_exponent(local.domain, rung)
    c = rung.label
    if is_terminal(c, r):
        raise RuleError(f"rung {rung} is terminal")
    if r >= 1 and c + 2 * r > 2:
        # generic: a 0' rung below the reduced rung
        top = (rung.left.label, rung.right.label)
        b = local.domain
        zp = RungSpec(0, rung.direction, 0, 1, b[0].label, b[1].label)
        rest = RungSpec(0, rung.direction, c, r - 1, *top)
        try:
            return [(ONE, realize(local.domain, (zp, rest)))]
        except LadderError as exc:
            raise RuleError(f"rule.explode.generic: cannot explode {local}: {exc}") from exc
    spec = _spec_of(local)
    if rung.direction == F:
        rule = rules.lookup(spec)
        if rule is None:
            raise NoTableEntry(f"no table entry for explosion {spec}")
        return _apply(rule, local)
    # E-rungs: explode the vertical flip
    return _flip_terms(explode(local.vertical_flip(), rules))


# ---------------------------------------------------------------------------
# swap: F below E on neighbouring columns


def _require_terminal(local: Ladder) -> list[int]:
    exps = local.exponents()
    for rung, e in zip(local.rungs, exps):
        if not is_terminal(rung.label, e):
            raise NonTerminalRung(f"non-terminal rung {rung} in {local}")
    return exps


def swap(local: Ladder, rules: RuleSet | None = None) -> list[Term]:
    """Rewrite an F-rung lying directly below an E-rung one column away (width 3)."""
    lower, upper = local.rungs
    if lower.direction != F or upper.direction != E:
        raise RuleError(f"swap expects F below E, got {local}")
    if lower.column == 1 and upper.column == 0:
        return _flip_terms(swap(local.vertical_flip(), rules))
    if not (lower.column == 0 and upper.column == 1):
        raise RuleError(f"swap expects neighbouring columns, got {local}")
    ea, eb = _require_terminal(local)
    L0, M0, R0 = (x.label for x in local.domain)
    L1, D = lower.left, lower.right
    X, R1 = upper.left, upper.right
    a = (lower.label, ea)
    b = (upper.label, eb)

    def lad(*specs: RungSpec) -> Ladder:
        return realize(local.domain, specs)

    def S(col: int, d: str, lab: str, left: int, right: int) -> RungSpec:
        label, exp = (0, 1) if lab == "0'" else (1, 0)
        return RungSpec(col, d, label, exp, left, right)

    al = "0'" if a == (0, 1) else "1"
    bl = "0'" if b == (0, 1) else "1"
    try:
        if a == (0, 1) or b == (0, 1):
            mid = M0 if b == (0, 1) else X.label
            return [(ONE, lad(S(1, E, bl, mid, R1.label), S(0, F, al, L1.label, X.label)))]
        if D.exponent > 0:
            return [
                (
                    ONE,
                    lad(
                        S(0, E, "1", L1.label, D.label),
                        S(1, E, "1", X.label, R1.label),
                        S(0, F, "0'", L1.label, X.label),
                    ),
                )
            ]
        if D.label == 2 and X == (1, 1):
            return [
                (ONE, lad(S(1, E, "1", 2, R1.label), S(0, F, "1", L1.label, 1))),
                (-qint(2), lad(S(0, E, "1", L1.label, 0), S(1, E, "1", 1, R1.label), S(0, F, "0'", L1.label, 1))),
                (qint(2), lad(S(1, E, "1", 0, R1.label), S(0, F, "1", L1.label, 1))),
            ]
        if D.label == 3 and X == (2, 1):
            c = qint(3).inverse()
            return [
                (ONE, lad(S(1, E, "1", 3, R1.label), S(0, F, "1", L1.label, 2))),
                (-c, lad(S(0, E, "1", L1.label, 1), S(1, E, "1", 2, R1.label), S(0, F, "0'", L1.label, 2))),
                (c, lad(S(1, E, "1", 1, R1.label), S(0, F, "1", L1.label, 2))),
            ]
        return [(ONE, lad(S(1, E, "1", D.label, R1.label), S(0, F, "1", L1.label, X.label)))]
    except LadderError as exc:
        raise RuleError(f"rule.swap: invalid right-hand side for {local}: {exc}") from exc


# ---------------------------------------------------------------------------
# square: F below E on the same column


def square(local: Ladder, rules: RuleSet | None = None) -> list[Term]:
    """Rewrite an F-rung lying directly below an E-rung on the same column (width 2)."""
    rules = rules or default_rules()
    lower, upper = local.rungs
    if lower.direction != F or upper.direction != E or lower.column != upper.column:
        raise RuleError(f"square expects F below E on one column, got {local}")
    ea, eb = _require_terminal(local)
    top = (upper.left.label, upper.right.label)
    try:
        if ea == 1 and eb == 1:
            return [(ONE, Ladder(local.domain))]
        if ea == 0 and eb == 1:
            return [(ONE, realize(local.domain, (RungSpec(0, E, 1, 0, *top),)))]
        if ea == 1 and eb == 0:
            return [(ONE, realize(local.domain, (RungSpec(0, F, 1, 0, *top),)))]
    except LadderError as exc:
        raise RuleError(f"rule.square.prime: invalid right-hand side for {local}: {exc}") from exc
    spec = _spec_of(local)
    rule = rules.lookup(spec)
    if rule is None:
        raise NoTableEntry(f"no table entry for square {spec}")
    return _apply(rule, local)


# ---------------------------------------------------------------------------
# audit


@dataclass(frozen=True)
class AuditResult:
    rule: str
    typed: bool
    closures: int
    agree: bool
    detail: str = ""


def instantiate(spec: RuleSpec, max_exponent: int = 3) -> Ladder | None:
    """Smallest-exponent concrete ladder realizing a label-only spec."""
    from itertools import product

    best = None
    for exps in product(range(max_exponent + 1), repeat=spec.width):
        bottom = tuple(LabeledObject(lab, e) for lab, e in zip(spec.bottom, exps))
        try:
            lad = realize(bottom, spec.rungs)
            lad.validate()
        except LadderError:
            continue
        if best is None or sum(exps) < best[0]:
            best = (sum(exps), lad)
    return best[1] if best else None


def _check_rule(rule: Rule, closures: int, engine=None) -> AuditResult:
    from .webs import block, pairings

    lhs = instantiate(rule.lhs)
    if lhs is None:
        return AuditResult(str(rule), False, 0, False, "left-hand side admits no valid exponents")
    for n, alt in enumerate(rule.rhs):
        try:
            terms = [(c, realize(lhs.domain, spec.rungs)) for c, spec in alt]
            for _, lad in terms:
                lad.validate()
                if lad.codomain != lhs.codomain:
                    raise LadderError(f"alternative {n} ends at {lad.codomain}, not {lhs.codomain}")
        except LadderError as exc:
            return AuditResult(str(rule), False, 0, False, str(exc))
    if closures <= 0:
        return AuditResult(str(rule), True, 0, True)
    f = block(lhs)
    for n, alt in enumerate(rule.rhs):
        g = None
        for c, spec in alt:
            piece = block(realize(lhs.domain, spec.rungs)).scale(c)
            g = piece if g is None else g + piece
        if g is None:
            from .webs import WebSum

            g = WebSum.zero(f.domain, f.codomain)
        pairs = pairings(f, g, count=closures, engine=engine)
        for a, b in pairs:
            if a != b:
                return AuditResult(str(rule), True, len(pairs), False, f"alternative {n}: {a} != {b}")
        if len(pairs) < closures:
            return AuditResult(str(rule), True, len(pairs), False, "not enough closures")
    return AuditResult(str(rule), True, closures, True)


def audit_rules(
    rules: RuleSet | None = None,
    closures: int = 3,
    reflections: bool = True,
    engine=None,
) -> list[AuditResult]:
    """Type/mass checks and closure pairings for every tabulated rule.

    With ``reflections`` every reflected image is checked as well; images
    that land on the same pattern must all agree.
    """
    rules = rules or default_rules()
    if reflections:
        images = [r for group in rules.table.values() for r in group]
    else:
        images = list(rules.rules)
    return [_check_rule(r, closures, engine) for r in images]


def _parametric_samples() -> list[tuple[str, Ladder, list[Term]]]:
    """Small instances of the coded (non-tabulated) rules."""
    from itertools import product

    out: list[tuple[str, Ladder, list[Term]]] = []
    objs = [LabeledObject(a, e) for a in range(4) for e in range(3)]
    # generic explosion: a rung of positive exponent
    for bl, br in product(objs, repeat=2):
        for lab, ex in ((1, 1), (2, 1), (3, 1), (0, 2)):
            for tl, tr in product(range(4), repeat=2):
                try:
                    r = make_rung((bl, br), 0, F, lab, ex, tl, tr)
                except LadderError:
                    continue
                lad = Ladder((bl, br), (r,))
                out.append((f"explode.generic F{lab}^{ex} on {bl} {br}", lad, explode(lad)))
    # swaps and 0'-squares among terminal rungs
    terminal = ((1, 0), (0, 1))
    for dom in product(objs, repeat=3):
        if sum(x.mass for x in dom) > 7:
            continue
        for (la, ea), (lb, eb) in product(terminal, repeat=2):
            for l1, d1 in product(range(4), repeat=2):
                try:
                    lower = make_rung(dom, 0, F, la, ea, l1, d1)
                except LadderError:
                    continue
                mid = (lower.left, lower.right, dom[2])
                for x1, r1 in product(range(4), repeat=2):
                    try:
                        upper = make_rung(mid, 1, E, lb, eb, x1, r1)
                    except LadderError:
                        continue
                    lad = Ladder(dom, (lower, upper))
                    try:
                        out.append((f"swap {lad}", lad, swap(lad)))
                    except RuleError:
                        continue
    for dom in product(objs, repeat=2):
        for (la, ea), (lb, eb) in product(terminal, repeat=2):
            if (ea, eb) == (0, 0):
                continue
            for l1, r1 in product(range(4), repeat=2):
                try:
                    lower = make_rung(dom, 0, F, la, ea, l1, r1)
                except LadderError:
                    continue
                for l2, r2 in product(range(4), repeat=2):
                    try:
                        upper = make_rung((lower.left, lower.right), 0, E, lb, eb, l2, r2)
                    except LadderError:
                        continue
                    lad = Ladder(dom, (lower, upper))
                    out.append((f"square.prime {lad}", lad, square(lad)))
    return out


def audit_parametric(
    closures: int = 3, limit: int | None = None, max_mass: int | None = None, engine=None
) -> list[AuditResult]:
    """Closure checks on sampled instances of the coded rules.

    ``max_mass`` drops samples whose boundary is heavier than the bound;
    ``limit`` then thins the remainder evenly.
    """
    from .webs import WebSum, block, pairings

    out = []
    samples = _parametric_samples()
    if max_mass is not None:
        samples = [s for s in samples if sum(x.mass for x in s[1].domain) <= max_mass]
    if limit is not None:
        samples = samples[:: max(1, len(samples) // limit)][:limit]
    for name, lhs, rhs in samples:
        f = block(lhs)
        g = WebSum.zero(f.domain, f.codomain)
        for c, lad in rhs:
            g = g + block(lad).scale(c)
        pairs = pairings(f, g, count=closures, engine=engine)
        bad = [(a, b) for a, b in pairs if a != b]
        out.append(AuditResult(name, True, len(pairs), not bad, f"{bad[0][0]} != {bad[0][1]}" if bad else ""))
    return out
