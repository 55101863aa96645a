"""Normalization and evaluation of ladder morphisms.

``normalize_pbw`` rewrites into PBW form (terminal rungs only, every E-rung
below every F-rung).  ``evaluate_closed`` evaluates endomorphisms of
0-labelled objects by repeatedly normalizing, stripping one unit of exponent
from the leftmost upright and re-padding.  ``trace_normalize`` computes the
class of an annular closure as a polynomial in the characters x1, x2, x3.
"""

from __future__ import annotations

import heapq
import threading
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .ladder import (
    E,
    F,
    LabeledObject,
    Ladder,
    LadderError,
    Morphism,
    ObjectMismatch,
    Rung,
    compose,
    make_rung,
    rung_exponent,
)
from .qfield import ONE, ZERO, QScalar, as_scalar
from .relations import RuleSet, default_rules, explode, is_terminal, square, swap

__all__ = [
    "BudgetExceeded",
    "EvaluationError",
    "ChiPolynomial",
    "EvalCache",
    "Engine",
    "LOWEST",
    "HIGHEST",
    "DEFAULT_BUDGET",
    "normalize_pbw",
    "is_pbw",
    "evaluate_closed",
    "trace_normalize",
    "pair_closure",
    "planar_trace",
    "standardize_closed",
    "random_closed_ladder",
    "confluence_check",
]

DEFAULT_BUDGET = 10**6
LOWEST = "lowest"
HIGHEST = "highest"

Terms = list[tuple[QScalar, Ladder]]


class BudgetExceeded(RuntimeError):
    def __init__(self, budget: int, trace: str = "") -> None:
        msg = f"budget exceeded ({budget} rewrite steps)"
        if trace:
            msg += f"; last ladder: {trace}"
        super().__init__(msg)


class EvaluationError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# characters


@dataclass(frozen=True)
class ChiPolynomial:
    """Polynomial in x1, x2, x3 with QScalar coefficients."""

    terms: Mapping[tuple[int, int, int], QScalar] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean = {tuple(k): v for k, v in self.terms.items() if not v.is_zero()}
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    @classmethod
    def monomial(cls, degree: Sequence[int], coeff: QScalar | int = 1) -> "ChiPolynomial":
        return cls({tuple(degree): as_scalar(coeff)})

    @classmethod
    def constant(cls, c: QScalar | int) -> "ChiPolynomial":
        return cls.monomial((0, 0, 0), c)

    @classmethod
    def of_labels(cls, labels: Iterable[int]) -> "ChiPolynomial":
        deg = [0, 0, 0]
        for lab in labels:
            if lab:
                deg[lab - 1] += 1
        return cls.monomial(deg)

    def __add__(self, other: "ChiPolynomial") -> "ChiPolynomial":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, ZERO) + v
        return ChiPolynomial(out)

    def __sub__(self, other: "ChiPolynomial") -> "ChiPolynomial":
        return self + other.scale(-1)

    def __mul__(self, other: "ChiPolynomial") -> "ChiPolynomial":
        out: dict = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = (k1[0] + k2[0], k1[1] + k2[1], k1[2] + k2[2])
                out[k] = out.get(k, ZERO) + v1 * v2
        return ChiPolynomial(out)

    def scale(self, c: QScalar | int) -> "ChiPolynomial":
        c = as_scalar(c)
        return ChiPolynomial({k: v * c for k, v in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def specialize(self, values: Sequence[QScalar]) -> QScalar:
        """Substitute x_c -> values[c-1]."""
        total = ZERO
        for (a, b, c), v in self.terms.items():
            total = total + v * values[0] ** a * values[1] ** b * values[2] ** c
        return total

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ChiPolynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(tuple(self.terms.items()))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for deg, v in self.terms.items():
            mono = " ".join(f"x{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(deg) if e)
            coef = str(v)
            if not mono:
                parts.append(coef)
            elif coef == "1":
                parts.append(mono)
            elif coef == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"({coef}) {mono}")
        return " + ".join(parts)

    __repr__ = __str__


# ---------------------------------------------------------------------------
# cache


class EvalCache:
    """Closed-ladder serialization -> scalar; safe for concurrent use."""

    def __init__(self) -> None:
        self._data: dict[str, QScalar] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def get(self, key: str) -> QScalar | None:
        with self._lock:
            v = self._data.get(key)
            if v is None:
                self.misses += 1
            else:
                self.hits += 1
            return v

    def put(self, key: str, value: QScalar) -> None:
        with self._lock:
            self._data[key] = value

    def __len__(self) -> int:
        return len(self._data)

    def __contains__(self, key: str) -> bool:
        return key in self._data

    def clear(self) -> None:
        with self._lock:
            self._data.clear()


# ---------------------------------------------------------------------------
# local rewriting


def _shift(rungs: Iterable[Rung], by: int) -> list[Rung]:
    return [r._replace(column=r.column + by) for r in rungs]


def _linearize(rungs: Sequence[Rung]) -> list[int]:
    """Topological order of the rung heap that places E-rungs as early as possible."""
    n = len(rungs)
    succs: list[list[int]] = [[] for _ in range(n)]
    indeg = [0] * n
    last: dict[int, int] = {}
    for j, r in enumerate(rungs):
        # the latest rung on each neighbouring column implies the older ones
        for c in (r.column - 1, r.column, r.column + 1):
            i = last.get(c)
            if i is not None:
                succs[i].append(j)
                indeg[j] += 1
        last[r.column] = j
    # two heaps of ready rungs by index: E-rungs are taken first
    ready_e: list[int] = []
    ready_f: list[int] = []
    for j in range(n):
        if not indeg[j]:
            heapq.heappush(ready_e if rungs[j].direction == E else ready_f, j)
    order: list[int] = []
    while ready_e or ready_f:
        pick = heapq.heappop(ready_e if ready_e else ready_f)
        order.append(pick)
        for j in succs[pick]:
            indeg[j] -= 1
            if not indeg[j]:
                heapq.heappush(ready_e if rungs[j].direction == E else ready_f, j)
    return order


def _slice_after(domain: tuple, rungs: Iterable[Rung]) -> tuple:
    cur = domain
    for r in rungs:
        c = r.column
        cur = cur[:c] + (r.left, r.right) + cur[c + 2 :]
    return cur


def _explode_at(lad: Ladder, i: int, rules: RuleSet) -> Terms:
    rung = lad.rungs[i]
    c = rung.column
    before = _slice_after(lad.domain, lad.rungs[:i])
    local = Ladder(before[c : c + 2], (rung._replace(column=0),))
    out = []
    for coef, res in explode(local, rules):
        new = lad.rungs[:i] + tuple(_shift(res.rungs, c)) + lad.rungs[i + 1 :]
        out.append((coef, Ladder(lad.domain, new)))
    return out


def _rewrite_pair(domain: tuple, seq: Sequence[Rung], p: int, rules: RuleSet) -> list[tuple[QScalar, list[Rung]]]:
    """Rewrite the F-rung seq[p] lying directly below the E-rung seq[p+1]."""
    lower, upper = seq[p], seq[p + 1]
    before = _slice_after(domain, seq[:p])
    c0 = min(lower.column, upper.column)
    if lower.column == upper.column:
        width, fn = 2, square
    elif abs(lower.column - upper.column) == 1:
        width, fn = 3, swap
    else:
        return [(ONE, list(seq[:p]) + [upper, lower] + list(seq[p + 2 :]))]
    local = Ladder(before[c0 : c0 + width], tuple(_shift((lower, upper), -c0)))
    # Ladder canonicalization never reorders two dependent rungs, so the pair stays intact
    out = []
    for coef, res in fn(local, rules):
        out.append((coef, list(seq[:p]) + _shift(res.rungs, c0) + list(seq[p + 2 :])))
    return out


def _nonterminal(lad: Ladder) -> list[int]:
    """Indices of rungs that are neither 1 = 1^(0) nor 0' = 0^(1)."""
    out = []
    cur = list(lad.domain)
    for i, r in enumerate(lad.rungs):
        c = r.column
        bl = cur[c]
        m = bl.label + 2 * bl.exponent - r.left.label - 2 * r.left.exponent
        if r.direction == E:
            m = -m
        # rung mass 1 means label 1 exponent 0; mass 2 with label 0 means 0'
        if not (m == 1 or (m == 2 and r.label == 0)):
            out.append(i)
        cur[c], cur[c + 1] = r.left, r.right
    return out


def _step(lad: Ladder, strategy: str, rules: RuleSet) -> Terms | None:
    idx = _nonterminal(lad)
    if idx:
        return _explode_at(lad, idx[0] if strategy == LOWEST else idx[-1], rules)
    order = _linearize(lad.rungs)
    seq = [lad.rungs[i] for i in order]
    pairs = [
        p
        for p in range(len(seq) - 1)
        if seq[p].direction == F and seq[p + 1].direction == E and abs(seq[p].column - seq[p + 1].column) <= 1
    ]
    if not pairs:
        return None
    p = pairs[0] if strategy == LOWEST else pairs[-1]
    return [(c, Ladder(lad.domain, tuple(rs))) for c, rs in _rewrite_pair(lad.domain, seq, p, rules)]


def is_pbw(lad: Ladder) -> bool:
    """All rungs terminal and no E-rung above an F-rung."""
    exps = lad.exponents()
    if any(not is_terminal(r.label, e) for r, e in zip(lad.rungs, exps)):
        return False
    order = _linearize(lad.rungs)
    seen_f = False
    for i in order:
        if lad.rungs[i].direction == F:
            seen_f = True
        elif seen_f:
            return False
    return True


# ---------------------------------------------------------------------------
# engine


class Engine:
    """Evaluation session: strategy, step budget, rule set and cache."""

    def __init__(
        self,
        strategy: str = LOWEST,
        budget: int = DEFAULT_BUDGET,
        cache: EvalCache | None = None,
        use_cache: bool = True,
        rules: RuleSet | None = None,
    ) -> None:
        if strategy not in (LOWEST, HIGHEST):
            raise ValueError(f"unknown strategy {strategy!r}")
        self.strategy = strategy
        self.budget = budget
        self.use_cache = use_cache
        self.cache = cache if cache is not None else EvalCache()
        self.rules = rules or default_rules()
        self._pbw_memo: dict[Ladder, Terms] = {}
        self._append_memo: dict[tuple, Terms] = {}
        self._trace_memo: dict[tuple, ChiPolynomial] = {}

    # -- PBW ---------------------------------------------------------------

    def _pbw_ladder(self, lad: Ladder) -> Terms:
        if self.use_cache:
            hit = self._pbw_memo.get(lad)
            if hit is not None:
                return hit
        # grow the ladder one rung at a time, keeping the prefix in PBW form;
        # equal prefixes merge, which keeps the term count small
        acc: dict[Ladder, QScalar] = {Ladder(lad.domain): ONE}
        steps = [0]
        for rung in lad.rungs:
            nxt: dict[Ladder, QScalar] = {}
            for cur, c in acc.items():
                for c2, l2 in self._append(cur, rung, steps):
                    v = nxt.get(l2, ZERO) + c * c2
                    if v.is_zero():
                        nxt.pop(l2, None)
                    else:
                        nxt[l2] = v
            acc = nxt
        out = [(c, l) for l, c in acc.items()]
        if self.use_cache:
            self._pbw_memo[lad] = out
        return out

    def _append(self, base: Ladder, rung: Rung, steps: list[int]) -> Terms:
        """PBW form of a PBW ladder with one more rung on top."""
        key = (base, rung)
        if self.use_cache:
            hit = self._append_memo.get(key)
            if hit is not None:
                return hit
        todo: dict[Ladder, QScalar] = {Ladder(base.domain, base.rungs + (rung,)): ONE}
        done: dict[Ladder, QScalar] = {}
        while todo:
            nxt: dict[Ladder, QScalar] = {}
            for cur, c in todo.items():
                res = _step(cur, self.strategy, self.rules)
                steps[0] += 1
                if steps[0] > self.budget:
                    raise BudgetExceeded(self.budget, cur.serialize())
                if res is None:
                    done[cur] = done.get(cur, ZERO) + c
                    continue
                for c2, l2 in res:
                    v = nxt.get(l2, ZERO) + c * c2
                    if v.is_zero():
                        nxt.pop(l2, None)
                    else:
                        nxt[l2] = v
            todo = nxt
        out = [(c, l) for l, c in done.items() if not c.is_zero()]
        if self.use_cache:
            self._append_memo[key] = out
        return out

    def normalize_pbw(self, m: Morphism | Ladder) -> Morphism:
        m = _as_morphism(m)
        acc = Morphism.zero(m.domain, m.codomain)
        for lad, c in m:
            acc = acc + Morphism(m.domain, m.codomain, [(l2, c * c2) for c2, l2 in self._pbw_ladder(lad)])
        return acc

    # -- closed evaluation -------------------------------------------------

    def evaluate_closed(self, m: Morphism | Ladder) -> QScalar:
        m = _as_morphism(m)
        for x in tuple(m.domain) + tuple(m.codomain):
            if x.label != 0:
                raise ObjectMismatch(f"evaluate_closed needs 0-labelled boundary, got {x}")
        total = ZERO
        for lad, c in m:
            total = total + c * self._eval_ladder(standardize_closed(lad))
        return total

    def _eval_ladder(self, lad: Ladder) -> QScalar:
        key = lad.serialize()
        if self.use_cache:
            hit = self.cache.get(key)
            if hit is not None:
                return hit
        k = sum(1 for x in lad.domain if x.exponent)
        if k == 0:
            if lad.rungs:
                raise EvaluationError(f"non-evaluable residue: {key}")
            value = ONE
        else:
            value = ZERO
            for c, term in self._pbw_ladder(lad):
                value = value + c * self._eval_ladder(_strip_leftmost(term, k))
        if self.use_cache:
            self.cache.put(key, value)
        return value

    # -- annular trace -----------------------------------------------------

    def trace_normalize(self, m: Morphism | Ladder) -> ChiPolynomial:
        m = _as_morphism(m)
        if tuple(m.domain) != tuple(m.codomain):
            raise ObjectMismatch("trace_normalize needs an endomorphism")
        total = ChiPolynomial()
        for lad, c in m:
            total = total + self._trace_seq(lad.domain, lad.rungs, [0]).scale(c)
        return total

    def _trace_seq(self, domain: tuple, rungs: Sequence[Rung], steps: list[int]) -> ChiPolynomial:
        steps[0] += 1
        if steps[0] > self.budget:
            raise BudgetExceeded(self.budget, f"{domain} {rungs}")
        rungs = list(rungs)
        # explode to terminal rungs, keeping the linear order
        before = domain
        for i, r in enumerate(rungs):
            e = rung_exponent(before, r)
            if not is_terminal(r.label, e):
                c = r.column
                local = Ladder(before[c : c + 2], (r._replace(column=0),))
                total = ChiPolynomial()
                for coef, res in explode(local, self.rules):
                    new = rungs[:i] + _shift(res.rungs, c) + rungs[i + 1 :]
                    total = total + self._trace_seq(domain, new, steps).scale(coef)
                return total
            before = _slice_after(before, (r,))
        if not rungs:
            return ChiPolynomial.of_labels(x.label for x in domain)
        slices = [domain]
        for r in rungs[:-1]:
            slices.append(_slice_after(slices[-1], (r,)))
        masses = [tuple(x.mass for x in s) for s in slices]
        j = min(range(len(masses)), key=lambda i: (masses[i], i))
        # rotate so that the minimal slice sits between rung 0 and rung 1
        n = len(rungs)
        start = (j - 1) % n
        new_domain = slices[start]
        seq = rungs[start:] + rungs[:start]
        key = (new_domain, tuple(seq))
        hit = self._trace_memo.get(key) if self.use_cache else None
        if hit is not None:
            return hit
        if n == 1:
            raise EvaluationError(f"single rung cannot close in the annulus: {seq}")
        lower, upper = seq[0], seq[1]
        if lower.direction != F or upper.direction != E:
            raise EvaluationError(f"minimal slice not bounded by F below and E above: {seq}")
        total = ChiPolynomial()
        for coef, rs in _rewrite_pair(new_domain, seq, 0, self.rules):
            total = total + self._trace_seq(new_domain, rs, steps).scale(coef)
        if self.use_cache:
            self._trace_memo[key] = total
        return total

    # -- pairing -----------------------------------------------------------

    def planar_trace(self, m: Morphism | Ladder) -> QScalar:
        """Scalar of the planar (right) trace closure of a ladder endomorphism."""
        from .webs import trace_closure_ladder

        m = _as_morphism(m)
        if tuple(m.domain) != tuple(m.codomain):
            raise ObjectMismatch("planar trace needs an endomorphism")
        return self.evaluate_closed(trace_closure_ladder(m))

    def pair_closure(self, f: Morphism | Ladder, g: Morphism | Ladder) -> QScalar:
        f, g = _as_morphism(f), _as_morphism(g)
        if tuple(f.domain) != tuple(g.codomain) or tuple(f.codomain) != tuple(g.domain):
            raise ObjectMismatch("pair_closure: objects do not match")
        return self.planar_trace(compose(f, g))


def _as_morphism(m: Morphism | Ladder) -> Morphism:
    if isinstance(m, Ladder):
        return Morphism.from_ladder(m)
    return m


# ---------------------------------------------------------------------------
# closed-ladder padding


def _push_left(domain: tuple) -> tuple[list[Rung], tuple]:
    """E0'-rungs moving all mass of a 0-labelled slice onto column 0."""
    cur = tuple(domain)
    out: list[Rung] = []
    for j in range(len(cur) - 1, 0, -1):
        while cur[j].exponent:
            r = make_rung(cur, j - 1, E, 0, 1, 0, 0)
            out.append(r)
            cur = _slice_after(cur, (r,))
    return out, cur


def _spread(width: int, k: int) -> tuple[list[Rung], tuple]:
    """F0'-rungs from 0^(k) 0 ... 0 to 0'^k 0^(width-k)."""
    cur = (LabeledObject(0, k),) + (LabeledObject(0, 0),) * (width - 1)
    out: list[Rung] = []
    for t in range(k - 1, 0, -1):
        for c in range(t):
            r = make_rung(cur, c, F, 0, 1, 0, 0)
            out.append(r)
            cur = _slice_after(cur, (r,))
    return out, cur


def _to_standard(domain: tuple, width: int) -> list[Rung]:
    """Rungs from a 0-labelled slice (padded to ``width``) to 0'^k 0^l."""
    padded = tuple(domain) + (LabeledObject(0, 0),) * (width - len(domain))
    push, cur = _push_left(padded)
    k = cur[0].exponent
    spread, _ = _spread(width, k)
    return push + spread


def standardize_closed(lad: Ladder) -> Ladder:
    """Conjugate a closed ladder by 0'-rungs so both ends read 0'^k 0^l."""
    k = sum(x.exponent for x in lad.domain)
    if sum(x.exponent for x in lad.codomain) != k:
        raise ObjectMismatch("closed ladder changes total mass")
    width = max(lad.width, k + 1) if k else lad.width
    std = (LabeledObject(0, 1),) * k + (LabeledObject(0, 0),) * (width - k)
    if lad.domain == std[: lad.width] and lad.codomain == lad.domain and width == lad.width:
        return lad
    pad = (LabeledObject(0, 0),) * (width - lad.width)
    dom = tuple(lad.domain) + pad
    bottom = Ladder(dom, tuple(_to_standard(lad.domain, width))).vertical_flip()
    top = Ladder(tuple(lad.codomain) + pad, tuple(_to_standard(lad.codomain, width)))
    rungs = bottom.rungs + lad.rungs + top.rungs
    return Ladder(bottom.domain, rungs)


def _strip_leftmost(lad: Ladder, k: int) -> Ladder:
    """Lower the leftmost upright by one prime, then re-pad to 0'^(k-1) 0^(l+1)."""
    def dec(x: LabeledObject) -> LabeledObject:
        if x.exponent < 1:
            raise EvaluationError(f"non-evaluable residue: leftmost exponent vanishes in {lad.serialize()}")
        return LabeledObject(x.label, x.exponent - 1)

    dom = (dec(lad.domain[0]),) + tuple(lad.domain[1:])
    rungs = tuple(r._replace(left=dec(r.left)) if r.column == 0 else r for r in lad.rungs)
    # B: from 0'^(k-1) 0^(l+1) to 0 0'^(k-1) 0^l
    width = lad.width
    cur = (LabeledObject(0, 1),) * (k - 1) + (LabeledObject(0, 0),) * (width - k + 1)
    base = cur
    b: list[Rung] = []
    for c in range(k - 2, -1, -1):
        r = make_rung(cur, c, F, 0, 1, 0, 0)
        b.append(r)
        cur = _slice_after(cur, (r,))
    if cur != dom:
        raise EvaluationError(f"non-evaluable residue: unexpected boundary {cur} vs {dom}")
    b_lad = Ladder(base, tuple(b))
    a_lad = b_lad.vertical_flip()
    return Ladder(base, b_lad.rungs + rungs + a_lad.rungs)


# ---------------------------------------------------------------------------
# random closed ladders for order-independence checks


def _random_walk(rng, domain: tuple, steps: int) -> Ladder:
    cur = domain
    rungs: list[Rung] = []
    for _ in range(steps):
        for _attempt in range(40):
            c = rng.randrange(len(cur) - 1)
            d = rng.choice((E, F))
            lab, ex = rng.choice(((1, 0), (2, 0), (3, 0), (0, 1), (1, 1), (2, 1)))
            try:
                r = make_rung(cur, c, d, lab, ex, rng.randrange(4), rng.randrange(4))
            except LadderError:
                continue
            rungs.append(r)
            cur = _slice_after(cur, (r,))
            break
    return Ladder(domain, tuple(rungs))


def random_closed_ladder(rng, max_mass: int = 10, max_rungs: int = 4, pool: int = 60) -> Ladder:
    """A random closed ladder of total mass at most ``max_mass``.

    Draws a 0-labelled boundary, then ``pool`` random rung walks out of it;
    two walks ending on the same slice are glued, the second one flipped.
    """
    width = rng.choice((2, 3))
    total = rng.randint(1, max_mass // 2)
    cuts = sorted(rng.randint(0, total) for _ in range(width - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [total])]
    domain = tuple(LabeledObject(0, e) for e in parts)
    buckets: dict[tuple, list[Ladder]] = {}
    for _ in range(pool):
        w = _random_walk(rng, domain, rng.randint(1, max_rungs))
        buckets.setdefault(w.codomain, []).append(w)
    ends = sorted(buckets, key=repr)
    rich = [k for k in ends if len(set(buckets[k])) > 1]
    end = rng.choice(rich or ends)
    a = rng.choice(buckets[end])
    b = rng.choice(buckets[end])
    return Ladder(domain, a.rungs + b.vertical_flip().rungs)


def confluence_check(seed: int = 42, count: int = 100, max_mass: int = 10, budget: int = DEFAULT_BUDGET):
    """Evaluate ``count`` seeded random closed ladders under both strategies.

    Returns ``(ladder, lowest_value, highest_value)`` triples.
    """
    import random

    rng = random.Random(seed)
    lo = Engine(LOWEST, budget)
    hi = Engine(HIGHEST, budget)
    out = []
    for _ in range(count):
        lad = random_closed_ladder(rng, max_mass)
        out.append((lad, lo.evaluate_closed(lad), hi.evaluate_closed(lad)))
    return out


# ---------------------------------------------------------------------------
# module-level conveniences with a shared default session

_default = threading.local()


def _engine() -> Engine:
    eng = getattr(_default, "engine", None)
    if eng is None:
        eng = _default.engine = Engine()
    return eng


def normalize_pbw(m: Morphism | Ladder, strategy: str = LOWEST, budget: int = DEFAULT_BUDGET) -> Morphism:
    eng = _engine() if (strategy, budget) == (LOWEST, DEFAULT_BUDGET) else Engine(strategy, budget)
    return eng.normalize_pbw(m)


def evaluate_closed(
    m: Morphism | Ladder, strategy: str = LOWEST, budget: int = DEFAULT_BUDGET, use_cache: bool = True
) -> QScalar:
    if (strategy, budget, use_cache) == (LOWEST, DEFAULT_BUDGET, True):
        return _engine().evaluate_closed(m)
    return Engine(strategy, budget, use_cache=use_cache).evaluate_closed(m)


def trace_normalize(m: Morphism | Ladder, budget: int = DEFAULT_BUDGET) -> ChiPolynomial:
    eng = _engine() if budget == DEFAULT_BUDGET else Engine(budget=budget)
    return eng.trace_normalize(m)


def planar_trace(m: Morphism | Ladder) -> QScalar:
    return _engine().planar_trace(m)


def pair_closure(f: Morphism | Ladder, g: Morphism | Ladder) -> QScalar:
    return _engine().pair_closure(f, g)
