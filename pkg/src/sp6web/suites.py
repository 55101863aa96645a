"""Verification suites shared by the command line and the test-suite.

Each suite returns a list of :class:`Check` records; nothing raises on a
failed identity, failures are data.
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass
from typing import Callable, Iterable

from .engine import Engine, confluence_check
from .links import _H, _R, _e, bmw_harness, crossing, parse_braid, braid_web
from .qfield import ONE, QScalar, qint, qpow
from .relations import audit_parametric, audit_rules
from .webs import WebSum, cap, cup, identity, merge, pairings, split

__all__ = [
    "Check",
    "relation_identities",
    "kink",
    "run_relations",
    "run_reidemeister",
    "run_tables",
    "run_confluence",
    "run_bmw",
    "SUITES",
    "run_suite",
]

R3_TRIPLES = ("1,1,1", "1,1,2", "1,2,1", "2,1,1")


@dataclass
class Check:
    suite: str
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0

    def as_dict(self) -> dict:
        d = asdict(self)
        d["seconds"] = round(self.seconds, 3)
        return d


def _timed(suite: str, name: str, fn: Callable[[], tuple[bool, str]]) -> Check:
    t = time.perf_counter()
    ok, detail = fn()
    return Check(suite, name, ok, detail, time.perf_counter() - t)


def _agree(lhs: WebSum, rhs: WebSum, count: int, engine: Engine | None) -> tuple[bool, str]:
    pairs = pairings(lhs, rhs, count=count, engine=engine)
    if len(pairs) < count:
        return False, f"only {len(pairs)} closures"
    for i, (a, b) in enumerate(pairs):
        if a != b:
            return False, f"closure {i}: {a} != {b}"
    return True, f"{len(pairs)} closures"


# ---------------------------------------------------------------------------
# defining and derived relations


def relation_identities() -> list[tuple[str, WebSum, WebSum]]:
    """(name, lhs, rhs) for the defining relations and the derived ones."""
    i = qint
    id1, id2, id3 = identity((1,)), identity((2,)), identity((3,))

    def circle(a: int) -> WebSum:
        return cap(a).compose(cup(a))

    def T(h: int) -> WebSum:
        return merge(1, 1, 2).compose(identity((1,)) @ cap(h) @ identity((1,))).compose(
            split(2, 1, h) @ split(2, h, 1)
        )

    sq_lhs = (
        (merge(1, 1, 2) @ id1)
        .compose(id1 @ split(2, 1, 1))
        .compose(id1 @ merge(1, 1, 2))
        .compose(split(2, 1, 1) @ id1)
    )
    sq_rhs = (
        identity((2, 1)).scale(i(3) ** 2)
        - split(1, 2, 1).compose(merge(2, 1, 1)).scale(ONE / i(2))
        + split(3, 2, 1).compose(merge(2, 1, 3)).scale(i(3) ** 2 / i(2))
    )
    e11 = identity((1, 1)) - _e(1)
    return [
        ("circle 1", circle(1), identity(()).scale(-(i(3) * i(8)) / i(4))),
        ("circle 2", circle(2), identity(()).scale(i(7) * i(8) / i(4))),
        ("circle 3", circle(3), identity(()).scale(-(i(6) * i(7) * i(8)) / (i(2) * i(3) * i(4)))),
        ("lollipop", cap(1).compose(split(2, 1, 1)), WebSum.zero((2,), ())),
        ("bigon 11>2", merge(1, 1, 2).compose(split(2, 1, 1)), id2.scale(i(2) * i(3))),
        ("bigon 12>3", merge(1, 2, 3).compose(split(3, 1, 2)), id3.scale(i(2) * i(3))),
        (
            "associativity",
            merge(1, 2, 3).compose(id1 @ merge(1, 1, 2)),
            merge(2, 1, 3).compose(merge(1, 1, 2) @ id1),
        ),
        (
            "triangle 3,3 vanishes",
            merge(1, 1, 2).compose(id1 @ cap(2) @ id1).compose(split(3, 1, 2) @ split(3, 2, 1)),
            WebSum.zero((3, 3), (2,)),
        ),
        ("square", sq_lhs.mirror(), sq_rhs.mirror()),
        ("H-R 11|2|11", _H(1, 1, 2, 1, 1) - _R(1, 1, 2, 1, 1), e11.scale(i(2))),
        (
            "H-R 12|1|21",
            _H(1, 2, 1, 2, 1) - _R(1, 2, 1, 2, 1),
            (_R(1, 2, 3, 2, 1) - _H(1, 2, 3, 2, 1)).scale(i(3)),
        ),
        ("bigon 3>1,2>1 vanishes", merge(1, 2, 1).compose(split(3, 1, 2)), WebSum.zero((3,), (1,))),
        (
            "mirror bigon vanishes",
            merge(1, 2, 1).compose(split(3, 1, 2)).mirror(),
            WebSum.zero((3,), (1,)),
        ),
        ("bigon 12>1", merge(1, 2, 1).compose(split(1, 1, 2)), id1.scale(-(i(2) * i(7)))),
        ("bigon 23>1", merge(2, 3, 1).compose(split(1, 2, 3)), id1.scale(i(6) * i(7) / i(3))),
        ("bigon 13>2", merge(1, 3, 2).compose(split(2, 1, 3)), id2.scale(-i(6))),
        ("triangle T(3) = T(1)", T(3), T(1)),
        (
            "triangle absorption 112",
            merge(1, 1, 2).compose(id1 @ cap(2) @ id1).compose(split(1, 1, 2) @ split(1, 2, 1)),
            merge(1, 1, 2).scale(i(4)),
        ),
        (
            "triangle absorption 123",
            merge(2, 1, 3).compose(id2 @ cap(3) @ id1).compose(split(1, 2, 3) @ split(2, 3, 1)),
            merge(1, 2, 3).scale(i(4)),
        ),
    ]


def run_relations(count: int = 3, engine: Engine | None = None) -> list[Check]:
    return [_timed("relations", n, lambda a=a, b=b: _agree(a, b, count, engine)) for n, a, b in relation_identities()]


# ---------------------------------------------------------------------------
# Reidemeister moves


def kink(color: int, sign: int = 1) -> WebSum:
    """A curl on one strand: the crossing closed off on its right."""
    c = (color,)
    return (identity(c) @ cap(color)).compose(crossing(color, color, sign) @ identity(c)).compose(
        identity(c) @ cup(color)
    )


TWISTS = {1: -qpow(7), 2: qpow(12), 3: -qpow(15)}


def run_reidemeister(
    count: int = 3, triples: Iterable[str] = R3_TRIPLES, engine: Engine | None = None
) -> list[Check]:
    out = []
    for c, t in TWISTS.items():
        for s in (1, -1):
            v: QScalar = t if s > 0 else t.inverse()
            out.append(
                _timed("reidemeister", f"R1 colour {c} sign {s:+d}",
                       lambda c=c, s=s, v=v: _agree(kink(c, s), identity((c,)).scale(v), count, engine))
            )
        out.append(
            _timed("reidemeister", f"R1 colour {c} kink pair",
                   lambda c=c: _agree(kink(c, 1).compose(kink(c, -1)), identity((c,)), count, engine))
        )
    for k in (1, 2, 3):
        for l in (1, 2, 3):
            w = crossing(l, k, -1).compose(crossing(k, l, 1))
            out.append(_timed("reidemeister", f"R2 {k},{l}", lambda w=w, k=k, l=l: _agree(w, identity((k, l)), count, engine)))
    for cs in triples:
        a = braid_web(parse_braid("s1 s2 s1", cs, "open"))
        b = braid_web(parse_braid("s2 s1 s2", cs, "open"))
        out.append(_timed("reidemeister", f"R3 {cs}", lambda a=a, b=b: _agree(a, b, count, engine)))
    return out


# ---------------------------------------------------------------------------
# tables, confluence, BMW


def run_tables(closures: int = 3, max_mass: int = 4, engine: Engine | None = None) -> list[Check]:
    out = []
    t = time.perf_counter()
    res = audit_rules(closures=closures, reflections=True, engine=engine)
    res += audit_parametric(closures=closures, max_mass=max_mass, engine=engine)
    dt = (time.perf_counter() - t) / max(1, len(res))
    for r in res:
        ok = r.typed and r.agree and r.closures >= closures
        out.append(Check("tables", r.rule, ok, r.detail or f"{r.closures} closures", dt))
    return out


def run_confluence(seed: int = 42, count: int = 100, max_mass: int = 10) -> list[Check]:
    t = time.perf_counter()
    res = confluence_check(seed, count, max_mass)
    dt = (time.perf_counter() - t) / max(1, len(res))
    return [
        Check("confluence", lad.serialize(), a == b, "strategies agree" if a == b else f"{a} != {b}", dt)
        for lad, a, b in res
    ]


def run_bmw(k: int = 3, length: int = 4, engine: Engine | None = None) -> list[Check]:
    t = time.perf_counter()
    res = bmw_harness(k, length, engine)
    dt = (time.perf_counter() - t) / max(1, len(res))
    return [
        Check(
            "bmw",
            f"({r.relation}) {r.instance}",
            r.passed,
            f"{r.monomials} monomials" if r.passed else f"witness {r.witness}: {r.lhs_value} != {r.rhs_value}",
            dt,
        )
        for r in res
    ]


SUITES = ("relations", "bmw", "reidemeister", "confluence", "tables")


def run_suite(name: str, seed: int = 42, engine: Engine | None = None) -> list[Check]:
    if name == "relations":
        return run_relations(engine=engine)
    if name == "bmw":
        return run_bmw(engine=engine)
    if name == "reidemeister":
        return run_reidemeister(engine=engine)
    if name == "confluence":
        return run_confluence(seed)
    if name == "tables":
        return run_tables(engine=engine)
    raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
