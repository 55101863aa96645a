"""Exact evaluation in the quantum sp6 web calculus.

Scalars live in Q(q) (:mod:`sp6web.qfield`); webs are written in a slice
DSL (:mod:`sp6web.webs`), ladderized (:mod:`sp6web.ladder`) and rewritten
to PBW form by table-driven rules (:mod:`sp6web.relations`,
:mod:`sp6web.engine`).  Coloured braids and their invariants, with an
independent Dubrovnik oracle, are in :mod:`sp6web.links`.
"""

from __future__ import annotations

from .engine import ChiPolynomial, Engine, evaluate_closed, normalize_pbw, trace_normalize
from .ladder import E, F, LabeledObject, Ladder, Morphism, Rung
from .links import (
    ColoredBraidWord,
    annular_invariant,
    crossing,
    dubrovnik_oracle,
    link_invariant,
    parse_braid,
    twist_value,
)
from .qfield import ONE, ZERO, LaurentPoly, QScalar, eval_at, parse_scalar, qint, qpow
from .webs import WebSum, cap, cup, evaluate_web, identity, ladderize, merge, parse_web, split

__version__ = "0.1.0"

__all__ = [
    "ChiPolynomial",
    "ColoredBraidWord",
    "E",
    "Engine",
    "F",
    "LabeledObject",
    "Ladder",
    "LaurentPoly",
    "Morphism",
    "ONE",
    "QScalar",
    "Rung",
    "WebSum",
    "ZERO",
    "annular_invariant",
    "cap",
    "crossing",
    "cup",
    "dubrovnik_oracle",
    "eval_at",
    "evaluate_closed",
    "evaluate_web",
    "identity",
    "ladderize",
    "link_invariant",
    "merge",
    "normalize_pbw",
    "parse_braid",
    "parse_scalar",
    "parse_web",
    "qint",
    "qpow",
    "split",
    "trace_normalize",
]
