"""Command line: ``sp6web {eval,link,annular,verify}``.

Exit codes: 0 success, 1 user error (bad input), 2 internal defect
(rewriting failed or budget exhausted), 3 a verification check failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .engine import DEFAULT_BUDGET, LOWEST, BudgetExceeded, ChiPolynomial, Engine, EvaluationError
from .ladder import LadderError, Ladder
from .links import BraidError, ColoredBraidWord, annular_invariant, closed_web, parse_braid, twist_value, writhes
from .qfield import ZERO, QScalar, qint_factor
from .webs import WebSyntaxError, ladderize, parse_web

__all__ = ["RunConfig", "main", "latex_scalar", "render_scalar", "SCHEMA"]

SCHEMA = "sp6web.cli/1"
EXIT_OK, EXIT_USER, EXIT_INTERNAL, EXIT_FAILED = 0, 1, 2, 3


@dataclass(frozen=True)
class RunConfig:
    """Everything that determines a run; equal configs give equal output."""

    command: str
    source: str | None = None  # path, "-" for stdin, or None for inline flags
    fmt: str = "plain"
    budget: int = DEFAULT_BUDGET
    jobs: int = 1
    cache: bool = True
    seed: int = 42
    normalize_framing: bool = False

    def engine(self) -> Engine:
        return Engine(LOWEST, self.budget, use_cache=self.cache)


class UserError(Exception):
    pass


# ---------------------------------------------------------------------------
# rendering


def _latex_poly_terms(x: QScalar) -> str:
    def poly(p) -> str:
        out = []
        for i, c in enumerate(p.coeffs):
            if not c:
                continue
            e = p.low + i
            mono = "" if e == 0 else ("q" if e == 1 else f"q^{{{e}}}")
            mag = abs(c)
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}{mono}")
            sign = "-" if c < 0 else "+"
            out.append(body if not out and c > 0 else (f"-{body}" if not out else f" {sign} {body}"))
        return "".join(out) or "0"

    if x.den.coeffs == (1,):
        return poly(x.num)
    return f"\\frac{{{poly(x.num)}}}{{{poly(x.den)}}}"


def latex_scalar(x: QScalar) -> str:
    """LaTeX with [n] factoring when x is exactly ±q^k times a product of [n]'s."""
    f = qint_factor(x)
    if f is None:
        return _latex_poly_terms(x)
    sign, k, exps = f
    up = "".join(f"[{n}]" + (f"^{{{e}}}" if e > 1 else "") for n, e in exps.items() if e > 0)
    down = "".join(f"[{n}]" + (f"^{{{-e}}}" if e < -1 else "") for n, e in exps.items() if e < 0)
    qk = "" if k == 0 else ("q" if k == 1 else f"q^{{{k}}}")
    body = f"\\frac{{{up or '1'}}}{{{down}}}" if down else up
    if not body:
        body = qk or "1"
    elif qk:
        body = qk + body
    return ("-" if sign < 0 else "") + body


def _latex_chi(p: ChiPolynomial) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for deg, c in p.terms.items():
        mono = "".join(f"\\chi_{{{i + 1}}}" + (f"^{{{e}}}" if e > 1 else "") for i, e in enumerate(deg) if e)
        coef = latex_scalar(c)
        if mono and coef == "1":
            parts.append(mono)
        elif mono and coef == "-1":
            parts.append("-" + mono)
        elif mono:
            parts.append(f"\\left({coef}\\right){mono}")
        else:
            parts.append(coef)
    return " + ".join(parts)


def _scalar_json(x: QScalar) -> dict:
    return {
        "text": str(x),
        "numerator": {str(e): c for e, c in sorted(x.num.coefficients.items())},
        "denominator": {str(e): c for e, c in sorted(x.den.coefficients.items())},
        "latex": latex_scalar(x),
    }


def render_scalar(x: QScalar, fmt: str) -> str:
    if fmt == "latex":
        return latex_scalar(x)
    return str(x)


# ---------------------------------------------------------------------------
# evaluation with optional fan-out over ladder summands


def _eval_chunk(args: tuple[list[tuple[Ladder, QScalar]], int, bool]) -> QScalar:
    terms, budget, cache = args
    eng = Engine(LOWEST, budget, use_cache=cache)
    total = ZERO
    for lad, c in terms:
        total = total + c * eng.evaluate_closed(lad)
    return total


def _evaluate(ws, cfg: RunConfig) -> QScalar:
    m = ladderize(ws)
    terms = sorted(m, key=lambda t: t[0].serialize())
    if cfg.jobs <= 1 or len(terms) < 2:
        return _eval_chunk((terms, cfg.budget, cfg.cache))
    chunks = [terms[i :: cfg.jobs] for i in range(cfg.jobs)]
    with ProcessPoolExecutor(cfg.jobs) as pool:
        parts = list(pool.map(_eval_chunk, [(c, cfg.budget, cfg.cache) for c in chunks if c]))
    total = ZERO
    for p in parts:  # fixed order keeps the sum deterministic
        total = total + p
    return total


# ---------------------------------------------------------------------------
# commands


def _read(source: str) -> str:
    if source == "-":
        return sys.stdin.read()
    try:
        return Path(source).read_text()
    except OSError as exc:
        raise UserError(f"cannot read {source}: {exc.strerror or exc}") from exc


def _braid(args: argparse.Namespace, closure_default: str = "trace") -> ColoredBraidWord:
    if args.input is not None:
        return ColoredBraidWord.from_json(_read(args.input))
    if args.colors is None:
        raise UserError("give a link JSON file or --braid/--colors")
    return parse_braid(args.braid or "", args.colors, args.closure or closure_default)


def _emit(cfg: RunConfig, payload: dict, text: str) -> None:
    if cfg.fmt == "json":
        doc = {"schema": SCHEMA, "command": cfg.command}
        doc.update(payload)
        print(json.dumps(doc, sort_keys=True))
    else:
        print(text)


def cmd_eval(cfg: RunConfig, args: argparse.Namespace) -> int:
    if args.web is not None:
        text = args.web
    elif args.input is not None:
        text = _read(args.input)
    else:
        raise UserError("give a .web file, '-' for stdin, or --web")
    web = parse_web(text)
    if not web.is_closed():
        raise UserError(f"web is not closed: {web.domain} -> {web.codomain}")
    value = _evaluate(web, cfg)
    _emit(cfg, {"value": _scalar_json(value)}, render_scalar(value, cfg.fmt))
    return EXIT_OK


def cmd_link(cfg: RunConfig, args: argparse.Namespace) -> int:
    b = _braid(args)
    value = _evaluate(closed_web(b), cfg)
    if cfg.normalize_framing:
        for color, w in writhes(b):
            value = value / twist_value(color) ** w
    payload = {"link": b.to_json(), "normalize_framing": cfg.normalize_framing, "value": _scalar_json(value)}
    _emit(cfg, payload, render_scalar(value, cfg.fmt))
    return EXIT_OK


def cmd_annular(cfg: RunConfig, args: argparse.Namespace) -> int:
    b = _braid(args)
    p = annular_invariant(b, cfg.engine())
    terms = [{"degree": list(d), "coefficient": _scalar_json(c)} for d, c in p.terms.items()]
    _emit(cfg, {"link": b.to_json(), "terms": terms, "text": str(p)}, _latex_chi(p) if cfg.fmt == "latex" else str(p))
    return EXIT_OK


def cmd_verify(cfg: RunConfig, args: argparse.Namespace) -> int:
    from .suites import SUITES, run_suite

    if args.suite not in SUITES:
        raise UserError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}")
    checks = run_suite(args.suite, seed=cfg.seed, engine=cfg.engine())
    passed = all(c.passed for c in checks)
    payload = {
        "suite": args.suite,
        "seed": cfg.seed,
        "passed": passed,
        "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in checks],
    }
    lines = [f"{'PASS' if c.passed else 'FAIL'}  {c.name}  ({c.detail})" for c in checks]
    lines.append(f"{args.suite}: {sum(c.passed for c in checks)}/{len(checks)} passed")
    _emit(cfg, payload, "\n".join(lines))
    return EXIT_OK if passed else EXIT_FAILED


COMMANDS = {"eval": cmd_eval, "link": cmd_link, "annular": cmd_annular, "verify": cmd_verify}


# ---------------------------------------------------------------------------
# argument parsing


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("plain", "json", "latex"), default="plain", help="output format (plain)")
    common.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET, help="rewrite step budget")
    common.add_argument("--jobs", type=_positive, default=1, help="worker processes for summand evaluation (1)")
    common.add_argument("--no-cache", action="store_true", help="disable the evaluation cache")
    common.add_argument("--seed", type=int, default=42, help="seed for randomized suites (42)")

    p = argparse.ArgumentParser(prog="sp6web", description="Exact evaluation of sp6 webs and coloured links.")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", parents=[common], help="evaluate a closed web")
    e.add_argument("input", nargs="?", help=".web file, or - for stdin")
    e.add_argument("--web", help="inline web text")

    for name, helptext in (("link", "link invariant of a closed coloured braid"), ("annular", "annular class of a braid closure")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("input", nargs="?", help="link JSON file, or - for stdin")
        s.add_argument("--braid", help='braid word, e.g. "s1 -s2 s1"')
        s.add_argument("--colors", help="comma-separated strand colours, e.g. 1,1,2")
        s.add_argument("--closure", choices=("trace", "plat"), help="closure (trace)")
        if name == "link":
            s.add_argument("--normalize-framing", action="store_true", help="divide out the kink factors")

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", help="relations | bmw | reidemeister | confluence | tables")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with status 2
        return EXIT_OK if exc.code == 0 else EXIT_USER
    cfg = RunConfig(
        command=args.command,
        source=getattr(args, "input", None),
        fmt=args.format,
        budget=args.budget,
        jobs=args.jobs,
        cache=not args.no_cache,
        seed=args.seed,
        normalize_framing=getattr(args, "normalize_framing", False),
    )
    try:
        return COMMANDS[args.command](cfg, args)
    except (UserError, WebSyntaxError, BraidError, LadderError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USER
    except (BudgetExceeded, EvaluationError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
