"""Exact arithmetic in Q(q): Laurent polynomials, reduced fractions, quantum integers."""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Union

__all__ = [
    "LaurentPoly",
    "QScalar",
    "PoleError",
    "qint",
    "q",
    "ZERO",
    "ONE",
    "add",
    "sub",
    "mul",
    "neg",
    "inv",
    "eval_at",
    "parse_scalar",
    "as_scalar",
    "qpow",
    "render_poly",
    "qint_factor",
]


class PoleError(ZeroDivisionError):
    """Raised when a scalar is evaluated at a root of its denominator."""


# ---------------------------------------------------------------------------
# dense integer polynomial helpers (ascending coefficient lists, trimmed)


def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _padd(a: list[int], b: list[int]) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] += x
    return _trim(out)


def _psub(a: list[int], b: list[int]) -> list[int]:
    out = list(a) + [0] * (len(b) - len(a))
    for i, x in enumerate(b):
        out[i] -= x
    return _trim(out)


def _pmul(a: list[int], b: list[int]) -> list[int]:
    if not a or not b:
        return []
    if len(a) < len(b):
        a, b = b, a
    out = [0] * (len(a) + len(b) - 1)
    for j, y in enumerate(b):
        if y:
            for i, x in enumerate(a):
                out[i + j] += x * y
    return out


def _content(a: list[int]) -> int:
    g = 0
    for x in a:
        g = math.gcd(g, x)
        if g == 1:
            break
    return g


def _primitive(a: list[int]) -> list[int]:
    if not a:
        return a
    g = _content(a)
    if a[-1] < 0:
        g = -g
    return [x // g for x in a] if g != 1 else list(a)


def _pdivexact(a: list[int], b: list[int]) -> list[int] | None:
    """Quotient a/b in Z[q] if b divides a exactly, else None."""
    if not b:
        raise ZeroDivisionError
    if not a:
        return []
    if len(a) < len(b):
        return None
    rem = list(a)
    lb = b[-1]
    db = len(b) - 1
    out = [0] * (len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        c = rem[k]
        if c == 0:
            continue
        qk, r = divmod(c, lb)
        if r:
            return None
        out[k - db] = qk
        for i in range(db + 1):
            rem[k - db + i] -= qk * b[i]
    if any(rem[:db]):
        return None
    return out


def _prem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder of a by b."""
    rem = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(rem) - 1 >= db and rem:
        c = rem[-1]
        shift = len(rem) - 1 - db
        rem = [x * lb for x in rem]
        for i in range(db + 1):
            rem[shift + i] -= c * b[i]
        _trim(rem)
    return rem


def _gcd_prs(a: list[int], b: list[int]) -> list[int]:
    """Primitive gcd in Z[q] via the primitive pseudo-remainder sequence."""
    if not a:
        return _primitive(b)
    if not b:
        return _primitive(a)
    c = math.gcd(_content(a), _content(b))
    a, b = _primitive(a), _primitive(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _prem(a, b)
        a, b = b, _primitive(r) if r else r
    g = _primitive(a)
    return [x * c for x in g] if c != 1 else g


def _peval_int(a: list[int], x: int) -> int:
    v = 0
    for coeff in reversed(a):
        v = v * x + coeff
    return v


def _interpolate(h: int, xi: int) -> list[int]:
    out = []
    half = xi // 2
    while h:
        d = h % xi
        if d > half:
            d -= xi
        out.append(d)
        h = (h - d) // xi
    return out


def _gcd(a: list[int], b: list[int]) -> list[int]:
    """Primitive gcd with positive leading coefficient.

    A heuristic evaluate-and-interpolate gcd is tried first and certified
    by exact division; the pseudo-remainder sequence is the fallback.
    """
    if not a or not b:
        return _primitive(a or b)
    if len(a) == 1 or len(b) == 1:
        return [1]
    pa, pb = _primitive(a), _primitive(b)
    if pa == pb:
        return pa
    bound = max(max(abs(x) for x in pa), max(abs(x) for x in pb))
    xi = 2 * bound + 29
    for _ in range(6):
        h = math.gcd(_peval_int(pa, xi), _peval_int(pb, xi))
        g = _primitive(_interpolate(h, xi))
        if g and _pdivexact(pa, g) is not None and _pdivexact(pb, g) is not None:
            return g
        xi = xi * 73794 // 27011 + 1
    return _primitive(_gcd_prs(pa, pb))


# ---------------------------------------------------------------------------


class LaurentPoly:
    """Element of Z[q, q^-1].

    Stored densely as a lowest exponent and a trimmed coefficient tuple; the
    ``coefficients`` view is the sparse map with no zero entries.
    """

    __slots__ = ("low", "coeffs", "_hash")

    def __init__(self, coefficients: Mapping[int, int] | None = None):
        if not coefficients:
            self.low, self.coeffs = 0, ()
        else:
            items = {e: int(c) for e, c in coefficients.items() if c}
            if not items:
                self.low, self.coeffs = 0, ()
            else:
                lo, hi = min(items), max(items)
                self.low = lo
                self.coeffs = tuple(items.get(e, 0) for e in range(lo, hi + 1))
        self._hash = None

    @classmethod
    def _raw(cls, low: int, coeffs: Iterable[int]) -> "LaurentPoly":
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        i = 0
        while i < len(c) and c[i] == 0:
            i += 1
        p = object.__new__(cls)
        if i == len(c):
            p.low, p.coeffs = 0, ()
        else:
            p.low, p.coeffs = low + i, tuple(c[i:])
        p._hash = None
        return p

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> "LaurentPoly":
        return cls._raw(exp, (coeff,))

    @property
    def coefficients(self) -> dict[int, int]:
        return {self.low + i: c for i, c in enumerate(self.coeffs) if c}

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def high(self) -> int:
        return self.low + len(self.coeffs) - 1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.coeffs == other.coeffs and (self.low == other.low or not self.coeffs)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.low, self.coeffs))
        return self._hash

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not self.coeffs:
            return other
        if not other.coeffs:
            return self
        lo = min(self.low, other.low)
        a = [0] * (self.low - lo) + list(self.coeffs)
        b = [0] * (other.low - lo) + list(other.coeffs)
        return LaurentPoly._raw(lo, _padd(a, b))

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._raw(self.low, (-c for c in self.coeffs))

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not self.coeffs or not other.coeffs:
            return LaurentPoly()
        return LaurentPoly._raw(self.low + other.low, _pmul(list(self.coeffs), list(other.coeffs)))

    def shift(self, k: int) -> "LaurentPoly":
        return LaurentPoly._raw(self.low + k, self.coeffs) if self.coeffs else self

    def bar(self) -> "LaurentPoly":
        """The involution q -> q^-1."""
        return LaurentPoly._raw(-self.high, reversed(self.coeffs)) if self.coeffs else self

    def evaluate(self, t: Fraction | int) -> Fraction:
        t = Fraction(t)
        v = Fraction(0)
        for c in reversed(self.coeffs):
            v = v * t + c
        return v * t**self.low if self.low >= 0 or t != 0 else v / t ** (-self.low)

    def __repr__(self) -> str:
        return f"LaurentPoly({render_poly(self)!r})"

    def __str__(self) -> str:
        return render_poly(self)


def render_poly(p: LaurentPoly, var: str = "q") -> str:
    if p.is_zero():
        return "0"
    parts: list[str] = []
    for i, c in enumerate(p.coeffs):
        if not c:
            continue
        e = p.low + i
        mag = abs(c)
        if e == 0:
            body = str(mag)
        else:
            mono = var if e == 1 else f"{var}^{e}"
            body = mono if mag == 1 else f"{mag}{mono}"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)


class QScalar:
    """Reduced fraction num/den with den in Z[q], den(0) != 0, lc(den) > 0."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: LaurentPoly | int = 0, den: LaurentPoly | int = 1):
        if isinstance(num, int):
            num = LaurentPoly.monomial(0, num)
        if isinstance(den, int):
            den = LaurentPoly.monomial(0, den)
        n, d = _canonical(num, den)
        self.num, self.den = n, d
        self._hash = None

    @classmethod
    def _make(cls, num: LaurentPoly, den: LaurentPoly) -> "QScalar":
        s = object.__new__(cls)
        s.num, s.den, s._hash = num, den, None
        return s

    @classmethod
    def from_poly(cls, p: LaurentPoly) -> "QScalar":
        return cls._make(p, _ONE_POLY)

    # arithmetic -------------------------------------------------------------
    def __add__(self, other: "QScalar | int") -> "QScalar":
        other = as_scalar(other)
        if not self.num.coeffs:
            return other
        if not other.num.coeffs:
            return self
        if self.den == other.den:
            if self.den is _ONE_POLY or self.den.coeffs == (1,):
                return QScalar._make(self.num + other.num, _ONE_POLY)
            return QScalar(self.num + other.num, self.den)
        if other.den.coeffs == (1,):
            return QScalar._make(self.num + other.num * self.den, self.den)
        if self.den.coeffs == (1,):
            return QScalar._make(self.num * other.den + other.num, other.den)
        return QScalar(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "QScalar":
        return QScalar._make(-self.num, self.den)

    def __sub__(self, other: "QScalar | int") -> "QScalar":
        return self + (-as_scalar(other))

    def __rsub__(self, other: "QScalar | int") -> "QScalar":
        return as_scalar(other) + (-self)

    def __mul__(self, other: "QScalar | int") -> "QScalar":
        other = as_scalar(other)
        if not self.num.coeffs or not other.num.coeffs:
            return ZERO
        if self.den.coeffs == (1,) and other.den.coeffs == (1,):
            return QScalar._make(self.num * other.num, _ONE_POLY)
        return QScalar(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "QScalar":
        if not self.num.coeffs:
            raise ZeroDivisionError("division by zero scalar")
        return QScalar(self.den, self.num)

    def __truediv__(self, other: "QScalar | int") -> "QScalar":
        return self * as_scalar(other).inverse()

    def __rtruediv__(self, other: "QScalar | int") -> "QScalar":
        return as_scalar(other) * self.inverse()

    def __pow__(self, k: int) -> "QScalar":
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def bar(self) -> "QScalar":
        """Apply q -> q^-1."""
        return QScalar(self.num.bar(), self.den.bar())

    # predicates -------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num.coeffs

    def is_laurent(self) -> bool:
        """True when the denominator is 1."""
        return self.den.coeffs == (1,)

    def __bool__(self) -> bool:
        return bool(self.num.coeffs)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = QScalar(other)
        if not isinstance(other, QScalar):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def evaluate(self, t: Fraction | int) -> Fraction:
        return eval_at(self, t)

    def __repr__(self) -> str:
        return f"QScalar({str(self)!r})"

    def __str__(self) -> str:
        if self.den.coeffs == (1,):
            return render_poly(self.num)
        return f"({render_poly(self.num)}) / ({render_poly(self.den)})"


_ONE_POLY = LaurentPoly.monomial(0, 1)


def _canonical(num: LaurentPoly, den: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    if den.is_zero():
        raise ZeroDivisionError("division by zero scalar")
    if num.is_zero():
        return LaurentPoly(), _ONE_POLY
    # move powers of q out of the denominator
    nlow = num.low - den.low
    a = list(num.coeffs)
    b = list(den.coeffs)
    g = _gcd(a, b)
    if len(g) > 1:
        a = _pdivexact(a, g)
        b = _pdivexact(b, g)
        assert a is not None and b is not None
    c = math.gcd(_content(a), _content(b))
    if b[-1] < 0:
        c = -c
    if c != 1:
        a = [x // c for x in a]
        b = [x // c for x in b]
    return LaurentPoly._raw(nlow, a), LaurentPoly._raw(0, b)


ZERO = QScalar(0)
ONE = QScalar(1)
q = QScalar(LaurentPoly.monomial(1))


def as_scalar(x: "QScalar | int | Fraction | LaurentPoly") -> QScalar:
    if isinstance(x, QScalar):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, int):
        return QScalar(x)
    if isinstance(x, Fraction):
        return QScalar(x.numerator, x.denominator)
    if isinstance(x, LaurentPoly):
        return QScalar.from_poly(x)
    raise TypeError(f"cannot interpret {x!r} as a scalar")


def qpow(k: int) -> QScalar:
    return QScalar.from_poly(LaurentPoly.monomial(k))


@lru_cache(maxsize=None)
def qint(n: int) -> QScalar:
    """The quantum integer [n] = q^(n-1) + q^(n-3) + ... + q^(1-n)."""
    if not isinstance(n, int) or isinstance(n, bool) or n <= 0:
        raise ValueError(f"quantum integer needs a positive integer, got {n!r}")
    coeffs = [0] * (2 * n - 1)
    for i in range(0, 2 * n - 1, 2):
        coeffs[i] = 1
    return QScalar.from_poly(LaurentPoly._raw(1 - n, coeffs))


def add(x: QScalar, y: QScalar) -> QScalar:
    return as_scalar(x) + y


def sub(x: QScalar, y: QScalar) -> QScalar:
    return as_scalar(x) - y


def mul(x: QScalar, y: QScalar) -> QScalar:
    return as_scalar(x) * y


def neg(x: QScalar) -> QScalar:
    return -as_scalar(x)


def inv(x: QScalar) -> QScalar:
    return as_scalar(x).inverse()


def eval_at(x: QScalar, t: Fraction | int) -> Fraction:
    """Substitute q := t exactly."""
    x = as_scalar(x)
    t = Fraction(t)
    if t == 0:
        raise ValueError("cannot evaluate at q = 0")
    d = x.den.evaluate(t)
    if d == 0:
        raise PoleError(f"pole of {x} at q = {t}")
    return x.num.evaluate(t) / d


# ---------------------------------------------------------------------------
# factoring into quantum integers


@lru_cache(maxsize=None)
def _cyclotomic(d: int) -> tuple[int, ...]:
    """Coefficients of the d-th cyclotomic polynomial, constant term first."""
    p = [-1] + [0] * (d - 1) + [1]
    for e in range(1, d):
        if d % e == 0:
            p = _pdivexact(p, list(_cyclotomic(e)))
    return tuple(p)


def _cyclotomic_part(coeffs: list[int], top: int) -> tuple[dict[int, int], list[int]]:
    mult: dict[int, int] = {}
    rest = list(coeffs)
    for d in range(1, top + 1):
        phi = list(_cyclotomic(d))
        while len(rest) >= len(phi):
            quo = _pdivexact(rest, phi)
            if quo is None:
                break
            rest = _trim(quo)
            mult[d] = mult.get(d, 0) + 1
    return mult, rest


def qint_factor(x: QScalar, max_n: int = 24) -> tuple[int, int, dict[int, int]] | None:
    """Write x as sign * q^k * prod [n]^e_n, or return None.

    Uses q^(n-1)[n] = prod of Phi_d over d | 2n, d > 2: the exponent of
    [n] is read off Phi_2n after removing the contributions of multiples.
    """
    x = as_scalar(x)
    if x.is_zero():
        return None
    top = 2 * max_n
    vn, rn = _cyclotomic_part(list(x.num.coeffs), top)
    vd, rd = _cyclotomic_part(list(x.den.coeffs), top)
    if len(rn) != 1 or len(rd) != 1 or abs(rn[0]) != 1 or abs(rd[0]) != 1:
        return None
    v = {d: vn.get(d, 0) - vd.get(d, 0) for d in set(vn) | set(vd)}
    if v.get(1, 0) or v.get(2, 0):
        return None
    e: dict[int, int] = {}
    for n in range(max_n, 1, -1):
        k = v.get(2 * n, 0) - sum(e.get(m, 0) for m in range(2 * n, max_n + 1, n))
        if k:
            e[n] = k
    for d in range(3, top + 1):
        if sum(k for n, k in e.items() if (2 * n) % d == 0) != v.get(d, 0):
            return None
    shift = x.num.low - x.den.low + sum(k * (n - 1) for n, k in e.items())
    return rn[0] * rd[0], shift, dict(sorted(e.items()))


# ---------------------------------------------------------------------------
# text parsing: accepts the rendered form and quantum-integer shorthand

_TOKEN = re.compile(r"\s*(?:(\d+)|(q)|(\[)|(\])|(\^)|([-+*/()]))")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.tok = None
        self._advance()

    def _advance(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        if self.pos >= len(self.text):
            self.tok = None
            return
        m = _TOKEN.match(self.text, self.pos)
        if not m:
            raise ValueError(f"unexpected character {self.text[self.pos]!r} at {self.pos} in {self.text!r}")
        self.start = m.start(0) + (len(m.group(0)) - len(m.group(0).lstrip()))
        self.pos = m.end()
        self.tok = m.group(0).strip()

    def _expect(self, t: str) -> None:
        if self.tok != t:
            raise ValueError(f"expected {t!r} in {self.text!r}")
        self._advance()

    def parse(self) -> QScalar:
        v = self.expr()
        if self.tok is not None:
            raise ValueError(f"trailing input {self.tok!r} in {self.text!r}")
        return v

    def expr(self) -> QScalar:
        if self.tok in ("+", "-"):
            sign = self.tok
            self._advance()
            v = self.term()
            v = -v if sign == "-" else v
        else:
            v = self.term()
        while self.tok in ("+", "-"):
            sign = self.tok
            self._advance()
            t = self.term()
            v = v - t if sign == "-" else v + t
        return v

    def _starts_factor(self) -> bool:
        return self.tok is not None and (self.tok.isdigit() or self.tok in ("q", "[", "("))

    def term(self) -> QScalar:
        v = self.power()
        while True:
            if self.tok == "*":
                self._advance()
                v = v * self.power()
            elif self.tok == "/":
                self._advance()
                v = v / self.power()
            elif self._starts_factor():
                v = v * self.power()
            else:
                return v

    def power(self) -> QScalar:
        base = self.atom()
        if self.tok == "^":
            self._advance()
            sign = 1
            if self.tok in ("-", "+"):
                sign = -1 if self.tok == "-" else 1
                self._advance()
            if self.tok is None or not self.tok.isdigit():
                raise ValueError(f"bad exponent in {self.text!r}")
            e = sign * int(self.tok)
            self._advance()
            return base**e
        return base

    def atom(self) -> QScalar:
        t = self.tok
        if t is None:
            raise ValueError(f"unexpected end of {self.text!r}")
        if t.isdigit():
            self._advance()
            return QScalar(int(t))
        if t == "q":
            self._advance()
            return q
        if t == "[":
            self._advance()
            if self.tok is None or not self.tok.isdigit():
                raise ValueError(f"bad quantum integer in {self.text!r}")
            n = int(self.tok)
            self._advance()
            self._expect("]")
            return qint(n)
        if t == "(":
            self._advance()
            v = self.expr()
            self._expect(")")
            return v
        if t == "-":
            self._advance()
            return -self.power()
        raise ValueError(f"unexpected token {t!r} in {self.text!r}")


def parse_scalar(text: str) -> QScalar:
    """Parse '-q^-6 - q^-4', '(1) / (q^2 + 1)', or '[2][7]/([3][4])'."""
    return _Parser(text).parse()
