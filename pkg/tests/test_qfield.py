from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sp6web.qfield import (
    ONE,
    ZERO,
    LaurentPoly,
    PoleError,
    QScalar,
    add,
    eval_at,
    inv,
    mul,
    neg,
    parse_scalar,
    qint,
    qint_factor,
    qpow,
    sub,
)

q = qpow(1)


def poly(d: dict[int, int]) -> QScalar:
    return QScalar(LaurentPoly(d))


# -- examples ---------------------------------------------------------------


def test_qint_small_values():
    assert qint(1) == ONE
    assert qint(2) == q + q.inverse()
    assert str(qint(3)) == "q^-2 + 1 + q^2"


def test_circle_quotient_is_laurent():
    x = qint(3) * qint(8) / qint(4)
    assert x.den == LaurentPoly({0: 1})
    assert str(x) == "q^-6 + q^-4 + q^-2 + q^2 + q^4 + q^6"


def test_qint_rejects_nonpositive():
    for bad in (0, -3):
        with pytest.raises(ValueError):
            qint(bad)


def test_additive_and_multiplicative_inverses():
    assert add(qint(2), neg(qint(2))) == ZERO
    assert mul(inv(qint(2)), qint(2)) == ONE


def test_seven_minus_one_is_circle_magnitude():
    # [7] - 1 has no constant term: the -1 cancels the middle 1 of [7]
    x = sub(qint(7), ONE)
    assert str(x) == "q^-6 + q^-4 + q^-2 + q^2 + q^4 + q^6"
    assert x == qint(3) * qint(8) / qint(4)


def test_inverse_of_zero():
    with pytest.raises(ZeroDivisionError, match="division by zero scalar"):
        inv(ZERO)


def test_eval_at_examples():
    assert eval_at(qint(2), 1) == 2
    assert eval_at(qint(3), 2) == Fraction(21, 4)


def test_eval_at_errors_are_distinct():
    with pytest.raises(PoleError):
        eval_at(ONE / (q * q - ONE), 1)
    with pytest.raises(ValueError) as info:
        eval_at(qint(2), 0)
    assert not isinstance(info.value, PoleError)


def test_one_over_two_has_no_pole_at_minus_one():
    # q + 1/q = -2 at q = -1, so 1/[2] is finite there
    assert eval_at(ONE / qint(2), -1) == Fraction(-1, 2)


def test_rendering_contract():
    assert str(-(qint(3) * qint(8)) / qint(4)) == "-q^-6 - q^-4 - q^-2 - q^2 - q^4 - q^6"
    assert str(ONE / qint(2)) == "(q) / (1 + q^2)"
    assert str(ZERO) == "0"
    assert str(poly({1: 3, -1: -2})) == "-2q^-1 + 3q"


def test_canonical_denominator():
    x = ONE / (ONE - q)
    assert x.den.coeffs[-1] > 0 and x.den.low == 0 and x.den.coeffs[0] != 0
    y = (q * q) / (q * q * q - q)
    assert y == q / (q * q - ONE)
    assert y.num == (q / (q * q - ONE)).num


def test_parse_round_trip():
    for x in (ZERO, ONE, qint(5), -(qint(6) * qint(7)) / (qint(2) * qint(3)), ONE / (q - ONE)):
        assert parse_scalar(str(x)) == x
    assert parse_scalar("-[3][8]/[4]") == -(qint(3) * qint(8)) / qint(4)
    assert parse_scalar("[3]^2/[2]") == qint(3) ** 2 / qint(2)


def test_qint_factor():
    assert qint_factor(-(qint(3) * qint(8)) / qint(4)) == (-1, 0, {3: 1, 4: -1, 8: 1})
    assert qint_factor(-qpow(7)) == (-1, 7, {})
    assert qint_factor(qint(2) + ONE) is None


# -- properties -------------------------------------------------------------


@pytest.mark.parametrize("n", range(1, 21))
def test_qint_telescopes(n):
    assert qint(n) * (q - q.inverse()) == qpow(n) - qpow(-n)


small_poly = st.dictionaries(st.integers(-4, 4), st.integers(-5, 5), max_size=4).map(poly)


@st.composite
def scalars(draw):
    num = draw(small_poly)
    den = draw(small_poly.filter(lambda p: not p.is_zero()))
    return num / den


@settings(max_examples=1000, deadline=None)
@given(scalars(), scalars(), scalars())
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == ZERO
    if not a.is_zero():
        assert a * a.inverse() == ONE


@settings(max_examples=200, deadline=None)
@given(scalars())
def test_canonical_form_is_idempotent(a):
    again = QScalar(a.num, a.den)
    assert (again.num, again.den) == (a.num, a.den)
    assert hash(again) == hash(a)


@settings(max_examples=300, deadline=None)
@given(scalars(), scalars(), st.fractions(min_value=-5, max_value=5).filter(lambda t: t != 0))
def test_eval_at_is_a_ring_map(a, b, t):
    try:
        ea, eb = eval_at(a, t), eval_at(b, t)
    except PoleError:
        return
    assert eval_at(a + b, t) == ea + eb
    assert eval_at(a * b, t) == ea * eb


@settings(max_examples=200, deadline=None)
@given(scalars())
def test_bar_is_an_involution(a):
    assert a.bar().bar() == a
    assert (a * qint(3)).bar() == a.bar() * qint(3)
