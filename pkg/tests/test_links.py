from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sp6web.engine import ChiPolynomial
from sp6web.links import (
    CATALOG,
    BraidError,
    ColoredBraidWord,
    annular_invariant,
    bmw_harness,
    chi_values,
    crossing,
    dubrovnik_oracle,
    link_invariant,
    parse_braid,
    twist_value,
    writhes,
)
from sp6web.qfield import ONE, qint, qpow
from sp6web.webs import identity, merge, pairings

i = qint
D1 = -(i(3) * i(8)) / i(4)


def same(f, g, count: int = 3) -> bool:
    pairs = pairings(f, g, count=count)
    return bool(pairs) and all(a == b for a, b in pairs)


# -- crossings ---------------------------------------------------------------


@pytest.mark.parametrize("k, l", [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (3, 3)])
def test_crossing_types(k, l):
    for sign in (1, -1):
        x = crossing(k, l, sign)
        assert (x.domain, x.codomain) == ((k, l), (l, k))


def test_bad_crossing_colour():
    with pytest.raises(BraidError):
        crossing(1, 4)


@pytest.mark.parametrize("k, l", [(1, 1), (1, 2), (2, 1)])
def test_crossing_then_inverse_is_identity(k, l):
    w = crossing(l, k, -1).compose(crossing(k, l, 1))
    assert same(w, identity((k, l)))


def test_strand_slides_under_a_vertex():
    # a merged pair crossing over a strand equals the two legs crossing one by one
    lhs = crossing(2, 1).compose(merge(1, 1, 2).tensor(identity((1,))))
    rhs = (
        identity((1,))
        .tensor(merge(1, 1, 2))
        .compose(crossing(1, 1).tensor(identity((1,))))
        .compose(identity((1,)).tensor(crossing(1, 1)))
    )
    assert same(lhs, rhs)


# -- braid words -------------------------------------------------------------


def test_parse_braid_letters():
    b = parse_braid("s1 s2^-1 -s1 s2'", "1,1,1")
    assert b.word == (1, -2, -1, -2)
    assert b.strands == 3 and b.closure == "trace"


def test_json_round_trip():
    b = parse_braid("s1 -s2 s1", "1,2,2", closure="open")
    assert ColoredBraidWord.from_json(json.dumps(b.to_json())) == b


@settings(max_examples=50, deadline=None)
@given(st.lists(st.sampled_from([1, -1, 2, -2]), max_size=6))
def test_json_round_trip_random(word):
    b = ColoredBraidWord(3, (1, 1, 1), tuple(word))
    assert ColoredBraidWord.from_json(b.to_json()) == b


@pytest.mark.parametrize(
    "call, msg",
    [
        (lambda: parse_braid("t1", "1,1"), "bad braid letter"),
        (lambda: parse_braid("s2", "1,1"), "generator"),
        (lambda: parse_braid("s1", "1,2"), "different colours"),
        (lambda: parse_braid("", "1,1,1", "plat"), "even number"),
        (lambda: parse_braid("", "1,4"), "colours"),
        (lambda: ColoredBraidWord.from_json('{"colors": [1]}'), "lacks field"),
        (lambda: ColoredBraidWord.from_json("[1"), "link JSON"),
    ],
)
def test_braid_errors(call, msg):
    with pytest.raises(BraidError, match=msg):
        call()


def test_open_braid_has_no_invariant():
    with pytest.raises(BraidError):
        link_invariant(parse_braid("s1", "1,1", "open"))


# -- link invariant ----------------------------------------------------------


def test_unknot_and_unlink():
    assert link_invariant(CATALOG["unknot"]) == D1 == ONE - i(7)
    assert link_invariant(CATALOG["unlink2"]) == D1 * D1


def test_positive_kink_scales_by_twist():
    kink = parse_braid("s1", "1,1")
    assert link_invariant(kink) == -qpow(7) * D1
    assert link_invariant(parse_braid("-s1", "1,1")) == -qpow(-7) * D1


def test_twist_values():
    assert twist_value(1) == -qpow(7)
    assert twist_value(2) == qpow(12)
    with pytest.raises(BraidError):
        twist_value(4)


def test_writhes():
    assert writhes(CATALOG["trefoil"]) == [(1, 3)]
    assert writhes(CATALOG["hopf"]) == [(1, 0), (1, 0)]
    assert writhes(CATALOG["figure-eight"]) == [(1, 0)]
    assert writhes(CATALOG["unlink2"]) == [(1, 0), (1, 0)]


def test_normalized_framing_removes_kinks():
    assert link_invariant(parse_braid("s1", "1,1"), normalize_framing=True) == D1
    tre = CATALOG["trefoil"]
    assert link_invariant(tre, normalize_framing=True) == link_invariant(tre) / twist_value(1) ** 3


@pytest.mark.parametrize("name", ["unknot", "unlink2", "hopf", "trefoil"])
def test_oracle_agrees(name):
    assert dubrovnik_oracle(CATALOG[name]) == link_invariant(CATALOG[name])


def test_oracle_is_1_coloured_only():
    with pytest.raises(BraidError):
        dubrovnik_oracle(CATALOG["hopf-12"])


def test_plat_and_trace_trefoil_agree():
    assert link_invariant(CATALOG["plat-trefoil"]) == link_invariant(CATALOG["trefoil"])


def test_mirror_image_is_bar():
    tre = CATALOG["trefoil"]
    mirror = ColoredBraidWord(tre.strands, tre.colors, tuple(-g for g in tre.word))
    assert link_invariant(mirror) == link_invariant(tre).bar()


# -- annular -----------------------------------------------------------------


def test_annular_identity_braids():
    assert annular_invariant(parse_braid("", "1,2")) == ChiPolynomial.monomial((1, 1, 0))
    assert annular_invariant(parse_braid("s1 -s1", "1,1")) == ChiPolynomial.monomial((2, 0, 0))


def test_chi_values_are_circles():
    x1, x2, x3 = chi_values()
    for c, x in zip((1, 2, 3), (x1, x2, x3)):
        assert x == link_invariant(parse_braid("", str(c)))


@pytest.mark.parametrize("name", ["hopf", "trefoil", "hopf-12"])
def test_annular_specializes_to_planar(name):
    b = CATALOG[name]
    assert annular_invariant(b).specialize(chi_values()) == link_invariant(b)


def test_annular_needs_trace():
    with pytest.raises(BraidError):
        annular_invariant(CATALOG["plat-trefoil"])


# -- BMW ---------------------------------------------------------------------


def test_bmw_on_two_strands():
    report = bmw_harness(k=2, length=3)
    assert report and all(c.passed for c in report), [c for c in report if not c.passed]


def test_bmw_far_commutation_on_four_strands():
    report = [c for c in bmw_harness(k=4, length=2) if c.relation == "4"]
    assert report and all(c.passed for c in report)
