from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sp6web.ladder import E, F, obj
from sp6web.qfield import ONE, qint
from sp6web.webs import (
    WEB_TRIPLES,
    WebSum,
    WebSyntaxError,
    WebTypeError,
    cap,
    closure_catalog,
    cup,
    evaluate_web,
    identity,
    ladderize,
    merge,
    pairings,
    parse_web,
    plat_closure,
    split,
    trace_closure,
)

i = qint
D = {1: -(i(3) * i(8)) / i(4), 2: i(7) * i(8) / i(4), 3: -(i(6) * i(7) * i(8)) / (i(2) * i(3) * i(4))}

THETA = """
obj:
slice: cup(2)
slice: covtx(2>1,1) id(2)
slice: vtx(1,1>2) id(2)
slice: cap(2)
"""


def same(f: WebSum, g: WebSum, count: int = 3) -> bool:
    pairs = pairings(f, g, count=count)
    return len(pairs) >= min(count, 1) and all(a == b for a, b in pairs)


# -- parsing -----------------------------------------------------------------


def test_parse_theta_and_round_trip():
    w = parse_web(THETA)
    assert w.domain == () and w.is_closed()
    again = parse_web(w.to_text())
    assert (again.domain, again.to_text()) == (w.domain, w.to_text())


def test_semicolons_separate_statements():
    assert parse_web("obj: 1; slice: id(1)").to_text() == parse_web("obj: 1\nslice: id(1)").to_text()


@pytest.mark.parametrize(
    "text, line, col, msg",
    [
        ("obj: 1\nslice: vtx(1,1>3)", 2, 8, "disallowed vertex"),
        ("obj: 1 1\nslice:  foo(1)", 2, 9, "unknown atom"),
        ("obj: 4", 1, 6, "bad object label"),
        ("slice: id(1)", 1, 1, "slice before obj"),
    ],
)
def test_syntax_errors_cite_position(text, line, col, msg):
    with pytest.raises(WebSyntaxError, match=msg) as info:
        parse_web(text)
    assert (info.value.line, info.value.col) == (line, col)


def test_type_errors_are_syntax_errors_too():
    with pytest.raises(WebTypeError, match="expects"):
        parse_web("obj: 1 2\nslice: cap(1) id(2)")


def test_disallowed_cosplit():
    with pytest.raises(WebSyntaxError):
        parse_web("obj: 1\nslice: covtx(1>1,2)")


def test_allowed_triples():
    assert (1, 1, 2) in WEB_TRIPLES and (2, 2, 2) in WEB_TRIPLES
    assert (1, 1, 3) not in WEB_TRIPLES


# -- ladderization -----------------------------------------------------------


def _single(m):
    [(lad, c)] = list(m)
    return lad, c


def test_merge_is_one_e_rung():
    lad, c = _single(ladderize(merge(1, 1, 2)))
    assert c == ONE
    assert [(r.direction, r.label) for r in lad.rungs] == [(E, 1)]
    assert lad.codomain == obj(2, 0)


def test_cap_is_an_e_rung_into_0prime():
    lad, _ = _single(ladderize(cap(1)))
    assert [r.direction for r in lad.rungs] == [E]
    assert lad.codomain == obj("0^1", 0)


def test_identity_has_no_rungs():
    lad, c = _single(ladderize(identity((1, 2))))
    assert c == ONE and not lad.rungs and lad.domain == obj(1, 2)


def test_222_vertex_carries_inverse_three():
    lad, c = _single(ladderize(merge(2, 2, 2)))
    assert c == ONE / i(3)
    assert {r.direction for r in lad.rungs} == {E, F}


def test_ladderized_slices_conserve_mass():
    m = ladderize(parse_web(THETA))
    for lad, _ in m:
        lad.validate()


# -- evaluation --------------------------------------------------------------


@pytest.mark.parametrize("a", [1, 2, 3])
def test_circles(a):
    assert evaluate_web(cap(a).compose(cup(a))) == D[a]


def test_theta_value():
    assert evaluate_web(THETA) == i(2) * i(3) * D[2]


def test_evaluate_web_rejects_open():
    with pytest.raises(WebTypeError):
        evaluate_web(identity((1,)))


def test_bigon_from_theta():
    # the theta is the 2-circle with a 1,1 bigon on it
    bigon = merge(1, 1, 2).compose(split(2, 1, 1))
    assert same(bigon, identity((2,)).scale(i(2) * i(3)))


def test_bigon_12_on_strand_3():
    bigon = merge(1, 2, 3).compose(split(3, 1, 2))
    other = merge(2, 1, 3).compose(split(3, 2, 1))
    assert evaluate_web(trace_closure(bigon)) == evaluate_web(trace_closure(other))


# -- isotopy -----------------------------------------------------------------


@pytest.mark.parametrize("a", [1, 2, 3])
def test_zigzag_is_identity(a):
    zig = identity((a,)).tensor(cap(a)).compose(cup(a).tensor(identity((a,))))
    zag = cap(a).tensor(identity((a,))).compose(identity((a,)).tensor(cup(a)))
    assert same(zig, identity((a,)))
    assert same(zag, identity((a,)))


def test_vertex_slides_through_a_zigzag():
    # bend the right leg of a split down and straighten it again
    bent = identity((1,)).tensor(merge(1, 1, 2)).compose(cup(1).tensor(identity((1,))))
    back = cap(1).tensor(identity((2,))).compose(identity((1,)).tensor(bent))
    assert (back.domain, back.codomain) == ((1, 1), (2,))
    assert same(back, merge(1, 1, 2))


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([1, 2, 3]), st.sampled_from([1, 2, 3]))
def test_juxtaposed_circles_multiply(a, b):
    w = cap(a).compose(cup(a)).tensor(cap(b).compose(cup(b)))
    assert evaluate_web(w) == D[a] * D[b]


def test_mirror_and_flip_preserve_closed_values():
    w = parse_web(THETA)
    ws = w.ops()
    assert evaluate_web(ws.mirror()) == evaluate_web(ws)
    assert evaluate_web(ws.flip()) == evaluate_web(ws)


# -- closures ----------------------------------------------------------------


def test_closure_catalog_has_distinct_members():
    cat = closure_catalog((1, 1), (2,), count=4)
    assert len(cat) >= 3
    assert all((h.domain, h.codomain) == ((1, 1), (2,)) for h in cat)


def test_pairings_detect_a_wrong_coefficient():
    bigon = merge(1, 1, 2).compose(split(2, 1, 1))
    pairs = pairings(bigon, identity((2,)).scale(i(2)), count=3)
    assert any(a != b for a, b in pairs)


def test_plat_closure_of_identity_is_two_circles():
    assert evaluate_web(plat_closure(identity((1, 1)))) == D[1]
    assert evaluate_web(plat_closure(identity((1, 1, 2, 2)))) == D[1] * D[2]
