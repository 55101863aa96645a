from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sp6web.ladder import (
    E,
    F,
    LabeledObject,
    Ladder,
    LadderError,
    MassViolation,
    Morphism,
    NegativeExponent,
    ObjectMismatch,
    Rung,
    VertexViolation,
    compose,
    make_rung,
    mass,
    obj,
    tensor,
    total_mass,
    validate_rung,
    vertex_ok,
)
from sp6web.qfield import qint

L = LabeledObject


def test_mass_examples():
    assert mass(L(0, 0)) == 0
    assert mass(L(2, 1)) == 4
    assert mass(L(3, 2)) == 7


def test_valid_rung_from_11_to_02():
    r = Rung(0, F, 1, L(0, 0), L(2, 0))
    exponent, new = validate_rung(obj(1, 1), r)
    assert exponent == 0
    assert new == obj(0, 2)


def test_label_zero_rung_without_exponent_has_no_mass():
    with pytest.raises(MassViolation):
        validate_rung(obj(1, 1), Rung(0, F, 0, L(1, 0), L(1, 0)))


def test_vertex_222_is_rejected():
    # (2,2) -> (0,2^1) needs the triple (2,2,2) on the right upright
    with pytest.raises(VertexViolation):
        validate_rung(obj(2, 2), Rung(0, F, 2, L(0, 0), L(2, 1)))


def test_negative_exponent_and_bad_column():
    with pytest.raises(NegativeExponent):
        make_rung(obj(1, 1), 0, F, 1, 1, 0, 0)
    with pytest.raises(LadderError):
        validate_rung(obj(1, 1), Rung(1, F, 1, L(0, 0), L(2, 0)))


def _trichotomy(a: int, b: int, c: int) -> bool:
    clauses = [
        (a == b and c == 0) or (a == c and b == 0) or (b == c and a == 0),
        sorted((a, b, c)) == [1, 1, 2],
        bool(a and b and c) and len({a, b, c}) == 3,
    ]
    return sum(clauses) == 1


def test_vertex_condition_matches_trichotomy():
    for a, b, c in itertools.product(range(4), repeat=3):
        assert vertex_ok(a, b, c) == _trichotomy(a, b, c)


def test_validate_rung_exhaustive_small_slices():
    """Every accepted rung satisfies the conditions checked from scratch."""
    objs = [L(a, e) for a in range(4) for e in range(2)]
    accepted = 0
    for bl, br in itertools.product(objs, repeat=2):
        for d, lab, tl, tr in itertools.product((E, F), range(4), objs, objs):
            r = Rung(0, d, lab, tl, tr)
            gain_left = mass(tl) - mass(bl)
            gain_right = mass(tr) - mass(br)
            m = -gain_left if d == F else gain_left
            expect = (
                gain_left == -gain_right
                and m > 0
                and m >= lab
                and (m - lab) % 2 == 0
                and _trichotomy(bl.label, lab, tl.label)
                and _trichotomy(br.label, lab, tr.label)
            )
            try:
                ex, new = validate_rung((bl, br), r)
            except LadderError:
                assert not expect, (bl, br, r)
                continue
            accepted += 1
            assert expect, (bl, br, r)
            assert ex == (m - lab) // 2
            assert total_mass(new) == total_mass((bl, br))
    assert accepted > 100


def test_compose_identity_laws_and_stacking():
    d = obj(1, 1)
    r = make_rung(d, 0, F, 1, 0, 0, 2)
    lad = Morphism.from_ladder(Ladder(d, (r,)))
    assert compose(Morphism.identity(lad.codomain), lad) == lad
    assert compose(lad, Morphism.identity(d)) == lad
    up = Morphism.from_ladder(Ladder(lad.codomain, (make_rung(lad.codomain, 0, E, 1, 0, 1, 1),)))
    both = compose(up, lad)
    [(l2, c)] = list(both)
    assert len(l2.rungs) == 2 and c == 1


def test_compose_mismatch():
    with pytest.raises(ObjectMismatch):
        compose(Morphism.identity(obj(1)), Morphism.identity(obj(2)))


def test_tensor_units():
    f = Morphism.from_ladder(Ladder(obj(1, 1), (make_rung(obj(1, 1), 0, F, 1, 0, 0, 2),)), qint(2))
    empty = Morphism.identity(())
    assert tensor(empty, f) == f
    assert tensor(f, empty) == f
    assert tensor(Morphism.identity(obj(1)), Morphism.identity(obj(2))) == Morphism.identity(obj(1, 2))


def test_serialization_format():
    lad = Ladder.build([(1, 0), (1, 0)], [Rung(0, F, 1, L(0, 0), L(2, 0))])
    assert lad.serialize() == "1^0 1^0 | (0,F,1)[0^0 2^0]"


def test_far_rungs_commute_canonically():
    d = obj(1, 1, 1, 1)
    a = make_rung(d, 0, F, 1, 0, 0, 2)
    b = make_rung(d, 2, F, 1, 0, 0, 2)
    assert Ladder(d, (a, b)) == Ladder(d, (b, a))


def test_flips_are_involutions():
    d = obj(1, 2, 1)
    r1 = make_rung(d, 0, F, 1, 0, 0, 3)
    r2 = make_rung((r1.left, r1.right, d[2]), 1, F, 1, 0, 2, 2)
    lad = Ladder.build(d, (r1, r2))
    assert lad.vertical_flip().vertical_flip() == lad
    assert lad.horizontal_mirror().horizontal_mirror() == lad
    assert lad.vertical_flip().domain == lad.codomain


# -- random ladders ----------------------------------------------------------

objects = st.builds(LabeledObject, st.integers(0, 3), st.integers(0, 2))


def _walk(draw, dom: tuple) -> Ladder:
    w = len(dom)
    cur, rungs = dom, []
    for _ in range(draw(st.integers(0, 5))):
        c = draw(st.integers(0, w - 2))
        d = draw(st.sampled_from((E, F)))
        lab = draw(st.integers(0, 3))
        ex = draw(st.integers(0, 2))
        try:
            r = make_rung(cur, c, d, lab, ex, draw(st.integers(0, 3)), draw(st.integers(0, 3)))
        except LadderError:
            continue
        rungs.append(r)
        cur = cur[:c] + (r.left, r.right) + cur[c + 2 :]
    return Ladder(dom, tuple(rungs))


@st.composite
def ladders(draw, width=None):
    w = width or draw(st.integers(2, 4))
    return _walk(draw, tuple(draw(objects) for _ in range(w)))


@st.composite
def composable(draw):
    """(upper, lower) with upper.domain == lower.codomain."""
    lower = draw(ladders(width=2))
    return _walk(draw, lower.codomain), lower


@settings(max_examples=300, deadline=None)
@given(ladders())
def test_mass_is_conserved(lad):
    lad.validate()
    masses = {total_mass(s) for s in lad.slices()}
    assert masses == {total_mass(lad.domain)}


@settings(max_examples=150, deadline=None)
@given(composable(), composable())
def test_interchange_law(ab, cd):
    A, B = (Morphism.from_ladder(x, qint(2)) for x in ab)
    C, D = (Morphism.from_ladder(x) for x in cd)
    left = tensor(compose(A, B), compose(C, D))
    right = compose(tensor(A, C), tensor(B, D))
    assert left == right
    for lad, _ in left:
        lad.validate()
