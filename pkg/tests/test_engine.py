from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sp6web.engine import (
    HIGHEST,
    LOWEST,
    BudgetExceeded,
    ChiPolynomial,
    Engine,
    evaluate_closed,
    is_pbw,
    normalize_pbw,
    pair_closure,
    random_closed_ladder,
    standardize_closed,
    trace_normalize,
)
from sp6web.ladder import E, F, LabeledObject, Ladder, Morphism, obj, tensor, total_mass
from sp6web.qfield import ONE, ZERO, qint
from sp6web.relations import RungSpec, realize
from sp6web.webs import cap, cup, ladderize, merge, parse_web, split

i = qint
D1 = -(i(3) * i(8)) / i(4)
D2 = i(7) * i(8) / i(4)
D3 = -(i(6) * i(7) * i(8)) / (i(2) * i(3) * i(4))


def circle(a: int) -> Morphism:
    return ladderize(cap(a).compose(cup(a)))


# -- PBW ---------------------------------------------------------------------


def test_identity_is_already_normal():
    m = Morphism.identity(obj(1, 2))
    assert normalize_pbw(m) == m


def test_e_below_f_is_left_alone():
    lad = realize(obj(0, "0^1"), [RungSpec(0, E, 1, 0, 1, 1), RungSpec(0, F, 1, 0, 0, 0)])
    assert is_pbw(lad)
    assert normalize_pbw(lad) == Morphism.from_ladder(lad)


def test_square_010_normalizes_to_circle_scalar():
    lad = realize(obj("0^1", 0), [RungSpec(0, F, 1, 0, 1, 1), RungSpec(0, E, 1, 0, 0, 0)])
    assert not is_pbw(lad)
    assert normalize_pbw(lad) == Morphism.identity(lad.domain).scale(D1)


def test_pbw_output_postcondition():
    web = split(2, 1, 1).compose(merge(1, 1, 2)).compose(split(2, 1, 1).compose(merge(1, 1, 2)))
    out = normalize_pbw(ladderize(web))
    assert not out.is_zero()
    for lad, _ in out:
        assert is_pbw(lad)
        lad.validate()
        assert {total_mass(s) for s in lad.slices()} == {total_mass(lad.domain)}


# -- closed evaluation -------------------------------------------------------


def test_empty_morphism_evaluates_to_one():
    assert evaluate_closed(Morphism.identity(())) == ONE


def test_circles():
    assert evaluate_closed(circle(1)) == D1
    assert evaluate_closed(circle(2)) == D2
    assert evaluate_closed(circle(3)) == D3


def test_theta():
    theta = parse_web("obj:; slice: cup(2); slice: covtx(2>1,1) id(2); slice: vtx(1,1>2) id(2); slice: cap(2)")
    assert evaluate_closed(ladderize(theta)) == i(2) * i(3) * D2


def test_evaluate_closed_needs_zero_labels():
    with pytest.raises(ValueError):
        evaluate_closed(Morphism.identity(obj(1)))


def test_standardize_closed_pads_to_primes():
    lad = standardize_closed(random_closed_ladder(random.Random(3)))
    k = sum(x.exponent for x in lad.domain)
    assert [x.exponent for x in lad.domain[:k]] == [1] * k
    assert lad.codomain == lad.domain


def test_budget_is_enforced():
    eng = Engine(budget=2, use_cache=False)
    with pytest.raises(BudgetExceeded, match="budget exceeded"):
        eng.evaluate_closed(circle(3))


# -- annular trace -----------------------------------------------------------


def test_trace_of_identities():
    assert trace_normalize(Morphism.identity(obj(1))) == ChiPolynomial.monomial((1, 0, 0))
    assert trace_normalize(Morphism.identity(obj("0^1", "0^1"))) == ChiPolynomial.constant(1)
    assert trace_normalize(Morphism.identity(obj(1, 3, 1))) == ChiPolynomial.monomial((2, 0, 1))


def test_trace_of_cup_cap_is_a_contractible_circle():
    e = ladderize(cup(1).compose(cap(1)))
    assert trace_normalize(e) == ChiPolynomial.constant(D1)


def test_chi_rendering():
    p = ChiPolynomial.monomial((1, 0, 2)) + ChiPolynomial.constant(qint(2))
    assert str(p) == "q^-1 + q + x1 x3^2"


def _endos():
    return [
        Morphism.identity(obj(1)),
        ladderize(split(2, 1, 1).compose(merge(1, 1, 2))),
        ladderize(cup(1).compose(cap(1))),
        ladderize(merge(1, 2, 1).compose(split(1, 1, 2))),
        Morphism.identity(obj(2)),
    ]


@settings(max_examples=12, deadline=None)
@given(st.sampled_from(_endos()), st.sampled_from(_endos()))
def test_trace_is_multiplicative(f, g):
    assert trace_normalize(tensor(f, g)) == trace_normalize(f) * trace_normalize(g)


# -- pairing -----------------------------------------------------------------


def test_pair_closure_examples():
    id1 = Morphism.identity(obj(1))
    assert pair_closure(id1, id1) == D1
    e = ladderize(cup(1).compose(cap(1)))
    # e o e = D1 * e and the closure of e is one circle
    assert pair_closure(e, e) == D1 * D1
    assert pair_closure(id1, Morphism.zero(obj(1), obj(1))) == ZERO


# -- strategies and caching --------------------------------------------------


def test_two_strategies_agree_on_seeded_ladders():
    rng = random.Random(2024)
    lo, hi = Engine(LOWEST), Engine(HIGHEST)
    for _ in range(25):
        lad = random_closed_ladder(rng, max_mass=8)
        assert lo.evaluate_closed(lad) == hi.evaluate_closed(lad), lad


def test_random_closed_ladders_respect_mass_bound():
    rng = random.Random(5)
    for _ in range(50):
        lad = random_closed_ladder(rng, max_mass=10)
        lad.validate()
        assert total_mass(lad.domain) <= 10
        assert all(x.label == 0 for x in lad.domain + lad.codomain)


def test_cache_coherence():
    rng = random.Random(11)
    cached, fresh = Engine(use_cache=True), Engine(use_cache=False)
    ladders = [random_closed_ladder(rng, max_mass=8) for _ in range(15)]
    first = [cached.evaluate_closed(lad) for lad in ladders]
    again = [cached.evaluate_closed(lad) for lad in ladders]
    assert first == again == [fresh.evaluate_closed(lad) for lad in ladders]
    assert len(cached.cache) > 0


def test_unknown_strategy():
    with pytest.raises(ValueError):
        Engine("sideways")


def test_labeled_object_zero_ladder_value():
    lad = Ladder((LabeledObject(0, 2), LabeledObject(0, 0)))
    # a rungless closed ladder: both strategies and the uncached path agree
    assert Engine(LOWEST).evaluate_closed(lad) == Engine(HIGHEST, use_cache=False).evaluate_closed(lad)
