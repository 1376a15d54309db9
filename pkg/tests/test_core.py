"""Simulator tests: fixtures, validation, and cross-rule properties."""

from __future__ import annotations

from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from parking_lab.core import (
    CarLengths,
    ParkOutcome,
    PreferenceList,
    Rule,
    park,
    raw_park,
)

A, S = Rule.ASSORTMENT, Rule.SEQUENCE


def outcome(y, x, rule):
    lengths = CarLengths(y)
    return park(lengths, PreferenceList(x, lengths), rule)


# -- fixtures ---------------------------------------------------------------


def test_three_car_contrast_fixture():
    # (1,3,1) with (2,1,1): the long car passes the blocked window under
    # the assortment rule but collides under the sequence rule.
    assert outcome((1, 3, 1), (2, 1, 1), A).starts == (2, 3, 1)
    failed = outcome((1, 3, 1), (2, 1, 1), S)
    assert failed.first_failed_car == 2
    assert failed.occupancy_at_failure == (0, 1, 0, 0, 0)


def test_rearrangement_contrast_fixture():
    assert outcome((1, 2, 2), (1, 2, 1), A).starts == (1, 2, 4)
    assert outcome((1, 2, 2), (1, 2, 1), S).starts == (1, 2, 4)
    assert outcome((1, 2, 2), (2, 1, 1), A).first_failed_car == 3
    assert outcome((1, 2, 2), (2, 1, 1), S).first_failed_car == 2


def test_equal_lengths_fixture():
    assert outcome((2, 2, 2), (3, 2, 1), A).starts == (3, 5, 1)
    assert outcome((2, 2, 2), (3, 2, 1), S).first_failed_car == 2


@pytest.mark.parametrize("c,n", [(1, 1), (1, 4), (2, 3), (3, 2)])
@pytest.mark.parametrize("rule", [A, S])
def test_all_ones_packs_in_order(c, n, rule):
    got = outcome((c,) * n, (1,) * n, rule)
    assert got.starts == tuple(1 + c * i for i in range(n))


def test_failure_snapshot_shows_earlier_cars():
    got = outcome((1, 2, 2), (2, 1, 1), A)
    # cars 1 and 2 parked at 2 and 3..4 before car 3 gave up
    assert got.occupancy_at_failure == (0, 1, 2, 2, 0)
    assert got.occupancy(CarLengths((1, 2, 2))) == (0, 1, 2, 2, 0)


def test_parked_order_view():
    got = outcome((2, 2, 2), (3, 2, 1), A)
    assert got.parked_order() == (3, 1, 2)
    with pytest.raises(ValueError):
        outcome((1, 2, 2), (2, 1, 1), A).parked_order()


# -- construction validation ------------------------------------------------


def test_car_lengths_validation():
    with pytest.raises(ValueError):
        CarLengths(())
    with pytest.raises(ValueError):
        CarLengths((1, 0))
    y = CarLengths((1, 2, 1))
    assert y.street_length() == 4
    assert y.restrict(2) == CarLengths((1, 2))
    assert y.drop(2) == CarLengths((1, 1))
    with pytest.raises(ValueError):
        y.restrict(0)
    with pytest.raises(ValueError):
        y.drop(4)


def test_preference_list_validation():
    y = CarLengths((1, 2))
    with pytest.raises(ValueError):
        PreferenceList((1,), y)
    with pytest.raises(ValueError):
        PreferenceList((1, 4), y)
    with pytest.raises(ValueError):
        PreferenceList((0, 1), y)
    other = CarLengths((2, 1))
    with pytest.raises(ValueError):
        park(other, PreferenceList((1, 1), y), A)


def test_rule_coercion():
    assert Rule.coerce("sequence") is S
    assert Rule.coerce(A) is A
    with pytest.raises(ValueError):
        Rule.coerce("circular")


# -- exhaustive cross-rule facts --------------------------------------------


def test_rules_coincide_for_up_to_two_cars():
    for n in (1, 2):
        for y in product((1, 2, 3, 4), repeat=n):
            m = sum(y)
            for x in product(range(1, m + 1), repeat=n):
                assert (raw_park(y, x, S)[0] is None) == (raw_park(y, x, A)[0] is None), (y, x)


def test_sequence_success_is_assortment_success_with_same_starts():
    # exhaustive at desk scale: n <= 4, lengths <= 3
    for n in (1, 2, 3, 4):
        for y in product((1, 2, 3), repeat=n):
            m = sum(y)
            for x in product(range(1, m + 1), repeat=n):
                seq = raw_park(y, x, S)[0]
                if seq is not None:
                    assert raw_park(y, x, A)[0] == seq, (y, x)


# -- properties --------------------------------------------------------------

lengths_strategy = st.lists(st.integers(1, 4), min_size=1, max_size=4)


@st.composite
def experiments(draw):
    y = tuple(draw(lengths_strategy))
    m = sum(y)
    x = tuple(draw(st.integers(1, m)) for _ in y)
    return y, x


@given(experiments(), st.sampled_from([A, S]))
def test_success_covers_street_exactly(exp, rule):
    y, x = exp
    got = outcome(y, x, rule)
    if got.success:
        cells = got.occupancy(CarLengths(y))
        assert sorted(set(cells)) == list(range(1, len(y) + 1))
        assert all(cells.count(car) == y[car - 1] for car in range(1, len(y) + 1))


@given(experiments(), st.sampled_from([A, S]))
def test_cars_never_park_before_their_preference(exp, rule):
    y, x = exp
    got = outcome(y, x, rule)
    if got.success:
        assert all(s >= p for s, p in zip(got.starts, x))


@given(st.lists(st.integers(1, 5), min_size=1, max_size=5), st.sampled_from([A, S]))
def test_all_ones_always_parks(y, rule):
    assert outcome(tuple(y), (1,) * len(y), rule).success


@given(experiments(), st.sampled_from([A, S]))
@settings(max_examples=200)
def test_park_is_deterministic(exp, rule):
    y, x = exp
    lengths = CarLengths(y)
    prefs = PreferenceList(x, lengths)
    assert park(lengths, prefs, rule) == park(lengths, prefs, rule)


def test_outcome_invariant_rejects_inconsistent_construction():
    with pytest.raises(ValueError):
        ParkOutcome(starts=None).parked_order()
