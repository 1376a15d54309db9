"""Deciders: membership, invariance, permutation probes, transforms."""

from __future__ import annotations

from itertools import permutations
from math import factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from parking_lab.core import CarLengths, PreferenceList, Rule, raw_park
from parking_lab.predicates import (
    Permutation,
    is_invariant,
    is_member,
    is_pi_invariant,
    is_t_invariant,
    multiset_permutations,
    removal_shift,
    small_entry_obstruction,
)

A, S = Rule.ASSORTMENT, Rule.SEQUENCE


def paired(y, x):
    lengths = CarLengths(y)
    return lengths, PreferenceList(x, lengths)


# -- membership ---------------------------------------------------------------


def test_is_member_fixtures():
    assert is_member(*paired((1, 2, 2), (1, 2, 1)), A)
    assert not is_member(*paired((1, 2, 2), (2, 1, 1)), A)
    assert is_member(*paired((2, 2, 2, 2), (1, 1, 1, 1)), S)


# -- invariance ----------------------------------------------------------------


def test_invariant_fixtures():
    assert is_invariant(*paired((1, 2, 1), (1, 1, 3)), A).invariant
    assert not is_invariant(*paired((1, 2, 2), (1, 2, 1)), A).invariant
    assert is_invariant(*paired((3, 3), (1, 1)), S).invariant


def test_invariant_witness_is_lex_smallest_failure():
    verdict = is_invariant(*paired((1, 2, 2), (1, 2, 1)), A)
    assert verdict.witness.rearrangement == (2, 1, 1)
    assert verdict.witness.outcome.first_failed_car == 3


def test_sequence_invariance_computed_set():
    # Machine-verified: under the sequence rule the invariant lists for
    # (1,2,1) are the all-ones list plus the three arrangements of (1,1,3);
    # the three arrangements of (1,1,2) are killed by (2,1,1).
    y, x = paired((1, 2, 1), (1, 1, 3))
    assert is_invariant(y, x, S).invariant
    y, x = paired((1, 2, 1), (1, 1, 2))
    verdict = is_invariant(y, x, S)
    assert not verdict.invariant
    assert verdict.witness.rearrangement == (2, 1, 1)


@given(st.lists(st.integers(1, 3), min_size=1, max_size=4), st.data())
def test_invariance_is_rearrangement_symmetric(y, data):
    lengths = CarLengths(tuple(y))
    m = lengths.street_length()
    x = tuple(data.draw(st.integers(1, m)) for _ in y)
    shuffled = data.draw(st.permutations(x))
    base = is_invariant(lengths, PreferenceList(x, lengths), A).invariant
    other = is_invariant(lengths, PreferenceList(tuple(shuffled), lengths), A).invariant
    assert base == other


# -- single-permutation probes --------------------------------------------------


def test_adjacent_swap_probes():
    y, x = paired((1, 2, 2), (1, 1, 2))
    s1 = Permutation.adjacent(1, 3)
    s2 = Permutation.adjacent(2, 3)
    assert is_pi_invariant(y, x, s2)
    assert not is_pi_invariant(y, x, s1 * s2)
    assert (s1 * s2).apply(x.prefs) == (2, 1, 1)


def test_disjoint_swaps_do_not_compose():
    y, x = paired((1, 2, 1, 2), (1, 2, 1, 2))
    s1 = Permutation.adjacent(1, 4)
    s3 = Permutation.adjacent(3, 4)
    assert is_pi_invariant(y, x, s1)
    assert is_pi_invariant(y, x, s3)
    assert not is_pi_invariant(y, x, s1 * s3)
    assert (s1 * s3).apply(x.prefs) == (2, 1, 2, 1)


def test_t_invariance():
    y, x = paired((1, 2, 2), (1, 1, 2))
    s1 = Permutation.adjacent(1, 3)
    s2 = Permutation.adjacent(2, 3)
    assert is_t_invariant(y, x, {s1, s2})
    assert not is_t_invariant(y, x, {s1, s2, s1 * s2})
    assert is_t_invariant(y, x, {Permutation.identity(3)})


def test_pi_invariance_requires_membership():
    y, x = paired((1, 2, 2), (2, 1, 1))
    with pytest.raises(ValueError):
        is_pi_invariant(y, x, Permutation.identity(3))


def test_permutation_validation_and_composition():
    with pytest.raises(ValueError):
        Permutation((1, 1, 2))
    with pytest.raises(ValueError):
        Permutation.adjacent(3, 3)
    p = Permutation((3, 1, 2))
    q = Permutation((2, 3, 1))
    x = (10, 20, 30)
    assert (p * q).apply(x) == p.apply(q.apply(x))
    with pytest.raises(ValueError):
        p.apply((1, 2))


@given(st.permutations(range(1, 5)), st.permutations(range(1, 5)))
def test_composition_matches_sequential_application(p_images, q_images):
    p, q = Permutation(tuple(p_images)), Permutation(tuple(q_images))
    x = (11, 22, 33, 44)
    assert (p * q).apply(x) == p.apply(q.apply(x))


# -- small-entry obstruction -----------------------------------------------------


def test_small_entry_obstruction_fixtures():
    assert small_entry_obstruction(*paired((2, 2, 2), (1, 2, 1)))
    assert not small_entry_obstruction(*paired((2, 2, 2), (1, 3, 1)))
    assert not small_entry_obstruction(*paired((4, 4), (1, 1)))


@given(st.lists(st.integers(1, 3), min_size=2, max_size=4), st.data())
def test_small_entry_obstruction_implies_not_invariant(y, data):
    lengths = CarLengths(tuple(y))
    m = lengths.street_length()
    x = tuple(data.draw(st.integers(1, m)) for _ in y)
    prefs = PreferenceList(x, lengths)
    if small_entry_obstruction(lengths, prefs):
        assert not is_invariant(lengths, prefs, A).invariant


# -- removal shift ----------------------------------------------------------------


def test_removal_shift_fixtures():
    y, x = paired((2, 2, 2), (1, 3, 5))
    assert removal_shift(x, y, 1) == (1, 3)
    assert removal_shift(x, y, 2) == (1, 3)
    assert removal_shift(x, y, 3) == (1, 1)
    ones_y, ones_x = paired((3, 1, 2), (1, 1, 1))
    assert removal_shift(ones_x, ones_y, 2) == (1, 1)


def test_removal_shift_rejects_single_car_and_bad_index():
    y, x = paired((3,), (1,))
    with pytest.raises(ValueError):
        removal_shift(x, y, 1)
    y2, x2 = paired((1, 2), (1, 1))
    with pytest.raises(ValueError):
        removal_shift(x2, y2, 3)


# -- distinct rearrangements --------------------------------------------------------


def test_multiset_permutations_fixtures():
    assert list(multiset_permutations((1, 1, 3))) == [(1, 1, 3), (1, 3, 1), (3, 1, 1)]
    assert len(list(multiset_permutations((1, 2, 3)))) == 6
    assert list(multiset_permutations((1, 1, 1, 1))) == [(1, 1, 1, 1)]


@given(st.lists(st.integers(1, 4), min_size=1, max_size=6))
def test_multiset_permutations_lex_distinct_complete(values):
    x = tuple(values)
    got = list(multiset_permutations(x))
    assert got == sorted(got)
    assert len(got) == len(set(got))
    expected = factorial(len(x))
    for v in set(x):
        expected //= factorial(x.count(v))
    assert len(got) == expected
    assert set(got) == set(permutations(x))
