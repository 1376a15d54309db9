"""Membership and invariance deciders built on the simulator.

A preference list is *invariant* for given car lengths when every distinct
rearrangement of it parks.  Weaker probes are also provided: invariance
under a single index permutation, or under a set of them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .core import CarLengths, ParkOutcome, PreferenceList, Rule, park, raw_park


@dataclass(frozen=True)
class Permutation:
    """Bijection on 1..n, stored as the tuple of images of 1, 2, ..., n.

    Applied to a preference list by position: entry k of the rearranged
    list is the mapping[k]-th entry of the original.
    """

    mapping: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "mapping", tuple(int(v) for v in self.mapping))
        n = len(self.mapping)
        if sorted(self.mapping) != list(range(1, n + 1)):
            raise ValueError(f"{self.mapping} is not a permutation of 1..{n}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def adjacent(cls, i: int, n: int) -> "Permutation":
        """The transposition swapping positions i and i+1 (1-based)."""
        if not 1 <= i <= n - 1:
            raise ValueError(f"adjacent swap index {i} out of range [1, {n - 1}]")
        images = list(range(1, n + 1))
        images[i - 1], images[i] = images[i], images[i - 1]
        return cls(tuple(images))

    @property
    def arity(self) -> int:
        return len(self.mapping)

    def apply(self, seq: Sequence[int]) -> tuple[int, ...]:
        if len(seq) != self.arity:
            raise ValueError(f"cannot apply arity-{self.arity} permutation to {len(seq)} entries")
        return tuple(seq[k - 1] for k in self.mapping)

    def __mul__(self, other: "Permutation") -> "Permutation":
        """Function composition: (p * q).apply(x) == p.apply(q.apply(x))."""
        if self.arity != other.arity:
            raise ValueError("cannot compose permutations of different arities")
        return Permutation(tuple(other.mapping[self.mapping[k] - 1] for k in range(self.arity)))


@dataclass(frozen=True)
class Witness:
    """A failing rearrangement together with its parking outcome."""

    rearrangement: tuple[int, ...]
    outcome: ParkOutcome


@dataclass(frozen=True)
class InvarianceVerdict:
    invariant: bool
    witness: Witness | None = None

    def __post_init__(self) -> None:
        if self.invariant == (self.witness is not None):
            raise ValueError("witness must be present exactly when not invariant")


def multiset_permutations(x: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """All distinct rearrangements of x, in lexicographic order.

    Classic in-place next-permutation stepping: n!/prod(multiplicities!)
    tuples, no duplicates.
    """
    cur = sorted(x)
    n = len(cur)
    if n == 0:
        return
    while True:
        yield tuple(cur)
        # Rightmost ascent; none means cur is the last permutation.
        i = n - 2
        while i >= 0 and cur[i] >= cur[i + 1]:
            i -= 1
        if i < 0:
            return
        j = n - 1
        while cur[j] <= cur[i]:
            j -= 1
        cur[i], cur[j] = cur[j], cur[i]
        cur[i + 1 :] = reversed(cur[i + 1 :])


def is_member(y: CarLengths, x: PreferenceList, rule: Rule = Rule.ASSORTMENT) -> bool:
    """True iff the experiment parks every car."""
    return park(y, x, rule).success


def rearrangement_failure(
    lengths: Sequence[int], prefs: Sequence[int], rule: Rule
) -> tuple[int, ...] | None:
    """Lexicographically smallest rearrangement of prefs that fails to park.

    Returns None when every distinct rearrangement parks.  Raw-tuple hot
    path shared by the invariance decider and the enumeration driver.
    """
    for candidate in multiset_permutations(prefs):
        if raw_park(lengths, candidate, rule)[0] is None:
            return candidate
    return None


def is_invariant(
    y: CarLengths, x: PreferenceList, rule: Rule = Rule.ASSORTMENT
) -> InvarianceVerdict:
    """Decide whether every distinct rearrangement of x parks under rule.

    On a negative verdict the witness is the lexicographically smallest
    failing rearrangement, so fixtures are deterministic.
    """
    rule = Rule.coerce(rule)
    failing = rearrangement_failure(y.lengths, x.prefs, rule)
    if failing is None:
        return InvarianceVerdict(invariant=True)
    outcome = park(y, PreferenceList(failing, y), rule)
    return InvarianceVerdict(invariant=False, witness=Witness(failing, outcome))


def is_pi_invariant(
    y: CarLengths, x: PreferenceList, pi: Permutation, rule: Rule = Rule.ASSORTMENT
) -> bool:
    """True iff the rearrangement of x by pi parks.

    Defined only for x that itself parks; anything else is rejected rather
    than silently reported as False.
    """
    rule = Rule.coerce(rule)
    if pi.arity != y.arity:
        raise ValueError(f"permutation arity {pi.arity} does not match {y.arity} cars")
    if not is_member(y, x, rule):
        raise ValueError("x does not park, so permutation invariance is undefined for it")
    return raw_park(y.lengths, pi.apply(x.prefs), rule)[0] is not None


def is_t_invariant(
    y: CarLengths,
    x: PreferenceList,
    perms: Iterable[Permutation],
    rule: Rule = Rule.ASSORTMENT,
) -> bool:
    """Conjunction of is_pi_invariant over a set of permutations."""
    return all(is_pi_invariant(y, x, pi, rule) for pi in perms)


def small_entry_obstruction(y: CarLengths, x: PreferenceList) -> bool:
    """Quick negative test for invariance.

    True iff some entry satisfies 1 < x_i <= min(lengths): moving that
    entry to the front strands a gap shorter than every car, so x cannot
    be invariant under the assortment rule.
    """
    k = min(y.lengths)
    return any(1 < v <= k for v in x.prefs)


def removal_shift(x: PreferenceList, y: CarLengths, j: int) -> tuple[int, ...]:
    """Drop car j and shift the remaining preferences past its length.

    Entry k of the result is max(1, x_k - y_j); the arity drops by one.
    Invariant preference lists with a single 1-entry stay invariant under
    this transform for the lengths with any one car removed.
    """
    n = y.arity
    if n < 2:
        raise ValueError("removal shift needs at least two cars")
    if not 1 <= j <= n:
        raise ValueError(f"car index {j} out of range [1, {n}]")
    shift = y.lengths[j - 1]
    return tuple(
        max(1, v - shift) for k, v in enumerate(x.prefs, 1) if k != j
    )
