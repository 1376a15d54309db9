"""Exact simulation of one parking experiment.

A street has m = sum(lengths) spots numbered 1..m.  Cars enter in order;
car i has length lengths[i] and preferred spot prefs[i].  Two parking
rules are supported:

* assortment -- the car scans forward from its preference and takes the
  first window of its length that is entirely unoccupied.
* sequence -- the car drives to the first unoccupied spot at or after its
  preference and parks there only if its whole length fits; any occupied
  spot inside the window (a collision) or overhang past the street end
  makes it give up.

Everything here is a pure function of its inputs.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence


class Rule(enum.Enum):
    """Which parking semantics to apply."""

    ASSORTMENT = "assortment"
    SEQUENCE = "sequence"

    @classmethod
    def coerce(cls, value: "Rule | str") -> "Rule":
        if isinstance(value, Rule):
            return value
        try:
            return cls(value.lower())
        except ValueError:
            raise ValueError(f"unknown rule {value!r}; expected 'assortment' or 'sequence'") from None


@dataclass(frozen=True)
class CarLengths:
    """Ordered car lengths; defines a street of sum(lengths) spots."""

    lengths: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "lengths", tuple(int(v) for v in self.lengths))
        if len(self.lengths) < 1:
            raise ValueError("need at least one car")
        if any(v < 1 for v in self.lengths):
            raise ValueError(f"car lengths must be >= 1, got {self.lengths}")

    @classmethod
    def coerce(cls, value: "CarLengths | Iterable[int]") -> "CarLengths":
        return value if isinstance(value, CarLengths) else cls(tuple(value))

    @property
    def arity(self) -> int:
        return len(self.lengths)

    def street_length(self) -> int:
        return sum(self.lengths)

    def restrict(self, i: int) -> "CarLengths":
        """First i cars (1 <= i <= arity)."""
        if not 1 <= i <= self.arity:
            raise ValueError(f"restriction index {i} out of range [1, {self.arity}]")
        return CarLengths(self.lengths[:i])

    def drop(self, i: int) -> "CarLengths":
        """All cars except the 1-based i-th."""
        if not 1 <= i <= self.arity:
            raise ValueError(f"drop index {i} out of range [1, {self.arity}]")
        return CarLengths(self.lengths[: i - 1] + self.lengths[i:])


@dataclass(frozen=True)
class PreferenceList:
    """Preferred spots, paired with the car lengths they apply to."""

    prefs: tuple[int, ...]
    lengths: CarLengths

    def __post_init__(self) -> None:
        object.__setattr__(self, "prefs", tuple(int(v) for v in self.prefs))
        m = self.lengths.street_length()
        if len(self.prefs) != self.lengths.arity:
            raise ValueError(
                f"{len(self.prefs)} preferences for {self.lengths.arity} cars"
            )
        if any(not 1 <= v <= m for v in self.prefs):
            raise ValueError(f"preferences must lie in [1, {m}], got {self.prefs}")

    @classmethod
    def coerce(
        cls, value: "PreferenceList | Iterable[int]", lengths: CarLengths
    ) -> "PreferenceList":
        if isinstance(value, PreferenceList):
            if value.lengths != lengths:
                raise ValueError("preference list is paired with different car lengths")
            return value
        return cls(tuple(value), lengths)


@dataclass(frozen=True)
class ParkOutcome:
    """Result of one experiment: per-car start spots, or the first failure.

    On success ``starts[i]`` is the 1-based rear spot of car i+1 (the car
    covers ``starts[i] .. starts[i]+length-1``).  On failure
    ``occupancy_at_failure`` holds one cell per spot (0 = empty, else the
    1-based index of the car parked there) as the street stood when the
    failing car gave up.
    """

    starts: tuple[int, ...] | None
    first_failed_car: int | None = None
    occupancy_at_failure: tuple[int, ...] | None = None

    @property
    def success(self) -> bool:
        return self.starts is not None

    def occupancy(self, lengths: CarLengths) -> tuple[int, ...]:
        """Cell view (0 = empty) of the final street state."""
        if self.starts is None:
            assert self.occupancy_at_failure is not None
            return self.occupancy_at_failure
        return _occupancy_cells(lengths.lengths, self.starts)

    def parked_order(self) -> tuple[int, ...]:
        """Car indices sorted by street position (success only)."""
        if self.starts is None:
            raise ValueError("parking failed; no full street order")
        return tuple(
            car for _, car in sorted((s, i) for i, s in enumerate(self.starts, 1))
        )


def _occupancy_cells(lengths: Sequence[int], starts: Sequence[int]) -> tuple[int, ...]:
    cells = [0] * sum(lengths)
    for car, start in enumerate(starts, 1):
        for t in range(start - 1, start - 1 + lengths[car - 1]):
            cells[t] = car
    return tuple(cells)


def assortment_starts(
    lengths: Sequence[int], prefs: Sequence[int], m: int | None = None
) -> tuple[tuple[int, ...] | None, int]:
    """Raw assortment scan.

    Returns (starts, -1) if every car parks, else (None, i) where i is the
    1-based index of the first car that cannot park.  Occupancy is kept as
    a bitmask so window tests are O(1).  ``m`` overrides the street length
    (used when replaying a prefix of the cars on the full street).
    """
    if m is None:
        m = sum(lengths)
    occ = 0
    starts = []
    for car, (y, x) in enumerate(zip(lengths, prefs), 1):
        window = (1 << y) - 1
        limit = m - y + 1
        j = x
        while j <= limit and occ & (window << j):
            j += 1
        if j > limit:
            return None, car
        occ |= window << j
        starts.append(j)
    return tuple(starts), -1


def sequence_starts(
    lengths: Sequence[int], prefs: Sequence[int], m: int | None = None
) -> tuple[tuple[int, ...] | None, int]:
    """Raw sequence scan; same return convention as assortment_starts."""
    if m is None:
        m = sum(lengths)
    occ = 0
    starts = []
    for car, (y, x) in enumerate(zip(lengths, prefs), 1):
        j = x
        while j <= m and (occ >> j) & 1:
            j += 1
        if j + y - 1 > m:
            return None, car
        window = (1 << y) - 1
        if occ & (window << j):
            return None, car
        occ |= window << j
        starts.append(j)
    return tuple(starts), -1


_SCANNERS = {
    Rule.ASSORTMENT: assortment_starts,
    Rule.SEQUENCE: sequence_starts,
}


def raw_park(
    lengths: Sequence[int], prefs: Sequence[int], rule: Rule
) -> tuple[tuple[int, ...] | None, int]:
    """Hot-path simulation on plain tuples; no validation, no outcome object."""
    return _SCANNERS[rule](lengths, prefs)


def park(y: CarLengths, x: PreferenceList, rule: Rule = Rule.ASSORTMENT) -> ParkOutcome:
    """Run one parking experiment and report the outcome.

    The preference list must be paired with y (same arity, entries within
    the street); that is enforced at construction time, so park itself
    never raises for in-domain inputs.
    """
    if x.lengths != y:
        raise ValueError("preference list is paired with different car lengths")
    rule = Rule.coerce(rule)
    starts, failed = raw_park(y.lengths, x.prefs, rule)
    if starts is not None:
        return ParkOutcome(starts=starts)
    # Rebuild the street as it stood when the failing car gave up: the
    # earlier cars replayed on the full street.
    m = y.street_length()
    partial, _ = _SCANNERS[rule](y.lengths[: failed - 1], x.prefs[: failed - 1], m)
    assert partial is not None
    cells = [0] * m
    for car, start in enumerate(partial, 1):
        for t in range(start - 1, start - 1 + y.lengths[car - 1]):
            cells[t] = car
    return ParkOutcome(
        starts=None, first_failed_car=failed, occupancy_at_failure=tuple(cells)
    )
