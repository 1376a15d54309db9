"""Exhaustive set builders for parking preference lists.

The candidate space is [m]^n exactly (or its nondecreasing slice); no
pruning beyond running the experiment itself, so these sets serve as the
ground-truth oracle for every closed form.  Invariance is decided once
per rearrangement class and expanded, which cuts the work by the
multinomial factor without changing the result.
"""

from __future__ import annotations

import enum
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations_with_replacement, product
from math import comb
from typing import Iterator, Sequence

from .core import CarLengths, Rule, raw_park
from .predicates import multiset_permutations, rearrangement_failure

__all__ = [
    "BudgetExceededError",
    "DEFAULT_BUDGET",
    "EnumerationResult",
    "Filter",
    "default_budget",
    "enumerate_set",
    "multiset_permutations",
    "nondecreasing_tuples",
]

DEFAULT_BUDGET = 10**8
BUDGET_ENV_VAR = "PARKING_LAB_BUDGET"


def default_budget() -> int:
    """Experiment budget, overridable through PARKING_LAB_BUDGET."""
    raw = os.environ.get(BUDGET_ENV_VAR)
    return int(raw) if raw else DEFAULT_BUDGET


class BudgetExceededError(RuntimeError):
    """Raised before starting work whose projected cost is too large."""

    def __init__(self, projected: int, budget: int):
        super().__init__(
            f"projected {projected} parking experiments exceed the budget of "
            f"{budget}; raise --budget or {BUDGET_ENV_VAR}"
        )
        self.projected = projected
        self.budget = budget


class Filter(enum.Enum):
    ALL = "all"
    INVARIANT = "invariant"
    NONDECREASING = "nondecreasing"
    NONDECREASING_INVARIANT = "nondecreasing-invariant"

    @classmethod
    def coerce(cls, value: "Filter | str") -> "Filter":
        if isinstance(value, Filter):
            return value
        try:
            return cls(value.lower())
        except ValueError:
            options = ", ".join(f.value for f in cls)
            raise ValueError(f"unknown filter {value!r}; expected one of {options}") from None


def nondecreasing_tuples(n: int, m: int) -> Iterator[tuple[int, ...]]:
    """All comb(m+n-1, n) nondecreasing tuples over [m], lexicographic."""
    if n < 1 or m < 1:
        raise ValueError("need n >= 1 and m >= 1")
    return combinations_with_replacement(range(1, m + 1), n)


@dataclass(frozen=True)
class EnumerationResult:
    """A fully materialized preference-list set.

    items are lexicographically sorted, duplicate-free tuples; count is
    always len(items).
    """

    y: tuple[int, ...]
    rule: Rule
    filter: Filter
    items: tuple[tuple[int, ...], ...]

    @property
    def count(self) -> int:
        return len(self.items)

    def to_records(self) -> Iterator[dict]:
        """Streaming record form: header, one record per item, count."""
        yield {
            "kind": "enumeration",
            "y": list(self.y),
            "rule": self.rule.value,
            "filter": self.filter.value,
        }
        for item in self.items:
            yield {"kind": "item", "x": list(item)}
        yield {"kind": "count", "count": self.count}

    @classmethod
    def from_records(cls, records: Sequence[dict]) -> "EnumerationResult":
        """Rebuild a result from its record stream (round-trip of to_records)."""
        header = records[0]
        if header.get("kind") != "enumeration":
            raise ValueError("record stream does not start with an enumeration header")
        items = tuple(
            tuple(r["x"]) for r in records[1:] if r.get("kind") == "item"
        )
        tail = records[-1]
        if tail.get("kind") == "count" and tail["count"] != len(items):
            raise ValueError(f"count record says {tail['count']}, stream has {len(items)} items")
        return cls(
            y=tuple(header["y"]),
            rule=Rule(header["rule"]),
            filter=Filter(header["filter"]),
            items=items,
        )


def projected_experiments(y: CarLengths, filt: Filter) -> int:
    """Upper-bound experiment count used by the budget guard."""
    m, n = y.street_length(), y.arity
    if filt in (Filter.ALL, Filter.INVARIANT):
        return m**n
    return comb(m + n - 1, n)


def _slice_items(
    lengths: tuple[int, ...], rule: Rule, filt: Filter, first: int
) -> list[tuple[int, ...]]:
    """Matching items whose first (or smallest, for classes) entry is fixed.

    Partitioning on the first coordinate keeps slices disjoint and, for
    the order-complete filters, already lexicographically sorted.
    """
    m = sum(lengths)
    n = len(lengths)
    out: list[tuple[int, ...]] = []
    if filt is Filter.ALL:
        for rest in product(range(1, m + 1), repeat=n - 1):
            x = (first, *rest)
            if raw_park(lengths, x, rule)[0] is not None:
                out.append(x)
    elif filt is Filter.NONDECREASING:
        for rest in combinations_with_replacement(range(first, m + 1), n - 1):
            x = (first, *rest)
            if raw_park(lengths, x, rule)[0] is not None:
                out.append(x)
    else:
        for rest in combinations_with_replacement(range(first, m + 1), n - 1):
            cls = (first, *rest)
            if rearrangement_failure(lengths, cls, rule) is None:
                if filt is Filter.NONDECREASING_INVARIANT:
                    out.append(cls)
                else:
                    out.extend(multiset_permutations(cls))
    return out


def _slice_worker(args: tuple[tuple[int, ...], str, str, int]) -> list[tuple[int, ...]]:
    lengths, rule_value, filter_value, first = args
    return _slice_items(lengths, Rule(rule_value), Filter(filter_value), first)


def enumerate_set(
    y: CarLengths | Sequence[int],
    rule: Rule | str = Rule.ASSORTMENT,
    filt: Filter | str = Filter.ALL,
    budget: int | None = None,
    jobs: int = 1,
) -> EnumerationResult:
    """Materialize a preference-list set by exhaustive scan.

    filter=all/nondecreasing keep the lists that park under the rule;
    the invariant filters keep those whose every distinct rearrangement
    parks.  Work may be split across processes (split on the first
    coordinate, merged in order), so the result is identical for any
    jobs value.
    """
    y = CarLengths.coerce(y)
    rule = Rule.coerce(rule)
    filt = Filter.coerce(filt)
    if budget is None:
        budget = default_budget()
    projected = projected_experiments(y, filt)
    if projected > budget:
        raise BudgetExceededError(projected, budget)

    m = y.street_length()
    tasks = [(y.lengths, rule.value, filt.value, first) for first in range(1, m + 1)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            slices = list(pool.map(_slice_worker, tasks))
    else:
        slices = [_slice_worker(t) for t in tasks]

    items: list[tuple[int, ...]] = []
    for part in slices:
        items.extend(part)
    if filt is Filter.INVARIANT:
        items.sort()
    return EnumerationResult(y=y.lengths, rule=rule, filter=filt, items=tuple(items))
