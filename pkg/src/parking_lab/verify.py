"""Differential verification: closed forms against brute-force oracles.

A sweep walks every car-length list in a range (lexicographic order) and
runs a set of named checks on each.  Checks backed by a proven statement
are *fatal*: any disagreement is an implementation bug and should fail
the process.  The four-car formula audit is the one non-fatal check; its
disagreements are findings to report, never errors.

A check that does not apply to a swept length list (wrong arity, or a
constant-lengths check on non-constant input) contributes no instances
rather than erroring, so one spec can drive mixed suites.

Reports are deterministic: byte-identical across runs and worker counts.
Wall time is kept on the report object but never serialized.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from math import comb, factorial
from typing import Callable, Iterable, Sequence

from .closed_form import (
    catalan,
    constant_invariant,
    first_invariant_probe,
    inv_pair_set,
    inv_triple_set,
    is_minimally_invariant,
    is_minimally_invariant_alternate,
    mi_pair,
    mi_quadruple_conjecture,
    mi_triple,
    pf_count,
    ps_count_formula,
)
from .core import CarLengths, Rule, raw_park
from .enumeration import BudgetExceededError, default_budget
from .predicates import multiset_permutations, rearrangement_failure

Lengths = tuple[int, ...]
Evaluation = tuple[object, object, dict | None]


class ReplayError(RuntimeError):
    """Base for witness replay failures."""


class NoWitnessError(ReplayError):
    """The replayed entry carries no witness (it was an agreement)."""


class StaleWitnessError(ReplayError):
    """The recorded values no longer reproduce."""


# ---------------------------------------------------------------------------
# brute-force helpers shared by the comparators


def _classes(m: int, n: int) -> Iterable[Lengths]:
    from itertools import combinations_with_replacement

    return combinations_with_replacement(range(1, m + 1), n)


def _invariant_classes(lengths: Lengths, rule: Rule) -> list[Lengths]:
    """Nondecreasing representatives whose every rearrangement parks."""
    m = sum(lengths)
    return [
        cls
        for cls in _classes(m, len(lengths))
        if rearrangement_failure(lengths, cls, rule) is None
    ]


def _brute_minimally_invariant(lengths: Lengths) -> bool:
    """Full enumeration route: the all-ones class is the only invariant one."""
    n = len(lengths)
    ones = (1,) * n
    for cls in _classes(sum(lengths), n):
        if cls != ones and rearrangement_failure(lengths, cls, Rule.ASSORTMENT) is None:
            return False
    return True


def _perm_count(cls: Lengths) -> int:
    n = len(cls)
    total = factorial(n)
    for v in set(cls):
        total //= factorial(cls.count(v))
    return total


def _is_constant(lengths: Lengths) -> bool:
    return len(set(lengths)) == 1


def _is_strictly_increasing(lengths: Lengths) -> bool:
    return all(a < b for a, b in zip(lengths, lengths[1:]))


def _probe_witness(lengths: Lengths) -> dict | None:
    w = first_invariant_probe(CarLengths(lengths))
    return None if w is None else {"w": w}


# ---------------------------------------------------------------------------
# comparators; each returns (closed_form_value, oracle_value, witness)


def _eval_mi_pair(lengths: Lengths) -> Evaluation:
    y = CarLengths(lengths)
    return mi_pair(y), is_minimally_invariant(y), _probe_witness(lengths)


def _eval_mi_triple(lengths: Lengths) -> Evaluation:
    y = CarLengths(lengths)
    return mi_triple(y), is_minimally_invariant(y), _probe_witness(lengths)


def _eval_mi_alternate(lengths: Lengths) -> Evaluation:
    y = CarLengths(lengths)
    return (
        is_minimally_invariant_alternate(y),
        is_minimally_invariant(y),
        _probe_witness(lengths),
    )


def _eval_conjecture(lengths: Lengths) -> Evaluation:
    y = CarLengths(lengths)
    return mi_quadruple_conjecture(y), is_minimally_invariant(y), _probe_witness(lengths)


def _eval_pair_set(lengths: Lengths) -> Evaluation:
    formula = sorted(inv_pair_set(CarLengths(lengths)))
    brute: list[Lengths] = []
    for cls in _invariant_classes(lengths, Rule.ASSORTMENT):
        brute.extend(multiset_permutations(cls))
    brute.sort()
    witness = None
    if formula != brute:
        diff = sorted(set(formula) ^ set(brute))
        witness = {"difference": [list(x) for x in diff]}
    return [list(x) for x in formula], [list(x) for x in brute], witness


def _eval_triple_set(lengths: Lengths) -> Evaluation:
    formula = sorted(inv_triple_set(CarLengths(lengths)))
    brute = sorted(_invariant_classes(lengths, Rule.ASSORTMENT))
    witness = None
    if formula != brute:
        diff = sorted(set(formula) ^ set(brute))
        witness = {"difference": [list(x) for x in diff]}
    return [list(x) for x in formula], [list(x) for x in brute], witness


def _eval_constant_formula(lengths: Lengths) -> Evaluation:
    """Formula verdict vs brute invariance for every class, both rules."""
    c = lengths[0]
    n = len(lengths)
    scanned = 0
    for rule in (Rule.ASSORTMENT, Rule.SEQUENCE):
        for cls in _classes(c * n, n):
            scanned += 1
            formula = constant_invariant(c, n, cls)
            brute = rearrangement_failure(lengths, cls, rule) is None
            if formula != brute:
                return formula, brute, {"x": list(cls), "rule": rule.value}
    return scanned, scanned, None


def _eval_sequence_count(lengths: Lengths) -> Evaluation:
    m = sum(lengths)
    count = 0
    for x in product(range(1, m + 1), repeat=len(lengths)):
        if raw_park(lengths, x, Rule.SEQUENCE)[0] is not None:
            count += 1
    formula = ps_count_formula(CarLengths(lengths)).value
    return formula, count, None


def _eval_nondecreasing_invariant_count(lengths: Lengths) -> Evaluation:
    n = len(lengths)
    brute = len(_invariant_classes(lengths, Rule.ASSORTMENT))
    return catalan(n), brute, None


def _eval_invariant_count(lengths: Lengths) -> Evaluation:
    n = len(lengths)
    brute = sum(_perm_count(cls) for cls in _invariant_classes(lengths, Rule.ASSORTMENT))
    return pf_count(n), brute, None


def _eval_increasing(lengths: Lengths) -> Evaluation:
    return True, is_minimally_invariant(CarLengths(lengths)), _probe_witness(lengths)


def _eval_restriction(lengths: Lengths) -> Evaluation:
    """Minimal invariance must be inherited by every prefix of the lengths."""
    y = CarLengths(lengths)
    if not is_minimally_invariant(y):
        return "not-minimal", "not-minimal", None
    for i in range(1, y.arity + 1):
        if not is_minimally_invariant(y.restrict(i)):
            return True, False, {"restriction": i, **(_probe_witness(lengths[:i]) or {})}
    return True, True, None


def _eval_append_form(lengths: Lengths) -> Evaluation:
    """Over minimally invariant prefixes, nondecreasing invariant lists are
    all ones plus at most one larger final entry."""
    n = len(lengths)
    if not is_minimally_invariant(CarLengths(lengths[: n - 1])):
        return "prefix-not-minimal", "prefix-not-minimal", None
    ones = (1,) * (n - 1)
    scanned = 0
    for cls in _invariant_classes(lengths, Rule.ASSORTMENT):
        scanned += 1
        if cls[: n - 1] != ones:
            return True, False, {"x": list(cls)}
    return scanned, scanned, None


def _eval_removal_closure(lengths: Lengths) -> Evaluation:
    """Dropping the first maximal entry of an invariant list keeps it
    invariant for the first n-1 lengths."""
    shorter = lengths[:-1]
    scanned = 0
    for cls in _invariant_classes(lengths, Rule.ASSORTMENT):
        for x in multiset_permutations(cls):
            scanned += 1
            k = x.index(max(x))
            reduced = x[:k] + x[k + 1 :]
            if rearrangement_failure(shorter, reduced, Rule.ASSORTMENT) is not None:
                return True, False, {"x": list(x), "removed_index": k + 1}
    return scanned, scanned, None


def _eval_removal_shift_transfer(lengths: Lengths) -> Evaluation:
    """Invariant lists with a single 1-entry stay invariant, after the
    clamp-shift by any car's length, for the lengths minus any one car."""
    n = len(lengths)
    scanned = 0
    for cls in _invariant_classes(lengths, Rule.ASSORTMENT):
        if cls.count(1) != 1:
            continue
        for x in multiset_permutations(cls):
            for j in range(n):
                shifted = tuple(
                    max(1, v - lengths[j]) for k, v in enumerate(x) if k != j
                )
                for i in range(n):
                    scanned += 1
                    remaining = lengths[:i] + lengths[i + 1 :]
                    if rearrangement_failure(remaining, shifted, Rule.ASSORTMENT) is not None:
                        return (
                            True,
                            False,
                            {"x": list(x), "i": i + 1, "j": j + 1, "transformed": list(shifted)},
                        )
    return scanned, scanned, None


def _eval_gap_entry(lengths: Lengths) -> Evaluation:
    """An entry in (1, min(lengths)] rules out invariance."""
    k = min(lengths)
    scanned = 0
    for cls in _classes(sum(lengths), len(lengths)):
        if not any(1 < v <= k for v in cls):
            continue
        scanned += 1
        if rearrangement_failure(lengths, cls, Rule.ASSORTMENT) is None:
            return True, False, {"x": list(cls)}
    return scanned, scanned, None


def _eval_sequence_subset(lengths: Lengths) -> Evaluation:
    """Sequence-rule successes are assortment successes with equal starts."""
    m = sum(lengths)
    scanned = 0
    for x in product(range(1, m + 1), repeat=len(lengths)):
        seq = raw_park(lengths, x, Rule.SEQUENCE)[0]
        if seq is None:
            continue
        scanned += 1
        asrt = raw_park(lengths, x, Rule.ASSORTMENT)[0]
        if asrt != seq:
            return (
                list(seq),
                list(asrt) if asrt else None,
                {"x": list(x)},
            )
    return scanned, scanned, None


def _eval_rules_agree(lengths: Lengths) -> Evaluation:
    """For one or two cars the two rules admit exactly the same lists."""
    m = sum(lengths)
    scanned = 0
    for x in product(range(1, m + 1), repeat=len(lengths)):
        scanned += 1
        seq = raw_park(lengths, x, Rule.SEQUENCE)[0] is not None
        asrt = raw_park(lengths, x, Rule.ASSORTMENT)[0] is not None
        if seq != asrt:
            return asrt, seq, {"x": list(x)}
    return scanned, scanned, None


# ---------------------------------------------------------------------------
# registry


@dataclass(frozen=True)
class CheckDef:
    id: str
    fatal: bool
    description: str
    applies: Callable[[Lengths], bool]
    evaluate: Callable[[Lengths], Evaluation]
    cost: Callable[[Lengths], int]


def _cost_probe(lengths: Lengths) -> int:
    return 4 * len(lengths) * sum(lengths)


def _cost_classes(lengths: Lengths) -> int:
    n = len(lengths)
    return comb(sum(lengths) + n - 1, n) * factorial(n)


def _cost_full(lengths: Lengths) -> int:
    return 2 * sum(lengths) ** len(lengths)


CHECKS: dict[str, CheckDef] = {
    c.id: c
    for c in [
        CheckDef(
            "mi-pair-formula",
            True,
            "two-car minimal-invariance formula vs probe oracle",
            lambda y: len(y) == 2,
            _eval_mi_pair,
            _cost_probe,
        ),
        CheckDef(
            "mi-triple-formula",
            True,
            "three-car minimal-invariance formula vs probe oracle",
            lambda y: len(y) == 3,
            _eval_mi_triple,
            _cost_probe,
        ),
        CheckDef(
            "mi-alternate",
            True,
            "greedy gap-fill decider vs probe oracle",
            lambda y: True,
            _eval_mi_alternate,
            _cost_probe,
        ),
        CheckDef(
            "pair-set-formula",
            True,
            "two-car invariant set vs brute force",
            lambda y: len(y) == 2,
            _eval_pair_set,
            _cost_classes,
        ),
        CheckDef(
            "triple-set-formula",
            True,
            "three-car nondecreasing invariant set vs brute force",
            lambda y: len(y) == 3,
            _eval_triple_set,
            _cost_classes,
        ),
        CheckDef(
            "constant-invariant-formula",
            True,
            "equal-lengths invariance formula vs brute force, both rules",
            _is_constant,
            _eval_constant_formula,
            lambda y: 2 * _cost_classes(y),
        ),
        CheckDef(
            "sequence-count-formula",
            True,
            "sequence-rule count product vs enumeration",
            lambda y: True,
            _eval_sequence_count,
            lambda y: sum(y) ** len(y),
        ),
        CheckDef(
            "nondecreasing-invariant-count",
            True,
            "catalan(n) vs brute nondecreasing invariant count (equal lengths)",
            _is_constant,
            _eval_nondecreasing_invariant_count,
            _cost_classes,
        ),
        CheckDef(
            "invariant-count",
            True,
            "(n+1)^(n-1) vs brute invariant count (equal lengths)",
            _is_constant,
            _eval_invariant_count,
            _cost_classes,
        ),
        CheckDef(
            "increasing-implies-minimal",
            True,
            "strictly increasing lengths are minimally invariant",
            _is_strictly_increasing,
            _eval_increasing,
            _cost_probe,
        ),
        CheckDef(
            "restriction-closure",
            True,
            "prefixes of minimally invariant lengths stay minimally invariant",
            lambda y: True,
            _eval_restriction,
            lambda y: len(y) * _cost_probe(y),
        ),
        CheckDef(
            "append-form",
            True,
            "after a minimally invariant prefix, invariant lists are (1,...,1,w)",
            lambda y: len(y) >= 2,
            _eval_append_form,
            _cost_classes,
        ),
        CheckDef(
            "removal-closure",
            True,
            "dropping the first max entry preserves invariance at arity n-1",
            lambda y: len(y) >= 2,
            _eval_removal_closure,
            lambda y: 2 * _cost_classes(y),
        ),
        CheckDef(
            "removal-shift-transfer",
            True,
            "clamp-shift of single-1 invariant lists transfers invariance",
            lambda y: len(y) >= 2,
            _eval_removal_shift_transfer,
            lambda y: 2 * _cost_classes(y),
        ),
        CheckDef(
            "gap-entry-obstruction",
            True,
            "an entry in (1, min length] rules out invariance",
            lambda y: True,
            _eval_gap_entry,
            _cost_classes,
        ),
        CheckDef(
            "sequence-subset-assortment",
            True,
            "sequence successes park identically under assortment",
            lambda y: True,
            _eval_sequence_subset,
            _cost_full,
        ),
        CheckDef(
            "rules-agree-arity2",
            True,
            "the two rules coincide for one or two cars",
            lambda y: len(y) <= 2,
            _eval_rules_agree,
            _cost_full,
        ),
        CheckDef(
            "quadruple-conjecture-audit",
            False,
            "conjectured four-car formula vs probe oracle (findings only)",
            lambda y: len(y) == 4,
            _eval_conjecture,
            _cost_probe,
        ),
    ]
}


# ---------------------------------------------------------------------------
# sweeps


@dataclass(frozen=True)
class SweepSpec:
    """What to sweep: arity, inclusive per-coordinate range, check ids."""

    arity: int
    entry_range: tuple[int, int]
    checks: tuple[str, ...]
    order: str = "lex"

    def __post_init__(self) -> None:
        object.__setattr__(self, "entry_range", tuple(self.entry_range))
        lo, hi = self.entry_range
        if self.arity < 1:
            raise ValueError("arity must be >= 1")
        if lo < 1 or hi < lo:
            raise ValueError(f"bad entry range [{lo}, {hi}]")
        if not self.checks:
            raise ValueError("need at least one check")
        unknown = [c for c in self.checks if c not in CHECKS]
        if unknown:
            raise ValueError(f"unknown check id(s): {', '.join(unknown)}")
        if self.order != "lex":
            raise ValueError("only lexicographic sweep order is supported")
        object.__setattr__(self, "checks", tuple(self.checks))

    def lengths_space(self) -> list[Lengths]:
        lo, hi = self.entry_range
        return list(product(range(lo, hi + 1), repeat=self.arity))

    @classmethod
    def from_dict(cls, data: dict) -> "SweepSpec":
        return cls(
            arity=int(data["arity"]),
            entry_range=tuple(int(v) for v in data["entry_range"]),
            checks=tuple(data["checks"]),
            order=data.get("order", "lex"),
        )


@dataclass(frozen=True)
class Disagreement:
    y: Lengths
    witness: dict | None
    closed_form_value: object
    oracle_value: object

    def to_record(self) -> dict:
        return {
            "y": list(self.y),
            "witness": self.witness,
            "closed_form": self.closed_form_value,
            "oracle": self.oracle_value,
        }


@dataclass
class CheckOutcome:
    check: str
    fatal: bool
    instances_checked: int = 0
    agreements: int = 0
    disagreements: list[Disagreement] = field(default_factory=list)

    def to_record(self) -> dict:
        return {
            "kind": "check",
            "check": self.check,
            "fatal": self.fatal,
            "instances_checked": self.instances_checked,
            "agreements": self.agreements,
            "disagreements": [d.to_record() for d in self.disagreements],
        }


@dataclass
class SweepReport:
    spec: SweepSpec
    outcomes: list[CheckOutcome]
    wall_time: float

    def fatal_disagreements(self) -> int:
        return sum(len(o.disagreements) for o in self.outcomes if o.fatal)

    def total_disagreements(self) -> int:
        return sum(len(o.disagreements) for o in self.outcomes)

    def to_records(self) -> list[dict]:
        """Canonical serialization; excludes timing so runs compare equal."""
        head = {
            "kind": "sweep",
            "arity": self.spec.arity,
            "entry_range": list(self.spec.entry_range),
            "order": self.spec.order,
            "checks": sorted(self.spec.checks),
        }
        body = [o.to_record() for o in sorted(self.outcomes, key=lambda o: o.check)]
        tail = {
            "kind": "summary",
            "instances": sum(o.instances_checked for o in self.outcomes),
            "disagreements": self.total_disagreements(),
            "fatal_disagreements": self.fatal_disagreements(),
        }
        return [head, *body, tail]


def projected_sweep_cost(spec: SweepSpec) -> int:
    total = 0
    for y in spec.lengths_space():
        for check_id in spec.checks:
            check = CHECKS[check_id]
            if check.applies(y):
                total += check.cost(y)
    return total


def _sweep_chunk(
    args: tuple[tuple[str, ...], list[Lengths]]
) -> dict[str, tuple[int, int, list[Disagreement]]]:
    check_ids, ys = args
    partial: dict[str, tuple[int, int, list[Disagreement]]] = {}
    for check_id in check_ids:
        check = CHECKS[check_id]
        instances = agreements = 0
        disagreements: list[Disagreement] = []
        for y in ys:
            if not check.applies(y):
                continue
            instances += 1
            closed, oracle, witness = check.evaluate(y)
            if closed == oracle:
                agreements += 1
            else:
                disagreements.append(Disagreement(y, witness, closed, oracle))
        partial[check_id] = (instances, agreements, disagreements)
    return partial


def run_sweep(
    spec: SweepSpec, budget: int | None = None, jobs: int = 1
) -> SweepReport:
    """Run every check in the spec over the whole length range.

    Deterministic: lengths are visited in lexicographic order and merged
    in order regardless of the worker count.
    """
    if budget is None:
        budget = default_budget()
    projected = projected_sweep_cost(spec)
    if projected > budget:
        raise BudgetExceededError(projected, budget)

    ys = spec.lengths_space()
    started = time.perf_counter()
    if jobs > 1 and len(ys) > 1:
        size = max(1, (len(ys) + 4 * jobs - 1) // (4 * jobs))
        chunks = [ys[i : i + size] for i in range(0, len(ys), size)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            partials = list(pool.map(_sweep_chunk, [(spec.checks, c) for c in chunks]))
    else:
        partials = [_sweep_chunk((spec.checks, ys))]

    outcomes = {
        cid: CheckOutcome(check=cid, fatal=CHECKS[cid].fatal) for cid in spec.checks
    }
    for partial in partials:
        for cid, (instances, agreements, disagreements) in partial.items():
            outcome = outcomes[cid]
            outcome.instances_checked += instances
            outcome.agreements += agreements
            outcome.disagreements.extend(disagreements)
    wall = time.perf_counter() - started
    return SweepReport(
        spec=spec,
        outcomes=[outcomes[cid] for cid in sorted(spec.checks)],
        wall_time=wall,
    )


# ---------------------------------------------------------------------------
# witness replay


def _trace_experiments(check_id: str, y: Lengths, witness: dict) -> list[dict]:
    """Step-by-step park outcomes for the experiments behind a witness."""
    traces: list[dict] = []

    def run_one(x: Lengths, rule: Rule) -> dict:
        starts, failed = raw_park(y, x, rule)
        entry = {"x": list(x), "rule": rule.value}
        if starts is None:
            entry["failed_car"] = failed
        else:
            entry["starts"] = list(starts)
        return entry

    if "w" in witness:
        w = witness["w"]
        n = len(y)
        for i in range(n):
            placement = tuple(w if k == i else 1 for k in range(n))
            traces.append(run_one(placement, Rule.ASSORTMENT))
    elif "x" in witness:
        x = tuple(witness["x"])
        rules = (
            [Rule(witness["rule"])]
            if "rule" in witness
            else [Rule.ASSORTMENT, Rule.SEQUENCE]
            if check_id in ("sequence-subset-assortment", "rules-agree-arity2")
            else [Rule.ASSORTMENT]
        )
        for rule in rules:
            for candidate in multiset_permutations(x):
                traces.append(run_one(candidate, rule))
    elif "difference" in witness:
        for x in witness["difference"]:
            for candidate in multiset_permutations(tuple(x)):
                traces.append(run_one(candidate, Rule.ASSORTMENT))
    return traces


def replay_witness(check_id: str, entry: dict) -> dict:
    """Re-run both sides of a recorded disagreement and trace the parking.

    Raises NoWitnessError when the entry carries no witness and
    StaleWitnessError when the recorded values no longer reproduce.
    """
    if check_id not in CHECKS:
        raise ValueError(f"unknown check id: {check_id}")
    witness = entry.get("witness")
    if not witness:
        raise NoWitnessError(f"entry for {check_id} has no witness to replay")
    y = tuple(int(v) for v in entry["y"])
    check = CHECKS[check_id]
    if not check.applies(y):
        raise StaleWitnessError(f"{check_id} does not apply to y={list(y)}")
    closed, oracle, _ = check.evaluate(y)

    def canon(value: object) -> object:
        return json.loads(json.dumps(value))

    if canon(closed) != canon(entry.get("closed_form")) or canon(oracle) != canon(
        entry.get("oracle")
    ):
        raise StaleWitnessError(
            f"recorded values for {check_id} at y={list(y)} no longer reproduce: "
            f"recomputed closed_form={closed!r}, oracle={oracle!r}"
        )
    return {
        "check": check_id,
        "y": list(y),
        "closed_form": canon(closed),
        "oracle": canon(oracle),
        "witness": witness,
        "experiments": _trace_experiments(check_id, y, witness),
    }
