"""Command-line surface.

Subcommands: park, decide, invariant, pi-invariant, mininv, enumerate,
count, verify, conjecture4, replay.  Streaming payloads (enumerate,
verify, conjecture4) emit newline-delimited JSON with sorted keys, so
output is byte-stable across runs and worker counts.

Exit codes:
  0  success (a parking failure is a result, not an error)
  1  a fatal verification check disagreed (implementation regression)
  2  command-line usage error
  3  projected work exceeds the experiment budget
  4  invalid input (parse, arity, pairing, or range errors)
  5  witness replay failed (no witness, or values do not reproduce)
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from typing import Sequence

from .closed_form import (
    catalan,
    fuss_catalan,
    is_minimally_invariant,
    is_minimally_invariant_alternate,
    mi_pair,
    mi_quadruple_conjecture,
    mi_triple,
    pf_count,
    ps_count_formula,
)
from .core import CarLengths, PreferenceList, Rule, park
from .enumeration import (
    BudgetExceededError,
    Filter,
    default_budget,
    enumerate_set,
)
from .predicates import Permutation, is_invariant, is_member, is_pi_invariant
from .verify import CHECKS, ReplayError, SweepSpec, replay_witness, run_sweep

EXIT_OK = 0
EXIT_REGRESSION = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_VALIDATION = 4
EXIT_REPLAY = 5

COUNT_FORMULAS = (
    "sequence-count",
    "classical-count",
    "catalan",
    "fuss-catalan",
    "constant-invariant-count",
)


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise ValueError(f"expected comma-separated integers, got {text!r}") from None


def _parse_range(text: str) -> tuple[int, int]:
    parts = _ints(text)
    if len(parts) == 1:
        return 1, parts[0]
    if len(parts) == 2:
        return parts
    raise ValueError(f"expected LO,HI or HI, got {text!r}")


def _parse_permutation(text: str, n: int) -> Permutation:
    """Either a one-line mapping "2,1,3" or a word like "s1.s2".

    A word composes as functions: "s1.s2" applies s2 first, then s1.
    """
    if text.lstrip().startswith("s"):
        tokens = [t for t in text.replace("*", ".").split(".") if t]
        perm = Permutation.identity(n)
        for token in tokens:
            if not token.startswith("s"):
                raise ValueError(f"bad permutation token {token!r} in {text!r}")
            perm = perm * Permutation.adjacent(int(token[1:]), n)
        return perm
    return Permutation(_ints(text))


def _emit_json(payload: dict) -> None:
    print(json.dumps(payload, sort_keys=True))


def _emit_records(records) -> None:
    for record in records:
        print(json.dumps(record, sort_keys=True))


def _csv_writer():
    return csv.writer(sys.stdout, lineterminator="\n")


# ---------------------------------------------------------------------------
# handlers


def _cmd_park(args) -> int:
    y = CarLengths(_ints(args.y))
    x = PreferenceList(_ints(args.x), y)
    rule = Rule.coerce(args.rule)
    outcome = park(y, x, rule)
    starts = outcome.starts
    if args.format == "json":
        _emit_json(
            {
                "y": list(y.lengths),
                "x": list(x.prefs),
                "rule": rule.value,
                "success": outcome.success,
                "starts": list(starts) if starts else None,
                "failed_car": outcome.first_failed_car,
                "occupancy": list(outcome.occupancy(y)),
            }
        )
    elif args.format == "csv":
        cells = outcome.occupancy(y)
        parked = {car: cells.index(car) + 1 for car in cells if car}
        writer = _csv_writer()
        writer.writerow(["car", "length", "preference", "start"])
        for car, (length, pref) in enumerate(zip(y.lengths, x.prefs), 1):
            writer.writerow([car, length, pref, parked.get(car, "")])
    elif outcome.success:
        print(f"success: starts {' '.join(map(str, starts))}")
    else:
        cells = " ".join(str(v) if v else "." for v in outcome.occupancy(y))
        print(f"failure: car {outcome.first_failed_car} cannot park (street: {cells})")
    return EXIT_OK


def _cmd_decide(args) -> int:
    y = CarLengths(_ints(args.y))
    x = PreferenceList(_ints(args.x), y)
    rule = Rule.coerce(args.rule)
    member = is_member(y, x, rule)
    if args.format == "json":
        _emit_json({"y": list(y.lengths), "x": list(x.prefs), "rule": rule.value, "member": member})
    elif args.format == "csv":
        writer = _csv_writer()
        writer.writerow(["member"])
        writer.writerow([str(member).lower()])
    else:
        print("member" if member else "not a member")
    return EXIT_OK


def _cmd_invariant(args) -> int:
    y = CarLengths(_ints(args.y))
    x = PreferenceList(_ints(args.x), y)
    rule = Rule.coerce(args.rule)
    verdict = is_invariant(y, x, rule)
    witness = verdict.witness
    if args.format == "json":
        _emit_json(
            {
                "y": list(y.lengths),
                "x": list(x.prefs),
                "rule": rule.value,
                "invariant": verdict.invariant,
                "witness": None
                if witness is None
                else {
                    "rearrangement": list(witness.rearrangement),
                    "failed_car": witness.outcome.first_failed_car,
                },
            }
        )
    elif args.format == "csv":
        writer = _csv_writer()
        writer.writerow(["invariant", "witness"])
        writer.writerow(
            [
                str(verdict.invariant).lower(),
                "" if witness is None else " ".join(map(str, witness.rearrangement)),
            ]
        )
    elif verdict.invariant:
        print("invariant")
    else:
        arrangement = ",".join(map(str, witness.rearrangement))
        print(f"not invariant: ({arrangement}) fails at car {witness.outcome.first_failed_car}")
    return EXIT_OK


def _cmd_pi_invariant(args) -> int:
    y = CarLengths(_ints(args.y))
    x = PreferenceList(_ints(args.x), y)
    rule = Rule.coerce(args.rule)
    perms = [_parse_permutation(spec, y.arity) for spec in args.pi]
    detail = []
    overall = True
    for spec, perm in zip(args.pi, perms):
        ok = is_pi_invariant(y, x, perm, rule)
        overall = overall and ok
        detail.append({"pi": spec, "mapping": list(perm.mapping), "invariant": ok})
    if args.format == "json":
        _emit_json(
            {
                "y": list(y.lengths),
                "x": list(x.prefs),
                "rule": rule.value,
                "invariant": overall,
                "per_pi": detail,
            }
        )
    elif args.format == "csv":
        writer = _csv_writer()
        writer.writerow(["pi", "invariant"])
        for entry in detail:
            writer.writerow([entry["pi"], str(entry["invariant"]).lower()])
    else:
        for entry in detail:
            print(f"{entry['pi']}: {'invariant' if entry['invariant'] else 'not invariant'}")
        if len(detail) > 1:
            print(f"all: {'invariant' if overall else 'not invariant'}")
    return EXIT_OK


def _cmd_mininv(args) -> int:
    y = CarLengths(_ints(args.y))
    if args.method == "oracle":
        value = is_minimally_invariant(y)
    elif args.method == "alternate":
        value = is_minimally_invariant_alternate(y)
    else:
        if y.arity == 2:
            value = mi_pair(y)
        elif y.arity == 3:
            value = mi_triple(y)
        elif y.arity == 4:
            print(
                "warning: the four-car formula is a conjecture audited empirically, "
                "not a proven characterization",
                file=sys.stderr,
            )
            value = mi_quadruple_conjecture(y)
        else:
            raise ValueError(
                f"--method formula needs 2, 3, or 4 cars, got {y.arity}"
            )
    if args.format == "json":
        _emit_json(
            {"y": list(y.lengths), "method": args.method, "minimally_invariant": value}
        )
    elif args.format == "csv":
        writer = _csv_writer()
        writer.writerow(["minimally_invariant"])
        writer.writerow([str(value).lower()])
    else:
        print("minimally invariant" if value else "not minimally invariant")
    return EXIT_OK


def _cmd_enumerate(args) -> int:
    result = enumerate_set(
        _ints(args.y),
        rule=args.rule,
        filt=args.filter,
        budget=args.budget,
        jobs=args.jobs,
    )
    if args.format == "json":
        _emit_records(result.to_records())
    elif args.format == "csv":
        writer = _csv_writer()
        writer.writerow([f"x{i}" for i in range(1, len(result.y) + 1)])
        for item in result.items:
            writer.writerow(item)
    else:
        for item in result.items:
            print(" ".join(map(str, item)))
        print(f"count: {result.count}")
    return EXIT_OK


def _cmd_count(args) -> int:
    formula = args.formula
    if formula == "sequence-count":
        if not args.y:
            raise ValueError("--formula sequence-count needs --y")
        result = ps_count_formula(CarLengths(_ints(args.y)))
        value, detail = result.value, {"y": list(_ints(args.y))}
    elif formula == "classical-count":
        n = args.n if args.n else len(_ints(args.y)) if args.y else None
        if n is None:
            raise ValueError("--formula classical-count needs --n or --y")
        value, detail = pf_count(n), {"n": n}
    elif formula == "catalan":
        if args.n is None:
            raise ValueError("--formula catalan needs --n")
        value, detail = catalan(args.n), {"n": args.n}
    elif formula == "fuss-catalan":
        if args.n is None or args.k is None:
            raise ValueError("--formula fuss-catalan needs --k and --n")
        value, detail = fuss_catalan(args.k, args.n), {"k": args.k, "n": args.n}
    else:  # constant-invariant-count
        if not args.y:
            raise ValueError("--formula constant-invariant-count needs --y")
        y = CarLengths(_ints(args.y))
        if len(set(y.lengths)) != 1:
            raise ValueError("constant-invariant-count needs equal car lengths")
        value, detail = pf_count(y.arity), {"y": list(y.lengths)}
    if args.format == "json":
        _emit_json({"formula": formula, "value": value, **detail})
    elif args.format == "csv":
        writer = _csv_writer()
        writer.writerow(["formula", "value"])
        writer.writerow([formula, value])
    else:
        print(value)
    return EXIT_OK


def _build_spec(args) -> SweepSpec:
    if args.spec_file:
        with open(args.spec_file, encoding="utf-8") as handle:
            return SweepSpec.from_dict(json.load(handle))
    if args.n is None or args.range is None:
        raise ValueError("verify needs --spec-file, or both --n and --range")
    checks = tuple(args.checks.split(",")) if args.checks else tuple(sorted(CHECKS))
    return SweepSpec(arity=args.n, entry_range=_parse_range(args.range), checks=checks)


def _render_report(report, fmt: str) -> None:
    if fmt == "json":
        _emit_records(report.to_records())
    elif fmt == "csv":
        writer = _csv_writer()
        writer.writerow(["check", "fatal", "instances_checked", "agreements", "disagreements"])
        for outcome in report.outcomes:
            writer.writerow(
                [
                    outcome.check,
                    str(outcome.fatal).lower(),
                    outcome.instances_checked,
                    outcome.agreements,
                    len(outcome.disagreements),
                ]
            )
    else:
        for outcome in report.outcomes:
            print(
                f"{outcome.check}: {outcome.instances_checked} instances, "
                f"{outcome.agreements} agree, {len(outcome.disagreements)} disagree"
            )
            for d in outcome.disagreements:
                print(
                    f"  y={list(d.y)} closed_form={d.closed_form_value!r} "
                    f"oracle={d.oracle_value!r} witness={d.witness}"
                )
        print(
            f"summary: {report.total_disagreements()} disagreements "
            f"({report.fatal_disagreements()} fatal)"
        )


def _cmd_verify(args) -> int:
    spec = _build_spec(args)
    report = run_sweep(spec, budget=args.budget, jobs=args.jobs)
    _render_report(report, args.format)
    print(f"wall time: {report.wall_time:.3f}s", file=sys.stderr)
    return EXIT_REGRESSION if report.fatal_disagreements() else EXIT_OK


def _cmd_conjecture4(args) -> int:
    spec = SweepSpec(
        arity=4,
        entry_range=_parse_range(args.range),
        checks=("quadruple-conjecture-audit",),
    )
    report = run_sweep(spec, budget=args.budget, jobs=args.jobs)
    _render_report(report, args.format)
    print(f"wall time: {report.wall_time:.3f}s", file=sys.stderr)
    # Findings are results, not regressions: the formula under audit is a
    # conjecture, so disagreement does not make the run fail.
    return EXIT_OK


def _cmd_replay(args) -> int:
    with open(args.report, encoding="utf-8") as handle:
        records = [json.loads(line) for line in handle if line.strip()]
    for record in records:
        if record.get("kind") == "check" and record.get("check") == args.check:
            disagreements = record.get("disagreements", [])
            if args.index >= len(disagreements):
                raise ValueError(
                    f"check {args.check} has {len(disagreements)} disagreement(s); "
                    f"index {args.index} is out of range"
                )
            trace = replay_witness(args.check, disagreements[args.index])
            _emit_json(trace)
            return EXIT_OK
    raise ValueError(f"no check record for {args.check!r} in {args.report}")


# ---------------------------------------------------------------------------
# parser


def _add_format(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--format",
        choices=("table", "json", "csv"),
        default="table",
        help="output format (default: table)",
    )


def _add_rule(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--rule",
        choices=("assortment", "sequence"),
        default="assortment",
        help="parking semantics (default: assortment)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="parking-lab",
        description="Parking experiments with cars of assorted lengths: "
        "simulators, invariance deciders, closed forms, and differential verification.",
        epilog="exit codes: 0 ok, 1 verification regression, 2 usage, "
        "3 budget exceeded, 4 invalid input, 5 replay failure",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("park", help="run one parking experiment")
    p.add_argument("--y", required=True, help="car lengths, e.g. 1,3,1")
    p.add_argument("--x", required=True, help="preferences, e.g. 2,1,1")
    _add_rule(p)
    _add_format(p)
    p.set_defaults(handler=_cmd_park)

    p = sub.add_parser("decide", help="is x a member under the rule?")
    p.add_argument("--y", required=True)
    p.add_argument("--x", required=True)
    _add_rule(p)
    _add_format(p)
    p.set_defaults(handler=_cmd_decide)

    p = sub.add_parser("invariant", help="do all rearrangements of x park?")
    p.add_argument("--y", required=True)
    p.add_argument("--x", required=True)
    _add_rule(p)
    _add_format(p)
    p.set_defaults(handler=_cmd_invariant)

    p = sub.add_parser(
        "pi-invariant", help="does x stay a member under specific index permutations?"
    )
    p.add_argument("--y", required=True)
    p.add_argument("--x", required=True)
    p.add_argument(
        "--pi",
        action="append",
        required=True,
        help="permutation: mapping like 2,1,3 or word like s1.s2 "
        "(rightmost applies first); repeat for a set",
    )
    _add_rule(p)
    _add_format(p)
    p.set_defaults(handler=_cmd_pi_invariant)

    p = sub.add_parser("mininv", help="are these lengths minimally invariant?")
    p.add_argument("--y", required=True)
    p.add_argument(
        "--method",
        choices=("oracle", "alternate", "formula"),
        default="oracle",
        help="probe oracle, greedy gap-fill decider, or arity-specific formula",
    )
    _add_format(p)
    p.set_defaults(handler=_cmd_mininv)

    p = sub.add_parser("enumerate", help="materialize a preference-list set")
    p.add_argument("--y", required=True)
    _add_rule(p)
    p.add_argument(
        "--filter",
        choices=tuple(f.value for f in Filter),
        default="all",
    )
    p.add_argument("--budget", type=int, default=None, help="experiment budget")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    _add_format(p)
    p.set_defaults(handler=_cmd_enumerate)

    p = sub.add_parser("count", help="evaluate a count formula")
    p.add_argument("--formula", choices=COUNT_FORMULAS, required=True)
    p.add_argument("--y", default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    _add_format(p)
    p.set_defaults(handler=_cmd_count)

    p = sub.add_parser("verify", help="differential sweep of checks over a range")
    p.add_argument("--spec-file", default=None, help="JSON sweep spec")
    p.add_argument("--n", type=int, default=None, help="arity to sweep")
    p.add_argument("--range", default=None, help="entry range LO,HI (or HI)")
    p.add_argument(
        "--checks",
        default=None,
        help="comma-separated check ids (default: all registered checks)",
    )
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)
    _add_format(p)
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser(
        "conjecture4", help="audit the conjectured four-car formula over a range"
    )
    p.add_argument("--range", default="1,4", help="entry range LO,HI (default 1,4)")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)
    _add_format(p)
    p.set_defaults(handler=_cmd_conjecture4)

    p = sub.add_parser("replay", help="re-run and trace a recorded disagreement")
    p.add_argument("--report", required=True, help="NDJSON report from verify")
    p.add_argument("--check", required=True, help="check id to replay")
    p.add_argument("--index", type=int, default=0, help="disagreement index (default 0)")
    p.set_defaults(handler=_cmd_replay)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "budget", None) is None and hasattr(args, "budget"):
        args.budget = default_budget()
    try:
        return args.handler(args)
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ReplayError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REPLAY
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
