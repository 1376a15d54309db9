#!/usr/bin/env python3
"""Audit the conjectured four-car minimal-invariance formula.

Compares the Boolean formula against the probe oracle over a length
range and writes the findings as NDJSON.  Disagreements are findings
about the conjecture, not errors; the script always exits 0 once the
audit completes.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from parking_lab.verify import SweepSpec, run_sweep


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--hi", type=int, default=5, help="entries range over [1, HI]")
    parser.add_argument("--jobs", type=int, default=4)
    parser.add_argument("--out", type=Path, default=Path("conjecture-audit.ndjson"))
    args = parser.parse_args()

    spec = SweepSpec(4, (1, args.hi), ("quadruple-conjecture-audit",))
    report = run_sweep(spec, jobs=args.jobs)
    with args.out.open("w", encoding="utf-8") as handle:
        for record in report.to_records():
            handle.write(json.dumps(record, sort_keys=True) + "\n")
    (outcome,) = report.outcomes
    print(
        f"audited {outcome.instances_checked} length lists over [1,{args.hi}]^4 "
        f"in {report.wall_time:.1f}s -> {args.out}"
    )
    if outcome.disagreements:
        print(f"findings ({len(outcome.disagreements)}):")
        for d in outcome.disagreements:
            print(f"  y={list(d.y)} formula={d.closed_form_value} oracle={d.oracle_value}")
    else:
        print("no findings: formula and oracle agree on the whole range")
    return 0


if __name__ == "__main__":
    sys.exit(main())
