"""Command-line surface: payloads, exit codes, stream round trips."""

from __future__ import annotations

import json

import pytest

from parking_lab.cli import main
from parking_lab.enumeration import EnumerationResult, Filter
from parking_lab.core import Rule


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def json_lines(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def test_park_table(capsys):
    code, out, _ = run_cli(capsys, "park", "--y", "1,3,1", "--x", "2,1,1")
    assert code == 0
    assert out == "success: starts 2 3 1\n"


def test_park_failure_is_exit_zero(capsys):
    code, out, _ = run_cli(
        capsys, "park", "--y", "1,3,1", "--x", "2,1,1", "--rule", "sequence", "--format", "json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["success"] is False
    assert payload["failed_car"] == 2
    assert payload["occupancy"] == [0, 1, 0, 0, 0]


def test_park_single_car(capsys):
    code, out, _ = run_cli(capsys, "park", "--y", "1", "--x", "1", "--format", "json")
    assert code == 0
    assert json.loads(out)["starts"] == [1]


def test_park_csv_shows_partial_parking(capsys):
    code, out, _ = run_cli(capsys, "park", "--y", "1,2,2", "--x", "2,1,1", "--format", "csv")
    assert code == 0
    assert out.splitlines() == [
        "car,length,preference,start",
        "1,1,2,2",
        "2,2,1,3",
        "3,2,1,",
    ]


def test_decide_and_invariant(capsys):
    code, out, _ = run_cli(
        capsys, "decide", "--y", "1,2,2", "--x", "1,2,1", "--rule", "sequence", "--format", "json"
    )
    assert code == 0 and json.loads(out)["member"] is True
    code, out, _ = run_cli(
        capsys, "invariant", "--y", "1,2,2", "--x", "1,2,1", "--format", "json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["invariant"] is False
    assert payload["witness"]["rearrangement"] == [2, 1, 1]


def test_pi_invariant(capsys):
    code, out, _ = run_cli(
        capsys,
        "pi-invariant",
        "--y", "1,2,2",
        "--x", "1,1,2",
        "--pi", "s2",
        "--pi", "s1.s2",
        "--format", "json",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["invariant"] is False
    assert [p["invariant"] for p in payload["per_pi"]] == [True, False]


def test_pi_invariant_rejects_non_member(capsys):
    code, _, err = run_cli(
        capsys, "pi-invariant", "--y", "1,2,2", "--x", "2,1,1", "--pi", "s1"
    )
    assert code == 4
    assert "error" in err


def test_mininv_methods(capsys):
    code, out, _ = run_cli(capsys, "mininv", "--y", "1,2,2", "--method", "oracle")
    assert code == 0 and out.strip() == "minimally invariant"
    code, out, _ = run_cli(capsys, "mininv", "--y", "2,1", "--method", "alternate", "--format", "json")
    assert code == 0 and json.loads(out)["minimally_invariant"] is False
    code, out, err = run_cli(capsys, "mininv", "--y", "1,2,3,4", "--method", "formula")
    assert code == 0 and out.strip() == "minimally invariant"
    assert "conjecture" in err
    code, _, _ = run_cli(capsys, "mininv", "--y", "1,2,3,4,5", "--method", "formula")
    assert code == 4


def test_enumerate_json_round_trip(capsys):
    code, out, _ = run_cli(
        capsys,
        "enumerate",
        "--y", "1,2,1",
        "--rule", "assortment",
        "--filter", "invariant",
        "--format", "json",
    )
    assert code == 0
    records = json_lines(out)
    assert len(records) == 9  # header + 7 items + count
    rebuilt = EnumerationResult.from_records(records)
    assert rebuilt.count == 7
    assert rebuilt.rule is Rule.ASSORTMENT
    assert rebuilt.filter is Filter.INVARIANT


def test_enumerate_csv(capsys):
    code, out, _ = run_cli(
        capsys, "enumerate", "--y", "2,2", "--filter", "nondecreasing", "--format", "csv"
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "x1,x2"
    assert lines[1:] == ["1,1", "1,2", "1,3"]


def test_enumerate_budget_exit_code(capsys):
    code, _, err = run_cli(capsys, "enumerate", "--y", "3,3,3,3,3", "--budget", "10")
    assert code == 3
    assert "budget" in err


def test_count_formulas(capsys):
    code, out, _ = run_cli(
        capsys, "count", "--y", "1,1,1,1", "--formula", "sequence-count", "--format", "json"
    )
    assert code == 0 and json.loads(out)["value"] == 125
    code, out, _ = run_cli(capsys, "count", "--formula", "catalan", "--n", "5")
    assert code == 0 and out.strip() == "42"
    code, out, _ = run_cli(
        capsys, "count", "--formula", "fuss-catalan", "--k", "2", "--n", "2", "--format", "csv"
    )
    assert code == 0 and out.splitlines()[1] == "fuss-catalan,3"
    code, out, _ = run_cli(capsys, "count", "--formula", "classical-count", "--n", "4")
    assert code == 0 and out.strip() == "125"
    code, out, _ = run_cli(
        capsys, "count", "--formula", "constant-invariant-count", "--y", "2,2,2"
    )
    assert code == 0 and out.strip() == "16"
    code, _, _ = run_cli(capsys, "count", "--formula", "constant-invariant-count", "--y", "1,2")
    assert code == 4
    code, _, _ = run_cli(capsys, "count", "--formula", "catalan")
    assert code == 4


def test_validation_exit_codes(capsys):
    assert run_cli(capsys, "park", "--y", "1,2", "--x", "9,1")[0] == 4
    assert run_cli(capsys, "park", "--y", "1,x", "--x", "1,1")[0] == 4
    assert run_cli(capsys, "park", "--y", "1,0", "--x", "1,1")[0] == 4


def test_usage_errors_exit_two(capsys):
    with pytest.raises(SystemExit) as info:
        main(["park", "--nope", "1"])
    assert info.value.code == 2
    capsys.readouterr()


def test_verify_json_and_exit_code(capsys):
    code, out, err = run_cli(
        capsys,
        "verify",
        "--n", "2",
        "--range", "1,4",
        "--checks", "mi-pair-formula,pair-set-formula,rules-agree-arity2",
        "--format", "json",
    )
    assert code == 0
    records = json_lines(out)
    assert records[0]["kind"] == "sweep"
    assert records[-1]["fatal_disagreements"] == 0
    assert "wall time" in err


def test_verify_spec_file(tmp_path, capsys):
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(
        json.dumps({"arity": 2, "entry_range": [1, 3], "checks": ["mi-pair-formula"]})
    )
    code, out, _ = run_cli(capsys, "verify", "--spec-file", str(spec_path), "--format", "json")
    assert code == 0
    assert json_lines(out)[1]["instances_checked"] == 9


def test_verify_needs_spec_or_flags(capsys):
    assert run_cli(capsys, "verify")[0] == 4
    assert run_cli(capsys, "verify", "--n", "2", "--range", "1,4", "--checks", "bogus")[0] == 4


def test_verify_byte_identical_across_jobs(capsys):
    argv = [
        "verify",
        "--n", "3",
        "--range", "1,3",
        "--checks", "mi-triple-formula,mi-alternate",
        "--format", "json",
    ]
    _, first, _ = run_cli(capsys, *argv, "--jobs", "1")
    _, second, _ = run_cli(capsys, *argv, "--jobs", "8")
    assert first == second


def test_conjecture4(capsys):
    code, out, _ = run_cli(capsys, "conjecture4", "--range", "1,2", "--format", "json")
    assert code == 0
    records = json_lines(out)
    assert records[1]["check"] == "quadruple-conjecture-audit"
    assert records[1]["instances_checked"] == 16


def test_replay_cli(tmp_path, capsys):
    report = tmp_path / "report.ndjson"
    check = {
        "kind": "check",
        "check": "mi-triple-formula",
        "fatal": True,
        "instances_checked": 1,
        "agreements": 0,
        "disagreements": [
            {"y": [1, 3, 2], "witness": {"w": 4}, "closed_form": False, "oracle": False},
            {"y": [1, 3, 2], "witness": None, "closed_form": False, "oracle": False},
        ],
    }
    report.write_text(json.dumps({"kind": "sweep"}) + "\n" + json.dumps(check) + "\n")
    code, out, _ = run_cli(
        capsys, "replay", "--report", str(report), "--check", "mi-triple-formula"
    )
    assert code == 0
    trace = json.loads(out)
    assert [e["x"] for e in trace["experiments"]] == [[4, 1, 1], [1, 4, 1], [1, 1, 4]]
    code, _, err = run_cli(
        capsys, "replay", "--report", str(report), "--check", "mi-triple-formula", "--index", "1"
    )
    assert code == 5 and "witness" in err
    code, _, _ = run_cli(
        capsys, "replay", "--report", str(report), "--check", "mi-triple-formula", "--index", "9"
    )
    assert code == 4
    code, _, _ = run_cli(capsys, "replay", "--report", str(report), "--check", "nope")
    assert code == 4
