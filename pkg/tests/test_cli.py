"""CLI behavior: subcommand semantics, exit codes, JSON output."""

from __future__ import annotations

import json
import shutil
import sys

import pytest

from planforge.cli import cli_dispatch
from planforge.pddl import parse_domain, parse_problem

from .conftest import FIXTURES, read_fixture


@pytest.fixture()
def fx(tmp_path):
    """Copy the canonical fixtures into a scratch directory."""
    for name in (
        "d1.pddl", "d1b.pddl", "p1.pddl", "pl1.txt", "d1.kavi.xml", "blocks.pddl",
    ):
        shutil.copy(FIXTURES / name, tmp_path / name)
    return tmp_path


def run(capsys, *argv):
    code = cli_dispatch([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_check_clean_project(capsys, fx):
    code, out, _ = run(capsys, "check", "--project", fx / "d1.kavi.xml")
    assert code == 0
    assert "0 diagnostics" in out


def test_check_domain_pair(capsys, fx):
    code, out, _ = run(
        capsys, "check", "--domain", fx / "d1.pddl", "--problem", fx / "p1.pddl"
    )
    assert code == 0 and "0 diagnostics" in out


def test_check_json_empty_list(capsys, fx):
    code, out, _ = run(capsys, "check", "--project", fx / "d1.kavi.xml",
                       "--format", "json")
    assert code == 0 and json.loads(out) == []


def test_validate_flawed_json(capsys, fx):
    code, out, _ = run(
        capsys,
        "validate",
        "--domain", fx / "d1b.pddl",
        "--problem", fx / "p1.pddl",
        "--plan", fx / "pl1.txt",
        "--format", "json",
    )
    assert code == 1
    report = json.loads(out)
    assert report["valid"] is False
    assert report["flaw"]["step"] == 3
    assert report["flaw"]["unsatisfied"] == [
        {"atom": "(in pkg trk)", "polarity": "positive", "reason": "missing"}
    ]


def test_validate_clean(capsys, fx):
    code, out, _ = run(
        capsys,
        "validate",
        "--domain", fx / "d1.pddl",
        "--problem", fx / "p1.pddl",
        "--plan", fx / "pl1.txt",
    )
    assert code == 0
    assert "valid: True" in out


def test_validate_from_project(capsys, fx):
    code, out, _ = run(
        capsys, "validate", "--project", fx / "d1.kavi.xml", "--plan", fx / "pl1.txt",
        "--format", "json",
    )
    assert code == 0 and json.loads(out)["valid"] is True


def test_repair_loop_via_cli(capsys, fx):
    """Spec flow: repair --apply A, insert the achiever step, re-validate green."""
    code, out, _ = run(
        capsys,
        "repair", "--apply", "A",
        "--domain", fx / "d1b.pddl",
        "--problem", fx / "p1.pddl",
        "--plan", fx / "pl1.txt",
        "--out", fx / "repaired.pddl",
    )
    assert code == 0
    augmented = fx / "augmented.txt"
    augmented.write_text(
        "(load pkg trk a)\n(drive trk a b)\n(achieve-in pkg trk)\n(unload pkg trk b)\n"
    )
    code, out, _ = run(
        capsys,
        "validate",
        "--domain", fx / "repaired.pddl",
        "--problem", fx / "p1.pddl",
        "--plan", augmented,
    )
    assert code == 0


def test_repair_apply_b(capsys, fx, d1):
    code, out, _ = run(
        capsys,
        "repair", "--apply", "B:0",
        "--domain", fx / "d1b.pddl",
        "--problem", fx / "p1.pddl",
        "--plan", fx / "pl1.txt",
        "--format", "json",
    )
    assert code == 0
    payload = json.loads(out)
    assert parse_domain(payload["domain"]) == d1
    assert payload["diagnostics"] == []


def test_repair_advise_json(capsys, fx):
    code, out, _ = run(
        capsys,
        "repair", "--advise",
        "--domain", fx / "d1b.pddl",
        "--problem", fx / "p1.pddl",
        "--plan", fx / "pl1.txt",
        "--format", "json",
    )
    assert code == 0
    advice = json.loads(out)
    assert advice["optionA"]["newAction"]["name"] == "achieve-in"
    assert any(m["kind"] == "AddEffectToEarlierStep" for m in advice["optionB"])


def test_repair_advise_no_flaw(capsys, fx):
    code, _, err = run(
        capsys,
        "repair", "--advise",
        "--domain", fx / "d1.pddl",
        "--problem", fx / "p1.pddl",
        "--plan", fx / "pl1.txt",
    )
    assert code == 1 and "NoFlaw" in err


def test_plan_builtin(capsys, fx):
    code, out, _ = run(
        capsys,
        "plan", "--builtin-bfs",
        "--domain", fx / "d1.pddl",
        "--problem", fx / "p1.pddl",
        "--out", fx / "plan.txt",
    )
    assert code == 0
    assert (fx / "plan.txt").read_text() == read_fixture("pl1.txt")
    assert "(load pkg trk a)" in out


def test_plan_no_plan(capsys, fx):
    crippled = fx / "crippled.pddl"
    crippled.write_text(read_fixture("d1.pddl").replace("(at ?trk ?to)", "(at ?trk ?from)"))
    code, _, err = run(
        capsys, "plan", "--domain", crippled, "--problem", fx / "p1.pddl"
    )
    assert code == 1 and "NoPlanFound" in err


def test_plan_with_plugin(capsys, fx):
    stub = fx / "stub.py"
    stub.write_text("print('(load pkg trk a)')\nprint('; cost = 1')\n")
    config = fx / "plugins.json"
    config.write_text(json.dumps([
        {"name": "stub", "command": f"{sys.executable} {stub} {{domain}} {{problem}}"}
    ]))
    code, out, _ = run(
        capsys,
        "plan", "--planner", "stub", "--plugins", config,
        "--domain", fx / "d1.pddl", "--problem", fx / "p1.pddl",
        "--format", "json",
    )
    assert code == 0
    assert json.loads(out)["length"] == 1


def test_links(capsys, fx):
    code, out, _ = run(
        capsys,
        "links",
        "--domain", fx / "d1.pddl", "--problem", fx / "p1.pddl",
        "--plan", fx / "pl1.txt",
        "--format", "json",
    )
    assert code == 0
    links = json.loads(out)
    assert len(links) == 6
    assert links[0] == {
        "producer": 0, "consumer": 1, "atom": "(at pkg a)", "polarity": "positive",
    }


def test_state(capsys, fx):
    code, out, _ = run(
        capsys,
        "state", "--at", "2",
        "--domain", fx / "d1.pddl", "--problem", fx / "p1.pddl",
        "--plan", fx / "pl1.txt",
        "--format", "json",
    )
    assert code == 0
    assert json.loads(out) == {"k": 2, "state": ["(at trk b)", "(in pkg trk)"]}


def test_state_beyond_flaw(capsys, fx):
    code, _, err = run(
        capsys,
        "state", "--at", "3",
        "--domain", fx / "d1b.pddl", "--problem", fx / "p1.pddl",
        "--plan", fx / "pl1.txt",
    )
    assert code == 2 and "IndexBeyondFlaw" in err


def test_export_pddl_roundtrip(capsys, fx, d1, p1):
    code, out, _ = run(
        capsys,
        "export", "pddl",
        "--project", fx / "d1.kavi.xml", "--problem-name", "p1",
        "--format", "json",
    )
    assert code == 0
    payload = json.loads(out)
    assert parse_domain(payload["domain"]) == d1
    assert parse_problem(payload["problem"]) == p1


def test_export_xml_from_pddl(capsys, fx):
    out_file = fx / "made.kavi.xml"
    code, _, _ = run(
        capsys,
        "export", "xml",
        "--domain", fx / "d1.pddl", "--problem", fx / "p1.pddl",
        "--out", out_file,
    )
    assert code == 0
    from planforge.project_xml import import_xml
    from planforge.workspace import check_consistency

    assert check_consistency(import_xml(out_file.read_text())) == []


def test_parse_summary(capsys, fx):
    code, out, _ = run(capsys, "parse", "--domain", fx / "d1.pddl")
    assert code == 0
    assert "3 actions" in out and "2 predicates" in out and "5 types" in out


def test_parse_error_exit_2(capsys, fx):
    bad = fx / "bad.pddl"
    bad.write_text("(define (domain d) (:requirements :adl))")
    code, _, err = run(capsys, "parse", "--domain", bad)
    assert code == 2 and "UnsupportedRequirement" in err


def test_missing_file_exit_2(capsys):
    code, _, err = run(capsys, "check", "--project", "missing.kavi.xml")
    assert code == 2 and "cannot read" in err


def test_usage_error(capsys):
    code, _, _ = run(capsys, "frobnicate")
    assert code == 2
