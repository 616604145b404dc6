#!/usr/bin/env python3
"""Seed a running workbench service with the broken-logistics fixture and
validate the expected plan, so the browser UI opens on a live flaw.

Usage: python scripts/seed_service.py [base_url] [project_id]
Defaults: http://127.0.0.1:8571 demo
"""

from __future__ import annotations

import sys
from pathlib import Path
from urllib.request import Request, urlopen

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

import json  # noqa: E402

from planforge.kb import default_kb  # noqa: E402
from planforge.pddl import parse_domain, parse_problem  # noqa: E402
from planforge.project_xml import export_xml  # noqa: E402
from planforge.workspace import project_from_asts  # noqa: E402

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def call(method: str, url: str, payload: dict) -> dict:
    request = Request(
        url,
        data=json.dumps(payload).encode(),
        headers={"Content-Type": "application/json"},
        method=method,
    )
    with urlopen(request) as response:
        return json.loads(response.read())


def main() -> None:
    base = sys.argv[1] if len(sys.argv) > 1 else "http://127.0.0.1:8571"
    project_id = sys.argv[2] if len(sys.argv) > 2 else "demo"

    domain = parse_domain((FIXTURES / "d1b.pddl").read_text())
    problem = parse_problem((FIXTURES / "p1.pddl").read_text())
    xml = export_xml(project_from_asts(domain, [problem], kb=default_kb()))

    doc = call("PUT", f"{base}/projects/{project_id}", {"xml": xml})
    print(f"seeded project {project_id!r} at revision {doc['revision']}")

    report = call(
        "POST",
        f"{base}/projects/{project_id}/validate",
        {"problem": "p1", "plan": (FIXTURES / "pl1.txt").read_text()},
    )
    flaw = report["flaw"]
    print(f"validated: valid={report['valid']}, flaw at step {flaw and flaw['step']}")
    print(f"open the UI against {base} and inspect project {project_id!r}")


if __name__ == "__main__":
    main()
