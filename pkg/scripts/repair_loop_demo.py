#!/usr/bin/env python3
"""Walk the whole model-plan-validate-repair loop on the bundled fixtures.

Usage: python scripts/repair_loop_demo.py
"""

from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from planforge.pddl import (  # noqa: E402
    Plan,
    PlanStep,
    format_atom,
    parse_domain,
    parse_plan,
    parse_problem,
    print_plan,
)
from planforge.planner import bfs_plan  # noqa: E402
from planforge.repair import advise, apply_advice  # noqa: E402
from planforge.validator import validate  # noqa: E402

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def show_report(title, report):
    print(f"== {title}")
    for i, (action, ok) in enumerate(report.steps, start=1):
        mark = "ok " if ok else "FLAW"
        print(f"  step {i} [{mark}] ({' '.join((action.name, *action.args))})")
    if report.flaw:
        for atom, polarity, reason in report.flaw.unsatisfied:
            print(f"       {format_atom(atom)} is {reason} ({polarity})")
    print(f"  states: {[sorted(map(format_atom, s)) for s in report.states]}")
    print(f"  links:  {[(l.producer, l.consumer, format_atom(l.atom), l.polarity) for l in report.links]}")
    print(f"  valid:  {report.valid}")
    print()


def main() -> None:
    good = parse_domain((FIXTURES / "d1.pddl").read_text())
    broken = parse_domain((FIXTURES / "d1b.pddl").read_text())
    problem = parse_problem((FIXTURES / "p1.pddl").read_text())
    plan = parse_plan((FIXTURES / "pl1.txt").read_text())

    print("Planning on the intact domain with the built-in breadth-first planner:")
    found = bfs_plan(good, problem)
    print(print_plan(found))

    show_report("expected plan on the intact domain", validate(good, problem, plan))

    report = validate(broken, problem, plan)
    show_report("same plan on the broken domain (load lost its add effect)", report)

    advice = advise(broken, problem, plan, report)
    print("== repair advice")
    print(advice.advice_text)
    print()

    repaired_a, _ = apply_advice(broken, advice, "A")
    achiever = PlanStep(advice.option_a.new_action.name, advice.option_a.bound_args)
    flaw_at = report.flaw.step_index
    augmented = Plan(plan.steps[: flaw_at - 1] + (achiever,) + plan.steps[flaw_at - 1 :])
    show_report("option A: achiever inserted before the flawed step",
                validate(repaired_a, problem, augmented))

    index = next(i for i, m in enumerate(advice.option_b)
                 if m.kind == "AddEffectToEarlierStep")
    repaired_b, _ = apply_advice(broken, advice, "B", index)
    show_report("option B: add effect restored on load",
                validate(repaired_b, problem, plan))
    print("option B domain equals the intact fixture:", repaired_b == good)


if __name__ == "__main__":
    main()
