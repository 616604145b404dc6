"""Command-line face of the workbench.

Exit codes: 0 success, 1 domain-level failure (flaw found, diagnostics
present, no plan), 2 usage or I/O error.  ``--format json`` emits the same
documents the HTTP service serves.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import jsonio
from .kb import default_kb, load_kb
from .pddl import (
    PddlError,
    Plan,
    format_atom,
    parse_domain,
    parse_plan,
    parse_problem,
    print_domain,
    print_plan,
)
from .planner import (
    LimitExceeded,
    NoPlanFound,
    NoPlanInOutput,
    PlannerTimeout,
    SearchLimits,
    bfs_plan,
    invoke_planner,
    load_plugins,
)
from .project_xml import export_xml, import_xml
from .repair import NoFlaw, advise, apply_advice
from .validator import state_at, validate
from .workspace import (
    NoDomainContent,
    Project,
    RefusedOnErrors,
    WorkspaceError,
    check_consistency,
    export_pddl,
    project_from_asts,
    project_to_domain,
)

OK, DOMAIN_FAILURE, USAGE = 0, 1, 2


class CliError(Exception):
    def __init__(self, message: str, code: int = USAGE):
        super().__init__(message)
        self.code = code


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from exc


def _emit(args, payload, text: str) -> None:
    if args.format == "json":
        print(jsonio.dumps(payload))
    elif text:
        print(text)


def _load_project(args) -> Project:
    if args.project:
        return import_xml(_read(args.project))
    if not args.domain:
        raise CliError("need --project or --domain")
    domain = parse_domain(_read(args.domain))
    problems = [parse_problem(_read(args.problem))] if args.problem else []
    kb = load_kb(_read(args.kb)) if args.kb else None
    return project_from_asts(domain, problems, kb=kb)


def _load_validation_inputs(args):
    """(domain, problem, plan) from --domain/--problem or --project."""
    if args.project:
        project = import_xml(_read(args.project))
        domain = project_to_domain(project)
        name = args.problem_name or (project.problems[0].name if project.problems else None)
        if name is None:
            raise CliError("project has no problems; pass --problem-name")
        problem = project.problem(name)
        if problem is None:
            raise CliError(f"no problem named {name!r} in project")
    else:
        if not args.domain or not args.problem:
            raise CliError("need --domain and --problem (or --project)")
        domain = parse_domain(_read(args.domain))
        problem = parse_problem(_read(args.problem))
    plan = parse_plan(_read(args.plan)) if getattr(args, "plan", None) else Plan(())
    return domain, problem, plan


# -- subcommands -----------------------------------------------------------------


def cmd_parse(args) -> int:
    payload: dict = {}
    lines: list[str] = []
    if args.domain:
        domain = parse_domain(_read(args.domain))
        payload["domain"] = jsonio.project_json(project_from_asts(domain))
        lines.append(
            f"domain {domain.name}: {len(domain.actions)} actions, "
            f"{len(domain.predicates)} predicates, {len(domain.types.parents)} types"
        )
    if args.problem:
        problem = parse_problem(_read(args.problem))
        payload["problem"] = jsonio.problem_json(problem)
        lines.append(
            f"problem {problem.name}: {len(problem.objects)} objects, "
            f"{len(problem.init)} init atoms, {len(problem.goal)} goal literals"
        )
    if args.plan:
        plan = parse_plan(_read(args.plan))
        payload["plan"] = jsonio.plan_json(plan)
        lines.append(f"plan: {len(plan.steps)} steps")
    if not payload:
        raise CliError("nothing to parse; pass --domain/--problem/--plan")
    _emit(args, payload, "\n".join(lines))
    return OK


def cmd_check(args) -> int:
    project = _load_project(args)
    diagnostics = check_consistency(project)
    text = [f"{len(diagnostics)} diagnostics"]
    text += ["  " + d.format() for d in diagnostics]
    _emit(args, jsonio.diagnostics_json(diagnostics), "\n".join(text))
    return DOMAIN_FAILURE if diagnostics else OK


def cmd_export(args) -> int:
    if args.what == "xml":
        project = _load_project(args)
        text = export_xml(project)
        if args.out:
            Path(args.out).write_text(text)
            print(f"wrote {args.out}")
        else:
            print(text, end="")
        return OK
    project = _load_project(args)
    domain_text, problem_text = export_pddl(project, args.problem_name)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "domain.pddl").write_text(domain_text)
        written = [str(out / "domain.pddl")]
        if problem_text is not None:
            (out / f"{args.problem_name}.pddl").write_text(problem_text)
            written.append(str(out / f"{args.problem_name}.pddl"))
        print("wrote " + ", ".join(written))
        return OK
    payload = {"domain": domain_text, "problem": problem_text}
    text = domain_text + (("\n" + problem_text) if problem_text else "")
    _emit(args, payload, text.rstrip("\n"))
    return OK


def cmd_plan(args) -> int:
    if args.project:
        project = import_xml(_read(args.project))
        name = args.problem_name or (project.problems[0].name if project.problems else None)
        if name is None:
            raise CliError("project has no problems; pass --problem-name")
        domain_text, problem_text = export_pddl(project, name)
        assert problem_text is not None
    else:
        if not args.domain or not args.problem:
            raise CliError("need --domain and --problem (or --project)")
        domain_text = _read(args.domain)
        problem_text = _read(args.problem)
    if args.planner:
        if not args.plugins:
            raise CliError("--planner requires --plugins")
        plugins = {p.name: p for p in load_plugins(_read(args.plugins))}
        if args.planner not in plugins:
            raise CliError(f"no plugin named {args.planner!r}")
        plan = invoke_planner(plugins[args.planner], domain_text, problem_text)
    else:
        limits = SearchLimits(args.max_states, args.max_plan_length)
        plan = bfs_plan(parse_domain(domain_text), parse_problem(problem_text), limits)
    if args.out:
        Path(args.out).write_text(print_plan(plan))
    _emit(args, jsonio.plan_json(plan), print_plan(plan).rstrip("\n"))
    return OK


def cmd_validate(args) -> int:
    domain, problem, plan = _load_validation_inputs(args)
    report = validate(domain, problem, plan)
    lines = []
    for i, (action, ok) in enumerate(report.steps, start=1):
        lines.append(f"step {i} ({' '.join((action.name, *action.args))}): "
                     + ("ok" if ok else "NOT APPLICABLE"))
    if report.flaw:
        for atom, polarity, reason in report.flaw.unsatisfied:
            lines.append(f"  flaw: {format_atom(atom)} {reason} ({polarity})")
    if report.bind_failure:
        lines.append(
            f"step {report.bind_failure.step_index} failed to bind: "
            f"{report.bind_failure.message}"
        )
    if report.goal_satisfied is not None:
        lines.append(f"goal satisfied: {report.goal_satisfied}")
    lines.append(f"valid: {report.valid}")
    _emit(args, jsonio.report_json(report), "\n".join(lines))
    return OK if report.valid else DOMAIN_FAILURE


def cmd_links(args) -> int:
    domain, problem, plan = _load_validation_inputs(args)
    report = validate(domain, problem, plan)
    text = [
        f"{l.producer} -> {l.consumer}  {format_atom(l.atom)}  [{l.polarity}]"
        for l in report.links
    ]
    _emit(args, [jsonio.link_json(l) for l in report.links], "\n".join(text))
    return OK


def cmd_state(args) -> int:
    domain, problem, plan = _load_validation_inputs(args)
    report = validate(domain, problem, plan)
    state = state_at(report, args.at)
    payload = {"k": args.at, "state": jsonio.state_json(state)}
    _emit(args, payload, "\n".join(jsonio.state_json(state)))
    return OK


def cmd_repair(args) -> int:
    domain, problem, plan = _load_validation_inputs(args)
    report = validate(domain, problem, plan)
    advice = advise(domain, problem, plan, report)
    if args.advise or not args.apply:
        _emit(args, jsonio.advice_json(advice), advice.advice_text)
        return OK
    choice = args.apply.upper()
    if choice == "A":
        repaired, diagnostics = apply_advice(domain, advice, "A")
    elif choice.startswith("B:"):
        repaired, diagnostics = apply_advice(domain, advice, "B", int(choice[2:]))
    else:
        raise CliError("--apply takes A or B:<index>")
    domain_text = print_domain(repaired)
    if args.out:
        Path(args.out).write_text(domain_text)
        print(f"wrote {args.out} ({len(diagnostics)} diagnostics)")
    else:
        _emit(
            args,
            {"domain": domain_text, "diagnostics": jsonio.diagnostics_json(diagnostics)},
            domain_text.rstrip("\n"),
        )
    return OK


def cmd_serve(args) -> int:
    from .service import WorkbenchService

    kb = load_kb(_read(args.kb)) if args.kb else default_kb()
    plugins = load_plugins(_read(args.plugins)) if args.plugins else []
    service = WorkbenchService(
        host=args.host,
        port=args.port,
        kb=kb,
        plugins=plugins,
        data_dir=args.data_dir,
    )
    service.start()
    print(f"serving on http://{args.host}:{service.port}", flush=True)
    try:
        service.wait()
    except KeyboardInterrupt:
        service.stop()
    return OK


# -- argument plumbing -------------------------------------------------------------


def _add_common(sub, *, plan_flag=False, project_flags=True) -> None:
    if project_flags:
        sub.add_argument("--project", help="project XML file")
        sub.add_argument("--problem-name", help="problem name inside the project")
    sub.add_argument("--domain", help="domain PDDL file")
    sub.add_argument("--problem", help="problem PDDL file")
    if plan_flag:
        sub.add_argument("--plan", help="plan text file")
    sub.add_argument("--kb", help="knowledge-base file")
    sub.add_argument("--format", choices=("text", "json"), default="text")
    sub.add_argument("--out", help="output file or directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="planforge",
        description="Model, check, plan, validate, and repair planning domains.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("parse", help="parse PDDL/plan files and summarize")
    _add_common(p, plan_flag=True, project_flags=False)

    p = subs.add_parser("check", help="run the consistency checker")
    _add_common(p)

    p = subs.add_parser("export", help="convert a project to XML or PDDL")
    p.add_argument("what", choices=("xml", "pddl"))
    _add_common(p)

    p = subs.add_parser("plan", help="run the built-in planner or a plugin")
    _add_common(p)
    p.add_argument("--builtin-bfs", action="store_true", help="use the built-in planner")
    p.add_argument("--planner", help="plugin name from --plugins")
    p.add_argument("--plugins", help="plugin config JSON file")
    p.add_argument("--max-states", type=int, default=100_000)
    p.add_argument("--max-plan-length", type=int, default=64)

    p = subs.add_parser("validate", help="validate a plan against domain and problem")
    _add_common(p, plan_flag=True)

    p = subs.add_parser("links", help="show causal links of a validated plan")
    _add_common(p, plan_flag=True)

    p = subs.add_parser("state", help="show the world state after step k")
    _add_common(p, plan_flag=True)
    p.add_argument("--at", type=int, required=True, help="step index (0 = initial state)")

    p = subs.add_parser("repair", help="advise on or apply a domain repair")
    _add_common(p, plan_flag=True)
    p.add_argument("--advise", action="store_true", help="print repair advice")
    p.add_argument("--apply", metavar="A|B:k", help="apply option A or B:<index>")

    p = subs.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8571)
    p.add_argument("--data-dir", help="directory for project XML snapshots")
    p.add_argument("--kb", help="knowledge-base file (default: logistics KB)")
    p.add_argument("--plugins", help="plugin config JSON file")

    return parser


HANDLERS = {
    "parse": cmd_parse,
    "check": cmd_check,
    "export": cmd_export,
    "plan": cmd_plan,
    "validate": cmd_validate,
    "links": cmd_links,
    "state": cmd_state,
    "repair": cmd_repair,
    "serve": cmd_serve,
}

DOMAIN_LEVEL_ERRORS = (
    NoPlanFound,
    LimitExceeded,
    PlannerTimeout,
    NoPlanInOutput,
    NoFlaw,
    RefusedOnErrors,
    NoDomainContent,
)


def cli_dispatch(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code not in (0, None) else OK
    try:
        return HANDLERS[args.command](args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except DOMAIN_LEVEL_ERRORS as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return DOMAIN_FAILURE
    except (PddlError, WorkspaceError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


def main() -> None:
    sys.exit(cli_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
