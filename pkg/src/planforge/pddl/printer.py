"""Deterministic PDDL pretty-printer: parse(print(parse(x))) == parse(x).

Layout: one section per line group, two-space indentation, requirements
emitted exactly as declared.  ``- object`` annotations are printed unless
they fall on the trailing group of a typed list, where they are redundant.
"""

from __future__ import annotations

from .ast import DomainAst, Literal, Plan, ProblemAst, ROOT_TYPE


def _typed_groups(pairs: tuple[tuple[str, str], ...]) -> list[tuple[list[str], str]]:
    groups: list[tuple[list[str], str]] = []
    for name, typ in pairs:
        if groups and groups[-1][1] == typ:
            groups[-1][0].append(name)
        else:
            groups.append(([name], typ))
    return groups


def _typed_list(pairs: tuple[tuple[str, str], ...]) -> str:
    """Inline typed list, e.g. ``?pkg - package ?trk - truck`` or ``?x ?y``."""
    groups = _typed_groups(pairs)
    parts: list[str] = []
    for i, (names, typ) in enumerate(groups):
        last = i == len(groups) - 1
        if typ == ROOT_TYPE and last:
            parts.append(" ".join(names))
        else:
            parts.append(" ".join(names) + " - " + typ)
    return " ".join(parts)


def _typed_block(pairs: tuple[tuple[str, str], ...], indent: str) -> str:
    """One typed group per line, used for :types / :constants / :objects."""
    groups = _typed_groups(pairs)
    lines: list[str] = []
    for i, (names, typ) in enumerate(groups):
        last = i == len(groups) - 1
        if typ == ROOT_TYPE and last:
            lines.append(indent + " ".join(names))
        else:
            lines.append(indent + " ".join(names) + " - " + typ)
    return "\n".join(lines)


def _conjunction(literals: tuple[Literal, ...]) -> str:
    if not literals:
        return "(and)"
    return "(and " + " ".join(lit.format() for lit in literals) + ")"


def print_domain(d: DomainAst) -> str:
    lines = [f"(define (domain {d.name})"]
    if d.requirements:
        flags = " ".join(":" + f for f in d.requirements)
        lines.append(f"  (:requirements {flags})")
    if d.types.parents:
        pairs = tuple(d.types.parents.items())
        lines.append("  (:types\n" + _typed_block(pairs, "    ") + ")")
    if d.constants:
        lines.append("  (:constants\n" + _typed_block(d.constants, "    ") + ")")
    if d.predicates:
        decls = "\n".join("    " + p.format() for p in d.predicates)
        lines.append("  (:predicates\n" + decls + ")")
    for action in d.actions:
        lines.append(
            f"  (:action {action.name}\n"
            f"    :parameters ({_typed_list(action.params)})\n"
            f"    :precondition {_conjunction(action.preconditions)}\n"
            f"    :effect {_conjunction(action.effects)})"
        )
    lines.append(")")
    return "\n".join(lines) + "\n"


def print_problem(p: ProblemAst) -> str:
    lines = [f"(define (problem {p.name})", f"  (:domain {p.domain_name})"]
    if p.objects:
        lines.append("  (:objects\n" + _typed_block(p.objects, "    ") + ")")
    init = " ".join("(" + " ".join(atom) + ")" for atom in p.init)
    lines.append(f"  (:init {init})" if init else "  (:init)")
    lines.append(f"  (:goal {_conjunction(p.goal)})")
    lines.append(")")
    return "\n".join(lines) + "\n"


def print_plan(plan: Plan) -> str:
    return "".join(step.format() + "\n" for step in plan.steps)
