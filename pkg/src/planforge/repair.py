"""Turn a validation flaw into repair advice and apply it to the domain.

Option A synthesizes an achiever action whose only effect satisfies the
flawed literal; option B enumerates edits to existing operators, each one
justified by the validated trace.  Advice targets the domain, never the
plan.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .pddl import (
    Atom,
    DomainAst,
    Literal,
    OperatorSchema,
    PddlError,
    Plan,
    ProblemAst,
    format_atom,
)
from .validator import (
    Flaw,
    GroundAction,
    MISSING,
    ValidationReport,
    bind_step,
)
from .workspace import Diagnostic, check_consistency, project_from_asts

ADD_EFFECT = "AddEffectToEarlierStep"
REMOVE_PRECONDITION = "RemovePrecondition"
REMOVE_OFFENDING_DELETE = "RemoveOffendingDeleteEffect"


class RepairError(PddlError):
    pass


class NoFlaw(RepairError):
    pass


class StaleAdvice(RepairError):
    pass


class UnknownChoice(RepairError):
    pass


@dataclass(frozen=True)
class AchieverProposal:
    """A new action with no preconditions and exactly one effect."""

    new_action: OperatorSchema
    bound_args: tuple[str, ...]  # instantiating args that fix the flawed atom


@dataclass(frozen=True)
class ModificationProposal:
    kind: str
    target_operator: str
    change: Literal
    source_step: int | None = None


@dataclass(frozen=True)
class RepairAdvice:
    flaw: Flaw | None
    unsatisfied_goal: tuple[Literal, ...]
    option_a: AchieverProposal
    option_b: tuple[ModificationProposal, ...]
    advice_text: str


def _object_types(domain: DomainAst, problem: ProblemAst) -> dict[str, str]:
    scope = dict(problem.objects)
    scope.update(dict(domain.constants))
    return scope


def _achiever(
    domain: DomainAst, problem: ProblemAst, atom: Atom, positive_needed: bool
) -> AchieverProposal:
    predicate, args = atom[0], atom[1:]
    scope = _object_types(domain, problem)
    params = tuple(
        (f"?x{i}", scope.get(obj, "object")) for i, obj in enumerate(args, start=1)
    )
    prefix = "achieve" if positive_needed else "forbid"
    effect = Literal(predicate, tuple(v for v, _ in params), positive_needed)
    schema = OperatorSchema(f"{prefix}-{predicate}", params, (), (effect,))
    return AchieverProposal(schema, tuple(args))


def _lift_through_binding(
    atom: Atom, schema: OperatorSchema, args: tuple[str, ...]
) -> tuple[str, ...] | None:
    """Map the atom's objects back to parameters of the bound operator."""
    binding = list(zip(schema.param_names(), args))
    lifted: list[str] = []
    for obj in atom[1:]:
        match = next((var for var, bound in binding if bound == obj), None)
        if match is None:
            return None
        lifted.append(match)
    return tuple(lifted)


def _bound_actions(
    domain: DomainAst, problem: ProblemAst, plan: Plan, upto: int
) -> list[GroundAction]:
    return [bind_step(domain, problem, step) for step in plan.steps[: upto - 1]]


def advise(
    domain: DomainAst, problem: ProblemAst, plan: Plan, report: ValidationReport
) -> RepairAdvice:
    """Build repair advice for the report's flaw (or unsatisfied goal)."""
    if report.valid:
        raise NoFlaw("the plan is valid; nothing to repair")
    if report.bind_failure is not None:
        raise NoFlaw(
            "the plan does not bind against the domain "
            f"(step {report.bind_failure.step_index}: {report.bind_failure.message}); "
            "repair advice targets semantic flaws"
        )

    goal_unsat: tuple[Literal, ...] = ()
    if report.flaw is not None:
        flawed_step = report.flaw.step_index
        unsatisfied = report.flaw.unsatisfied
    else:
        final = report.states[-1]
        goal_unsat = tuple(
            g for g in problem.goal if (g.atom() in final) != g.positive
        )
        flawed_step = len(plan.steps) + 1
        unsatisfied = tuple(
            (g.atom(), "positive" if g.positive else "negative",
             MISSING if g.positive else "unexpectedly-present")
            for g in goal_unsat
        )

    first_atom, _, first_reason = unsatisfied[0]
    positive_needed = first_reason == MISSING
    option_a = _achiever(domain, problem, first_atom, positive_needed)

    earlier = _bound_actions(domain, problem, plan, flawed_step)
    proposals: list[ModificationProposal] = []

    # (i) drop the failing precondition from the flawed step's operator
    if report.flaw is not None:
        step = plan.steps[flawed_step - 1]
        schema = domain.action(step.name)
        if schema is not None:
            binding = dict(zip(schema.param_names(), step.args))
            for lit in schema.preconditions:
                if lit.substitute(binding).atom() == first_atom and (
                    lit.positive == positive_needed
                ):
                    proposals.append(
                        ModificationProposal(REMOVE_PRECONDITION, schema.name, lit)
                    )

    # (ii) make an earlier step produce (or stop producing) the atom
    for index, action in enumerate(earlier, start=1):
        schema = domain.action(action.name)
        if schema is None:
            continue
        lifted = _lift_through_binding(first_atom, schema, action.args)
        if lifted is None:
            continue
        change = Literal(first_atom[0], lifted, positive_needed)
        proposals.append(
            ModificationProposal(ADD_EFFECT, schema.name, change, source_step=index)
        )

    # (iii) remove the earlier effect that clobbered the atom
    for index, action in enumerate(earlier, start=1):
        schema = domain.action(action.name)
        if schema is None:
            continue
        offending = action.delete if positive_needed else action.add
        if first_atom not in offending:
            continue
        binding = dict(zip(schema.param_names(), action.args))
        for lit in schema.effects:
            if lit.positive != positive_needed and lit.substitute(binding).atom() == first_atom:
                proposals.append(
                    ModificationProposal(
                        REMOVE_OFFENDING_DELETE, schema.name, lit, source_step=index
                    )
                )

    proposals.sort(key=lambda m: (m.kind, m.source_step or 0, m.target_operator))
    text = _advice_text(plan, report, unsatisfied, option_a, tuple(proposals), goal_unsat)
    return RepairAdvice(
        flaw=report.flaw,
        unsatisfied_goal=goal_unsat,
        option_a=option_a,
        option_b=tuple(proposals),
        advice_text=text,
    )


def _advice_text(
    plan: Plan,
    report: ValidationReport,
    unsatisfied,
    option_a: AchieverProposal,
    option_b: tuple[ModificationProposal, ...],
    goal_unsat: tuple[Literal, ...],
) -> str:
    lines: list[str] = []
    if report.flaw is not None:
        step = plan.steps[report.flaw.step_index - 1]
        lines.append(
            f"Step {report.flaw.step_index} {step.format()} is not applicable:"
        )
    else:
        lines.append("All steps apply but the goal is not satisfied:")
    for atom, polarity, reason in unsatisfied:
        lines.append(f"  {format_atom(atom)} is {reason} ({polarity} condition)")
    act = option_a.new_action
    lines.append(
        f"Option A: add new action {act.name!r} with sole effect "
        f"{act.effects[0].format()} and no preconditions."
    )
    if option_b:
        lines.append("Option B: modify an existing action:")
        for i, mod in enumerate(option_b):
            where = f" (step {mod.source_step})" if mod.source_step else ""
            lines.append(
                f"  [{i}] {mod.kind}: {mod.change.format()} on {mod.target_operator!r}{where}"
            )
    else:
        lines.append("Option B: no trace-justified modification found.")
    return "\n".join(lines)


def _unique_name(domain: DomainAst, base: str) -> str:
    if domain.action(base) is None:
        return base
    suffix = 2
    while domain.action(f"{base}-{suffix}") is not None:
        suffix += 1
    return f"{base}-{suffix}"


def apply_advice(
    domain: DomainAst, advice: RepairAdvice, option: str, index: int | None = None
) -> tuple[DomainAst, list[Diagnostic]]:
    """Apply option A or option B[index]; returns (domain, fresh diagnostics)."""
    option = option.upper()
    if option == "A":
        schema = advice.option_a.new_action
        named = replace(schema, name=_unique_name(domain, schema.name))
        repaired = replace(domain, actions=domain.actions + (named,))
    elif option == "B":
        if index is None or not 0 <= index < len(advice.option_b):
            raise UnknownChoice(f"option B index {index!r} out of range")
        mod = advice.option_b[index]
        target = domain.action(mod.target_operator)
        if target is None:
            raise StaleAdvice(f"operator {mod.target_operator!r} no longer exists")
        bound = set(target.param_names())
        if not all(a in bound for a in mod.change.args):
            raise StaleAdvice(
                f"operator {mod.target_operator!r} parameters changed; "
                f"{mod.change.format()} no longer lifts"
            )
        if mod.kind == ADD_EFFECT:
            updated = replace(target, effects=target.effects + (mod.change,))
        elif mod.kind == REMOVE_PRECONDITION:
            if mod.change not in target.preconditions:
                raise StaleAdvice(f"precondition {mod.change.format()} already gone")
            updated = replace(
                target,
                preconditions=tuple(l for l in target.preconditions if l != mod.change),
            )
        elif mod.kind == REMOVE_OFFENDING_DELETE:
            if mod.change not in target.effects:
                raise StaleAdvice(f"effect {mod.change.format()} already gone")
            updated = replace(
                target, effects=tuple(l for l in target.effects if l != mod.change)
            )
        else:
            raise UnknownChoice(f"unknown modification kind {mod.kind!r}")
        repaired = replace(
            domain,
            actions=tuple(updated if a.name == target.name else a for a in domain.actions),
        )
    else:
        raise UnknownChoice(f"choice must be 'A' or 'B', got {option!r}")
    diagnostics = check_consistency(project_from_asts(repaired))
    return repaired, diagnostics
