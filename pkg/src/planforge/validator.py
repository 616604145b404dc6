"""Native STRIPS plan validation: grounding, applicability, progression,
causal-link extraction, and flaw capture.

States are closed-world frozensets of ground atoms.  Validation halts at
the first inapplicable step; everything after it is undefined and the flaw
records exactly which literals failed and why.
"""

from __future__ import annotations

from dataclasses import dataclass

from .pddl import (
    Atom,
    DomainAst,
    OperatorSchema,
    Plan,
    PlanStep,
    PddlError,
    ProblemAst,
)

MISSING = "missing"
UNEXPECTEDLY_PRESENT = "unexpectedly-present"


class BindError(PddlError):
    """A plan step could not be grounded against the domain/problem."""


class UnknownAction(BindError):
    pass


class ArityMismatch(BindError):
    pass


class UnknownObject(BindError):
    pass


class TypeMismatch(BindError):
    pass


class IndexBeyondFlaw(PddlError):
    """state_at index past the applicable prefix."""


class IndexOutOfRange(PddlError):
    """step_overview index outside the bound steps."""


@dataclass(frozen=True)
class GroundAction:
    """A fully instantiated action: what it needs and what it changes."""

    name: str
    args: tuple[str, ...]
    pre_pos: frozenset[Atom]
    pre_neg: frozenset[Atom]
    add: frozenset[Atom]
    delete: frozenset[Atom]


@dataclass(frozen=True)
class Flaw:
    """The first inapplicable step and its violated precondition literals."""

    step_index: int
    action: tuple[str, tuple[str, ...]]
    unsatisfied: tuple[tuple[Atom, str, str], ...]  # (atom, polarity, reason)


@dataclass(frozen=True)
class BindFailure:
    """Terminal grounding failure, distinct from a semantic flaw."""

    step_index: int
    error: str
    message: str


@dataclass(frozen=True)
class CausalLink:
    """producer (0 = initial state) supplies atom to consumer's precondition."""

    producer: int
    consumer: int
    atom: Atom
    polarity: str  # "positive" | "negative"


@dataclass(frozen=True)
class ValidationReport:
    states: tuple[frozenset[Atom], ...]
    steps: tuple[tuple[GroundAction, bool], ...]
    flaw: Flaw | None
    goal_satisfied: bool | None
    valid: bool
    links: tuple[CausalLink, ...]
    bind_failure: BindFailure | None = None

    @property
    def prefix_length(self) -> int:
        return len(self.states) - 1


def ground_operator(schema: OperatorSchema, args: tuple[str, ...]) -> GroundAction:
    binding = {var: obj for (var, _), obj in zip(schema.params, args)}

    def sub(lit):
        return (lit.predicate, *(binding.get(a, a) for a in lit.args))

    return GroundAction(
        name=schema.name,
        args=tuple(args),
        pre_pos=frozenset(sub(l) for l in schema.preconditions if l.positive),
        pre_neg=frozenset(sub(l) for l in schema.preconditions if not l.positive),
        add=frozenset(sub(l) for l in schema.effects if l.positive),
        delete=frozenset(sub(l) for l in schema.effects if not l.positive),
    )


def bind_step(domain: DomainAst, problem: ProblemAst, step: PlanStep) -> GroundAction:
    """Ground one plan step, checking arity and argument types."""
    schema = domain.action(step.name)
    if schema is None:
        raise UnknownAction(f"no action named {step.name!r} in domain {domain.name!r}")
    if len(step.args) != len(schema.params):
        raise ArityMismatch(
            f"action {step.name!r} takes {len(schema.params)} arguments, got {len(step.args)}"
        )
    scope = dict(problem.objects)
    scope.update(dict(domain.constants))
    for (var, declared), obj in zip(schema.params, step.args):
        if obj not in scope:
            raise UnknownObject(f"object {obj!r} is not declared in problem or constants")
        if not domain.types.is_subtype(scope[obj], declared):
            raise TypeMismatch(
                f"parameter {var} of {step.name!r} expects {declared}, "
                f"got {obj} of type {scope[obj]}"
            )
    return ground_operator(schema, step.args)


def applicability(
    state: frozenset[Atom], action: GroundAction
) -> tuple[bool, tuple[tuple[Atom, str, str], ...]]:
    """True iff pre_pos ⊆ state and pre_neg ∩ state = ∅, plus violations."""
    unsatisfied = [(atom, "positive", MISSING) for atom in sorted(action.pre_pos - state)]
    unsatisfied += [
        (atom, "negative", UNEXPECTEDLY_PRESENT) for atom in sorted(action.pre_neg & state)
    ]
    return (not unsatisfied, tuple(unsatisfied))


def progress(state: frozenset[Atom], action: GroundAction) -> frozenset[Atom]:
    """STRIPS successor: deletes applied before adds."""
    return (state - action.delete) | action.add


def goal_satisfied(problem: ProblemAst, state: frozenset[Atom]) -> bool:
    return all(
        (lit.atom() in state) == lit.positive for lit in problem.goal
    )


def _links_for_prefix(actions: list[GroundAction]) -> tuple[CausalLink, ...]:
    """Latest-producer causal links over an applicable prefix.

    Positive precondition of step j: latest i < j whose (effective) add
    produced the atom, else 0 for an undisturbed init atom.  Negative
    precondition: latest effective deleter, else 0 for a never-true atom.
    """
    links: list[CausalLink] = []
    for j, action in enumerate(actions, start=1):
        for atom in action.pre_pos:
            producer = 0
            for i in range(j - 1, 0, -1):
                if atom in actions[i - 1].add:
                    producer = i
                    break
            links.append(CausalLink(producer, j, atom, "positive"))
        for atom in action.pre_neg:
            producer = 0
            for i in range(j - 1, 0, -1):
                earlier = actions[i - 1]
                if atom in earlier.delete and atom not in earlier.add:
                    producer = i
                    break
            links.append(CausalLink(producer, j, atom, "negative"))
    links.sort(key=lambda l: (l.consumer, l.atom, l.polarity, l.producer))
    return tuple(links)


def validate(domain: DomainAst, problem: ProblemAst, plan: Plan) -> ValidationReport:
    """Bind and apply steps in order; stop at the first flaw; judge the goal."""
    states: list[frozenset[Atom]] = [frozenset(problem.init)]
    steps: list[tuple[GroundAction, bool]] = []
    applied: list[GroundAction] = []
    flaw: Flaw | None = None
    failure: BindFailure | None = None

    for index, step in enumerate(plan.steps, start=1):
        try:
            action = bind_step(domain, problem, step)
        except PddlError as exc:
            failure = BindFailure(index, type(exc).__name__, str(exc))
            break
        ok, unsatisfied = applicability(states[-1], action)
        steps.append((action, ok))
        if not ok:
            flaw = Flaw(index, (step.name, tuple(step.args)), unsatisfied)
            break
        applied.append(action)
        states.append(progress(states[-1], action))

    satisfied: bool | None = None
    if flaw is None and failure is None:
        satisfied = goal_satisfied(problem, states[-1])
    return ValidationReport(
        states=tuple(states),
        steps=tuple(steps),
        flaw=flaw,
        goal_satisfied=satisfied,
        valid=flaw is None and failure is None and satisfied is True,
        links=_links_for_prefix(applied),
        bind_failure=failure,
    )


def state_at(report: ValidationReport, k: int) -> frozenset[Atom]:
    """World state after step k; k = 0 is the initial state."""
    if k < 0 or k >= len(report.states):
        raise IndexBeyondFlaw(
            f"state index {k} outside the applicable prefix "
            f"(0..{len(report.states) - 1})"
        )
    return report.states[k]


def causal_links(report: ValidationReport) -> tuple[CausalLink, ...]:
    return report.links


def step_overview(report: ValidationReport, j: int) -> GroundAction:
    """The ground action bound at step j (1-based)."""
    if j < 1 or j > len(report.steps):
        raise IndexOutOfRange(f"step index {j} outside 1..{len(report.steps)}")
    return report.steps[j - 1][0]
