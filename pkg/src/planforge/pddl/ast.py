"""Abstract syntax for the supported PDDL subset.

All identifiers are lowercase-normalized at the lexer, so every value here
compares case-insensitively for free.  Values are immutable; building a
variant of an AST means building a new value (``dataclasses.replace`` works
on all of them).
"""

from __future__ import annotations

from dataclasses import dataclass, field

SUPPORTED_REQUIREMENTS = ("strips", "typing", "negative-preconditions")

ROOT_TYPE = "object"

#: A ground atom: (predicate, arg, arg, ...).
Atom = tuple[str, ...]


class PddlError(Exception):
    """Base for all errors raised by the PDDL layer."""


class UnknownType(PddlError):
    """A type name was used that is neither declared nor ``object``."""


class UnsupportedRequirement(PddlError):
    """A ``:requirements`` flag outside strips/typing/negative-preconditions."""


def format_atom(atom: Atom) -> str:
    return "(" + " ".join(atom) + ")"


def is_variable(term: str) -> bool:
    return term.startswith("?")


@dataclass(frozen=True)
class RequirementSet:
    """The declared ``:requirements`` flags, in declaration order."""

    flags: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        seen: list[str] = []
        for flag in self.flags:
            if flag not in SUPPORTED_REQUIREMENTS:
                raise UnsupportedRequirement(f"unsupported requirement :{flag}")
            if flag not in seen:
                seen.append(flag)
        object.__setattr__(self, "flags", tuple(seen))

    def __contains__(self, flag: str) -> bool:
        return flag in self.flags

    def __iter__(self):
        return iter(self.flags)

    def __bool__(self) -> bool:
        return bool(self.flags)


@dataclass
class TypeHierarchy:
    """Declared types and their parents; ``object`` is the implicit root.

    The mapping is permissive on purpose: cycle and unknown-parent detection
    live in the workspace consistency checker, while the parser refuses to
    produce a hierarchy that violates the invariants.  ``is_subtype`` is
    cycle-safe either way.
    """

    parents: dict[str, str] = field(default_factory=dict)

    def declared(self) -> tuple[str, ...]:
        return tuple(self.parents)

    def knows(self, name: str) -> bool:
        return name == ROOT_TYPE or name in self.parents

    def parent_of(self, name: str) -> str | None:
        if name == ROOT_TYPE:
            return None
        return self.parents.get(name)

    def is_subtype(self, sub: str, sup: str) -> bool:
        if not self.knows(sub):
            raise UnknownType(f"unknown type {sub!r}")
        if not self.knows(sup):
            raise UnknownType(f"unknown type {sup!r}")
        seen: set[str] = set()
        cur = sub
        while True:
            if cur == sup:
                return True
            if cur == ROOT_TYPE or cur in seen:
                return False
            seen.add(cur)
            cur = self.parents.get(cur, ROOT_TYPE)

    def find_cycle(self) -> tuple[str, ...] | None:
        """First cycle in declaration order, or None."""
        for start in self.parents:
            seen: list[str] = []
            cur: str | None = start
            while cur is not None and cur != ROOT_TYPE:
                if cur in seen:
                    i = seen.index(cur)
                    return tuple(seen[i:])
                seen.append(cur)
                cur = self.parents.get(cur)
        return None


def is_subtype(hierarchy: TypeHierarchy, sub: str, sup: str) -> bool:
    return hierarchy.is_subtype(sub, sup)


@dataclass(frozen=True)
class PredicateDecl:
    """A declared predicate: name plus ordered (variable, type) parameters."""

    name: str
    params: tuple[tuple[str, str], ...] = ()

    @property
    def arity(self) -> int:
        return len(self.params)

    def format(self) -> str:
        parts = [self.name]
        for var, typ in self.params:
            parts.append(var if typ == ROOT_TYPE else f"{var} - {typ}")
        return "(" + " ".join(parts) + ")"


@dataclass(frozen=True)
class Literal:
    """A possibly negated atom over variables and/or object constants."""

    predicate: str
    args: tuple[str, ...] = ()
    positive: bool = True

    def negate(self) -> Literal:
        return Literal(self.predicate, self.args, not self.positive)

    def atom(self) -> Atom:
        return (self.predicate, *self.args)

    def is_ground(self) -> bool:
        return not any(is_variable(a) for a in self.args)

    def substitute(self, binding: dict[str, str]) -> Literal:
        return Literal(
            self.predicate,
            tuple(binding.get(a, a) for a in self.args),
            self.positive,
        )

    def format(self) -> str:
        inner = format_atom(self.atom())
        return inner if self.positive else f"(not {inner})"


@dataclass(frozen=True, eq=False)
class OperatorSchema:
    """A lifted STRIPS action: typed parameters, preconditions, effects.

    Positive effects are adds, negative effects are deletes.  Equality
    treats the precondition and effect lists as sets: two schemata that
    differ only in literal order describe the same operator.
    """

    name: str
    params: tuple[tuple[str, str], ...] = ()
    preconditions: tuple[Literal, ...] = ()
    effects: tuple[Literal, ...] = ()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OperatorSchema):
            return NotImplemented
        return (
            self.name == other.name
            and self.params == other.params
            and frozenset(self.preconditions) == frozenset(other.preconditions)
            and frozenset(self.effects) == frozenset(other.effects)
        )

    def __hash__(self) -> int:
        return hash(
            (self.name, self.params, frozenset(self.preconditions), frozenset(self.effects))
        )

    def param_names(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.params)

    def add_effects(self) -> tuple[Literal, ...]:
        return tuple(e for e in self.effects if e.positive)

    def del_effects(self) -> tuple[Literal, ...]:
        return tuple(e for e in self.effects if not e.positive)


@dataclass(frozen=True)
class DomainAst:
    name: str
    requirements: RequirementSet = RequirementSet()
    types: TypeHierarchy = field(default_factory=TypeHierarchy)
    predicates: tuple[PredicateDecl, ...] = ()
    constants: tuple[tuple[str, str], ...] = ()
    actions: tuple[OperatorSchema, ...] = ()

    def action(self, name: str) -> OperatorSchema | None:
        for a in self.actions:
            if a.name == name:
                return a
        return None

    def predicate(self, name: str) -> PredicateDecl | None:
        for p in self.predicates:
            if p.name == name:
                return p
        return None


@dataclass(frozen=True)
class ProblemAst:
    name: str
    domain_name: str
    objects: tuple[tuple[str, str], ...] = ()
    init: tuple[Atom, ...] = ()
    goal: tuple[Literal, ...] = ()

    def __post_init__(self) -> None:
        deduped: list[Atom] = []
        for atom in self.init:
            if atom not in deduped:
                deduped.append(atom)
        object.__setattr__(self, "init", tuple(deduped))

    def object_types(self) -> dict[str, str]:
        return {name: typ for name, typ in self.objects}


@dataclass(frozen=True)
class PlanStep:
    name: str
    args: tuple[str, ...] = ()

    def format(self) -> str:
        return "(" + " ".join((self.name, *self.args)) + ")"


@dataclass(frozen=True)
class Plan:
    """An ordered action sequence; step indices are 1-based in reports."""

    steps: tuple[PlanStep, ...] = ()

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)
