"""Three-level project model: language declaration, operators, problems.

The dependency direction is fixed: operators and problems may only
reference language-level names.  Violations are never unrepresentable —
they surface as diagnostics from ``check_consistency``, which is a pure
function of the project value.  Removing a declaration never cascades;
dependents keep their references and get DanglingReference diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .kb import KnowledgeBase
from .pddl import (
    DomainAst,
    Literal,
    OperatorSchema,
    PddlError,
    PredicateDecl,
    ProblemAst,
    RequirementSet,
    ROOT_TYPE,
    TypeHierarchy,
    is_variable,
    print_domain,
    print_problem,
)

ERROR = "error"
WARNING = "warning"


class WorkspaceError(PddlError):
    pass


class UnknownTarget(WorkspaceError):
    pass


class NoDomainContent(WorkspaceError):
    pass


class UnknownProblem(WorkspaceError):
    pass


class RefusedOnErrors(WorkspaceError):
    pass


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    code: str
    level: str  # "language" | "operator" | "problem"
    owner: str
    detail: str

    def sort_key(self):
        return (self.level, self.owner, self.code, self.detail)

    def format(self) -> str:
        return f"{self.severity}[{self.code}] {self.level}/{self.owner}: {self.detail}"


@dataclass(frozen=True)
class Project:
    name: str
    kb: KnowledgeBase = KnowledgeBase()
    classes: tuple[tuple[str, str], ...] = ()
    predicates: tuple[PredicateDecl, ...] = ()
    operators: tuple[OperatorSchema, ...] = ()
    problems: tuple[ProblemAst, ...] = ()

    def hierarchy(self) -> TypeHierarchy:
        parents: dict[str, str] = {}
        for name, parent in self.classes:
            parents.setdefault(name, parent)
        return TypeHierarchy(parents)

    def predicate(self, name: str) -> PredicateDecl | None:
        for p in self.predicates:
            if p.name == name:
                return p
        return None

    def operator(self, name: str) -> OperatorSchema | None:
        for o in self.operators:
            if o.name == name:
                return o
        return None

    def problem(self, name: str) -> ProblemAst | None:
        for p in self.problems:
            if p.name == name:
                return p
        return None


# -- edits ------------------------------------------------------------------


@dataclass(frozen=True)
class DeclareClass:
    name: str
    parent: str


@dataclass(frozen=True)
class RemoveClass:
    name: str


@dataclass(frozen=True)
class DeclarePredicate:
    decl: PredicateDecl


@dataclass(frozen=True)
class RemovePredicate:
    name: str
    arity: int


@dataclass(frozen=True)
class UpsertOperator:
    schema: OperatorSchema


@dataclass(frozen=True)
class RemoveOperator:
    name: str


@dataclass(frozen=True)
class UpsertProblem:
    problem: ProblemAst


@dataclass(frozen=True)
class RemoveProblem:
    name: str


@dataclass(frozen=True)
class RenameSymbol:
    kind: str  # "class" | "predicate" | "operator" | "problem"
    old: str
    new: str


Edit = (
    DeclareClass
    | RemoveClass
    | DeclarePredicate
    | RemovePredicate
    | UpsertOperator
    | RemoveOperator
    | UpsertProblem
    | RemoveProblem
    | RenameSymbol
)


def new_project(name: str) -> Project:
    return Project(name=name.lower())


def _rename_literal(lit: Literal, old: str, new: str) -> Literal:
    if lit.predicate != old:
        return lit
    return Literal(new, lit.args, lit.positive)


def _rename_type(pairs, old: str, new: str):
    return tuple((n, new if t == old else t) for n, t in pairs)


def apply_edit(project: Project, edit: Edit) -> tuple[Project, list[Diagnostic]]:
    """Apply one edit; returns the new project and its fresh diagnostics.

    Edits apply permissively (a duplicate declaration is stored and then
    diagnosed); only removals/renames of names that do not exist raise
    UnknownTarget.
    """
    p = project
    if isinstance(edit, DeclareClass):
        p = replace(p, classes=p.classes + ((edit.name.lower(), edit.parent.lower()),))
    elif isinstance(edit, RemoveClass):
        name = edit.name.lower()
        if all(n != name for n, _ in p.classes):
            raise UnknownTarget(f"no class named {name!r}")
        p = replace(p, classes=tuple((n, t) for n, t in p.classes if n != name))
    elif isinstance(edit, DeclarePredicate):
        p = replace(p, predicates=p.predicates + (edit.decl,))
    elif isinstance(edit, RemovePredicate):
        name = edit.name.lower()
        if all(d.name != name or d.arity != edit.arity for d in p.predicates):
            raise UnknownTarget(f"no predicate {name}/{edit.arity}")
        p = replace(
            p,
            predicates=tuple(
                d for d in p.predicates if d.name != name or d.arity != edit.arity
            ),
        )
    elif isinstance(edit, UpsertOperator):
        if any(o.name == edit.schema.name for o in p.operators):
            p = replace(
                p,
                operators=tuple(
                    edit.schema if o.name == edit.schema.name else o for o in p.operators
                ),
            )
        else:
            p = replace(p, operators=p.operators + (edit.schema,))
    elif isinstance(edit, RemoveOperator):
        name = edit.name.lower()
        if all(o.name != name for o in p.operators):
            raise UnknownTarget(f"no operator named {name!r}")
        p = replace(p, operators=tuple(o for o in p.operators if o.name != name))
    elif isinstance(edit, UpsertProblem):
        prob = replace(edit.problem, domain_name=p.name)
        if any(x.name == prob.name for x in p.problems):
            p = replace(
                p, problems=tuple(prob if x.name == prob.name else x for x in p.problems)
            )
        else:
            p = replace(p, problems=p.problems + (prob,))
    elif isinstance(edit, RemoveProblem):
        name = edit.name.lower()
        if all(x.name != name for x in p.problems):
            raise UnknownTarget(f"no problem named {name!r}")
        p = replace(p, problems=tuple(x for x in p.problems if x.name != name))
    elif isinstance(edit, RenameSymbol):
        p = _rename(p, edit.kind, edit.old.lower(), edit.new.lower())
    else:
        raise WorkspaceError(f"unknown edit {edit!r}")
    return p, check_consistency(p)


def _rename(p: Project, kind: str, old: str, new: str) -> Project:
    if kind == "class":
        if all(n != old for n, _ in p.classes):
            raise UnknownTarget(f"no class named {old!r}")
        return replace(
            p,
            classes=tuple(
                (new if n == old else n, new if t == old else t) for n, t in p.classes
            ),
            predicates=tuple(
                PredicateDecl(d.name, _rename_type(d.params, old, new)) for d in p.predicates
            ),
            operators=tuple(
                OperatorSchema(
                    o.name, _rename_type(o.params, old, new), o.preconditions, o.effects
                )
                for o in p.operators
            ),
            problems=tuple(
                replace(prob, objects=_rename_type(prob.objects, old, new))
                for prob in p.problems
            ),
        )
    if kind == "predicate":
        if all(d.name != old for d in p.predicates):
            raise UnknownTarget(f"no predicate named {old!r}")
        return replace(
            p,
            predicates=tuple(
                PredicateDecl(new, d.params) if d.name == old else d for d in p.predicates
            ),
            operators=tuple(
                OperatorSchema(
                    o.name,
                    o.params,
                    tuple(_rename_literal(l, old, new) for l in o.preconditions),
                    tuple(_rename_literal(l, old, new) for l in o.effects),
                )
                for o in p.operators
            ),
            problems=tuple(
                replace(
                    prob,
                    init=tuple(
                        (new, *atom[1:]) if atom[0] == old else atom for atom in prob.init
                    ),
                    goal=tuple(_rename_literal(g, old, new) for g in prob.goal),
                )
                for prob in p.problems
            ),
        )
    if kind == "operator":
        target = p.operator(old)
        if target is None:
            raise UnknownTarget(f"no operator named {old!r}")
        return replace(
            p,
            operators=tuple(
                OperatorSchema(new, o.params, o.preconditions, o.effects)
                if o.name == old
                else o
                for o in p.operators
            ),
        )
    if kind == "problem":
        if p.problem(old) is None:
            raise UnknownTarget(f"no problem named {old!r}")
        return replace(
            p,
            problems=tuple(
                replace(prob, name=new) if prob.name == old else prob for prob in p.problems
            ),
        )
    raise WorkspaceError(f"unknown rename kind {kind!r}")


# -- consistency -------------------------------------------------------------


def check_consistency(project: Project) -> list[Diagnostic]:
    """Deterministic, order-stable diagnostics for the whole project.

    Empty iff the project exports to PDDL that parses back cleanly with
    every atom arity- and type-correct.
    """
    diags: list[Diagnostic] = []
    add = diags.append
    hierarchy = project.hierarchy()
    class_names = {n for n, _ in project.classes}

    def type_known(t: str) -> bool:
        return t == ROOT_TYPE or t in class_names

    # language level: classes
    seen_classes: set[str] = set()
    for name, parent in project.classes:
        if name == ROOT_TYPE:
            add(Diagnostic(ERROR, "DuplicateDeclaration", "language", name,
                           "the root type 'object' is implicit and cannot be declared"))
            continue
        if name in seen_classes:
            add(Diagnostic(ERROR, "DuplicateDeclaration", "language", name,
                           f"class {name!r} declared more than once"))
        seen_classes.add(name)
        if not type_known(parent):
            add(Diagnostic(ERROR, "UnknownType", "language", name,
                           f"parent type {parent!r} is not declared"))
    cycle = hierarchy.find_cycle()
    if cycle:
        owner = min(cycle)
        add(Diagnostic(ERROR, "HierarchyCycle", "language", owner,
                       "type cycle: " + " -> ".join(cycle)))

    # language level: predicates
    seen_preds: set[str] = set()
    for decl in project.predicates:
        if decl.name in seen_preds:
            add(Diagnostic(ERROR, "DuplicateDeclaration", "language", decl.name,
                           f"predicate {decl.name!r} declared more than once"))
        seen_preds.add(decl.name)
        var_names = [v for v, _ in decl.params]
        for var in sorted({v for v in var_names if var_names.count(v) > 1}):
            add(Diagnostic(ERROR, "DuplicateDeclaration", "language", decl.name,
                           f"parameter {var} repeated in predicate {decl.name!r}"))
        for var, typ in decl.params:
            if not type_known(typ):
                add(Diagnostic(ERROR, "UnknownType", "language", decl.name,
                               f"parameter {var} of {decl.name!r} has unknown type {typ!r}"))

    predicates = {d.name: d for d in project.predicates}

    def check_literal(level: str, owner: str, where: str, lit: Literal,
                      term_type: dict[str, str], term_kind: str) -> None:
        """Shared literal checks; term_type maps legal terms to their types."""
        decl = predicates.get(lit.predicate)
        if decl is None:
            add(Diagnostic(ERROR, "DanglingReference", level, owner,
                           f"{where} {lit.format()} references undeclared predicate "
                           f"{lit.predicate!r}"))
            return
        if len(lit.args) != decl.arity:
            add(Diagnostic(ERROR, "ArityMismatch", level, owner,
                           f"{where} {lit.format()} has {len(lit.args)} arguments, "
                           f"predicate {decl.name!r} expects {decl.arity}"))
            return
        for pos, (term, (pvar, ptype)) in enumerate(zip(lit.args, decl.params), start=1):
            if term not in term_type:
                if is_variable(term):
                    add(Diagnostic(ERROR, "UnboundVariable", level, owner,
                                   f"{where} {lit.format()}: variable {term} is not "
                                   f"{'a parameter' if term_kind == 'parameter' else 'allowed here'}"))
                else:
                    add(Diagnostic(ERROR, "UnknownObject", level, owner,
                                   f"{where} {lit.format()}: {term!r} is not a declared "
                                   f"{term_kind}"))
                continue
            ttype = term_type[term]
            if type_known(ttype) and type_known(ptype):
                if not hierarchy.is_subtype(ttype, ptype):
                    add(Diagnostic(ERROR, "ArgTypeMismatch", level, owner,
                                   f"{where} {lit.format()}: argument {pos} has type "
                                   f"{ttype!r}, {pvar} expects {ptype!r}"))

    # operator level
    seen_ops: set[str] = set()
    for op in project.operators:
        if op.name in seen_ops:
            add(Diagnostic(ERROR, "DuplicateDeclaration", "operator", op.name,
                           f"operator {op.name!r} declared more than once"))
        seen_ops.add(op.name)
        var_names = [v for v, _ in op.params]
        for var in sorted({v for v in var_names if var_names.count(v) > 1}):
            add(Diagnostic(ERROR, "DuplicateDeclaration", "operator", op.name,
                           f"parameter {var} repeated in operator {op.name!r}"))
        param_types = dict(op.params)
        for var, typ in op.params:
            if not type_known(typ):
                add(Diagnostic(ERROR, "UnknownType", "operator", op.name,
                               f"parameter {var} of {op.name!r} has unknown type {typ!r}"))
        for lit in op.preconditions:
            check_literal("operator", op.name, "precondition", lit, param_types, "parameter")
        for lit in op.effects:
            check_literal("operator", op.name, "effect", lit, param_types, "parameter")
        adds = {(l.predicate, l.args) for l in op.effects if l.positive}
        dels = {(l.predicate, l.args) for l in op.effects if not l.positive}
        for pred, args in sorted(adds & dels):
            lit = Literal(pred, args)
            add(Diagnostic(WARNING, "ContradictoryEffect", "operator", op.name,
                           f"effect {lit.format()} is both added and deleted"))

    # problem level
    seen_problems: set[str] = set()
    for prob in project.problems:
        if prob.name in seen_problems:
            add(Diagnostic(ERROR, "DuplicateDeclaration", "problem", prob.name,
                           f"problem {prob.name!r} declared more than once"))
        seen_problems.add(prob.name)
        obj_names = [n for n, _ in prob.objects]
        for obj in sorted({n for n in obj_names if obj_names.count(n) > 1}):
            add(Diagnostic(ERROR, "DuplicateDeclaration", "problem", prob.name,
                           f"object {obj!r} declared more than once"))
        obj_types = dict(prob.objects)
        for obj, typ in prob.objects:
            if not type_known(typ):
                add(Diagnostic(ERROR, "UnknownType", "problem", prob.name,
                               f"object {obj!r} has unknown type {typ!r}"))
        for atom in prob.init:
            lit = Literal(atom[0], tuple(atom[1:]))
            check_literal("problem", prob.name, "init", lit, obj_types, "object")
        for lit in prob.goal:
            check_literal("problem", prob.name, "goal", lit, obj_types, "object")

    return sorted(diags, key=Diagnostic.sort_key)


# -- conversion ---------------------------------------------------------------


def project_from_asts(
    domain: DomainAst,
    problems: tuple[ProblemAst, ...] | list[ProblemAst] = (),
    kb: KnowledgeBase | None = None,
) -> Project:
    """Adopt parsed PDDL as a project; domain constants are not representable."""
    if domain.constants:
        raise WorkspaceError(
            "domains with :constants cannot be adopted as workspace projects"
        )
    return Project(
        name=domain.name,
        kb=kb or KnowledgeBase(),
        classes=tuple(domain.types.parents.items()),
        predicates=domain.predicates,
        operators=domain.actions,
        problems=tuple(replace(p, domain_name=domain.name) for p in problems),
    )


def project_to_domain(project: Project) -> DomainAst:
    flags = ["strips"]
    if project.classes:
        flags.append("typing")
    has_negative = any(
        not lit.positive for op in project.operators for lit in op.preconditions
    ) or any(not g.positive for prob in project.problems for g in prob.goal)
    if has_negative:
        flags.append("negative-preconditions")
    return DomainAst(
        name=project.name,
        requirements=RequirementSet(tuple(flags)),
        types=project.hierarchy(),
        predicates=project.predicates,
        constants=(),
        actions=project.operators,
    )


def export_pddl(project: Project, problem_name: str | None = None) -> tuple[str, str | None]:
    """Print the project as PDDL; refuses while error diagnostics exist."""
    if not project.predicates and not project.operators:
        raise NoDomainContent(f"project {project.name!r} has no predicates or operators")
    problem = None
    if problem_name is not None:
        problem = project.problem(problem_name.lower())
        if problem is None:
            raise UnknownProblem(f"no problem named {problem_name!r}")
    errors = [d for d in check_consistency(project) if d.severity == ERROR]
    if errors:
        raise RefusedOnErrors(
            f"{len(errors)} error diagnostic(s) present; first: {errors[0].format()}"
        )
    domain_text = print_domain(project_to_domain(project))
    problem_text = print_problem(problem) if problem is not None else None
    return domain_text, problem_text
