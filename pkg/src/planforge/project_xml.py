"""Project XML persistence (schema version "1").

The format round-trips broken models on purpose: a project that produces
diagnostics still exports, and importing it reproduces the same
diagnostics, so work-in-progress never gets lost.  Import is strict —
unknown elements or attributes are schema violations with an element path.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET

from .kb import KnowledgeBase, PredicateTemplate, TypeTemplate
from .pddl import Literal, OperatorSchema, PredicateDecl, ProblemAst
from .workspace import Project, WorkspaceError

SCHEMA_VERSION = "1"


class SchemaViolation(WorkspaceError):
    pass


class UnsupportedVersion(WorkspaceError):
    pass


# -- export -------------------------------------------------------------------


def _literal_element(parent: ET.Element, tag: str, lit: Literal) -> None:
    elem = ET.SubElement(
        parent,
        tag,
        polarity="positive" if lit.positive else "negative",
        predicate=lit.predicate,
    )
    for arg in lit.args:
        ET.SubElement(elem, "arg", var=arg)


def export_xml(project: Project) -> str:
    root = ET.Element("kaviProject", version=SCHEMA_VERSION, name=project.name)

    kb = ET.SubElement(root, "kb")
    for t in project.kb.types:
        ET.SubElement(kb, "typeTemplate", name=t.name)
    for p in project.kb.predicates:
        tmpl = ET.SubElement(kb, "predicateTemplate", identifier=p.identifier)
        for typ in p.param_types:
            ET.SubElement(tmpl, "param", type=typ)

    language = ET.SubElement(root, "language")
    classes = ET.SubElement(language, "classes")
    for name, parent in project.classes:
        ET.SubElement(classes, "class", name=name, parent=parent)
    predicates = ET.SubElement(language, "predicates")
    for decl in project.predicates:
        pred = ET.SubElement(predicates, "predicate", name=decl.name)
        for var, typ in decl.params:
            ET.SubElement(pred, "param", name=var, type=typ)

    operators = ET.SubElement(root, "operators")
    for op in project.operators:
        elem = ET.SubElement(operators, "operator", name=op.name)
        for var, typ in op.params:
            ET.SubElement(elem, "param", name=var, type=typ)
        for lit in op.preconditions:
            _literal_element(elem, "pre", lit)
        for lit in op.effects:
            _literal_element(elem, "eff", lit)

    problems = ET.SubElement(root, "problems")
    for prob in project.problems:
        elem = ET.SubElement(problems, "problem", name=prob.name)
        for name, typ in prob.objects:
            ET.SubElement(elem, "object", name=name, type=typ)
        for atom in prob.init:
            _literal_element(elem, "init", Literal(atom[0], tuple(atom[1:])))
        for lit in prob.goal:
            _literal_element(elem, "goal", lit)

    ET.indent(root)
    return ET.tostring(root, encoding="unicode") + "\n"


# -- import -------------------------------------------------------------------


def _attrs(elem: ET.Element, path: str, required: tuple[str, ...]) -> dict[str, str]:
    unknown = set(elem.attrib) - set(required)
    if unknown:
        raise SchemaViolation(f"{path}: unknown attribute {sorted(unknown)[0]!r}")
    out: dict[str, str] = {}
    for key in required:
        if key not in elem.attrib:
            raise SchemaViolation(f"{path}: missing attribute {key!r}")
        out[key] = elem.attrib[key].lower()
    return out


def _no_children(elem: ET.Element, path: str) -> None:
    for child in elem:
        raise SchemaViolation(f"{path}: unexpected element {child.tag!r}")


def _read_literal(elem: ET.Element, path: str, allow_negative: bool = True) -> Literal:
    attrs = _attrs(elem, path, ("polarity", "predicate"))
    if attrs["polarity"] not in ("positive", "negative"):
        raise SchemaViolation(f"{path}: bad polarity {attrs['polarity']!r}")
    if attrs["polarity"] == "negative" and not allow_negative:
        raise SchemaViolation(f"{path}: init atoms must be positive")
    args: list[str] = []
    for i, child in enumerate(elem, start=1):
        if child.tag != "arg":
            raise SchemaViolation(f"{path}: unexpected element {child.tag!r}")
        args.append(_attrs(child, f"{path}/arg[{i}]", ("var",))["var"])
    return Literal(attrs["predicate"], tuple(args), attrs["polarity"] == "positive")


def _read_kb(elem: ET.Element, path: str) -> KnowledgeBase:
    types: list[TypeTemplate] = []
    predicates: list[PredicateTemplate] = []
    for i, child in enumerate(elem, start=1):
        if child.tag == "typeTemplate":
            name = _attrs(child, f"{path}/typeTemplate[{i}]", ("name",))["name"]
            _no_children(child, f"{path}/typeTemplate[{i}]")
            types.append(TypeTemplate(name))
        elif child.tag == "predicateTemplate":
            tpath = f"{path}/predicateTemplate[{i}]"
            identifier = _attrs(child, tpath, ("identifier",))["identifier"]
            params = []
            for j, param in enumerate(child, start=1):
                if param.tag != "param":
                    raise SchemaViolation(f"{tpath}: unexpected element {param.tag!r}")
                params.append(_attrs(param, f"{tpath}/param[{j}]", ("type",))["type"])
            predicates.append(PredicateTemplate(identifier, tuple(params)))
        else:
            raise SchemaViolation(f"{path}: unexpected element {child.tag!r}")
    return KnowledgeBase.build(types, predicates)


def _read_language(elem: ET.Element, path: str):
    classes: list[tuple[str, str]] = []
    predicates: list[PredicateDecl] = []
    for child in elem:
        if child.tag == "classes":
            for i, cls in enumerate(child, start=1):
                if cls.tag != "class":
                    raise SchemaViolation(f"{path}/classes: unexpected element {cls.tag!r}")
                attrs = _attrs(cls, f"{path}/classes/class[{i}]", ("name", "parent"))
                _no_children(cls, f"{path}/classes/class[{i}]")
                classes.append((attrs["name"], attrs["parent"]))
        elif child.tag == "predicates":
            for i, pred in enumerate(child, start=1):
                if pred.tag != "predicate":
                    raise SchemaViolation(
                        f"{path}/predicates: unexpected element {pred.tag!r}"
                    )
                ppath = f"{path}/predicates/predicate[{i}]"
                name = _attrs(pred, ppath, ("name",))["name"]
                params: list[tuple[str, str]] = []
                for j, param in enumerate(pred, start=1):
                    if param.tag != "param":
                        raise SchemaViolation(f"{ppath}: unexpected element {param.tag!r}")
                    attrs = _attrs(param, f"{ppath}/param[{j}]", ("name", "type"))
                    params.append((attrs["name"], attrs["type"]))
                predicates.append(PredicateDecl(name, tuple(params)))
        else:
            raise SchemaViolation(f"{path}: unexpected element {child.tag!r}")
    return tuple(classes), tuple(predicates)


def _read_operator(elem: ET.Element, path: str) -> OperatorSchema:
    name = _attrs(elem, path, ("name",))["name"]
    params: list[tuple[str, str]] = []
    preconditions: list[Literal] = []
    effects: list[Literal] = []
    for i, child in enumerate(elem, start=1):
        if child.tag == "param":
            attrs = _attrs(child, f"{path}/param[{i}]", ("name", "type"))
            params.append((attrs["name"], attrs["type"]))
        elif child.tag == "pre":
            preconditions.append(_read_literal(child, f"{path}/pre[{i}]"))
        elif child.tag == "eff":
            effects.append(_read_literal(child, f"{path}/eff[{i}]"))
        else:
            raise SchemaViolation(f"{path}: unexpected element {child.tag!r}")
    return OperatorSchema(name, tuple(params), tuple(preconditions), tuple(effects))


def _read_problem(elem: ET.Element, path: str, domain_name: str) -> ProblemAst:
    name = _attrs(elem, path, ("name",))["name"]
    objects: list[tuple[str, str]] = []
    init: list[Literal] = []
    goal: list[Literal] = []
    for i, child in enumerate(elem, start=1):
        if child.tag == "object":
            attrs = _attrs(child, f"{path}/object[{i}]", ("name", "type"))
            _no_children(child, f"{path}/object[{i}]")
            objects.append((attrs["name"], attrs["type"]))
        elif child.tag == "init":
            init.append(_read_literal(child, f"{path}/init[{i}]", allow_negative=False))
        elif child.tag == "goal":
            goal.append(_read_literal(child, f"{path}/goal[{i}]"))
        else:
            raise SchemaViolation(f"{path}: unexpected element {child.tag!r}")
    return ProblemAst(
        name=name,
        domain_name=domain_name,
        objects=tuple(objects),
        init=tuple(lit.atom() for lit in init),
        goal=tuple(goal),
    )


def import_xml(text: str) -> Project:
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise SchemaViolation(f"not well-formed XML: {exc}") from exc
    if root.tag != "kaviProject":
        raise SchemaViolation(f"kaviProject: root element is {root.tag!r}")
    attrs = _attrs(root, "kaviProject", ("version", "name"))
    if attrs["version"] != SCHEMA_VERSION:
        raise UnsupportedVersion(f"unsupported schema version {attrs['version']!r}")
    name = attrs["name"]

    kb = KnowledgeBase()
    classes: tuple[tuple[str, str], ...] = ()
    predicates: tuple[PredicateDecl, ...] = ()
    operators: list[OperatorSchema] = []
    problems: list[ProblemAst] = []
    seen: set[str] = set()
    for child in root:
        if child.tag in seen:
            raise SchemaViolation(f"kaviProject: duplicate section {child.tag!r}")
        seen.add(child.tag)
        if child.tag == "kb":
            kb = _read_kb(child, "kaviProject/kb")
        elif child.tag == "language":
            classes, predicates = _read_language(child, "kaviProject/language")
        elif child.tag == "operators":
            for i, op in enumerate(child, start=1):
                if op.tag != "operator":
                    raise SchemaViolation(
                        f"kaviProject/operators: unexpected element {op.tag!r}"
                    )
                operators.append(_read_operator(op, f"kaviProject/operators/operator[{i}]"))
        elif child.tag == "problems":
            for i, prob in enumerate(child, start=1):
                if prob.tag != "problem":
                    raise SchemaViolation(
                        f"kaviProject/problems: unexpected element {prob.tag!r}"
                    )
                problems.append(
                    _read_problem(prob, f"kaviProject/problems/problem[{i}]", name)
                )
        else:
            raise SchemaViolation(f"kaviProject: unexpected element {child.tag!r}")

    return Project(
        name=name,
        kb=kb,
        classes=classes,
        predicates=predicates,
        operators=tuple(operators),
        problems=tuple(problems),
    )
