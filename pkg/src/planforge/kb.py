"""Abstract domain knowledge base: type and predicate templates.

Templates capture recurring modeling vocabulary (``at physobj place``);
the workbench offers prefix auto-completion over them and instantiates
them into concrete declarations.  The file format is plain text with
``[types]`` / ``[predicates]`` sections, one template per line, ``#``
comments.
"""

from __future__ import annotations

from dataclasses import dataclass

from .pddl import PredicateDecl, PddlError


class KbError(PddlError):
    pass


class EmptyTemplate(KbError):
    pass


class MalformedToken(KbError):
    pass


class MalformedLine(KbError):
    pass


class DuplicateTemplate(KbError):
    pass


@dataclass(frozen=True)
class TypeTemplate:
    name: str

    def format(self) -> str:
        return self.name


@dataclass(frozen=True)
class PredicateTemplate:
    identifier: str
    param_types: tuple[str, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.param_types)

    def format(self) -> str:
        return " ".join((self.identifier, *self.param_types))


@dataclass(frozen=True)
class KnowledgeBase:
    """Both template lists, kept sorted by identifier then arity."""

    types: tuple[TypeTemplate, ...] = ()
    predicates: tuple[PredicateTemplate, ...] = ()

    @classmethod
    def build(
        cls,
        types: list[TypeTemplate] | tuple[TypeTemplate, ...] = (),
        predicates: list[PredicateTemplate] | tuple[PredicateTemplate, ...] = (),
    ) -> "KnowledgeBase":
        type_names = [t.name for t in types]
        if len(type_names) != len(set(type_names)):
            dup = next(n for n in type_names if type_names.count(n) > 1)
            raise DuplicateTemplate(f"type template {dup!r} appears twice")
        keys = [(p.identifier, p.arity) for p in predicates]
        if len(keys) != len(set(keys)):
            dup = next(k for k in keys if keys.count(k) > 1)
            raise DuplicateTemplate(f"predicate template {dup[0]}/{dup[1]} appears twice")
        return cls(
            types=tuple(sorted(types, key=lambda t: t.name)),
            predicates=tuple(sorted(predicates, key=lambda p: (p.identifier, p.arity))),
        )


def parse_template(line: str) -> PredicateTemplate:
    """One template line: ``identifier type*``, optionally ``( ... )``-wrapped."""
    text = line.strip().lower()
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    tokens = text.split()
    if not tokens:
        raise EmptyTemplate("template line has no tokens")
    for token in tokens:
        if "(" in token or ")" in token or "?" in token:
            raise MalformedToken(f"bad template token {token!r}")
    return PredicateTemplate(tokens[0], tuple(tokens[1:]))


def complete(kb: KnowledgeBase, kind: str, prefix: str):
    """Templates of *kind* whose identifier starts with *prefix*, sorted."""
    prefix = prefix.strip().lower()
    if kind == "type":
        return tuple(t for t in kb.types if t.name.startswith(prefix))
    if kind == "predicate":
        return tuple(p for p in kb.predicates if p.identifier.startswith(prefix))
    raise KbError(f"unknown completion kind {kind!r}")


def instantiate_predicate(template: PredicateTemplate) -> PredicateDecl:
    """Concrete declaration with auto-generated variables ?x1..?xN."""
    params = tuple(
        (f"?x{i}", typ) for i, typ in enumerate(template.param_types, start=1)
    )
    return PredicateDecl(template.identifier, params)


def instantiate_type(template: TypeTemplate, parent: str) -> tuple[str, str]:
    if not parent:
        raise KbError("parent type must be nonempty")
    return (template.name, parent.lower())


def load_kb(text: str) -> KnowledgeBase:
    types: list[TypeTemplate] = []
    predicates: list[PredicateTemplate] = []
    section: str | None = None
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip().lower()
        if not line:
            continue
        if line == "[types]":
            section = "types"
            continue
        if line == "[predicates]":
            section = "predicates"
            continue
        if line.startswith("["):
            raise MalformedLine(f"line {number}: unknown section {line!r}")
        if section is None:
            raise MalformedLine(f"line {number}: template before any section header")
        try:
            template = parse_template(line)
        except KbError as exc:
            raise MalformedLine(f"line {number}: {exc}") from exc
        if section == "types":
            if template.param_types:
                raise MalformedLine(f"line {number}: type template takes no parameters")
            types.append(TypeTemplate(template.identifier))
        else:
            predicates.append(template)
    return KnowledgeBase.build(types, predicates)


def save_kb(kb: KnowledgeBase) -> str:
    lines = ["[types]"]
    lines += [t.format() for t in kb.types]
    lines.append("[predicates]")
    lines += [p.format() for p in kb.predicates]
    return "\n".join(lines) + "\n"


DEFAULT_KB_TEXT = """\
# logistics-family modeling vocabulary
[types]
physobj
place
package
truck
location
city
airport
airplane
[predicates]
at physobj place
in package truck
in-city place city
"""


def default_kb() -> KnowledgeBase:
    return load_kb(DEFAULT_KB_TEXT)
