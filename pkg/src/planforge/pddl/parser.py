"""Tokenizer and recursive-descent parser for the supported PDDL subset.

Grammar decisions: typed lists with ``-``, ``(and ...)`` conjunctions only,
``(not ...)`` only directly around atoms, ``:constants`` allowed in domains,
no ``either`` types.  The first error wins and carries (line, column); there
is no error recovery.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .ast import (
    DomainAst,
    Literal,
    OperatorSchema,
    Plan,
    PlanStep,
    PddlError,
    PredicateDecl,
    ProblemAst,
    RequirementSet,
    ROOT_TYPE,
    SUPPORTED_REQUIREMENTS,
    TypeHierarchy,
    UnsupportedRequirement,
    is_variable,
)


class ParseError(PddlError):
    """Base for syntax errors; carries the source location."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(f"{line}:{col}: {message}" if line else message)
        self.line = line
        self.col = col


class UnbalancedParens(ParseError):
    pass


class UnsupportedConstruct(ParseError):
    pass


class MalformedSection(ParseError):
    pass


class VariableInGroundContext(ParseError):
    pass


class EmptyStep(ParseError):
    pass


LPAREN, RPAREN, ID, VAR, KEYWORD, DASH, EOF = "( ) id var kw - eof".split()

_ID_RE = re.compile(r"[a-z0-9][a-z0-9_-]*")


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    """Lowercase-normalizing tokenizer; ``;`` comments run to end of line."""
    text = text.lower()
    tokens: list[Token] = []
    i, line, bol = 0, 1, 0
    n = len(text)
    while i < n:
        ch = text[i]
        col = i - bol + 1
        if ch == "\n":
            line += 1
            i += 1
            bol = i
            continue
        if ch in " \t\r":
            i += 1
            continue
        if ch == ";":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch == "(":
            tokens.append(Token(LPAREN, "(", line, col))
            i += 1
            continue
        if ch == ")":
            tokens.append(Token(RPAREN, ")", line, col))
            i += 1
            continue
        if ch == "?":
            m = _ID_RE.match(text, i + 1)
            if not m:
                raise MalformedSection("bare '?' is not a variable", line, col)
            tokens.append(Token(VAR, "?" + m.group(0), line, col))
            i = m.end()
            continue
        if ch == ":":
            m = _ID_RE.match(text, i + 1)
            if not m:
                raise MalformedSection("bare ':' is not a keyword", line, col)
            tokens.append(Token(KEYWORD, m.group(0), line, col))
            i = m.end()
            continue
        if ch == "-" and (i + 1 >= n or not _ID_RE.match(text, i + 1)):
            tokens.append(Token(DASH, "-", line, col))
            i += 1
            continue
        m = _ID_RE.match(text, i)
        if m:
            tokens.append(Token(ID, m.group(0), line, col))
            i = m.end()
            continue
        raise MalformedSection(f"unexpected character {ch!r}", line, col)
    tokens.append(Token(EOF, "", line, n - bol + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    # -- token plumbing ------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        if t.kind != EOF:
            self.pos += 1
        return t

    def at(self, kind: str, value: str | None = None) -> bool:
        t = self.peek()
        return t.kind == kind and (value is None or t.value == value)

    def expect(self, kind: str, value: str | None = None, what: str = "") -> Token:
        t = self.advance()
        if t.kind == EOF and kind in (LPAREN, RPAREN):
            raise UnbalancedParens("unexpected end of input", t.line, t.col)
        if t.kind != kind or (value is not None and t.value != value):
            wanted = value or what or kind
            raise MalformedSection(f"expected {wanted}, got {t.value or t.kind!r}", t.line, t.col)
        return t

    def expect_rparen(self) -> Token:
        t = self.advance()
        if t.kind == EOF:
            raise UnbalancedParens("missing ')'", t.line, t.col)
        if t.kind != RPAREN:
            raise MalformedSection(f"expected ')', got {t.value!r}", t.line, t.col)
        return t

    def expect_name(self, what: str = "name") -> Token:
        t = self.advance()
        if t.kind != ID:
            raise MalformedSection(f"expected {what}, got {t.value or t.kind!r}", t.line, t.col)
        return t

    def finish(self) -> None:
        t = self.peek()
        if t.kind == RPAREN:
            raise UnbalancedParens("extra ')'", t.line, t.col)
        if t.kind != EOF:
            raise MalformedSection("trailing content after definition", t.line, t.col)

    # -- shared pieces ---------------------------------------------------

    def parse_requirements(self) -> RequirementSet:
        flags: list[str] = []
        while not self.at(RPAREN):
            t = self.advance()
            if t.kind == EOF:
                raise UnbalancedParens("missing ')'", t.line, t.col)
            if t.kind != KEYWORD:
                raise MalformedSection(f"expected :flag, got {t.value!r}", t.line, t.col)
            if t.value not in SUPPORTED_REQUIREMENTS:
                raise UnsupportedRequirement(f"unsupported requirement :{t.value}", t.line, t.col)
            flags.append(t.value)
        self.expect_rparen()
        return RequirementSet(tuple(flags))

    def parse_typed_names(self, kind: str, what: str) -> list[tuple[str, str]]:
        """Parse ``n1 n2 - t n3 ...`` up to (not including) the closing paren."""
        out: list[tuple[str, str]] = []
        pending: list[str] = []
        while not self.at(RPAREN):
            t = self.advance()
            if t.kind == EOF:
                raise UnbalancedParens("missing ')'", t.line, t.col)
            if t.kind == DASH:
                typ = self.expect_name("type name")
                if not pending:
                    raise MalformedSection("dangling '-' in typed list", t.line, t.col)
                out.extend((n, typ.value) for n in pending)
                pending = []
            elif t.kind == kind:
                pending.append(t.value)
            else:
                raise MalformedSection(f"expected {what}, got {t.value!r}", t.line, t.col)
        out.extend((n, ROOT_TYPE) for n in pending)
        return out

    def parse_atom_body(self, allow_vars: bool) -> Literal:
        """Argument terms of an atom after its predicate name, up to ')'."""
        name = self.expect_name("predicate name")
        args: list[str] = []
        while not self.at(RPAREN):
            t = self.advance()
            if t.kind == EOF:
                raise UnbalancedParens("missing ')'", t.line, t.col)
            if t.kind == VAR:
                if not allow_vars:
                    raise VariableInGroundContext(
                        f"variable {t.value} in ground context", t.line, t.col
                    )
                args.append(t.value)
            elif t.kind == ID:
                args.append(t.value)
            else:
                raise MalformedSection(f"expected term, got {t.value!r}", t.line, t.col)
        self.expect_rparen()
        return Literal(name.value, tuple(args))

    def parse_formula(self, allow_vars: bool, negatives: list[Token]) -> list[Literal]:
        """``atom | (not atom) | (and F*)``, flattened to a literal list.

        Appends the location of each ``not`` to *negatives* so callers can
        gate negative preconditions/goals on the declared requirements.
        """
        open_tok = self.expect(LPAREN)
        if self.at(RPAREN):  # bare () permitted only as empty conjunction
            raise MalformedSection("empty formula", open_tok.line, open_tok.col)
        t = self.peek()
        if t.kind == ID and t.value == "and":
            self.advance()
            literals: list[Literal] = []
            while not self.at(RPAREN):
                if self.peek().kind == EOF:
                    raise UnbalancedParens("missing ')'", t.line, t.col)
                literals.extend(self.parse_formula(allow_vars, negatives))
            self.expect_rparen()
            return literals
        if t.kind == ID and t.value == "not":
            self.advance()
            negatives.append(t)
            self.expect(LPAREN)
            inner = self.peek()
            if inner.kind == ID and inner.value in ("and", "or", "not"):
                raise UnsupportedConstruct(
                    f"(not ...) may only wrap an atom, got {inner.value!r}",
                    inner.line,
                    inner.col,
                )
            lit = self.parse_atom_body(allow_vars)
            self.expect_rparen()
            return [lit.negate()]
        if t.kind == ID and t.value in ("or", "imply", "forall", "exists", "when", "either"):
            raise UnsupportedConstruct(f"unsupported construct {t.value!r}", t.line, t.col)
        if t.kind == LPAREN:
            raise MalformedSection("expected atom, got '('", t.line, t.col)
        return [self.parse_atom_body(allow_vars)]

    # -- domain ------------------------------------------------------------

    def parse_domain(self) -> DomainAst:
        self.expect(LPAREN)
        self.expect(ID, "define")
        self.expect(LPAREN)
        self.expect(ID, "domain")
        name = self.expect_name("domain name").value
        self.expect_rparen()

        requirements = RequirementSet()
        hierarchy = TypeHierarchy()
        predicates: list[PredicateDecl] = []
        constants: list[tuple[str, str]] = []
        actions: list[OperatorSchema] = []
        negative_preconditions: list[Token] = []

        while not self.at(RPAREN):
            self.expect(LPAREN)
            kw = self.advance()
            if kw.kind != KEYWORD:
                raise MalformedSection(
                    f"expected a :section, got {kw.value or kw.kind!r}", kw.line, kw.col
                )
            if kw.value == "requirements":
                requirements = self.parse_requirements()
            elif kw.value == "types":
                self.parse_types(hierarchy, kw)
            elif kw.value == "constants":
                constants.extend(self.parse_typed_names(ID, "constant name"))
                self.expect_rparen()
            elif kw.value == "predicates":
                self.parse_predicates(predicates, kw)
            elif kw.value == "action":
                actions.append(self.parse_action(actions, negative_preconditions, kw))
            else:
                raise UnsupportedConstruct(f"unsupported section :{kw.value}", kw.line, kw.col)
        self.expect_rparen()
        self.finish()

        if negative_preconditions and "negative-preconditions" not in requirements:
            t = negative_preconditions[0]
            raise UnsupportedConstruct(
                "negative precondition without :negative-preconditions", t.line, t.col
            )
        return DomainAst(
            name=name,
            requirements=requirements,
            types=hierarchy,
            predicates=tuple(predicates),
            constants=tuple(constants),
            actions=tuple(actions),
        )

    def parse_types(self, hierarchy: TypeHierarchy, kw: Token) -> None:
        for type_name, parent in self.parse_typed_names(ID, "type name"):
            if type_name == ROOT_TYPE:
                raise MalformedSection("'object' cannot be redeclared", kw.line, kw.col)
            if type_name in hierarchy.parents:
                raise MalformedSection(f"type {type_name!r} declared twice", kw.line, kw.col)
            hierarchy.parents[type_name] = parent
        self.expect_rparen()
        # PDDL convention: naming a type only as a parent declares it
        for parent in list(hierarchy.parents.values()):
            if parent != ROOT_TYPE and parent not in hierarchy.parents:
                hierarchy.parents[parent] = ROOT_TYPE
        if hierarchy.find_cycle():
            cycle = " -> ".join(hierarchy.find_cycle() or ())
            raise MalformedSection(f"type hierarchy cycle: {cycle}", kw.line, kw.col)

    def parse_predicates(self, predicates: list[PredicateDecl], kw: Token) -> None:
        while not self.at(RPAREN):
            open_tok = self.expect(LPAREN)
            name = self.expect_name("predicate name").value
            params = self.parse_typed_names(VAR, "parameter variable")
            self.expect_rparen()
            if any(p.name == name for p in predicates):
                raise MalformedSection(
                    f"predicate {name!r} declared twice", open_tok.line, open_tok.col
                )
            seen_vars = [v for v, _ in params]
            if len(seen_vars) != len(set(seen_vars)):
                raise MalformedSection(
                    f"repeated parameter variable in predicate {name!r}",
                    open_tok.line,
                    open_tok.col,
                )
            predicates.append(PredicateDecl(name, tuple(params)))
        self.expect_rparen()

    def parse_action(
        self,
        actions: list[OperatorSchema],
        negative_preconditions: list[Token],
        kw: Token,
    ) -> OperatorSchema:
        name = self.expect_name("action name").value
        if any(a.name == name for a in actions):
            raise MalformedSection(f"action {name!r} declared twice", kw.line, kw.col)
        params: list[tuple[str, str]] | None = None
        preconditions: list[Literal] = []
        effects: list[Literal] = []
        saw_precondition = saw_effect = False
        while not self.at(RPAREN):
            part = self.advance()
            if part.kind != KEYWORD:
                raise MalformedSection(
                    f"expected :parameters/:precondition/:effect, got {part.value!r}",
                    part.line,
                    part.col,
                )
            if part.value == "parameters":
                if params is not None:
                    raise MalformedSection("duplicate :parameters", part.line, part.col)
                self.expect(LPAREN)
                params = self.parse_typed_names(VAR, "parameter variable")
                self.expect_rparen()
            elif part.value == "precondition":
                if saw_precondition:
                    raise MalformedSection("duplicate :precondition", part.line, part.col)
                saw_precondition = True
                preconditions = self.parse_formula(True, negative_preconditions)
            elif part.value == "effect":
                if saw_effect:
                    raise MalformedSection("duplicate :effect", part.line, part.col)
                saw_effect = True
                effects = self.parse_formula(True, [])
            else:
                raise UnsupportedConstruct(
                    f"unsupported action part :{part.value}", part.line, part.col
                )
        self.expect_rparen()
        if params is None:
            raise MalformedSection(f"action {name!r} has no :parameters", kw.line, kw.col)
        names = [v for v, _ in params]
        if len(names) != len(set(names)):
            raise MalformedSection(f"repeated parameter in action {name!r}", kw.line, kw.col)
        bound = set(names)
        for lit in (*preconditions, *effects):
            for term in lit.args:
                if is_variable(term) and term not in bound:
                    raise MalformedSection(
                        f"variable {term} in action {name!r} is not a parameter",
                        kw.line,
                        kw.col,
                    )
        return OperatorSchema(name, tuple(params), tuple(preconditions), tuple(effects))

    # -- problem -------------------------------------------------------------

    def parse_problem(self) -> ProblemAst:
        self.expect(LPAREN)
        self.expect(ID, "define")
        self.expect(LPAREN)
        self.expect(ID, "problem")
        name = self.expect_name("problem name").value
        self.expect_rparen()

        domain_name: str | None = None
        objects: list[tuple[str, str]] = []
        init: list[Literal] = []
        goal: list[Literal] | None = None

        while not self.at(RPAREN):
            self.expect(LPAREN)
            kw = self.advance()
            if kw.kind != KEYWORD:
                raise MalformedSection(
                    f"expected a :section, got {kw.value or kw.kind!r}", kw.line, kw.col
                )
            if kw.value == "domain":
                domain_name = self.expect_name("domain name").value
                self.expect_rparen()
            elif kw.value == "requirements":
                self.parse_requirements()
            elif kw.value == "objects":
                objects.extend(self.parse_typed_names(ID, "object name"))
                self.expect_rparen()
            elif kw.value == "init":
                while not self.at(RPAREN):
                    open_tok = self.expect(LPAREN)
                    head = self.peek()
                    if head.kind == ID and head.value in ("not", "and", "or"):
                        raise UnsupportedConstruct(
                            f"{head.value!r} not allowed in :init", head.line, head.col
                        )
                    if head.kind == RPAREN:
                        raise MalformedSection("empty atom in :init", open_tok.line, open_tok.col)
                    init.append(self.parse_atom_body(allow_vars=False))
                self.expect_rparen()
            elif kw.value == "goal":
                if goal is not None:
                    raise MalformedSection("duplicate :goal", kw.line, kw.col)
                goal = self.parse_formula(allow_vars=False, negatives=[])
                self.expect_rparen()
            else:
                raise UnsupportedConstruct(f"unsupported section :{kw.value}", kw.line, kw.col)
        self.expect_rparen()
        self.finish()

        if domain_name is None:
            raise MalformedSection("problem has no (:domain ...) section", 1, 1)
        return ProblemAst(
            name=name,
            domain_name=domain_name,
            objects=tuple(objects),
            init=tuple(lit.atom() for lit in init),
            goal=tuple(goal or ()),
        )


def parse_domain(text: str) -> DomainAst:
    return _Parser(text).parse_domain()


def parse_problem(text: str) -> ProblemAst:
    return _Parser(text).parse_problem()


_STEP_PREFIX_RE = re.compile(r"[0-9]+\s*:")
_WORD_RE = re.compile(r"[^\s();]+")


def parse_plan(text: str) -> Plan:
    """Parse the plan text format: one ``(name obj*)`` group per step.

    ``;`` comments and optional ``N :`` step prefixes are stripped; any
    other token outside a group is ignored so raw planner output parses.
    """
    stripped = []
    for line in text.lower().splitlines():
        stripped.append(line.split(";", 1)[0])
    body = "\n".join(stripped)

    steps: list[PlanStep] = []
    i, line, bol = 0, 1, 0
    n = len(body)
    depth = 0
    current: list[str] = []
    open_loc = (0, 0)
    while i < n:
        ch = body[i]
        col = i - bol + 1
        if ch == "\n":
            line += 1
            i += 1
            bol = i
            continue
        if ch in " \t\r":
            i += 1
            continue
        if ch == "(":
            if depth == 1:
                raise MalformedSection("nested '(' inside plan step", line, col)
            depth = 1
            current = []
            open_loc = (line, col)
            i += 1
            continue
        if ch == ")":
            if depth == 0:
                raise UnbalancedParens("')' without matching '('", line, col)
            if not current:
                raise EmptyStep("empty plan step '()'", *open_loc)
            steps.append(PlanStep(current[0], tuple(current[1:])))
            depth = 0
            i += 1
            continue
        m = _STEP_PREFIX_RE.match(body, i) if depth == 0 else None
        if m:
            i = m.end()
            continue
        word = _WORD_RE.match(body, i)
        assert word is not None
        if depth == 1:
            current.append(word.group(0))
        i = word.end()
    if depth != 0:
        raise UnbalancedParens("missing ')'", *open_loc)
    return Plan(tuple(steps))
