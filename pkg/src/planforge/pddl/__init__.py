"""PDDL subset tooling: AST, parser, pretty-printer, plan text format."""

from .ast import (
    Atom,
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
    UnknownType,
    UnsupportedRequirement,
    format_atom,
    is_subtype,
    is_variable,
)
from .parser import (
    EmptyStep,
    MalformedSection,
    ParseError,
    UnbalancedParens,
    UnsupportedConstruct,
    VariableInGroundContext,
    parse_domain,
    parse_plan,
    parse_problem,
)
from .printer import print_domain, print_plan, print_problem

__all__ = [
    "Atom",
    "DomainAst",
    "EmptyStep",
    "Literal",
    "MalformedSection",
    "OperatorSchema",
    "ParseError",
    "PddlError",
    "Plan",
    "PlanStep",
    "PredicateDecl",
    "ProblemAst",
    "RequirementSet",
    "ROOT_TYPE",
    "SUPPORTED_REQUIREMENTS",
    "TypeHierarchy",
    "UnbalancedParens",
    "UnknownType",
    "UnsupportedConstruct",
    "UnsupportedRequirement",
    "VariableInGroundContext",
    "format_atom",
    "is_subtype",
    "is_variable",
    "parse_domain",
    "parse_plan",
    "parse_problem",
    "print_domain",
    "print_plan",
    "print_problem",
]
