"""JSON views of workbench values.

The CLI and the HTTP service both render through these encoders with the
same ``dumps``, so the two faces produce byte-identical documents for the
same operation.  Atoms render as display strings like ``(at pkg a)``;
lifted literals stay structured.
"""

from __future__ import annotations

import json

from .kb import KnowledgeBase
from .pddl import (
    Literal,
    OperatorSchema,
    Plan,
    PredicateDecl,
    ProblemAst,
    format_atom,
    print_plan,
)
from .repair import ModificationProposal, RepairAdvice
from .validator import CausalLink, Flaw, GroundAction, ValidationReport
from .workspace import Diagnostic, Project


def dumps(payload) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False)


# -- pddl values ---------------------------------------------------------------


def literal_json(lit: Literal) -> dict:
    return {"predicate": lit.predicate, "args": list(lit.args), "positive": lit.positive}


def literal_from_json(data: dict) -> Literal:
    return Literal(
        str(data["predicate"]).lower(),
        tuple(str(a).lower() for a in data.get("args", ())),
        bool(data.get("positive", True)),
    )


def params_json(params: tuple[tuple[str, str], ...]) -> list[dict]:
    return [{"name": var, "type": typ} for var, typ in params]


def params_from_json(data) -> tuple[tuple[str, str], ...]:
    return tuple((str(p["name"]).lower(), str(p["type"]).lower()) for p in data)


def predicate_json(decl: PredicateDecl) -> dict:
    return {"name": decl.name, "params": params_json(decl.params)}


def predicate_from_json(data: dict) -> PredicateDecl:
    return PredicateDecl(str(data["name"]).lower(), params_from_json(data.get("params", ())))


def operator_json(op: OperatorSchema) -> dict:
    return {
        "name": op.name,
        "params": params_json(op.params),
        "preconditions": [literal_json(l) for l in op.preconditions],
        "effects": [literal_json(l) for l in op.effects],
    }


def operator_from_json(data: dict) -> OperatorSchema:
    return OperatorSchema(
        str(data["name"]).lower(),
        params_from_json(data.get("params", ())),
        tuple(literal_from_json(l) for l in data.get("preconditions", ())),
        tuple(literal_from_json(l) for l in data.get("effects", ())),
    )


def problem_json(prob: ProblemAst) -> dict:
    return {
        "name": prob.name,
        "objects": params_json(prob.objects),
        "init": [format_atom(atom) for atom in prob.init],
        "goal": [literal_json(g) for g in prob.goal],
    }


def problem_from_json(data: dict, domain_name: str) -> ProblemAst:
    init = tuple(literal_from_json(l).atom() for l in data.get("init", ()))
    return ProblemAst(
        name=str(data["name"]).lower(),
        domain_name=domain_name,
        objects=params_from_json(data.get("objects", ())),
        init=init,
        goal=tuple(literal_from_json(g) for g in data.get("goal", ())),
    )


def plan_json(plan: Plan) -> dict:
    return {
        "plan": print_plan(plan),
        "length": len(plan.steps),
        "steps": [{"name": s.name, "args": list(s.args)} for s in plan.steps],
    }


# -- workspace -------------------------------------------------------------------


def diagnostic_json(diag: Diagnostic) -> dict:
    return {
        "severity": diag.severity,
        "code": diag.code,
        "level": diag.level,
        "owner": diag.owner,
        "detail": diag.detail,
    }


def diagnostics_json(diags) -> list[dict]:
    return [diagnostic_json(d) for d in diags]


def kb_json(kb: KnowledgeBase) -> dict:
    return {
        "types": [t.name for t in kb.types],
        "predicates": [p.format() for p in kb.predicates],
    }


def project_json(project: Project) -> dict:
    return {
        "name": project.name,
        "classes": [{"name": n, "parent": p} for n, p in project.classes],
        "predicates": [predicate_json(d) for d in project.predicates],
        "operators": [operator_json(o) for o in project.operators],
        "problems": [problem_json(p) for p in project.problems],
        "kb": kb_json(project.kb),
    }


# -- validation ---------------------------------------------------------------


def state_json(state) -> list[str]:
    return [format_atom(atom) for atom in sorted(state)]


def ground_action_json(action: GroundAction) -> dict:
    return {
        "name": action.name,
        "args": list(action.args),
        "pre_pos": state_json(action.pre_pos),
        "pre_neg": state_json(action.pre_neg),
        "add": state_json(action.add),
        "del": state_json(action.delete),
    }


def flaw_json(flaw: Flaw | None) -> dict | None:
    if flaw is None:
        return None
    return {
        "step": flaw.step_index,
        "action": {"name": flaw.action[0], "args": list(flaw.action[1])},
        "unsatisfied": [
            {"atom": format_atom(atom), "polarity": polarity, "reason": reason}
            for atom, polarity, reason in flaw.unsatisfied
        ],
    }


def link_json(link: CausalLink) -> dict:
    return {
        "producer": link.producer,
        "consumer": link.consumer,
        "atom": format_atom(link.atom),
        "polarity": link.polarity,
    }


def report_json(report: ValidationReport) -> dict:
    return {
        "states": [state_json(s) for s in report.states],
        "steps": [
            {"index": i, "action": ground_action_json(a), "applicable": ok}
            for i, (a, ok) in enumerate(report.steps, start=1)
        ],
        "flaw": flaw_json(report.flaw),
        "goalSatisfied": report.goal_satisfied,
        "valid": report.valid,
        "links": [link_json(l) for l in report.links],
        "bindFailure": None
        if report.bind_failure is None
        else {
            "step": report.bind_failure.step_index,
            "error": report.bind_failure.error,
            "message": report.bind_failure.message,
        },
    }


# -- repair ---------------------------------------------------------------------


def modification_json(mod: ModificationProposal) -> dict:
    return {
        "kind": mod.kind,
        "targetOperator": mod.target_operator,
        "change": literal_json(mod.change),
        "sourceStep": mod.source_step,
    }


def advice_json(advice: RepairAdvice) -> dict:
    return {
        "flaw": flaw_json(advice.flaw),
        "unsatisfiedGoal": [literal_json(g) for g in advice.unsatisfied_goal],
        "optionA": {
            "newAction": operator_json(advice.option_a.new_action),
            "boundArgs": list(advice.option_a.bound_args),
        },
        "optionB": [modification_json(m) for m in advice.option_b],
        "adviceText": advice.advice_text,
    }
