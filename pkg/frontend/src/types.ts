/**
 * Wire types for the workbench service.
 *
 * These mirror the JSON documents the HTTP endpoints produce and consume;
 * the UI never derives planning semantics itself, it only renders these.
 */

export interface ParamJson {
  name: string;
  type: string;
}

export interface LiteralJson {
  predicate: string;
  args: string[];
  positive: boolean;
}

export interface PredicateJson {
  name: string;
  params: ParamJson[];
}

export interface OperatorJson {
  name: string;
  params: ParamJson[];
  preconditions: LiteralJson[];
  effects: LiteralJson[];
}

export interface ProblemJson {
  name: string;
  objects: ParamJson[];
  init: string[];
  goal: LiteralJson[];
}

export interface ClassJson {
  name: string;
  parent: string;
}

export interface KbJson {
  types: string[];
  predicates: string[];
}

export interface ProjectModel {
  name: string;
  classes: ClassJson[];
  predicates: PredicateJson[];
  operators: OperatorJson[];
  problems: ProblemJson[];
  kb: KbJson;
}

export interface ProjectDoc {
  id: string;
  revision: number;
  xml: string;
  model: ProjectModel;
}

export interface DiagnosticJson {
  severity: "error" | "warning";
  code: string;
  level: "language" | "operator" | "problem";
  owner: string;
  detail: string;
}

export interface GroundActionJson {
  name: string;
  args: string[];
  pre_pos: string[];
  pre_neg: string[];
  add: string[];
  del: string[];
}

export interface StepJson {
  index: number;
  action: GroundActionJson;
  applicable: boolean;
}

export interface UnsatisfiedJson {
  atom: string;
  polarity: "positive" | "negative";
  reason: "missing" | "unexpectedly-present";
}

export interface FlawJson {
  step: number;
  action: { name: string; args: string[] };
  unsatisfied: UnsatisfiedJson[];
}

export interface LinkJson {
  producer: number;
  consumer: number;
  atom: string;
  polarity: "positive" | "negative";
}

export interface BindFailureJson {
  step: number;
  error: string;
  message: string;
}

export interface ReportJson {
  states: string[][];
  steps: StepJson[];
  flaw: FlawJson | null;
  goalSatisfied: boolean | null;
  valid: boolean;
  links: LinkJson[];
  bindFailure: BindFailureJson | null;
}

export interface ModificationJson {
  kind:
    | "AddEffectToEarlierStep"
    | "RemovePrecondition"
    | "RemoveOffendingDeleteEffect";
  targetOperator: string;
  change: LiteralJson;
  sourceStep: number | null;
}

export interface AdviceJson {
  flaw: FlawJson | null;
  unsatisfiedGoal: LiteralJson[];
  optionA: { newAction: OperatorJson; boundArgs: string[] };
  optionB: ModificationJson[];
  adviceText: string;
}

export interface PlanJson {
  plan: string | null;
  length?: number;
  steps?: { name: string; args: string[] }[];
  failure?: string;
  detail?: string;
}

export type EditJson =
  | { kind: "DeclareClass"; name: string; parent: string }
  | { kind: "RemoveClass"; name: string }
  | { kind: "DeclarePredicate"; predicate: PredicateJson }
  | { kind: "RemovePredicate"; name: string; arity: number }
  | { kind: "UpsertOperator"; operator: OperatorJson }
  | { kind: "RemoveOperator"; name: string }
  | { kind: "UpsertProblem"; problem: ProblemJson }
  | { kind: "RemoveProblem"; name: string }
  | { kind: "RenameSymbol"; symbolKind: string; old: string; new: string };

/** Render a lifted literal the way the PDDL printer would. */
export function formatLiteral(literal: LiteralJson): string {
  const atom = `(${[literal.predicate, ...literal.args].join(" ")})`;
  return literal.positive ? atom : `(not ${atom})`;
}
