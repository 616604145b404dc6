/**
 * Diagram view-models for the three modeling levels.
 *
 * Nodes get deterministic force-free grid positions; user-dragged
 * positions (persisted client-side) override the grid. Warning badges
 * mirror server diagnostics by owner — the diagram itself never judges
 * the model.
 */

import type {
  DiagnosticJson,
  EditJson,
  OperatorJson,
  ProblemJson,
  ProjectModel,
} from "./types.js";

export type NodeKind = "classNode" | "predicateNode" | "variableNode" | "objectNode";

export interface DiagramNode {
  id: string;
  kind: NodeKind;
  label: string;
  x: number;
  y: number;
  badges: string[];
}

export interface DiagramEdge {
  from: string;
  to: string;
  /** argument position for argument links; 0 for is-a links */
  argPosition: number;
  label: string;
}

export interface DiagramModel {
  nodes: DiagramNode[];
  edges: DiagramEdge[];
}

export type Positions = Record<string, { x: number; y: number }>;

const GRID_X = 170;
const GRID_Y = 90;

function gridPlace(
  nodes: DiagramNode[],
  positions: Positions | undefined,
  perRow = 5,
): DiagramNode[] {
  const rows = new Map<NodeKind, number>([
    ["classNode", 0],
    ["predicateNode", 2],
    ["variableNode", 4],
    ["objectNode", 4],
  ]);
  const counters = new Map<NodeKind, number>();
  return nodes.map((node) => {
    const stored = positions?.[node.id];
    if (stored) {
      return { ...node, x: stored.x, y: stored.y };
    }
    const slot = counters.get(node.kind) ?? 0;
    counters.set(node.kind, slot + 1);
    const baseRow = rows.get(node.kind) ?? 0;
    return {
      ...node,
      x: (slot % perRow) * GRID_X,
      y: (baseRow + Math.floor(slot / perRow)) * GRID_Y,
    };
  });
}

function badgesFor(diagnostics: DiagnosticJson[], owner: string): string[] {
  return diagnostics
    .filter((d) => d.owner === owner)
    .map((d) => `${d.severity}: ${d.code}`);
}

/** Level-1 diagram: classes with is-a edges, predicates with typed argument edges. */
export function languageDiagram(
  model: ProjectModel,
  diagnostics: DiagnosticJson[],
  positions?: Positions,
): DiagramModel {
  const nodes: DiagramNode[] = [];
  const edges: DiagramEdge[] = [];
  const classIds = new Set<string>(["class:object"]);
  nodes.push({ id: "class:object", kind: "classNode", label: "object", x: 0, y: 0, badges: [] });
  for (const cls of model.classes) {
    const id = `class:${cls.name}`;
    classIds.add(id);
    nodes.push({
      id,
      kind: "classNode",
      label: cls.name,
      x: 0,
      y: 0,
      badges: badgesFor(diagnostics, cls.name),
    });
  }
  for (const cls of model.classes) {
    const parentId = `class:${cls.parent}`;
    if (classIds.has(parentId)) {
      edges.push({ from: `class:${cls.name}`, to: parentId, argPosition: 0, label: "isa" });
    }
  }
  for (const pred of model.predicates) {
    const id = `pred:${pred.name}/${pred.params.length}`;
    nodes.push({
      id,
      kind: "predicateNode",
      label: `${pred.name}/${pred.params.length}`,
      x: 0,
      y: 0,
      badges: badgesFor(diagnostics, pred.name),
    });
    pred.params.forEach((param, i) => {
      const typeId = `class:${param.type}`;
      if (classIds.has(typeId)) {
        edges.push({ from: id, to: typeId, argPosition: i + 1, label: `arg ${i + 1}` });
      }
    });
  }
  return { nodes: gridPlace(nodes, positions), edges };
}

/** Level-2 diagram for one operator: parameters plus pre/eff literal nodes. */
export function operatorDiagram(
  operator: OperatorJson,
  diagnostics: DiagnosticJson[],
  positions?: Positions,
): DiagramModel {
  const nodes: DiagramNode[] = [];
  const edges: DiagramEdge[] = [];
  const badges = badgesFor(diagnostics, operator.name);
  for (const param of operator.params) {
    nodes.push({
      id: `var:${param.name}`,
      kind: "variableNode",
      label: `${param.name} - ${param.type}`,
      x: 0,
      y: 0,
      badges: [],
    });
  }
  const addLiteral = (section: "pre" | "eff", index: number, positive: boolean,
                      predicate: string, args: string[]) => {
    const id = `${section}:${index}`;
    nodes.push({
      id,
      kind: "predicateNode",
      label: `${positive ? "" : "not "}${predicate}`,
      x: 0,
      y: 0,
      badges: index === 0 ? badges : [],
    });
    args.forEach((arg, i) => {
      const target = `var:${arg}`;
      if (nodes.some((n) => n.id === target)) {
        edges.push({ from: id, to: target, argPosition: i + 1, label: `arg ${i + 1}` });
      }
    });
  };
  operator.preconditions.forEach((lit, i) =>
    addLiteral("pre", i, lit.positive, lit.predicate, lit.args));
  operator.effects.forEach((lit, i) =>
    addLiteral("eff", i, lit.positive, lit.predicate, lit.args));
  return { nodes: gridPlace(nodes, positions), edges };
}

/** Level-3 diagram for one problem: objects only (init/goal render as text). */
export function problemDiagram(
  problem: ProblemJson,
  diagnostics: DiagnosticJson[],
  positions?: Positions,
): DiagramModel {
  const nodes: DiagramNode[] = problem.objects.map((obj) => ({
    id: `obj:${obj.name}`,
    kind: "objectNode" as NodeKind,
    label: `${obj.name} - ${obj.type}`,
    x: 0,
    y: 0,
    badges: badgesFor(diagnostics, problem.name),
  }));
  return { nodes: gridPlace(nodes, positions), edges: [] };
}

/** Structural sanity used by tests: endpoints exist, arity edges complete. */
export function diagramViolations(model: ProjectModel, diagram: DiagramModel): string[] {
  const violations: string[] = [];
  const ids = new Set(diagram.nodes.map((n) => n.id));
  for (const edge of diagram.edges) {
    if (!ids.has(edge.from) || !ids.has(edge.to)) {
      violations.push(`edge ${edge.from} -> ${edge.to} has a missing endpoint`);
    }
  }
  for (const pred of model.predicates) {
    const id = `pred:${pred.name}/${pred.params.length}`;
    if (!ids.has(id)) continue;
    const outgoing = diagram.edges.filter((e) => e.from === id && e.argPosition > 0);
    const node = diagram.nodes.find((n) => n.id === id);
    if (outgoing.length !== pred.params.length && node?.badges.length === 0) {
      violations.push(`${id} has ${outgoing.length}/${pred.params.length} argument edges`);
    }
  }
  return violations;
}

// -- gesture → edit mapping (total and injective per gesture) ------------------

export function declareClassGesture(name: string, parent: string): EditJson {
  return { kind: "DeclareClass", name, parent };
}

export function removeClassGesture(name: string): EditJson {
  return { kind: "RemoveClass", name };
}

export function removePredicateGesture(name: string, arity: number): EditJson {
  return { kind: "RemovePredicate", name, arity };
}

export function removeOperatorGesture(name: string): EditJson {
  return { kind: "RemoveOperator", name };
}

export function renameGesture(symbolKind: string, oldName: string, newName: string): EditJson {
  return { kind: "RenameSymbol", symbolKind, old: oldName, new: newName };
}
