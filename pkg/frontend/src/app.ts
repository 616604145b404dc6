/**
 * Browser entry point: wires the view-models to the DOM.
 *
 * All planning semantics (states, links, diagnostics, advice) come from
 * service responses; this file only renders them and maps gestures to
 * single edits. Node positions are the one piece of client-side state,
 * persisted to localStorage.
 */

import { ApiError, WorkbenchClient } from "./api.js";
import { CompletionController, predicateEditFromTemplate } from "./completion.js";
import {
  DiagramModel,
  Positions,
  declareClassGesture,
  languageDiagram,
  operatorDiagram,
  removePredicateGesture,
} from "./diagram.js";
import { buildRepairDialog, applyRepairChoice } from "./repair.js";
import { TimelineView, buildTimeline, selectState, stepOverview } from "./timeline.js";
import type {
  AdviceJson,
  DiagnosticJson,
  ProjectDoc,
  ReportJson,
} from "./types.js";

const client = new WorkbenchClient(
  (document.querySelector("meta[name=service-url]") as HTMLMetaElement)?.content
  ?? "http://127.0.0.1:8571",
);

interface AppState {
  doc: ProjectDoc | null;
  diagnostics: DiagnosticJson[];
  report: ReportJson | null;
  timeline: TimelineView | null;
  advice: AdviceJson | null;
  selectedOperator: string | null;
}

const state: AppState = {
  doc: null,
  diagnostics: [],
  report: null,
  timeline: null,
  advice: null,
  selectedOperator: null,
};

function $(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el;
}

function positionsKey(): string {
  return `planforge-positions-${state.doc?.id ?? ""}`;
}

function loadPositions(): Positions {
  try {
    return JSON.parse(localStorage.getItem(positionsKey()) ?? "{}");
  } catch {
    return {};
  }
}

function savePosition(id: string, x: number, y: number): void {
  const positions = loadPositions();
  positions[id] = { x, y };
  localStorage.setItem(positionsKey(), JSON.stringify(positions));
}

// -- rendering -------------------------------------------------------------

function renderDiagram(target: HTMLElement, diagram: DiagramModel): void {
  target.innerHTML = "";
  const svgNs = "http://www.w3.org/2000/svg";
  const svg = document.createElementNS(svgNs, "svg");
  const width = Math.max(720, ...diagram.nodes.map((n) => n.x + 180));
  const height = Math.max(240, ...diagram.nodes.map((n) => n.y + 80));
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.classList.add("diagram");
  const centers = new Map<string, { x: number; y: number }>();
  for (const node of diagram.nodes) {
    centers.set(node.id, { x: node.x + 70, y: node.y + 24 });
  }
  for (const edge of diagram.edges) {
    const from = centers.get(edge.from);
    const to = centers.get(edge.to);
    if (!from || !to) continue;
    const line = document.createElementNS(svgNs, "line");
    line.setAttribute("x1", String(from.x));
    line.setAttribute("y1", String(from.y));
    line.setAttribute("x2", String(to.x));
    line.setAttribute("y2", String(to.y));
    line.classList.add(edge.label === "isa" ? "edge-isa" : "edge-arg");
    svg.appendChild(line);
    if (edge.argPosition > 0) {
      const text = document.createElementNS(svgNs, "text");
      text.setAttribute("x", String((from.x + to.x) / 2));
      text.setAttribute("y", String((from.y + to.y) / 2 - 4));
      text.classList.add("edge-label");
      text.textContent = String(edge.argPosition);
      svg.appendChild(text);
    }
  }
  for (const node of diagram.nodes) {
    const group = document.createElementNS(svgNs, "g");
    group.setAttribute("transform", `translate(${node.x},${node.y})`);
    group.classList.add("node", node.kind);
    const rect = document.createElementNS(svgNs, "rect");
    rect.setAttribute("width", "140");
    rect.setAttribute("height", "48");
    rect.setAttribute("rx", "8");
    group.appendChild(rect);
    const label = document.createElementNS(svgNs, "text");
    label.setAttribute("x", "70");
    label.setAttribute("y", "22");
    label.setAttribute("text-anchor", "middle");
    label.textContent = node.label;
    group.appendChild(label);
    if (node.badges.length) {
      const badge = document.createElementNS(svgNs, "text");
      badge.setAttribute("x", "70");
      badge.setAttribute("y", "40");
      badge.setAttribute("text-anchor", "middle");
      badge.classList.add("badge");
      badge.textContent = `⚠ ${node.badges[0]}${node.badges.length > 1 ? ` +${node.badges.length - 1}` : ""}`;
      group.appendChild(badge);
    }
    let drag: { startX: number; startY: number; x: number; y: number } | null = null;
    group.addEventListener("pointerdown", (event) => {
      drag = { startX: event.clientX, startY: event.clientY, x: node.x, y: node.y };
      group.setPointerCapture(event.pointerId);
    });
    group.addEventListener("pointermove", (event) => {
      if (!drag) return;
      const x = drag.x + (event.clientX - drag.startX);
      const y = drag.y + (event.clientY - drag.startY);
      group.setAttribute("transform", `translate(${x},${y})`);
    });
    group.addEventListener("pointerup", (event) => {
      if (!drag) return;
      savePosition(
        node.id,
        drag.x + (event.clientX - drag.startX),
        drag.y + (event.clientY - drag.startY),
      );
      drag = null;
      renderAll();
    });
    svg.appendChild(group);
  }
  target.appendChild(svg);
}

function renderDiagnostics(): void {
  const list = $("diagnostics");
  list.innerHTML = "";
  if (!state.diagnostics.length) {
    list.innerHTML = "<li class='ok'>0 diagnostics</li>";
    return;
  }
  for (const diag of state.diagnostics) {
    const item = document.createElement("li");
    item.className = diag.severity;
    item.textContent = `${diag.severity}[${diag.code}] ${diag.level}/${diag.owner}: ${diag.detail}`;
    list.appendChild(item);
  }
}

function renderOperators(): void {
  const select = $("operator-select") as HTMLSelectElement;
  select.innerHTML = "";
  for (const op of state.doc?.model.operators ?? []) {
    const option = document.createElement("option");
    option.value = op.name;
    option.textContent = op.name;
    select.appendChild(option);
  }
  if (state.selectedOperator) select.value = state.selectedOperator;
  const operator = state.doc?.model.operators.find(
    (op) => op.name === (select.value || state.selectedOperator),
  );
  if (operator) {
    renderDiagram($("operator-diagram"), operatorDiagram(operator, state.diagnostics, loadPositions()));
  } else {
    $("operator-diagram").innerHTML = "";
  }
}

function renderTimeline(): void {
  const view = state.timeline;
  const chips = $("timeline-steps");
  chips.innerHTML = "";
  if (!view) return;
  const init = document.createElement("button");
  init.textContent = "init";
  init.className = view.selected === 0 ? "chip selected" : "chip";
  init.onclick = () => void selectTimelineState(0);
  chips.appendChild(init);
  for (const step of view.steps) {
    const chip = document.createElement("button");
    chip.textContent = `${step.index}. ${step.label}`;
    chip.className = "chip";
    if (step.flawed) chip.classList.add("flawed");
    else if (!step.applicable) chip.classList.add("inapplicable");
    if (view.selected === step.index) chip.classList.add("selected");
    chip.disabled = step.index > view.maxSelectable && !step.flawed;
    chip.onclick = () => {
      if (step.index <= view.maxSelectable) void selectTimelineState(step.index);
      renderStepOverview(step.index);
    };
    if (step.flawed && view.flawBadge) {
      const badge = document.createElement("span");
      badge.className = "flaw-badge";
      badge.textContent = view.flawBadge.text;
      chip.appendChild(badge);
    }
    chips.appendChild(chip);
  }
  $("state-panel").textContent = view.statePanel.join("\n") || "(empty state)";
  $("timeline-status").textContent = view.bindFailureMessage
    ?? (view.valid
      ? "plan valid"
      : view.flawBadge
        ? `flaw at step ${view.flawBadge.step}`
        : view.goalSatisfied === false
          ? "all steps apply but the goal is unsatisfied"
          : "");
  const arcs = $("links-panel");
  arcs.innerHTML = "";
  for (const link of view.links) {
    const row = document.createElement("li");
    row.textContent = `${link.producer === 0 ? "init" : `step ${link.producer}`} → step ${link.consumer}: ${link.atom} [${link.polarity}]`;
    arcs.appendChild(row);
  }
}

function renderStepOverview(index: number): void {
  if (!state.report) return;
  try {
    const action = stepOverview(state.report, index);
    $("step-overview").textContent = [
      `(${[action.name, ...action.args].join(" ")})`,
      `pre+: ${action.pre_pos.join(" ") || "-"}`,
      `pre-: ${action.pre_neg.join(" ") || "-"}`,
      `add:  ${action.add.join(" ") || "-"}`,
      `del:  ${action.del.join(" ") || "-"}`,
    ].join("\n");
  } catch {
    $("step-overview").textContent = "";
  }
}

function renderRepair(): void {
  const dialog = buildRepairDialog(state.advice, state.report);
  $("repair-explanation").textContent = dialog.explanation;
  const card = $("option-a");
  card.innerHTML = "";
  if (dialog.optionA) {
    const title = document.createElement("h4");
    title.textContent = dialog.optionA.title;
    const body = document.createElement("pre");
    body.textContent = `:parameters (${dialog.optionA.parameters})\n:effect ${dialog.optionA.effect}`;
    const apply = document.createElement("button");
    apply.textContent = "Apply option A";
    apply.onclick = () => void applyChoice("A");
    card.append(title, body, apply);
  }
  const list = $("option-b");
  list.innerHTML = "";
  for (const row of dialog.optionB) {
    const item = document.createElement("li");
    const apply = document.createElement("button");
    apply.textContent = "Apply";
    apply.onclick = () => void applyChoice("B", row.index);
    item.textContent = `${row.description} `;
    item.appendChild(apply);
    list.appendChild(item);
  }
  ($("advise-button") as HTMLButtonElement).disabled =
    !state.report || state.report.valid;
}

function renderAll(): void {
  $("project-title").textContent = state.doc
    ? `${state.doc.model.name} (rev ${state.doc.revision})`
    : "no project loaded";
  if (state.doc) {
    renderDiagram(
      $("language-diagram"),
      languageDiagram(state.doc.model, state.diagnostics, loadPositions()),
    );
    renderOperators();
    const problems = $("problem-select") as HTMLSelectElement;
    const current = problems.value;
    problems.innerHTML = "";
    for (const problem of state.doc.model.problems) {
      const option = document.createElement("option");
      option.value = problem.name;
      option.textContent = problem.name;
      problems.appendChild(option);
    }
    if (current) problems.value = current;
  }
  renderDiagnostics();
  renderTimeline();
  renderRepair();
}

// -- actions ------------------------------------------------------------------

function projectId(): string {
  return ($("project-id") as HTMLInputElement).value.trim() || "demo";
}

async function reloadProject(): Promise<void> {
  state.doc = await client.getProject(projectId());
  state.diagnostics = await client.check(projectId());
  renderAll();
}

async function guarded(action: () => Promise<void>): Promise<void> {
  try {
    await action();
  } catch (error) {
    if (error instanceof ApiError && error.conflict) {
      if (confirm(`Conflict: ${error.message}. Reload the project?`)) {
        state.advice = null;
        await reloadProject();
      }
      return;
    }
    alert(error instanceof Error ? error.message : String(error));
  }
}

async function postSingleEdit(edit: Parameters<WorkbenchClient["postEdits"]>[1][number]): Promise<void> {
  if (!state.doc) return;
  state.diagnostics = await client.postEdits(projectId(), [edit], state.doc.revision);
  state.doc = await client.getProject(projectId());
  state.advice = null;
  renderAll();
}

async function selectTimelineState(k: number): Promise<void> {
  if (!state.timeline) return;
  state.timeline = await selectState(state.timeline, k, (index) =>
    client.stateAt(projectId(), index),
  );
  renderTimeline();
}

async function runValidate(): Promise<void> {
  const problem = ($("problem-select") as HTMLSelectElement).value;
  const planText = ($("plan-text") as HTMLTextAreaElement).value;
  state.report = await client.validate(
    projectId(), problem, planText || undefined, state.doc?.revision,
  );
  state.timeline = buildTimeline(state.report);
  state.advice = null;
  renderAll();
}

async function applyChoice(option: "A" | "B", index?: number): Promise<void> {
  if (!state.doc) return;
  const outcome = await applyRepairChoice(client, projectId(), option, index, state.doc.revision);
  if (outcome.staleAdvice) {
    if (confirm(`Advice is stale (${outcome.error}). Refresh project and advice?`)) {
      state.advice = null;
      await reloadProject();
    }
    return;
  }
  state.diagnostics = outcome.diagnostics;
  state.doc = await client.getProject(projectId());
  state.advice = null;
  renderAll();
}

function wireCompletion(): void {
  const input = $("predicate-input") as HTMLInputElement;
  const dropdown = $("predicate-dropdown");
  const controller = new CompletionController((kind, prefix) => client.complete(kind, prefix));
  input.addEventListener("input", () => {
    void controller.request("predicate", input.value).then((suggestions) => {
      if (suggestions === null) return;
      dropdown.innerHTML = "";
      for (const display of suggestions) {
        const item = document.createElement("li");
        item.textContent = display;
        item.onclick = () =>
          void guarded(async () => {
            await postSingleEdit(predicateEditFromTemplate(display.replace(/[()]/g, "")));
            dropdown.innerHTML = "";
            input.value = "";
          });
        dropdown.appendChild(item);
      }
    });
  });
}

function wireActions(): void {
  $("load-button").onclick = () => void guarded(reloadProject);
  $("validate-button").onclick = () => void guarded(runValidate);
  $("plan-button").onclick = () =>
    void guarded(async () => {
      const problem = ($("problem-select") as HTMLSelectElement).value;
      const result = await client.plan(projectId(), problem);
      if (result.plan) {
        ($("plan-text") as HTMLTextAreaElement).value = result.plan;
      } else {
        alert(`${result.failure}: ${result.detail ?? ""}`);
      }
    });
  $("advise-button").onclick = () =>
    void guarded(async () => {
      state.advice = await client.advise(projectId(), state.doc?.revision);
      renderRepair();
    });
  $("revalidate-button").onclick = () => void guarded(runValidate);
  $("declare-class-button").onclick = () =>
    void guarded(async () => {
      const name = ($("class-name") as HTMLInputElement).value.trim();
      const parent = ($("class-parent") as HTMLInputElement).value.trim() || "object";
      if (name) await postSingleEdit(declareClassGesture(name, parent));
    });
  $("remove-predicate-button").onclick = () =>
    void guarded(async () => {
      const raw = ($("predicate-input") as HTMLInputElement).value.trim();
      const predicate = state.doc?.model.predicates.find((p) => p.name === raw);
      if (predicate) {
        await postSingleEdit(removePredicateGesture(predicate.name, predicate.params.length));
      }
    });
  ($("operator-select") as HTMLSelectElement).onchange = (event) => {
    state.selectedOperator = (event.target as HTMLSelectElement).value;
    renderOperators();
  };
}

declare global {
  interface Window {
    planforgeApp?: { reload: () => Promise<void> };
  }
}

if (typeof document !== "undefined" && document.getElementById("project-id")) {
  wireActions();
  wireCompletion();
  window.planforgeApp = { reload: reloadProject };
}
