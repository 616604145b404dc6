/**
 * Plan timeline view-model: step chips with applicability, a selected
 * step, the state panel, causal-link arcs, and the flaw badge.
 *
 * The state panel always shows the service's state for the selected
 * index; selecting a step fetches it rather than recomputing anything
 * locally.
 */

import type { GroundActionJson, LinkJson, ReportJson } from "./types.js";

export interface TimelineStep {
  index: number;
  label: string;
  applicable: boolean;
  flawed: boolean;
  unsatisfied: string[];
}

export interface FlawBadge {
  step: number;
  atoms: string[];
  text: string;
}

export interface TimelineView {
  steps: TimelineStep[];
  /** selected state index: 0 = initial state, k = after step k */
  selected: number;
  statePanel: string[];
  maxSelectable: number;
  links: LinkJson[];
  flawBadge: FlawBadge | null;
  goalSatisfied: boolean | null;
  valid: boolean;
  bindFailureMessage: string | null;
}

export function buildTimeline(report: ReportJson): TimelineView {
  const flaw = report.flaw;
  const steps: TimelineStep[] = report.steps.map((step) => ({
    index: step.index,
    label: `(${[step.action.name, ...step.action.args].join(" ")})`,
    applicable: step.applicable,
    flawed: flaw !== null && flaw.step === step.index,
    unsatisfied:
      flaw !== null && flaw.step === step.index
        ? flaw.unsatisfied.map((u) => `${u.atom} ${u.reason}`)
        : [],
  }));
  return {
    steps,
    selected: 0,
    statePanel: report.states[0] ?? [],
    maxSelectable: report.states.length - 1,
    links: report.links,
    flawBadge: flaw
      ? {
          step: flaw.step,
          atoms: flaw.unsatisfied.map((u) => u.atom),
          text: `${flaw.unsatisfied.map((u) => u.atom).join(", ")} ${flaw.unsatisfied[0].reason}`,
        }
      : null,
    goalSatisfied: report.goalSatisfied,
    valid: report.valid,
    bindFailureMessage: report.bindFailure
      ? `step ${report.bindFailure.step} failed to bind: ${report.bindFailure.message}`
      : null,
  };
}

/**
 * Select a state index; the panel contents come from the supplied fetcher
 * (normally GET /report/state/{k}), keeping the invariant that the panel
 * is byte-traceable to a service response.
 */
export async function selectState(
  view: TimelineView,
  k: number,
  fetchState: (k: number) => Promise<{ k: number; state: string[] }>,
): Promise<TimelineView> {
  if (k < 0 || k > view.maxSelectable) {
    return view;
  }
  const response = await fetchState(k);
  return { ...view, selected: k, statePanel: response.state };
}

/** The compact pre/eff overview payload for a bound step (1-based). */
export function stepOverview(report: ReportJson, j: number): GroundActionJson {
  if (j < 1 || j > report.steps.length) {
    throw new RangeError(`step index ${j} outside 1..${report.steps.length}`);
  }
  return report.steps[j - 1].action;
}

/** Arc endpoints for drawing: links touching the given step index. */
export function arcsForStep(view: TimelineView, index: number): LinkJson[] {
  return view.links.filter((l) => l.producer === index || l.consumer === index);
}
