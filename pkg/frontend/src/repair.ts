/**
 * Repair dialog view-model: option A rendered as a new-action card,
 * option B as selectable candidate edits. Applying triggers re-check and
 * offers one-click re-validate; a stale-advice conflict surfaces as a
 * refresh prompt.
 */

import type { WorkbenchClient } from "./api.js";
import { ApiError } from "./api.js";
import type {
  AdviceJson,
  DiagnosticJson,
  ModificationJson,
  ReportJson,
} from "./types.js";
import { formatLiteral } from "./types.js";

export interface OptionACard {
  title: string;
  parameters: string;
  effect: string;
  summary: string;
}

export interface OptionBRow {
  index: number;
  kind: ModificationJson["kind"];
  description: string;
}

export interface RepairDialog {
  enabled: boolean;
  explanation: string;
  optionA: OptionACard | null;
  optionB: OptionBRow[];
  adviceText: string;
}

export function describeModification(mod: ModificationJson): string {
  const change = formatLiteral(mod.change);
  const where = mod.sourceStep !== null ? ` (justified by step ${mod.sourceStep})` : "";
  switch (mod.kind) {
    case "AddEffectToEarlierStep":
      return `add effect ${change} to '${mod.targetOperator}'${where}`;
    case "RemovePrecondition":
      return `remove precondition ${change} from '${mod.targetOperator}'`;
    case "RemoveOffendingDeleteEffect":
      return `remove effect ${change} from '${mod.targetOperator}'${where}`;
  }
}

export function buildRepairDialog(advice: AdviceJson | null, report: ReportJson | null): RepairDialog {
  if (!report || report.valid || (!report.flaw && report.goalSatisfied !== false)) {
    return {
      enabled: false,
      explanation: "Nothing to repair: the last validation found no flaw.",
      optionA: null,
      optionB: [],
      adviceText: "",
    };
  }
  if (!advice) {
    return {
      enabled: false,
      explanation: "Fetch repair advice to see the options.",
      optionA: null,
      optionB: [],
      adviceText: "",
    };
  }
  const action = advice.optionA.newAction;
  const optionA: OptionACard = {
    title: action.name,
    parameters: action.params.map((p) => `${p.name} - ${p.type}`).join(" "),
    effect: formatLiteral(action.effects[0]),
    summary: `new action '${action.name}' with sole effect ${formatLiteral(action.effects[0])}`,
  };
  return {
    enabled: true,
    explanation: "",
    optionA,
    optionB: advice.optionB.map((mod, index) => ({
      index,
      kind: mod.kind,
      description: describeModification(mod),
    })),
    adviceText: advice.adviceText,
  };
}

export interface ApplyOutcome {
  applied: boolean;
  staleAdvice: boolean;
  diagnostics: DiagnosticJson[];
  error?: string;
}

/** Apply one option; StaleAdvice/conflict comes back as a refresh prompt. */
export async function applyRepairChoice(
  client: WorkbenchClient,
  projectId: string,
  option: "A" | "B",
  index: number | undefined,
  baseRevision: number,
): Promise<ApplyOutcome> {
  try {
    const diagnostics = await client.applyRepair(projectId, option, index, baseRevision);
    return { applied: true, staleAdvice: false, diagnostics };
  } catch (error) {
    if (error instanceof ApiError && (error.conflict || error.code === "StaleAdvice")) {
      return { applied: false, staleAdvice: true, diagnostics: [], error: error.message };
    }
    throw error;
  }
}
