import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { buildRepairDialog, describeModification } from "../src/repair.js";
import { arcsForStep, buildTimeline, selectState, stepOverview } from "../src/timeline.js";
import type { AdviceJson, ReportJson } from "../src/types.js";

// recorded service responses for the broken-logistics fixture
const report: ReportJson = JSON.parse(
  readFileSync(new URL("./fixtures/report-d1b.json", import.meta.url), "utf8"),
);
const advice: AdviceJson = JSON.parse(
  readFileSync(new URL("./fixtures/advice-d1b.json", import.meta.url), "utf8"),
);

describe("buildTimeline on the recorded flawed report", () => {
  const view = buildTimeline(report);

  it("marks step 3 as flawed with the missing atom", () => {
    expect(view.steps.map((s) => s.applicable)).toEqual([true, true, false]);
    const flawed = view.steps[2];
    expect(flawed.flawed).toBe(true);
    expect(flawed.unsatisfied).toEqual(["(in pkg trk) missing"]);
    expect(view.flawBadge).not.toBeNull();
    expect(view.flawBadge!.step).toBe(3);
    expect(view.flawBadge!.atoms).toEqual(["(in pkg trk)"]);
  });

  it("opens on the initial state", () => {
    expect(view.selected).toBe(0);
    expect(view.statePanel).toEqual(["(at pkg a)", "(at trk a)"]);
    expect(view.maxSelectable).toBe(2); // applicable prefix only
  });

  it("keeps causal arcs within the applicable prefix", () => {
    expect(view.links.length).toBe(4);
    expect(view.links.every((l) => l.consumer <= 2)).toBe(true);
    expect(arcsForStep(view, 1).length).toBeGreaterThan(0);
  });

  it("reports overall status", () => {
    expect(view.valid).toBe(false);
    expect(view.goalSatisfied).toBeNull();
    expect(view.bindFailureMessage).toBeNull();
  });
});

describe("selectState", () => {
  it("shows exactly what the state endpoint returns", async () => {
    const view = buildTimeline(report);
    const served = { k: 2, state: ["(at trk b)"] };
    const selected = await selectState(view, 2, async (k) => {
      expect(k).toBe(2);
      return served;
    });
    expect(selected.selected).toBe(2);
    expect(selected.statePanel).toBe(served.state);
  });

  it("refuses indices beyond the applicable prefix without fetching", async () => {
    const view = buildTimeline(report);
    const selected = await selectState(view, 3, async () => {
      throw new Error("must not fetch");
    });
    expect(selected).toBe(view);
  });
});

describe("stepOverview", () => {
  it("exposes the bound ground action as recorded", () => {
    const action = stepOverview(report, 1);
    expect(action.name).toBe("load");
    expect(action.pre_neg).toEqual(["(in pkg trk)"]);
    expect(action.del).toEqual(["(at pkg a)"]);
    expect(() => stepOverview(report, 4)).toThrow(RangeError);
  });
});

describe("empty plan timeline", () => {
  it("shows the initial state only", () => {
    const empty: ReportJson = {
      states: [["(at pkg a)"]],
      steps: [],
      flaw: null,
      goalSatisfied: true,
      valid: true,
      links: [],
      bindFailure: null,
    };
    const view = buildTimeline(empty);
    expect(view.steps).toEqual([]);
    expect(view.statePanel).toEqual(["(at pkg a)"]);
    expect(view.flawBadge).toBeNull();
  });
});

describe("repair dialog from recorded advice", () => {
  it("renders the option A card and option B rows", () => {
    const dialog = buildRepairDialog(advice, report);
    expect(dialog.enabled).toBe(true);
    expect(dialog.optionA!.title).toBe("achieve-in");
    expect(dialog.optionA!.parameters).toBe("?x1 - package ?x2 - truck");
    expect(dialog.optionA!.effect).toBe("(in ?x1 ?x2)");
    expect(dialog.optionB.map((r) => r.kind)).toContain("AddEffectToEarlierStep");
  });

  it("is disabled with an explanation when there is no flaw", () => {
    const valid: ReportJson = { ...report, flaw: null, goalSatisfied: true, valid: true };
    const dialog = buildRepairDialog(null, valid);
    expect(dialog.enabled).toBe(false);
    expect(dialog.explanation).toContain("no flaw");
  });

  it("describes modifications with their trace justification", () => {
    const add = advice.optionB.find((m) => m.kind === "AddEffectToEarlierStep")!;
    expect(describeModification(add)).toBe(
      "add effect (in ?pkg ?trk) to 'load' (justified by step 1)",
    );
  });
});
