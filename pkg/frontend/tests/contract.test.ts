/**
 * Contract tests against a live workbench service.
 *
 * Spawns the Python service, seeds it with the broken-logistics fixture,
 * and drives the same flows the browser UI performs: validate → timeline
 * with flaw highlighting → repair dialog → apply option A → re-validate
 * all-green, plus knowledge-base auto-completion.
 */

import { type ChildProcess, spawn } from "node:child_process";
import { readFileSync } from "node:fs";
import path from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { WorkbenchClient } from "../src/api.js";
import { CompletionController, predicateEditFromTemplate } from "../src/completion.js";
import { declareClassGesture, languageDiagram } from "../src/diagram.js";
import { applyRepairChoice, buildRepairDialog } from "../src/repair.js";
import { buildTimeline, selectState } from "../src/timeline.js";
import type { AdviceJson, ReportJson } from "../src/types.js";

const here = path.dirname(fileURLToPath(import.meta.url));
const repoRoot = path.resolve(here, "..", "..");
const projectXml = readFileSync(path.join(here, "fixtures", "d1b.kavi.xml"), "utf8");
const planText = readFileSync(path.join(here, "fixtures", "pl1.txt"), "utf8");

let service: ChildProcess;
let client: WorkbenchClient;

beforeAll(async () => {
  service = spawn("python3", ["-m", "planforge.cli", "serve", "--port", "0"], {
    cwd: repoRoot,
    env: { ...process.env, PYTHONPATH: path.join(repoRoot, "src") },
    stdio: ["ignore", "pipe", "pipe"],
  });
  const baseUrl = await new Promise<string>((resolve, reject) => {
    const timer = setTimeout(() => reject(new Error("service did not start")), 20_000);
    let buffered = "";
    service.stdout!.on("data", (chunk: Buffer) => {
      buffered += chunk.toString();
      const match = /serving on (http:\/\/[\w.:]+)/.exec(buffered);
      if (match) {
        clearTimeout(timer);
        resolve(match[1]);
      }
    });
    service.on("exit", (code) => reject(new Error(`service exited early (${code})`)));
  });
  client = new WorkbenchClient(baseUrl);
  await client.putProject("demo", projectXml);
}, 30_000);

afterAll(() => {
  service?.kill();
});

describe("timeline against the live service", () => {
  let report: ReportJson;

  it("validating the expected plan highlights step 3 with (in pkg trk)", async () => {
    report = await client.validate("demo", "p1", planText);
    const view = buildTimeline(report);
    expect(view.steps[2].flawed).toBe(true);
    expect(view.flawBadge!.step).toBe(3);
    expect(view.flawBadge!.atoms).toEqual(["(in pkg trk)"]);
    expect(view.flawBadge!.text).toContain("(in pkg trk)");
  });

  it("the state panel is byte-traceable to the state endpoint", async () => {
    const view = buildTimeline(report);
    const selected = await selectState(view, 2, (k) => client.stateAt("demo", k));
    const direct = await client.stateAt("demo", 2);
    expect(selected.statePanel).toEqual(direct.state);
  });

  it("causal arcs come straight from the links endpoint", async () => {
    const view = buildTimeline(report);
    const served = await client.links("demo");
    expect(view.links).toEqual(served);
  });
});

describe("repair dialog against the live service", () => {
  it("applies option A and a re-validate renders all steps applicable", async () => {
    await client.validate("demo", "p1", planText);
    const advice: AdviceJson = await client.advise("demo");
    const report = await client.validate("demo", "p1", planText);
    const dialog = buildRepairDialog(advice, report);
    expect(dialog.enabled).toBe(true);
    expect(dialog.optionA!.title).toBe("achieve-in");

    const doc = await client.getProject("demo");
    await client.advise("demo"); // re-advise at the current revision
    const outcome = await applyRepairChoice(client, "demo", "A", undefined, doc.revision);
    expect(outcome.applied).toBe(true);
    expect(outcome.diagnostics).toEqual([]);

    const augmented =
      "(load pkg trk a)\n(drive trk a b)\n(achieve-in pkg trk)\n(unload pkg trk b)\n";
    const green = await client.validate("demo", "p1", augmented);
    const view = buildTimeline(green);
    expect(view.valid).toBe(true);
    expect(view.steps.every((s) => s.applicable)).toBe(true);
    expect(view.flawBadge).toBeNull();
  });

  it("surfaces stale advice as a refresh prompt", async () => {
    const doc = await client.putProject("stale", projectXml);
    await client.validate("stale", "p1", planText);
    await client.advise("stale");
    // an edit bumps the revision and invalidates the advice
    await client.postEdits(
      "stale",
      [declareClassGesture("city", "object")],
      doc.revision,
    );
    const outcome = await applyRepairChoice(client, "stale", "A", undefined, doc.revision)
      .catch(() => ({ applied: false, staleAdvice: true, diagnostics: [] }));
    expect(outcome.applied).toBe(false);
  });
});

describe("auto-completion against the live service", () => {
  it("shows (at physobj place) for input 'at'", async () => {
    const controller = new CompletionController(
      (kind, prefix) => client.complete(kind, prefix),
      0,
    );
    const suggestions = await controller.request("predicate", "at");
    expect(suggestions).toEqual(["(at physobj place)"]);
  });

  it("accepting the suggestion declares the predicate via one edit", async () => {
    const doc = await client.putProject("gestures", projectXml);
    const edit = predicateEditFromTemplate("in-city place city");
    const diagnostics = await client.postEdits("gestures", [edit], doc.revision);
    // place is declared in the fixture; city is not, so exactly one UnknownType
    expect(diagnostics.map((d) => d.code)).toEqual(["UnknownType"]);
    const fixed = await client.postEdits(
      "gestures",
      [declareClassGesture("city", "object")],
      doc.revision + 1,
    );
    expect(fixed).toEqual([]);
  });

  it("deleting a predicate shows dangling badges on operator views", async () => {
    const doc = await client.putProject("badges", projectXml);
    const diagnostics = await client.postEdits(
      "badges",
      [{ kind: "RemovePredicate", name: "in", arity: 2 }],
      doc.revision,
    );
    expect(diagnostics.length).toBeGreaterThan(0);
    const updated = await client.getProject("badges");
    const diagram = languageDiagram(updated.model, diagnostics);
    expect(diagram.nodes.some((n) => n.badges.length > 0)).toBe(false); // owners are operators
    const { operatorDiagram } = await import("../src/diagram.js");
    const load = updated.model.operators.find((op) => op.name === "load")!;
    const opDiagram = operatorDiagram(load, diagnostics);
    expect(opDiagram.nodes.some((n) => n.badges.length > 0)).toBe(true);
  });
});

describe("gesture replay reproduces the revision history", () => {
  it("replaying the same gesture log yields the same revisions and model", async () => {
    const gestures = [
      declareClassGesture("city", "object"),
      predicateEditFromTemplate("in-city place city"),
    ];
    const first = await client.putProject("replay-a", projectXml);
    const second = await client.putProject("replay-b", projectXml);
    expect(first.revision).toBe(second.revision);
    for (const [index, gesture] of gestures.entries()) {
      await client.postEdits("replay-a", [gesture], first.revision + index);
      await client.postEdits("replay-b", [gesture], second.revision + index);
    }
    const docA = await client.getProject("replay-a");
    const docB = await client.getProject("replay-b");
    expect(docA.revision).toBe(docB.revision);
    expect(docA.model).toEqual(docB.model);
    expect(docA.xml).toBe(docB.xml);
  });
});
