/**
 * Typed client for the workbench HTTP service.
 *
 * Every mutation carries the revision it was computed against; a 409 from
 * the service surfaces as ApiError with `conflict === true`, which the UI
 * turns into a reload prompt.
 */

import type {
  AdviceJson,
  DiagnosticJson,
  EditJson,
  PlanJson,
  ProjectDoc,
  ReportJson,
} from "./types.js";

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;

  constructor(status: number, code: string, detail: string) {
    super(detail || code);
    this.status = status;
    this.code = code;
  }

  get conflict(): boolean {
    return this.status === 409;
  }
}

async function unwrap<T>(response: Response): Promise<T> {
  const body = await response.json().catch(() => ({}));
  if (!response.ok) {
    throw new ApiError(
      response.status,
      (body as { error?: string }).error ?? "HttpError",
      (body as { detail?: string }).detail ?? response.statusText,
    );
  }
  return body as T;
}

export class WorkbenchClient {
  constructor(readonly baseUrl: string) {}

  private async call<T>(method: string, path: string, payload?: unknown): Promise<T> {
    const response = await fetch(`${this.baseUrl}${path}`, {
      method,
      headers: payload === undefined ? {} : { "Content-Type": "application/json" },
      body: payload === undefined ? undefined : JSON.stringify(payload),
    });
    return unwrap<T>(response);
  }

  getProject(id: string): Promise<ProjectDoc> {
    return this.call("GET", `/projects/${id}`);
  }

  putProject(id: string, xml: string, baseRevision?: number): Promise<ProjectDoc> {
    return this.call("PUT", `/projects/${id}`, { xml, baseRevision });
  }

  postEdits(id: string, edits: EditJson[], baseRevision: number): Promise<DiagnosticJson[]> {
    return this.call("POST", `/projects/${id}/edits`, { edits, baseRevision });
  }

  check(id: string): Promise<DiagnosticJson[]> {
    return this.call("POST", `/projects/${id}/check`, {});
  }

  exportPddl(id: string, problem?: string): Promise<{ domain: string; problem: string | null }> {
    return this.call("POST", `/projects/${id}/export/pddl`, problem ? { problem } : {});
  }

  complete(kind: "type" | "predicate", prefix: string): Promise<string[]> {
    const query = new URLSearchParams({ kind, prefix });
    return this.call("GET", `/kb/complete?${query}`);
  }

  plan(id: string, problem: string, planner?: string): Promise<PlanJson> {
    return this.call("POST", `/projects/${id}/plan`, { problem, planner });
  }

  validate(id: string, problem: string, planText?: string, baseRevision?: number): Promise<ReportJson> {
    const payload: Record<string, unknown> = { problem, baseRevision };
    if (planText !== undefined) payload.plan = planText;
    return this.call("POST", `/projects/${id}/validate`, payload);
  }

  stateAt(id: string, k: number): Promise<{ k: number; state: string[] }> {
    return this.call("GET", `/projects/${id}/report/state/${k}`);
  }

  links(id: string): Promise<ReportJson["links"]> {
    return this.call("GET", `/projects/${id}/report/links`);
  }

  advise(id: string, baseRevision?: number): Promise<AdviceJson> {
    return this.call("POST", `/projects/${id}/repair/advise`, { baseRevision });
  }

  applyRepair(
    id: string,
    option: "A" | "B",
    index?: number,
    baseRevision?: number,
  ): Promise<DiagnosticJson[]> {
    return this.call("POST", `/projects/${id}/repair/apply`, { option, index, baseRevision });
  }
}
