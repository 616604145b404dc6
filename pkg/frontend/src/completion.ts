/**
 * Knowledge-base auto-completion for the declaration editors.
 *
 * Policy: triggers at 1 typed character, debounced, list capped at 20.
 * Accepting a predicate suggestion becomes exactly one DeclarePredicate
 * edit with auto-generated ?x1..?xN parameters.
 */

import type { EditJson } from "./types.js";

export const MIN_CHARS = 1;
export const MAX_SUGGESTIONS = 20;
export const DEFAULT_DEBOUNCE_MS = 150;

export type CompletionKind = "type" | "predicate";
export type CompletionFetcher = (kind: CompletionKind, prefix: string) => Promise<string[]>;

/** Dropdown label for a template line: predicates gain the paren wrapper. */
export function templateDisplay(kind: CompletionKind, template: string): string {
  return kind === "predicate" ? `(${template})` : template;
}

/** The single Edit produced by accepting a predicate template suggestion. */
export function predicateEditFromTemplate(template: string): EditJson {
  const tokens = template.trim().split(/\s+/);
  const [name, ...paramTypes] = tokens;
  return {
    kind: "DeclarePredicate",
    predicate: {
      name,
      params: paramTypes.map((type, i) => ({ name: `?x${i + 1}`, type })),
    },
  };
}

/** The single Edit produced by accepting a type template suggestion. */
export function classEditFromTemplate(template: string, parent: string): EditJson {
  return { kind: "DeclareClass", name: template.trim(), parent };
}

interface PendingRequest {
  timer: ReturnType<typeof setTimeout>;
  resolve: (value: string[] | null) => void;
}

export class CompletionController {
  private pending: PendingRequest | null = null;
  private generation = 0;

  constructor(
    private readonly fetcher: CompletionFetcher,
    private readonly debounceMs: number = DEFAULT_DEBOUNCE_MS,
  ) {}

  /**
   * Debounced lookup. Resolves with display strings, or null when the
   * request was superseded by newer input or is below the trigger length.
   */
  request(kind: CompletionKind, text: string): Promise<string[] | null> {
    if (this.pending) {
      clearTimeout(this.pending.timer);
      this.pending.resolve(null);
      this.pending = null;
    }
    const prefix = text.trim().toLowerCase();
    if (prefix.length < MIN_CHARS) {
      return Promise.resolve(null);
    }
    const generation = ++this.generation;
    return new Promise((resolve) => {
      const timer = setTimeout(async () => {
        this.pending = null;
        try {
          const results = await this.fetcher(kind, prefix);
          if (generation !== this.generation) {
            resolve(null);
            return;
          }
          resolve(results.slice(0, MAX_SUGGESTIONS).map((t) => templateDisplay(kind, t)));
        } catch {
          resolve(null);
        }
      }, this.debounceMs);
      this.pending = { timer, resolve };
    });
  }
}
