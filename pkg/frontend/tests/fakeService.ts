/** In-memory stand-in for the annotation service, driven through FetchLike. */

import { AnnotationPayload, FetchLike, GridEntry, QueueItem } from "../src/api.js";

export const GRID: GridEntry[] = [
  { function: "confirms", macro: "agrees", column_score: 1, row_score: 10, inner_value: 0.2 },
  { function: "extends", macro: "agrees", column_score: 2, row_score: 10, inner_value: 0.3 },
  { function: "describes", macro: "neutral", column_score: 3, row_score: 40, inner_value: 0.2 },
  { function: "disputes", macro: "disagrees", column_score: 2, row_score: 20, inner_value: 0.4 },
];

export interface ScoreCall {
  candidates: string[];
}

export interface FakeServiceOptions {
  /**
   * Server-side priority table. Defaults intentionally do NOT follow the
   * row+column+inner arithmetic of GRID, so a client recomputing priorities
   * from grid data would produce different numbers than the service.
   */
  priorities?: Record<string, number>;
  resolved?: (candidates: string[]) => string;
}

export class FakeService {
  readonly scoreCalls: ScoreCall[] = [];
  readonly submitted: AnnotationPayload[] = [];
  gridRequests = 0;
  private readonly priorities: Record<string, number>;
  private readonly resolve: (candidates: string[]) => string;

  constructor(
    private queue: QueueItem[],
    options: FakeServiceOptions = {},
  ) {
    this.priorities = options.priorities ?? {
      confirms: 911.2,
      extends: 905.5,
      describes: 943.2,
      disputes: 922.6,
    };
    this.resolve =
      options.resolved ??
      ((candidates) =>
        [...candidates].sort((a, b) => this.priorities[a] - this.priorities[b])[0]);
  }

  get fetch(): FetchLike {
    return (input, init) => this.handle(input, init);
  }

  private json(body: unknown, status = 200): Promise<Response> {
    return Promise.resolve(
      new Response(JSON.stringify(body), {
        status,
        headers: { "Content-Type": "application/json" },
      }),
    );
  }

  private progress() {
    const annotated = this.submitted.length;
    const total = annotated + this.queue.length;
    return { total, annotated, remaining: this.queue.length };
  }

  private handle(input: string, init?: RequestInit): Promise<Response> {
    const path = input.replace(/^https?:\/\/[^/]+/, "");
    if (path === "/grid") {
      this.gridRequests += 1;
      return this.json({ entries: GRID });
    }
    if (path === "/queue") {
      if (this.queue.length === 0) {
        return this.json({ done: true, progress: this.progress() });
      }
      return this.json({ ...this.queue[0], progress: this.progress() });
    }
    if (path === "/progress") {
      return this.json(this.progress());
    }
    if (path === "/score") {
      const { candidates } = JSON.parse(String(init?.body)) as { candidates: string[] };
      this.scoreCalls.push({ candidates });
      const unknown = candidates.filter((c) => !(c in this.priorities));
      if (candidates.length === 0 || unknown.length > 0) {
        return this.json({ detail: `unknown functions: ${unknown.join(", ")}` }, 422);
      }
      const priorities: Record<string, number> = {};
      for (const c of candidates) priorities[c] = this.priorities[c];
      return this.json({ priorities, resolved: this.resolve(candidates) });
    }
    if (path === "/annotations") {
      const payload = JSON.parse(String(init?.body)) as AnnotationPayload;
      this.submitted.push(payload);
      this.queue = this.queue.filter(
        (item) => !(item.doi === payload.doi && item.pointer_index === payload.pointer_index),
      );
      return this.json({ version: payload.version });
    }
    return this.json({ detail: "not found" }, 404);
  }
}

export function makeItem(doi: string, index = 0, mention = false): QueueItem {
  return {
    doi,
    pointer_index: index,
    pointer: "(Smith et al., 1998)",
    context: mention
      ? "The study [1] was later retracted by the journal."
      : "The study [1] reported a small case series.",
    section_kind: "introduction",
    section_title: "Introduction",
    suggestion: { retraction_mentioned: mention },
    progress: { total: 0, annotated: 0, remaining: 0 },
  };
}
