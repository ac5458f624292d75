/** Typed client for the retrace annotation service JSON API. */

export interface GridEntry {
  function: string;
  macro: string;
  column_score: number;
  row_score: number;
  inner_value: number;
}

export interface Progress {
  total: number;
  annotated: number;
  remaining: number;
}

export interface QueueItem {
  doi: string;
  pointer_index: number;
  pointer: string;
  context: string;
  section_kind: string;
  section_title: string | null;
  suggestion: { retraction_mentioned: boolean };
  progress: Progress;
}

export interface QueueDone {
  done: true;
  progress: Progress;
}

export type QueueResponse = QueueItem | QueueDone;

export function isDone(response: QueueResponse): response is QueueDone {
  return "done" in response && response.done === true;
}

export interface ScoreResponse {
  priorities: Record<string, number>;
  resolved: string;
}

export interface AnnotationPayload {
  doi: string;
  pointer_index: number;
  intent: string;
  sentiment: string;
  retraction_mentioned: boolean;
  annotator: string;
  version: number;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: unknown,
  ) {
    super(`request failed with status ${status}`);
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, init);
    if (!response.ok) {
      let detail: unknown = null;
      try {
        detail = (await response.json()).detail;
      } catch {
        /* non-JSON error body */
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  getGrid(): Promise<{ entries: GridEntry[] }> {
    return this.request("/grid");
  }

  getQueue(): Promise<QueueResponse> {
    return this.request("/queue");
  }

  getProgress(): Promise<Progress> {
    return this.request("/progress");
  }

  /** The service is the only source of priorities and resolution. */
  score(candidates: string[]): Promise<ScoreResponse> {
    return this.request("/score", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ candidates }),
    });
  }

  submit(payload: AnnotationPayload): Promise<{ version: number }> {
    return this.request("/annotations", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
  }
}
