/** Annotation workbench state machine (DOM-free, fully testable). */

import {
  ApiClient,
  GridEntry,
  Progress,
  QueueItem,
  ScoreResponse,
  isDone,
} from "./api.js";

export const SENTIMENTS = ["negative", "neutral", "positive"] as const;
export type Sentiment = (typeof SENTIMENTS)[number];

export interface WorkbenchState {
  phase: "loading" | "annotating" | "done" | "error";
  grid: GridEntry[];
  item: QueueItem | null;
  candidates: string[];
  /** Verbatim /score response for the current candidate set, or null. */
  score: ScoreResponse | null;
  sentiment: Sentiment;
  retractionMentioned: boolean;
  annotator: string;
  progress: Progress | null;
  error: string | null;
}

type Listener = (state: WorkbenchState) => void;

export class Workbench {
  private state: WorkbenchState = {
    phase: "loading",
    grid: [],
    item: null,
    candidates: [],
    score: null,
    sentiment: "neutral",
    retractionMentioned: false,
    annotator: "anonymous",
    progress: null,
    error: null,
  };
  private listeners: Listener[] = [];
  private scoreEpoch = 0;

  constructor(private readonly api: ApiClient) {}

  getState(): Readonly<WorkbenchState> {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private set(patch: Partial<WorkbenchState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  async start(annotator = "anonymous"): Promise<void> {
    this.set({ phase: "loading", annotator, error: null });
    try {
      const grid = await this.api.getGrid();
      this.set({ grid: grid.entries });
      await this.loadNext();
    } catch (err) {
      this.set({ phase: "error", error: String(err) });
    }
  }

  private async loadNext(): Promise<void> {
    const response = await this.api.getQueue();
    if (isDone(response)) {
      this.set({ phase: "done", item: null, progress: response.progress });
      return;
    }
    this.scoreEpoch += 1;
    this.set({
      phase: "annotating",
      item: response,
      candidates: [],
      score: null,
      sentiment: "neutral",
      retractionMentioned: response.suggestion.retraction_mentioned,
      progress: response.progress,
      error: null,
    });
  }

  /** Toggle a grid function in/out of the candidate set and re-score. */
  async toggleCandidate(fn: string): Promise<void> {
    if (!this.state.grid.some((e) => e.function === fn)) {
      this.set({ error: `unknown function: ${fn}` });
      return;
    }
    const candidates = this.state.candidates.includes(fn)
      ? this.state.candidates.filter((c) => c !== fn)
      : [...this.state.candidates, fn];
    this.set({ candidates, error: null });
    await this.rescore();
  }

  /**
   * Fetch priorities and the resolved intent from the service. The UI never
   * computes these locally; a stale in-flight response is discarded.
   */
  private async rescore(): Promise<void> {
    const epoch = ++this.scoreEpoch;
    if (this.state.candidates.length === 0) {
      this.set({ score: null });
      return;
    }
    try {
      const score = await this.api.score(this.state.candidates);
      if (epoch === this.scoreEpoch) this.set({ score });
    } catch (err) {
      if (epoch === this.scoreEpoch) this.set({ score: null, error: String(err) });
    }
  }

  setSentiment(sentiment: Sentiment): void {
    this.set({ sentiment });
  }

  toggleRetractionMentioned(): void {
    this.set({ retractionMentioned: !this.state.retractionMentioned });
  }

  canSubmit(): boolean {
    return this.state.phase === "annotating" && this.state.score !== null;
  }

  /** Submit the service-resolved intent for the current item. */
  async submit(): Promise<void> {
    const { item, score } = this.state;
    if (!item || !score) {
      this.set({ error: "select at least one function before submitting" });
      return;
    }
    try {
      await this.api.submit({
        doi: item.doi,
        pointer_index: item.pointer_index,
        intent: score.resolved,
        sentiment: this.state.sentiment,
        retraction_mentioned: this.state.retractionMentioned,
        annotator: this.state.annotator,
        version: 1,
      });
      await this.loadNext();
    } catch (err) {
      this.set({ error: String(err) });
    }
  }
}
