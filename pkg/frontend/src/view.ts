/** DOM rendering and keyboard bindings for the workbench. */

import { GridEntry } from "./api.js";
import { SENTIMENTS, Sentiment, Workbench, WorkbenchState } from "./workbench.js";

const SENTIMENT_KEYS: Record<string, Sentiment> = {
  g: "negative",
  h: "neutral",
  j: "positive",
};

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export class WorkbenchView {
  private keydownHandler = (event: KeyboardEvent) => this.onKeydown(event);

  constructor(
    private readonly root: HTMLElement,
    private readonly workbench: Workbench,
  ) {
    workbench.subscribe((state) => this.render(state));
    document.addEventListener("keydown", this.keydownHandler);
    this.render(workbench.getState());
  }

  dispose(): void {
    document.removeEventListener("keydown", this.keydownHandler);
  }

  private onKeydown(event: KeyboardEvent): void {
    const state = this.workbench.getState();
    if (state.phase !== "annotating") return;
    if (event.key === "Enter") {
      if (this.workbench.canSubmit()) void this.workbench.submit();
      return;
    }
    if (event.key === "m") {
      this.workbench.toggleRetractionMentioned();
      return;
    }
    const sentiment = SENTIMENT_KEYS[event.key];
    if (sentiment) {
      this.workbench.setSentiment(sentiment);
      return;
    }
    if (event.key === "ArrowUp" || event.key === "ArrowDown") {
      this.moveFocus(event.key === "ArrowDown" ? 1 : -1);
      event.preventDefault();
      return;
    }
    if (event.key === " " || event.key === "x") {
      const focused = document.activeElement;
      if (focused instanceof HTMLElement && focused.dataset.fn) {
        void this.workbench.toggleCandidate(focused.dataset.fn);
        event.preventDefault();
      }
    }
  }

  private moveFocus(step: number): void {
    const buttons = Array.from(
      this.root.querySelectorAll<HTMLButtonElement>("button[data-fn]"),
    );
    if (buttons.length === 0) return;
    const index = buttons.findIndex((b) => b === document.activeElement);
    const next = index < 0 ? 0 : (index + step + buttons.length) % buttons.length;
    buttons[next].focus();
  }

  private render(state: WorkbenchState): void {
    this.root.replaceChildren();
    if (state.phase === "loading") {
      this.root.append(el("p", "status", "loading…"));
      return;
    }
    if (state.phase === "error") {
      this.root.append(el("p", "error", state.error ?? "something went wrong"));
      return;
    }
    if (state.progress) {
      const { annotated, total } = state.progress;
      const bar = el("div", "progress");
      bar.dataset.annotated = String(annotated);
      bar.dataset.total = String(total);
      bar.append(el("span", "progress-label", `${annotated} / ${total} annotated`));
      this.root.append(bar);
    }
    if (state.phase === "done") {
      this.root.append(el("p", "status done", "queue complete — nothing left to annotate"));
      return;
    }
    if (!state.item) return;

    const card = el("section", "citation");
    card.append(el("h2", "pointer", state.item.pointer));
    card.append(
      el(
        "p",
        "section",
        state.item.section_title
          ? `${state.item.section_kind} — ${state.item.section_title}`
          : state.item.section_kind,
      ),
    );
    card.append(el("blockquote", "context", state.item.context));
    this.root.append(card);

    this.root.append(this.renderGrid(state));
    this.root.append(this.renderScore(state));
    this.root.append(this.renderControls(state));
    if (state.error) this.root.append(el("p", "error", state.error));
  }

  private renderGrid(state: WorkbenchState): HTMLElement {
    const groups = new Map<string, GridEntry[]>();
    for (const entry of state.grid) {
      const bucket = groups.get(entry.macro) ?? [];
      bucket.push(entry);
      groups.set(entry.macro, bucket);
    }
    const container = el("section", "grid");
    for (const [macro, entries] of groups) {
      const column = el("div", "macro");
      column.append(el("h3", "macro-name", macro));
      for (const entry of entries) {
        const selected = state.candidates.includes(entry.function);
        const button = el("button", selected ? "fn selected" : "fn", entry.function);
        button.dataset.fn = entry.function;
        button.setAttribute("aria-pressed", String(selected));
        button.addEventListener("click", () => {
          void this.workbench.toggleCandidate(entry.function);
        });
        column.append(button);
      }
      container.append(column);
    }
    return container;
  }

  private renderScore(state: WorkbenchState): HTMLElement {
    const panel = el("section", "score");
    panel.append(el("h3", undefined, "candidates"));
    if (!state.score) {
      panel.append(el("p", "hint", "select one or more functions"));
      return panel;
    }
    const list = el("ul", "priorities");
    for (const [fn, priority] of Object.entries(state.score.priorities)) {
      const item = el("li", undefined, `${fn}: ${priority}`);
      item.dataset.fn = fn;
      item.dataset.priority = String(priority);
      list.append(item);
    }
    panel.append(list);
    const resolved = el("p", "resolved", `resolved intent: ${state.score.resolved}`);
    resolved.dataset.resolved = state.score.resolved;
    panel.append(resolved);
    return panel;
  }

  private renderControls(state: WorkbenchState): HTMLElement {
    const controls = el("section", "controls");

    const sentimentGroup = el("div", "sentiments");
    for (const sentiment of SENTIMENTS) {
      const active = state.sentiment === sentiment;
      const button = el("button", active ? "sentiment active" : "sentiment", sentiment);
      button.dataset.sentiment = sentiment;
      button.setAttribute("aria-pressed", String(active));
      button.addEventListener("click", () => this.workbench.setSentiment(sentiment));
      sentimentGroup.append(button);
    }
    controls.append(sentimentGroup);

    const mention = el("label", "mention");
    const checkbox = el("input") as HTMLInputElement;
    checkbox.type = "checkbox";
    checkbox.checked = state.retractionMentioned;
    checkbox.id = "retraction-mentioned";
    checkbox.addEventListener("change", () => this.workbench.toggleRetractionMentioned());
    mention.append(checkbox, document.createTextNode(" retraction mentioned (m)"));
    controls.append(mention);

    const submit = el("button", "submit", "submit (Enter)");
    submit.id = "submit";
    submit.disabled = !this.workbench.canSubmit();
    submit.addEventListener("click", () => {
      void this.workbench.submit();
    });
    controls.append(submit);

    return controls;
  }
}
