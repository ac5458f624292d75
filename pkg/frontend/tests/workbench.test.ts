import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { Workbench } from "../src/workbench.js";
import { FakeService, makeItem } from "./fakeService.js";

function build(service: FakeService): Workbench {
  return new Workbench(new ApiClient("", service.fetch));
}

describe("workbench state machine", () => {
  it("loads the grid and the first queue item on start", async () => {
    const service = new FakeService([makeItem("10.1/a"), makeItem("10.1/b")]);
    const wb = build(service);
    await wb.start("alice");

    const state = wb.getState();
    expect(service.gridRequests).toBe(1);
    expect(state.phase).toBe("annotating");
    expect(state.item?.doi).toBe("10.1/a");
    expect(state.grid.map((e) => e.function)).toContain("confirms");
    expect(state.progress).toEqual({ total: 2, annotated: 0, remaining: 2 });
  });

  it("adopts the service retraction-mention suggestion per item", async () => {
    const service = new FakeService([makeItem("10.1/a", 0, true)]);
    const wb = build(service);
    await wb.start();
    expect(wb.getState().retractionMentioned).toBe(true);
    wb.toggleRetractionMentioned();
    expect(wb.getState().retractionMentioned).toBe(false);
  });

  it("takes priorities and the resolved intent verbatim from /score", async () => {
    const service = new FakeService([makeItem("10.1/a")]);
    const wb = build(service);
    await wb.start();
    await wb.toggleCandidate("confirms");
    await wb.toggleCandidate("describes");

    const { score } = wb.getState();
    // 911.2/943.2 cannot be derived from the grid's row/column/inner values;
    // they can only have come from the /score response
    expect(score).toEqual({
      priorities: { confirms: 911.2, describes: 943.2 },
      resolved: "confirms",
    });
    expect(service.scoreCalls.at(-1)).toEqual({ candidates: ["confirms", "describes"] });
  });

  it("clears the score when the last candidate is deselected", async () => {
    const service = new FakeService([makeItem("10.1/a")]);
    const wb = build(service);
    await wb.start();
    await wb.toggleCandidate("confirms");
    expect(wb.getState().score).not.toBeNull();
    await wb.toggleCandidate("confirms");
    expect(wb.getState().score).toBeNull();
    expect(wb.canSubmit()).toBe(false);
  });

  it("rejects functions that are not in the grid", async () => {
    const service = new FakeService([makeItem("10.1/a")]);
    const wb = build(service);
    await wb.start();
    await wb.toggleCandidate("frobnicates");
    expect(wb.getState().error).toContain("frobnicates");
    expect(service.scoreCalls).toHaveLength(0);
  });

  it("submits the service-resolved intent and advances the queue", async () => {
    const service = new FakeService([makeItem("10.1/a"), makeItem("10.1/b")]);
    const wb = build(service);
    await wb.start("alice");
    await wb.toggleCandidate("describes");
    await wb.toggleCandidate("disputes");
    wb.setSentiment("negative");
    await wb.submit();

    expect(service.submitted).toEqual([
      {
        doi: "10.1/a",
        pointer_index: 0,
        intent: "disputes",
        sentiment: "negative",
        retraction_mentioned: false,
        annotator: "alice",
        version: 1,
      },
    ]);
    const state = wb.getState();
    expect(state.item?.doi).toBe("10.1/b");
    expect(state.progress).toEqual({ total: 2, annotated: 1, remaining: 1 });
    // per-item state resets for the next citation
    expect(state.candidates).toEqual([]);
    expect(state.score).toBeNull();
    expect(state.sentiment).toBe("neutral");
  });

  it("reaches the done phase when the queue empties", async () => {
    const service = new FakeService([makeItem("10.1/a")]);
    const wb = build(service);
    await wb.start();
    await wb.toggleCandidate("confirms");
    await wb.submit();

    const state = wb.getState();
    expect(state.phase).toBe("done");
    expect(state.item).toBeNull();
    expect(state.progress).toEqual({ total: 1, annotated: 1, remaining: 0 });
  });

  it("refuses to submit without a score and surfaces an error", async () => {
    const service = new FakeService([makeItem("10.1/a")]);
    const wb = build(service);
    await wb.start();
    await wb.submit();
    expect(wb.getState().error).toContain("select at least one function");
    expect(service.submitted).toHaveLength(0);
  });

  it("surfaces service errors from /score", async () => {
    const service = new FakeService([makeItem("10.1/a")], { priorities: {} });
    const wb = build(service);
    await wb.start();
    // the grid knows "confirms" but the scoring table does not -> 422
    await wb.toggleCandidate("confirms");
    const state = wb.getState();
    expect(state.score).toBeNull();
    expect(state.error).toContain("422");
  });
});
