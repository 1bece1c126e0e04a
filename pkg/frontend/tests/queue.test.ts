import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { setDecision, setScore } from "../src/form.js";
import { QueueController } from "../src/queue.js";
import { DIMENSIONS } from "../src/types.js";
import type { ItemView } from "../src/types.js";

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

interface FakeServiceOptions {
  items?: ItemView[];
  failSubmits?: number;
  unreachable?: boolean;
}

/** Minimal in-memory stand-in for the annotation service. */
function fakeService(options: FakeServiceOptions = {}) {
  const submitted: Array<{ url: string; body: unknown; annotator: string | null }> = [];
  const seen = new Set<string>();
  let failuresLeft = options.failSubmits ?? 0;
  const fetchFn: typeof fetch = async (input, init) => {
    const url = String(input);
    if (options.unreachable) {
      throw new Error("connection refused");
    }
    if (url.includes("/items?")) {
      const items = options.items ?? [];
      return jsonResponse({ pending: items, count: items.length });
    }
    if (url.includes("/annotations")) {
      if (failuresLeft > 0) {
        failuresLeft -= 1;
        return new Response("boom", { status: 500 });
      }
      const annotator = (init?.headers as Record<string, string>)["X-Annotator-Id"] ?? null;
      const key = `${url}:${annotator}`;
      const duplicate = seen.has(key);
      seen.add(key);
      submitted.push({ url, body: JSON.parse(String(init?.body)), annotator });
      return jsonResponse({ annotation: {}, duplicate });
    }
    throw new Error(`unexpected url ${url}`);
  };
  return { fetchFn, submitted };
}

function calibrationItems(n: number): ItemView[] {
  return Array.from({ length: n }, (_, i) => ({
    id: `k${i + 1}`,
    kind: "calibration" as const,
    art: "##\n##",
    context: `item ${i + 1}`,
    candidate: "<art>\n##\n</art>",
  }));
}

function fillScores(controller: QueueController, value: number): void {
  let form = controller.state.form!;
  for (const dim of DIMENSIONS) {
    form = setScore(form, dim, value);
  }
  controller.updateForm(form);
}

describe("QueueController", () => {
  it("shows a 1-based counter over the pending queue", async () => {
    const service = fakeService({ items: calibrationItems(2) });
    const controller = new QueueController(
      new ApiClient("", service.fetchFn), "ann1", "calibration",
    );
    await controller.load();
    expect(controller.state.status).toBe("annotating");
    expect(controller.counter).toBe("1 / 2");
    expect(controller.current?.id).toBe("k1");
  });

  it("empty queue lands in the done state", async () => {
    const service = fakeService({ items: [] });
    const controller = new QueueController(
      new ApiClient("", service.fetchFn), "ann1", "calibration",
    );
    await controller.load();
    expect(controller.state.status).toBe("done");
    expect(controller.current).toBeNull();
  });

  it("service down shows a retry banner, not a crash", async () => {
    const service = fakeService({ unreachable: true });
    const controller = new QueueController(
      new ApiClient("", service.fetchFn), "ann1", "calibration",
    );
    await controller.load();
    expect(controller.state.status).toBe("error");
    expect(controller.state.error).toContain("connection refused");
  });

  it("submit posts the five scores with the annotator header and advances", async () => {
    const service = fakeService({ items: calibrationItems(2) });
    const controller = new QueueController(
      new ApiClient("", service.fetchFn), "ann1", "calibration",
    );
    await controller.load();
    expect(controller.canSubmit).toBe(false);
    fillScores(controller, 0.6);
    expect(controller.canSubmit).toBe(true);
    await controller.submitAndAdvance();
    expect(service.submitted).toHaveLength(1);
    expect(service.submitted[0]?.annotator).toBe("ann1");
    expect(service.submitted[0]?.body).toEqual({
      scores: { SA: 0.6, IF: 0.6, SC: 0.6, SL: 0.6, CE: 0.6 },
    });
    expect(controller.counter).toBe("2 / 2");
    expect(controller.state.form).not.toBeNull();
  });

  it("finishing the last item reaches done", async () => {
    const service = fakeService({ items: calibrationItems(1) });
    const controller = new QueueController(
      new ApiClient("", service.fetchFn), "ann1", "calibration",
    );
    await controller.load();
    fillScores(controller, 0.2);
    await controller.submitAndAdvance();
    expect(controller.state.status).toBe("done");
  });

  it("incomplete forms never submit", async () => {
    const service = fakeService({ items: calibrationItems(1) });
    const controller = new QueueController(
      new ApiClient("", service.fetchFn), "ann1", "calibration",
    );
    await controller.load();
    await controller.submitAndAdvance();
    expect(service.submitted).toHaveLength(0);
    expect(controller.state.status).toBe("annotating");
  });

  it("duplicate replies advance silently", async () => {
    const service = fakeService({ items: calibrationItems(2) });
    const controller = new QueueController(
      new ApiClient("", service.fetchFn), "ann1", "calibration",
    );
    await controller.load();
    // simulate a refresh double-post: the same (item, annotator) key
    fillScores(controller, 0.4);
    await controller.submitAndAdvance();
    controller.state = { ...controller.state, index: 0, form: controller.state.form };
    fillScores(controller, 0.4);
    await controller.submitAndAdvance();
    expect(controller.state.lastDuplicate).toBe(true);
    expect(controller.state.status).toBe("annotating");
  });

  it("failed submit keeps the form so no input is dropped", async () => {
    const service = fakeService({ items: calibrationItems(1), failSubmits: 1 });
    const controller = new QueueController(
      new ApiClient("", service.fetchFn), "ann1", "calibration",
    );
    await controller.load();
    fillScores(controller, 0.8);
    await controller.submitAndAdvance();
    expect(controller.state.status).toBe("error");
    expect(controller.state.form).not.toBeNull();
    await controller.retry();
    expect(service.submitted).toHaveLength(1);
    expect(controller.state.status).toBe("done");
  });

  it("curation flow posts decision and reason", async () => {
    const items: ItemView[] = [{
      id: "c1", kind: "curation", art: "##\n##", context: "a box",
    }];
    const service = fakeService({ items });
    const controller = new QueueController(
      new ApiClient("", service.fetchFn), "ann2", "curation",
    );
    await controller.load();
    controller.updateForm(setDecision(controller.state.form!, true));
    await controller.submitAndAdvance();
    expect(service.submitted[0]?.body).toEqual({ accept: true, reason: "" });
  });
});
