import { ApiClient } from "./api.js";
import { isComplete, quantize, setDecision, setReason, setScore } from "./form.js";
import { actionForKey } from "./keyboard.js";
import { QueueController } from "./queue.js";
import type { QueueState } from "./queue.js";
import { DIMENSIONS } from "./types.js";
import type { Dimension, Kind } from "./types.js";

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) {
    throw new Error(`missing element #${id}`);
  }
  return el as T;
}

const params = new URLSearchParams(window.location.search);
const annotator = params.get("annotator") ?? "";
const kind = (params.get("kind") ?? "calibration") as Kind;

const api = new ApiClient("");
const controller = new QueueController(api, annotator, kind);

let focusedSlider = 0;

function render(state: QueueState): void {
  byId("counter").textContent =
    state.status === "annotating" ? controller.counter : "";
  byId("banner").hidden = state.status !== "error";
  byId("banner-message").textContent = state.error ?? "";
  byId("done").hidden = state.status !== "done";
  byId("workbench").hidden = state.status !== "annotating";
  byId("loading").hidden = state.status !== "loading";

  const item = controller.current;
  if (!item) {
    return;
  }
  // the text pane must carry the service payload byte for byte
  byId<HTMLPreElement>("art-text").textContent = item.art;
  byId<HTMLImageElement>("art-image").src = api.renderUrl(item.id);
  byId("context").textContent = item.context;
  const candidate = byId<HTMLPreElement>("candidate");
  candidate.parentElement!.classList.toggle("hidden", item.candidate === undefined);
  candidate.textContent = item.candidate ?? "";

  byId("calibration-form").hidden = kind !== "calibration";
  byId("curation-form").hidden = kind !== "curation";
  if (state.form?.kind === "calibration") {
    for (const [i, dim] of DIMENSIONS.entries()) {
      const value = state.form.scores[dim];
      const slider = byId<HTMLInputElement>(`slider-${dim}`);
      slider.value = value === undefined ? "0" : String(value);
      slider.classList.toggle("unset", value === undefined);
      slider.classList.toggle("focused", i === focusedSlider);
      byId(`value-${dim}`).textContent =
        value === undefined ? "-" : value.toFixed(2);
    }
  } else if (state.form?.kind === "curation") {
    byId("accept-btn").classList.toggle("selected", state.form.accept === true);
    byId("reject-btn").classList.toggle("selected", state.form.accept === false);
    byId<HTMLTextAreaElement>("reason").value = state.form.reason;
    byId("reason-row").classList.toggle("hidden", state.form.accept !== false);
  }
  byId<HTMLButtonElement>("submit-btn").disabled =
    !state.form || !isComplete(state.form);
}

function wireCalibration(): void {
  for (const dim of DIMENSIONS) {
    const slider = byId<HTMLInputElement>(`slider-${dim}`);
    slider.addEventListener("input", () => {
      if (controller.state.form?.kind === "calibration") {
        controller.updateForm(
          setScore(controller.state.form, dim, Number(slider.value)),
        );
      }
    });
    slider.addEventListener("focus", () => {
      focusedSlider = DIMENSIONS.indexOf(dim);
      render(controller.state);
    });
  }
}

function wireCuration(): void {
  byId("accept-btn").addEventListener("click", () => {
    if (controller.state.form?.kind === "curation") {
      controller.updateForm(setDecision(controller.state.form, true));
    }
  });
  byId("reject-btn").addEventListener("click", () => {
    if (controller.state.form?.kind === "curation") {
      controller.updateForm(setDecision(controller.state.form, false));
    }
  });
  byId<HTMLTextAreaElement>("reason").addEventListener("input", (event) => {
    if (controller.state.form?.kind === "curation") {
      controller.updateForm(
        setReason(controller.state.form, (event.target as HTMLTextAreaElement).value),
      );
    }
  });
}

function applyPreset(value: number): void {
  const dim = DIMENSIONS[focusedSlider] as Dimension;
  if (controller.state.form?.kind === "calibration") {
    controller.updateForm(setScore(controller.state.form, dim, quantize(value)));
  }
}

document.addEventListener("keydown", (event) => {
  const inTextField = event.target instanceof HTMLTextAreaElement;
  const action = actionForKey(event.key, kind, inTextField);
  if (!action) {
    return;
  }
  event.preventDefault();
  switch (action.type) {
    case "preset":
      applyPreset(action.value);
      break;
    case "accept":
      if (controller.state.form?.kind === "curation") {
        controller.updateForm(setDecision(controller.state.form, true));
      }
      break;
    case "reject":
      if (controller.state.form?.kind === "curation") {
        controller.updateForm(setDecision(controller.state.form, false));
      }
      break;
    case "focus-next-slider":
      focusedSlider = (focusedSlider + 1) % DIMENSIONS.length;
      render(controller.state);
      break;
    case "submit":
      void controller.submitAndAdvance();
      break;
  }
});

byId("submit-btn").addEventListener("click", () => void controller.submitAndAdvance());
byId("retry-btn").addEventListener("click", () => void controller.retry());

if (!annotator) {
  byId("banner").hidden = false;
  byId("banner-message").textContent =
    "missing ?annotator=<id> in the URL";
} else {
  byId("annotator-label").textContent = `${annotator} | ${kind}`;
  controller.onChange = render;
  wireCalibration();
  wireCuration();
  void controller.load();
}
