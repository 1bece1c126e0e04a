import { DIMENSIONS } from "./types.js";
import type { Dimension, Kind, ScoreForm } from "./types.js";

export const SCORE_STEP = 0.05;
const TICKS = 20; // 1 / SCORE_STEP, kept integral to avoid float dust

/** Snap a slider value onto the 0.05 grid inside [0, 1]. */
export function quantize(value: number): number {
  const clamped = Math.min(1, Math.max(0, value));
  return Math.round(clamped * TICKS) / TICKS;
}

export function emptyForm(kind: Kind): ScoreForm {
  return kind === "calibration"
    ? { kind: "calibration", scores: {} }
    : { kind: "curation", accept: null, reason: "" };
}

export function setScore(form: ScoreForm, dim: Dimension, value: number): ScoreForm {
  if (form.kind !== "calibration") {
    return form;
  }
  return { ...form, scores: { ...form.scores, [dim]: quantize(value) } };
}

export function setDecision(form: ScoreForm, accept: boolean): ScoreForm {
  if (form.kind !== "curation") {
    return form;
  }
  return { ...form, accept };
}

export function setReason(form: ScoreForm, reason: string): ScoreForm {
  if (form.kind !== "curation") {
    return form;
  }
  return { ...form, reason };
}

/** Submit stays disabled until every required field is set: all five
 * dimensions for calibration; a decision for curation, with a non-empty
 * reason when rejecting. */
export function isComplete(form: ScoreForm): boolean {
  if (form.kind === "calibration") {
    return DIMENSIONS.every((dim) => typeof form.scores[dim] === "number");
  }
  if (form.accept === null) {
    return false;
  }
  return form.accept || form.reason.trim().length > 0;
}

/** POST body for /items/{id}/annotations. */
export function payload(form: ScoreForm): Record<string, unknown> {
  if (form.kind === "calibration") {
    const scores: Record<string, number> = {};
    for (const dim of DIMENSIONS) {
      const value = form.scores[dim];
      if (typeof value === "number") {
        scores[dim] = value;
      }
    }
    return { scores };
  }
  return { accept: form.accept, reason: form.reason };
}
