import { describe, expect, it } from "vitest";

import {
  emptyForm,
  isComplete,
  payload,
  quantize,
  setDecision,
  setReason,
  setScore,
} from "../src/form.js";
import { DIMENSIONS } from "../src/types.js";
import type { CalibrationForm, CurationForm } from "../src/types.js";

describe("quantize", () => {
  it("snaps to 0.05 steps", () => {
    expect(quantize(0.43)).toBeCloseTo(0.45, 10);
    expect(quantize(0.42)).toBeCloseTo(0.4, 10);
    expect(quantize(0.975)).toBeCloseTo(1.0, 10);
  });

  it("clamps to [0, 1]", () => {
    expect(quantize(-0.3)).toBe(0);
    expect(quantize(1.7)).toBe(1);
  });

  it("keeps grid values fixed", () => {
    for (let i = 0; i <= 20; i++) {
      const v = i / 20;
      expect(quantize(v)).toBeCloseTo(v, 10);
    }
  });
});

describe("calibration form", () => {
  it("starts incomplete", () => {
    expect(isComplete(emptyForm("calibration"))).toBe(false);
  });

  it("requires all five dimensions", () => {
    let form = emptyForm("calibration");
    for (const dim of DIMENSIONS.slice(0, 4)) {
      form = setScore(form, dim, 0.5);
      expect(isComplete(form)).toBe(false);
    }
    form = setScore(form, "CE", 0.5);
    expect(isComplete(form)).toBe(true);
  });

  it("quantizes on entry", () => {
    const form = setScore(emptyForm("calibration"), "SA", 0.666) as CalibrationForm;
    expect(form.scores.SA).toBeCloseTo(0.65, 10);
  });

  it("payload carries exactly the five scores", () => {
    let form = emptyForm("calibration");
    for (const dim of DIMENSIONS) {
      form = setScore(form, dim, 0.2);
    }
    expect(payload(form)).toEqual({
      scores: { SA: 0.2, IF: 0.2, SC: 0.2, SL: 0.2, CE: 0.2 },
    });
  });
});

describe("curation form", () => {
  it("accept alone is complete", () => {
    const form = setDecision(emptyForm("curation"), true);
    expect(isComplete(form)).toBe(true);
  });

  it("reject without reason stays disabled", () => {
    let form = setDecision(emptyForm("curation"), false);
    expect(isComplete(form)).toBe(false);
    form = setReason(form, "   ");
    expect(isComplete(form)).toBe(false);
    form = setReason(form, "broken layout");
    expect(isComplete(form)).toBe(true);
  });

  it("payload carries the decision and reason", () => {
    let form = setDecision(emptyForm("curation"), false) as CurationForm;
    form = setReason(form, "corrupt") as CurationForm;
    expect(payload(form)).toEqual({ accept: false, reason: "corrupt" });
  });
});
