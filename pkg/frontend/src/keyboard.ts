import type { Kind } from "./types.js";

export type Action =
  | { type: "preset"; value: number }
  | { type: "accept" }
  | { type: "reject" }
  | { type: "submit" }
  | { type: "focus-next-slider" }
  | null;

/** Keyboard-driven flow: digits preset the focused slider (digit/10, 0 means
 * 1.0), A/R decide curation items, Enter submits, Space advances the slider
 * focus. Returns null for keys the UI does not own. */
export function actionForKey(key: string, kind: Kind, inTextField = false): Action {
  if (key === "Enter" && !inTextField) {
    return { type: "submit" };
  }
  if (inTextField) {
    return null;
  }
  if (kind === "calibration") {
    if (/^[0-9]$/.test(key)) {
      const digit = Number(key);
      return { type: "preset", value: digit === 0 ? 1.0 : digit / 10 };
    }
    if (key === " ") {
      return { type: "focus-next-slider" };
    }
    return null;
  }
  if (key === "a" || key === "A") {
    return { type: "accept" };
  }
  if (key === "r" || key === "R") {
    return { type: "reject" };
  }
  return null;
}
