export type Kind = "curation" | "calibration";

export const DIMENSIONS = ["SA", "IF", "SC", "SL", "CE"] as const;
export type Dimension = (typeof DIMENSIONS)[number];

/** One pending item as served by the annotation service. */
export interface ItemView {
  id: string;
  kind: Kind;
  art: string;
  context: string;
  candidate?: string;
}

export interface PendingResponse {
  pending: ItemView[];
  count: number;
}

export interface SubmitResponse {
  annotation: Record<string, unknown>;
  duplicate: boolean;
}

export interface CalibrationForm {
  kind: "calibration";
  scores: Partial<Record<Dimension, number>>;
}

export interface CurationForm {
  kind: "curation";
  accept: boolean | null;
  reason: string;
}

export type ScoreForm = CalibrationForm | CurationForm;
