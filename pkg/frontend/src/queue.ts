import type { ApiClient } from "./api.js";
import { emptyForm, isComplete } from "./form.js";
import type { ItemView, Kind, ScoreForm } from "./types.js";

export type QueueStatus = "loading" | "annotating" | "done" | "error";

export interface QueueState {
  status: QueueStatus;
  items: ItemView[];
  index: number;
  total: number;
  form: ScoreForm | null;
  error: string | null;
  lastDuplicate: boolean;
}

/** Drives one annotator's pass over their pending queue.
 *
 * All state derives from service responses; submissions are optimistic only
 * in navigation (the service's idempotence is the safety net), and a failed
 * submit keeps the form intact so no input is ever dropped.
 */
export class QueueController {
  state: QueueState = {
    status: "loading",
    items: [],
    index: 0,
    total: 0,
    form: null,
    error: null,
    lastDuplicate: false,
  };
  onChange: ((state: QueueState) => void) | null = null;

  constructor(
    private api: ApiClient,
    readonly annotator: string,
    readonly kind: Kind,
  ) {}

  private emit(): void {
    this.onChange?.(this.state);
  }

  get current(): ItemView | null {
    return this.state.status === "annotating"
      ? (this.state.items[this.state.index] ?? null)
      : null;
  }

  /** Progress label like "1 / 2" (1-based over this session's queue). */
  get counter(): string {
    return `${Math.min(this.state.index + 1, this.state.total)} / ${this.state.total}`;
  }

  get canSubmit(): boolean {
    return this.state.form !== null && isComplete(this.state.form);
  }

  async load(): Promise<void> {
    this.state = { ...this.state, status: "loading", error: null };
    this.emit();
    let pending;
    try {
      pending = await this.api.pending(this.kind, this.annotator);
    } catch (err) {
      this.state = {
        ...this.state,
        status: "error",
        error: err instanceof Error ? err.message : String(err),
      };
      this.emit();
      return;
    }
    this.state = {
      ...this.state,
      status: pending.pending.length === 0 ? "done" : "annotating",
      items: pending.pending,
      index: 0,
      total: pending.pending.length,
      form: pending.pending.length > 0 ? emptyForm(this.kind) : null,
      error: null,
    };
    this.emit();
  }

  updateForm(form: ScoreForm): void {
    if (this.state.status !== "annotating") {
      return;
    }
    this.state = { ...this.state, form };
    this.emit();
  }

  /** POST the completed form, then advance; an idempotent-duplicate reply
   * advances silently. */
  async submitAndAdvance(): Promise<void> {
    const item = this.current;
    if (item === null || this.state.form === null || !this.canSubmit) {
      return;
    }
    let duplicate: boolean;
    try {
      const response = await this.api.submit(item.id, this.annotator, this.state.form);
      duplicate = response.duplicate;
    } catch (err) {
      this.state = {
        ...this.state,
        status: "error",
        error: err instanceof Error ? err.message : String(err),
      };
      this.emit();
      return;
    }
    const nextIndex = this.state.index + 1;
    this.state = {
      ...this.state,
      status: nextIndex >= this.state.items.length ? "done" : "annotating",
      index: nextIndex,
      form: nextIndex >= this.state.items.length ? null : emptyForm(this.kind),
      lastDuplicate: duplicate,
      error: null,
    };
    this.emit();
  }

  /** Recover from a service-unreachable banner: re-submit the kept form if
   * one is pending, otherwise reload the queue. */
  async retry(): Promise<void> {
    if (this.state.form !== null && this.state.items.length > 0) {
      this.state = { ...this.state, status: "annotating", error: null };
      this.emit();
      await this.submitAndAdvance();
    } else {
      await this.load();
    }
  }
}
