import type { Kind, PendingResponse, ScoreForm, SubmitResponse } from "./types.js";
import { payload } from "./form.js";

/** Thin typed client for the annotation service HTTP API.
 *
 * The annotator id travels in the X-Annotator-Id header; the UI holds no
 * state the service does not confirm.
 */
export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchFn: typeof fetch = globalThis.fetch.bind(globalThis),
  ) {}

  async pending(kind: Kind, annotator: string): Promise<PendingResponse> {
    const params = new URLSearchParams({ kind, annotator });
    const response = await this.fetchFn(`${this.baseUrl}/items?${params}`);
    if (!response.ok) {
      throw new Error(`queue fetch failed: ${response.status}`);
    }
    return (await response.json()) as PendingResponse;
  }

  renderUrl(itemId: string, cellWidth = 8, cellHeight = 16): string {
    const params = new URLSearchParams({
      cell_width: String(cellWidth),
      cell_height: String(cellHeight),
    });
    return `${this.baseUrl}/items/${encodeURIComponent(itemId)}/render?${params}`;
  }

  async submit(
    itemId: string,
    annotator: string,
    form: ScoreForm,
  ): Promise<SubmitResponse> {
    const response = await this.fetchFn(
      `${this.baseUrl}/items/${encodeURIComponent(itemId)}/annotations`,
      {
        method: "POST",
        headers: {
          "Content-Type": "application/json",
          "X-Annotator-Id": annotator,
        },
        body: JSON.stringify(payload(form)),
      },
    );
    if (!response.ok) {
      throw new Error(`submit failed: ${response.status}`);
    }
    return (await response.json()) as SubmitResponse;
  }
}
