/** Thin typed wrappers over the analysis server's HTTP endpoints.
 *
 * `fetch` is injectable so tests can exercise the wrappers against a fake
 * transport without a running server.
 */

import type { PlotEntry, SelectionState } from "./types.js";

export type FetchLike = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<{
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
  arrayBuffer(): Promise<ArrayBuffer>;
}>;

export interface ClipSummary {
  clip_id: string;
  group_key: string;
  duration_s: number | null;
  methods: string[];
  digest: string | null;
}

export interface SessionEntry {
  revision: number;
  state: SelectionState;
}

export class ApiError extends Error {
  status: number;

  constructor(status: number, message: string) {
    super(message);
    this.status = status;
  }
}

export class ApiClient {
  private base: string;
  private fetchFn: FetchLike;

  constructor(base: string, fetchFn: FetchLike) {
    this.base = base.replace(/\/$/, "");
    this.fetchFn = fetchFn;
  }

  private async getJson(path: string): Promise<unknown> {
    const res = await this.fetchFn(this.base + path);
    if (!res.ok) throw new ApiError(res.status, `GET ${path} -> ${res.status}`);
    return res.json();
  }

  async collection(): Promise<ClipSummary[]> {
    return (await this.getJson("/api/collection")) as ClipSummary[];
  }

  async spectral(clipId: string, method: string): Promise<PlotEntry> {
    const path = `/api/clip/${encodeURIComponent(clipId)}/spectral?method=${encodeURIComponent(method)}`;
    return (await this.getJson(path)) as PlotEntry;
  }

  async audio(clipId: string): Promise<ArrayBuffer> {
    const path = `/api/clip/${encodeURIComponent(clipId)}/audio`;
    const res = await this.fetchFn(this.base + path);
    if (!res.ok) throw new ApiError(res.status, `GET ${path} -> ${res.status}`);
    return res.arrayBuffer();
  }

  async getSession(sessionId: string): Promise<SessionEntry> {
    return (await this.getJson(
      `/api/session/${encodeURIComponent(sessionId)}`,
    )) as SessionEntry;
  }

  /** Optimistic write: resolves to the new revision, or throws ApiError
   * (409 on stale revision, with the server's detail message). */
  async putSession(
    sessionId: string,
    state: SelectionState,
    revision: number,
  ): Promise<number> {
    const res = await this.fetchFn(
      this.base + `/api/session/${encodeURIComponent(sessionId)}`,
      {
        method: "PUT",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ state, revision }),
      },
    );
    const body = (await res.json()) as { revision?: number; detail?: string };
    if (!res.ok) {
      throw new ApiError(
        res.status,
        body.detail ?? `PUT session ${sessionId} -> ${res.status}`,
      );
    }
    return body.revision as number;
  }
}
