import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import type { FetchLike } from "../src/api.js";
import { emptyState } from "../src/state.js";

function fakeFetch(
  routes: Record<
    string,
    (init?: { method?: string; body?: string }) => {
      status: number;
      json?: unknown;
      bytes?: ArrayBuffer;
    }
  >,
): { fetch: FetchLike; calls: string[] } {
  const calls: string[] = [];
  const fetch: FetchLike = async (url, init) => {
    calls.push(`${init?.method ?? "GET"} ${url}`);
    const handler = routes[url];
    const out = handler
      ? handler(init)
      : { status: 404, json: { detail: "not found" } };
    return {
      ok: out.status >= 200 && out.status < 300,
      status: out.status,
      json: async () => out.json,
      arrayBuffer: async () => out.bytes ?? new ArrayBuffer(0),
    };
  };
  return { fetch, calls };
}

describe("api client", () => {
  it("fetches the collection listing", async () => {
    const summary = [
      {
        clip_id: "tone",
        group_key: "tone",
        duration_s: 1.0,
        methods: ["FFT_DUAL"],
        digest: null,
      },
    ];
    const { fetch } = fakeFetch({
      "http://x/api/collection": () => ({ status: 200, json: summary }),
    });
    const client = new ApiClient("http://x/", fetch);
    expect(await client.collection()).toEqual(summary);
  });

  it("builds spectral URLs with the method query and escapes ids", async () => {
    const { fetch, calls } = fakeFetch({
      "http://x/api/clip/a%20b/spectral?method=FFT_DUAL": () => ({
        status: 200,
        json: { plot_id: "p" },
      }),
    });
    const client = new ApiClient("http://x", fetch);
    await client.spectral("a b", "FFT_DUAL");
    expect(calls).toEqual(["GET http://x/api/clip/a%20b/spectral?method=FFT_DUAL"]);
  });

  it("surfaces HTTP errors as ApiError with the status", async () => {
    const { fetch } = fakeFetch({});
    const client = new ApiClient("http://x", fetch);
    await expect(client.spectral("missing", "CQT")).rejects.toMatchObject({
      status: 404,
    });
  });

  it("returns audio bytes", async () => {
    const bytes = new Uint8Array([82, 73, 70, 70]).buffer;
    const { fetch } = fakeFetch({
      "http://x/api/clip/tone/audio": () => ({ status: 200, bytes }),
    });
    const client = new ApiClient("http://x", fetch);
    expect(await client.audio("tone")).toBe(bytes);
  });

  it("putSession sends state + revision and returns the new revision", async () => {
    let seen: { state?: unknown; revision?: number } = {};
    const { fetch } = fakeFetch({
      "http://x/api/session/default": (init) => {
        seen = JSON.parse(init?.body ?? "{}");
        return { status: 200, json: { revision: 1 } };
      },
    });
    const client = new ApiClient("http://x", fetch);
    const rev = await client.putSession("default", emptyState(), 0);
    expect(rev).toBe(1);
    expect(seen.revision).toBe(0);
    expect(seen.state).toEqual(emptyState());
  });

  it("a stale revision raises ApiError 409 with the server detail", async () => {
    const { fetch } = fakeFetch({
      "http://x/api/session/default": () => ({
        status: 409,
        json: { detail: "stale revision; current is 5" },
      }),
    });
    const client = new ApiClient("http://x", fetch);
    const err = await client
      .putSession("default", emptyState(), 2)
      .catch((e: ApiError) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).status).toBe(409);
    expect((err as ApiError).message).toContain("current is 5");
  });
});
