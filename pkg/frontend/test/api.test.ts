import { describe, expect, it, vi } from "vitest";

import { ApiError, Client } from "../src/api.js";
import type { PendingItem } from "../src/types.js";

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

const ITEM: PendingItem = {
  sentence_index: 0,
  token_index: 4,
  surface: "derin",
  context: ["derin"],
  candidates: [],
};

describe("Client", () => {
  it("posts session text and parses the response", async () => {
    const fetchMock = vi.fn(async () =>
      jsonResponse(201, { session_id: "abc", pending_count: 3 }),
    );
    const client = new Client("http://svc:1", fetchMock as unknown as typeof fetch);
    const created = await client.createSession("bir metin");
    expect(created.session_id).toBe("abc");
    const [url, init] = fetchMock.mock.calls[0] as [string, RequestInit];
    expect(url).toBe("http://svc:1/sessions");
    expect(init.method).toBe("POST");
    expect(JSON.parse(init.body as string)).toEqual({ text: "bir metin" });
  });

  it("strips a trailing slash from the base url", async () => {
    const fetchMock = vi.fn(async () => jsonResponse(200, { items: [], remaining: 0 }));
    const client = new Client("http://svc:1/", fetchMock as unknown as typeof fetch);
    await client.pending("sid");
    expect((fetchMock.mock.calls[0] as [string, RequestInit])[0]).toBe(
      "http://svc:1/sessions/sid/pending",
    );
  });

  it("sends one choice call with the service's field names", async () => {
    const fetchMock = vi.fn(async () =>
      jsonResponse(200, { remaining: 2, duplicate: false }),
    );
    const client = new Client("http://svc:1", fetchMock as unknown as typeof fetch);
    const response = await client.choose("sid", ITEM, 1);
    expect(response.remaining).toBe(2);
    expect(fetchMock).toHaveBeenCalledTimes(1);
    const [url, init] = fetchMock.mock.calls[0] as [string, RequestInit];
    expect(url).toBe("http://svc:1/sessions/sid/choices");
    expect(JSON.parse(init.body as string)).toEqual({
      sentence_index: 0,
      token_index: 4,
      parse_index: 1,
    });
  });

  it("raises ApiError with the service detail on failure", async () => {
    const fetchMock = vi.fn(async () =>
      jsonResponse(409, { detail: "2 tokens still pending" }),
    );
    const client = new Client("http://svc:1", fetchMock as unknown as typeof fetch);
    await expect(client.result("sid")).rejects.toThrowError(
      "2 tokens still pending",
    );
  });

  it("flags 404s as stale sessions", async () => {
    const fetchMock = vi.fn(async () =>
      jsonResponse(404, { detail: "unknown session" }),
    );
    const client = new Client("http://svc:1", fetchMock as unknown as typeof fetch);
    try {
      await client.pending("nope");
      expect.unreachable();
    } catch (error) {
      expect(error).toBeInstanceOf(ApiError);
      expect((error as ApiError).isStaleSession).toBe(true);
    }
  });

  it("copes with non-JSON error bodies", async () => {
    const fetchMock = vi.fn(
      async () => new Response("boom", { status: 500 }),
    );
    const client = new Client("http://svc:1", fetchMock as unknown as typeof fetch);
    await expect(client.pending("sid")).rejects.toThrowError(
      "request failed with status 500",
    );
  });
});
