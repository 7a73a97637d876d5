import { describe, expect, it } from "vitest";

import { ApiClient } from "./api.js";

function fakeFetch(routes: Record<string, unknown>) {
  const calls: string[] = [];
  const fn = (async (url: string) => {
    calls.push(url);
    const path = url.replace("http://svc", "");
    if (!(path in routes)) {
      return { ok: false, status: 404, json: async () => ({}) };
    }
    return { ok: true, status: 200, json: async () => routes[path] };
  }) as unknown as typeof fetch;
  return { fn, calls };
}

describe("ApiClient", () => {
  it("fetches metadata", async () => {
    const { fn } = fakeFetch({
      "/meta": { n: 9, cuboid_count: 4, dataset_name: "d" },
    });
    const client = new ApiClient("http://svc", fn);
    expect((await client.meta()).n).toBe(9);
  });

  it("serializes infinite alpha as the literal inf", async () => {
    const body = { edges: [], count: 0, elapsed_microseconds: 1 };
    const { fn, calls } = fakeFetch({ "/query?i=1&j=5&alpha=inf": body });
    const client = new ApiClient("http://svc", fn);
    await client.query(1, 5, Infinity);
    expect(calls[0]).toContain("alpha=inf");
  });

  it("unwraps the points array", async () => {
    const { fn } = fakeFetch({
      "/points?i=2&j=3": { points: [{ index: 2, x: 0, y: 0 }] },
    });
    const client = new ApiClient("http://svc", fn);
    expect(await client.points(2, 3)).toEqual([{ index: 2, x: 0, y: 0 }]);
  });

  it("throws on error responses", async () => {
    const { fn } = fakeFetch({});
    const client = new ApiClient("http://svc", fn);
    await expect(client.meta()).rejects.toThrow(/failed: 404/);
  });
});
