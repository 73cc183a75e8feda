import { readFileSync } from "node:fs";
import { join } from "node:path";

import type { RankResponse } from "../src/api.js";

export function recorded<T = unknown>(name: string): T {
  const raw = readFileSync(join(__dirname, "recorded", name), "utf-8");
  return JSON.parse(raw) as T;
}

export function recordedData<T>(name: string): T {
  return (recorded<{ ok: boolean; data: T }>(name)).data;
}

export function rankRows(name: string): RankResponse {
  return recordedData<RankResponse>(name);
}

export function order(response: RankResponse): string[] {
  return response.rows.map((row) => row.defect_id);
}

interface Call {
  url: string;
  method: string;
  body?: string;
}

// fetch stub routing on "METHOD path" with recorded envelope payloads
export function fetchStub(routes: Record<string, unknown>): {
  fetch: typeof fetch;
  calls: Call[];
} {
  const calls: Call[] = [];
  const stub = (async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = String(input);
    const method = init?.method ?? "GET";
    calls.push({ url, method, body: typeof init?.body === "string" ? init.body : undefined });
    const path = url.replace(/^https?:\/\/[^/]+/, "");
    const key = `${method} ${path}`;
    if (!(key in routes)) {
      return new Response(
        JSON.stringify({ ok: false, error: { code: "not-found", message: `no route ${key}` } }),
        { status: 404, headers: { "content-type": "application/json" } },
      );
    }
    return new Response(JSON.stringify(routes[key]), {
      status: 200,
      headers: { "content-type": "application/json" },
    });
  }) as typeof fetch;
  return { fetch: stub, calls };
}
