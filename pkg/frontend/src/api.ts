// Typed client for the defectdep service API. Every response is an envelope
// {ok, data} | {ok, error}; non-ok envelopes become ApiError with the
// service's error code so callers can branch on it.

export interface Counts {
  actors: number;
  dependees: number;
  dependers: number;
}

export interface VersionEntry {
  version: string;
  ingested_at: string;
  counts: Counts;
}

export interface DefectRecord {
  defect_id: string;
  title: string;
  module: string;
  product: string;
  severity: string;
  status: string;
  seed_actors: string[];
  depth: number;
  factor_values: Record<string, string>;
}

export interface RankRow {
  rank: number;
  defect_id: string;
  title: string;
  D: string;
  D_percent: string;
  score: string;
  factor_values: Record<string, string>;
}

export interface RankResponse {
  version: string;
  rows: RankRow[];
}

export interface PriorityConfigDoc {
  weight_D: string;
  factor_weights: Record<string, string>;
  factor_scales: Record<string, string[]>;
  tie_break_order: string[];
}

export interface ConfigOverride {
  weight_D?: string;
  factor_weights?: Record<string, string>;
}

export interface RankRequest {
  version?: string;
  config?: ConfigOverride;
  status?: string;
}

interface Envelope<T> {
  ok: boolean;
  data?: T;
  error?: { code: string; message: string };
}

export class ApiError extends Error {
  code: string;
  status: number;

  constructor(code: string, message: string, status: number) {
    super(message);
    this.code = code;
    this.status = status;
  }
}

async function unwrap<T>(response: Response): Promise<T> {
  let body: Envelope<T> | null = null;
  try {
    body = (await response.json()) as Envelope<T>;
  } catch {
    throw new ApiError("bad-envelope", `non-JSON response (HTTP ${response.status})`, response.status);
  }
  if (!body || body.ok !== true || body.data === undefined) {
    const err = body?.error;
    throw new ApiError(err?.code ?? "unknown", err?.message ?? `HTTP ${response.status}`, response.status);
  }
  return body.data;
}

export class DefectDepClient {
  constructor(private baseUrl: string = "", private fetchFn: typeof fetch = fetch) {}

  private async get<T>(path: string): Promise<T> {
    return unwrap<T>(await this.fetchFn(this.baseUrl + path));
  }

  private async send<T>(method: string, path: string, payload?: unknown): Promise<T> {
    return unwrap<T>(
      await this.fetchFn(this.baseUrl + path, {
        method,
        headers: { "content-type": "application/json" },
        body: payload === undefined ? "{}" : JSON.stringify(payload),
      }),
    );
  }

  health(): Promise<{ status: string }> {
    return this.get("/api/health");
  }

  versions(): Promise<{ versions: VersionEntry[] }> {
    return this.get("/api/versions");
  }

  defects(status = "open"): Promise<{ defects: DefectRecord[] }> {
    return this.get(`/api/defects?status=${encodeURIComponent(status)}`);
  }

  rank(request: RankRequest = {}): Promise<RankResponse> {
    return this.send("POST", "/api/rank", request);
  }

  getConfig(): Promise<PriorityConfigDoc> {
    return this.get("/api/config/priority");
  }

  putConfig(config: ConfigOverride): Promise<PriorityConfigDoc> {
    return this.send("PUT", "/api/config/priority", config);
  }

  submitDefect(record: Partial<DefectRecord>): Promise<DefectRecord> {
    return this.send("POST", "/api/defects", record);
  }
}
