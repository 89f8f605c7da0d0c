import type {
  ApiErrorBody,
  MapSet,
  MapSummary,
  Route,
  SessionInfo,
} from "./types";

export type FetchLike = (
  input: string,
  init?: RequestInit,
) => Promise<Response>;

/** Error raised for any non-2xx (and non-304) service response. */
export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly details?: Record<string, unknown>;

  constructor(status: number, body: ApiErrorBody) {
    super(body.message);
    this.name = "ApiError";
    this.status = status;
    this.code = body.code;
    this.details = body.details;
  }
}

export interface SvgResult {
  svg: string;
  etag: string | null;
  /** True when the server answered 304 and `svg` is the cached body. */
  fromCache: boolean;
}

/**
 * Thin typed client for the lawmap session service. The client never
 * interprets routes; it only moves JSON and SVG across the wire.
 */
export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchFn: FetchLike;
  private readonly svgCache = new Map<string, { etag: string; svg: string }>();

  constructor(baseUrl: string, fetchFn: FetchLike = (...a) => fetch(...a)) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchFn = fetchFn;
  }

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const response = await this.fetchFn(this.baseUrl + path, init);
    if (!response.ok && response.status !== 304) {
      let body: ApiErrorBody;
      try {
        body = (await response.json()) as ApiErrorBody;
      } catch {
        body = { code: "http_error", message: `HTTP ${response.status}` };
      }
      throw new ApiError(response.status, body);
    }
    return response;
  }

  async listMaps(): Promise<MapSummary[]> {
    const response = await this.request("/maps");
    const payload = (await response.json()) as { maps: MapSummary[] };
    return payload.maps;
  }

  async getMap(mapId: string): Promise<MapSet> {
    const response = await this.request(`/maps/${mapId}`);
    return (await response.json()) as MapSet;
  }

  async getMapSvg(mapId: string): Promise<string> {
    const response = await this.request(`/maps/${mapId}/svg`);
    return response.text();
  }

  async openSession(mapId: string, mode = "atomic"): Promise<SessionInfo> {
    const response = await this.request("/sessions", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ mapId, mode }),
    });
    return (await response.json()) as SessionInfo;
  }

  async getRoute(sessionId: string): Promise<Route> {
    const response = await this.request(`/sessions/${sessionId}/route`);
    return (await response.json()) as Route;
  }

  async postAnswer(
    sessionId: string,
    decision: string,
    label: string,
  ): Promise<Route> {
    const response = await this.request(`/sessions/${sessionId}/answers`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ decision, label }),
    });
    return (await response.json()) as Route;
  }

  async deleteAnswer(sessionId: string, decision: string): Promise<Route> {
    const response = await this.request(
      `/sessions/${sessionId}/answers/${decision}`,
      { method: "DELETE" },
    );
    return (await response.json()) as Route;
  }

  /** Fetches the session SVG, revalidating with If-None-Match when cached. */
  async getSessionSvg(sessionId: string): Promise<SvgResult> {
    const cached = this.svgCache.get(sessionId);
    const headers: Record<string, string> = {};
    if (cached) headers["if-none-match"] = cached.etag;
    const response = await this.request(`/sessions/${sessionId}/svg`, {
      headers,
    });
    if (response.status === 304 && cached) {
      return { svg: cached.svg, etag: cached.etag, fromCache: true };
    }
    const svg = await response.text();
    const etag = response.headers.get("etag");
    if (etag) this.svgCache.set(sessionId, { etag, svg });
    return { svg, etag, fromCache: false };
  }
}
