import { ApiClient, ApiError } from "./api";
import type { Route } from "./types";

export interface RouteDiff {
  /** Node path-ids completed only on the pinned (baseline) route. */
  removed: string[];
  /** Node path-ids completed only on the current route. */
  added: string[];
  exitsRemoved: string[];
  exitsAdded: string[];
}

export interface UiSessionState {
  sessionId: string | null;
  mapId: string | null;
  mode: string;
  /** Always the latest route returned by the service; never computed here. */
  route: Route | null;
  svg: string | null;
  selectedNode: string | null;
  /** What-if baseline; present while a comparison is pinned. */
  pinnedRoute: Route | null;
  inFlight: boolean;
  error: { code: string; message: string } | null;
  notFound: boolean;
}

export type Listener = (state: UiSessionState) => void;

/** Client set-difference over completed node ids and reached exits. */
export function routeDiff(baseline: Route, current: Route): RouteDiff {
  const base = new Set(baseline.completed.map((s) => s.node));
  const cur = new Set(current.completed.map((s) => s.node));
  const baseExits = new Set(baseline.reachedExits.map((e) => e.node));
  const curExits = new Set(current.reachedExits.map((e) => e.node));
  return {
    removed: [...base].filter((n) => !cur.has(n)).sort(),
    added: [...cur].filter((n) => !base.has(n)).sort(),
    exitsRemoved: [...baseExits].filter((n) => !curExits.has(n)).sort(),
    exitsAdded: [...curExits].filter((n) => !baseExits.has(n)).sort(),
  };
}

/**
 * Single-session walkthrough store. One instance per tab; every mutation
 * round-trips through the API and the stored route mirrors the response.
 * In-flight gating: while a request is running, further mutations are
 * rejected so answer posts never interleave.
 */
export class SessionStore {
  readonly api: ApiClient;
  private state: UiSessionState = {
    sessionId: null,
    mapId: null,
    mode: "atomic",
    route: null,
    svg: null,
    selectedNode: null,
    pinnedRoute: null,
    inFlight: false,
    error: null,
    notFound: false,
  };
  private listeners: Listener[] = [];

  constructor(api: ApiClient) {
    this.api = api;
  }

  getState(): UiSessionState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private update(patch: Partial<UiSessionState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  private async guarded(work: () => Promise<void>): Promise<boolean> {
    if (this.state.inFlight) return false;
    this.update({ inFlight: true, error: null });
    try {
      await work();
      return true;
    } catch (err) {
      if (err instanceof ApiError) {
        this.update({
          error: { code: err.code, message: err.message },
          notFound: err.code === "map_not_found",
        });
      } else {
        this.update({
          error: { code: "unreachable", message: String(err) },
        });
      }
      return false;
    } finally {
      this.update({ inFlight: false });
    }
  }

  /** Opens a fresh session; with `sessionId` given, resumes it instead. */
  async open(
    mapId: string,
    mode = "atomic",
    sessionId?: string,
  ): Promise<boolean> {
    return this.guarded(async () => {
      if (sessionId) {
        const route = await this.api.getRoute(sessionId);
        const { svg } = await this.api.getSessionSvg(sessionId);
        this.update({ sessionId, mapId, mode, route, svg, notFound: false });
        return;
      }
      const session = await this.api.openSession(mapId, mode);
      const { svg } = await this.api.getSessionSvg(session.sessionId);
      this.update({
        sessionId: session.sessionId,
        mapId: session.mapId,
        mode: session.mode,
        route: session.route,
        svg,
        pinnedRoute: null,
        notFound: false,
      });
    });
  }

  async answer(decision: string, label: string): Promise<boolean> {
    const sessionId = this.state.sessionId;
    if (!sessionId) return false;
    return this.guarded(async () => {
      const route = await this.api.postAnswer(sessionId, decision, label);
      const { svg } = await this.api.getSessionSvg(sessionId);
      this.update({ route, svg });
    });
  }

  async retract(decision: string): Promise<boolean> {
    const sessionId = this.state.sessionId;
    if (!sessionId) return false;
    return this.guarded(async () => {
      const route = await this.api.deleteAnswer(sessionId, decision);
      const { svg } = await this.api.getSessionSvg(sessionId);
      this.update({ route, svg });
    });
  }

  /**
   * Pins the current route as a baseline, then retracts and re-answers the
   * decision with the new label. The comparison stays pinned until
   * `unpin()`; `diff()` exposes the added/removed segments.
   */
  async whatIf(decision: string, newLabel: string): Promise<boolean> {
    const sessionId = this.state.sessionId;
    const baseline = this.state.route;
    if (!sessionId || !baseline) return false;
    return this.guarded(async () => {
      // Keep the first baseline across repeated flips so flipping back
      // shows an empty comparison.
      if (!this.state.pinnedRoute) this.update({ pinnedRoute: baseline });
      await this.api.deleteAnswer(sessionId, decision);
      const route = await this.api.postAnswer(sessionId, decision, newLabel);
      const { svg } = await this.api.getSessionSvg(sessionId);
      this.update({ route, svg });
    });
  }

  unpin(): void {
    this.update({ pinnedRoute: null });
  }

  diff(): RouteDiff | null {
    if (!this.state.pinnedRoute || !this.state.route) return null;
    return routeDiff(this.state.pinnedRoute, this.state.route);
  }

  selectNode(pathId: string | null): void {
    this.update({ selectedNode: pathId });
  }
}
