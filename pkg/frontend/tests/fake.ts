import type { FetchLike } from "../src/api";
import type { MapSet, Route } from "../src/types";

/**
 * In-memory stand-in for the session service, canned from a recorded
 * transcript of the s24C map: each reachable assignment maps to the route
 * JSON the real service returns. No routing logic lives here.
 */

const OPTIONS: Record<string, string[]> = {
  "root/opposed": ["no", "yes"],
  "root/differs_3b": ["yes", "no"],
  "root/differs_3a": ["yes", "no"],
};

const PROMPTS: Record<string, string> = {
  "root/opposed": "Has the landlord opposed the grant of a new tenancy?",
  "root/differs_3b": "Do the terms differ substantially?",
  "root/differs_3a": "Does the rent differ substantially?",
};

function key(assignment: Record<string, string>): string {
  return Object.keys(assignment)
    .sort()
    .map((k) => `${k}=${assignment[k]}`)
    .join("&");
}

function pendingRoute(completed: string[], decision: string): Route {
  return {
    status: "AwaitingDecision",
    completed: completed.map((node, index) => ({ node, index })),
    pending: [
      {
        node: decision,
        prompt: PROMPTS[decision],
        options: OPTIONS[decision] ?? [],
      },
    ],
    blocked: [],
    reachedExits: [],
  };
}

function completeRoute(completed: string[], exit: string, outcome: string): Route {
  return {
    status: "Complete",
    completed: completed.map((node, index) => ({ node, index })),
    pending: [],
    blocked: [],
    reachedExits: [{ node: exit, outcome }],
  };
}

const SPINE = ["root/start", "root/apply", "root/opposed"];
const AFTER_NO = [...SPINE, "root/resolve_terms", "root/differs_3b"];
const AFTER_NO_NO = [...AFTER_NO, "root/differs_3a"];

const TRANSCRIPT: Record<string, Route> = {
  [key({})]: pendingRoute(SPINE.slice(0, 2), "root/opposed"),
  [key({ "root/opposed": "no" })]: pendingRoute(AFTER_NO.slice(0, 4), "root/differs_3b"),
  [key({ "root/opposed": "yes" })]: completeRoute(
    [...SPINE, "root/det_reasonable", "root/out_6"],
    "root/out_6",
    "s24C(6)",
  ),
  [key({ "root/opposed": "no", "root/differs_3b": "yes" })]: completeRoute(
    [...AFTER_NO, "root/det_reasonable", "root/out_6"],
    "root/out_6",
    "s24C(6)",
  ),
  [key({ "root/opposed": "no", "root/differs_3b": "no" })]: pendingRoute(
    AFTER_NO,
    "root/differs_3a",
  ),
  [key({ "root/opposed": "no", "root/differs_3b": "no", "root/differs_3a": "yes" })]:
    completeRoute(
      [...AFTER_NO_NO, "root/det_relevant", "root/out_5"],
      "root/out_5",
      "s24C(5)",
    ),
  [key({ "root/opposed": "no", "root/differs_3b": "no", "root/differs_3a": "no" })]:
    completeRoute(
      [...AFTER_NO_NO, "root/carry_rent", "root/out_2"],
      "root/out_2",
      "s24C(2)",
    ),
};

export const FAKE_MAP: MapSet = {
  root: "s24c",
  docs: {
    s24c: {
      id: "s24c",
      title: "Application for interim rent",
      refs: [
        {
          kind: "Statute",
          act: "Landlord and Tenant Act 1954",
          sectionPath: ["24C"],
        },
      ],
      nodes: [
        {
          id: "opposed",
          kind: "Decision",
          label: "Landlord opposition",
          prompt: PROMPTS["root/opposed"],
          explanations: [],
          refs: [
            {
              kind: "Statute",
              act: "Landlord and Tenant Act 1954",
              sectionPath: ["24C", "(1)"],
            },
          ],
        },
        {
          id: "out_5",
          kind: "Exit",
          label: "Interim rent is the relevant rent",
          outcome: "s24C(5)",
          explanations: [],
          refs: [
            {
              kind: "Statute",
              act: "Landlord and Tenant Act 1954",
              sectionPath: ["24C", "(5)"],
            },
          ],
        },
        {
          id: "out_2",
          kind: "Exit",
          label: "Rent carries over",
          outcome: "s24C(2)",
          explanations: [],
          refs: [],
        },
      ],
    },
  },
};

interface FakeSession {
  mapId: string;
  mode: string;
  assignment: Record<string, string>;
}

export class FakeService {
  readonly sessions = new Map<string, FakeSession>();
  readonly log: string[] = [];
  private counter = 0;

  route(session: FakeSession): Route {
    const route = TRANSCRIPT[key(session.assignment)];
    if (!route) throw new Error(`no canned route for ${key(session.assignment)}`);
    return route;
  }

  private svg(session: FakeSession): string {
    const route = this.route(session);
    const done = new Set(route.completed.map((s) => s.node));
    const nodes = ["root/start", "root/opposed", "root/out_2", "root/out_5", "root/out_6"]
      .map((id) => {
        const cls = done.has(id) ? "node highlight" : "node";
        return `<g id="${id}" class="${cls}"><rect/></g>`;
      })
      .join("");
    return `<svg xmlns="http://www.w3.org/2000/svg">${nodes}</svg>`;
  }

  readonly fetch: FetchLike = async (input, init) => {
    const url = new URL(input, "http://fake");
    const method = (init?.method ?? "GET").toUpperCase();
    const path = url.pathname;
    this.log.push(`${method} ${path}`);
    const json = (status: number, body: unknown, headers?: Record<string, string>) =>
      new Response(JSON.stringify(body), {
        status,
        headers: { "content-type": "application/json", ...headers },
      });

    if (method === "GET" && path === "/maps") {
      return json(200, { maps: [{ id: "s24c", title: "Application for interim rent" }] });
    }
    if (method === "GET" && path === "/maps/s24c") return json(200, FAKE_MAP);
    if (method === "GET" && /^\/maps\/[^/]+$/.test(path)) {
      return json(404, { code: "map_not_found", message: "no such map" });
    }
    if (method === "POST" && path === "/sessions") {
      const body = JSON.parse(String(init?.body)) as { mapId: string; mode?: string };
      if (body.mapId !== "s24c") {
        return json(404, { code: "map_not_found", message: "no such map" });
      }
      const sessionId = `fake-${++this.counter}`;
      const session = { mapId: body.mapId, mode: body.mode ?? "atomic", assignment: {} };
      this.sessions.set(sessionId, session);
      return json(201, {
        sessionId,
        mapId: session.mapId,
        mode: session.mode,
        route: this.route(session),
      });
    }

    const match = path.match(/^\/sessions\/([^/]+)(\/.*)?$/);
    const session = match ? this.sessions.get(match[1]!) : undefined;
    if (match && !session) {
      return json(404, { code: "session_not_found", message: "no such session" });
    }
    if (session && match) {
      const rest = match[2] ?? "";
      if (method === "GET" && rest === "/route") return json(200, this.route(session));
      if (method === "GET" && rest === "/svg") {
        const etag = `"${key(session.assignment) || "init"}"`;
        const reqHeaders = new Headers(init?.headers);
        if (reqHeaders.get("if-none-match") === etag) {
          return new Response(null, { status: 304, headers: { etag } });
        }
        return new Response(this.svg(session), {
          status: 200,
          headers: { "content-type": "image/svg+xml", etag },
        });
      }
      if (method === "POST" && rest === "/answers") {
        const body = JSON.parse(String(init?.body)) as { decision: string; label: string };
        const route = this.route(session);
        const pending = route.pending.find((p) => p.node === body.decision);
        const already = session.assignment[body.decision];
        if (already === body.label) return json(200, route);
        if (!pending) {
          return json(409, {
            code: "decision_not_pending",
            message: "not pending",
            details: { pending: route.pending.map((p) => p.node) },
          });
        }
        if (!pending.options.includes(body.label)) {
          return json(422, {
            code: "invalid_label",
            message: `no branch labelled ${body.label}`,
            details: { options: pending.options },
          });
        }
        session.assignment[body.decision] = body.label;
        return json(200, this.route(session));
      }
      if (method === "DELETE" && rest.startsWith("/answers/")) {
        const decision = decodeURIComponent(rest.slice("/answers/".length));
        if (!(decision in session.assignment)) {
          return json(409, { code: "decision_not_answered", message: "not answered" });
        }
        delete session.assignment[decision];
        return json(200, this.route(session));
      }
    }
    return json(404, { code: "not_found", message: `no route for ${method} ${path}` });
  };
}
