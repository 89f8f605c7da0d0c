import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api";
import { FakeService } from "./fake";

function client(service: FakeService): ApiClient {
  return new ApiClient("http://fake", service.fetch);
}

describe("ApiClient", () => {
  it("lists maps and fetches map JSON", async () => {
    const api = client(new FakeService());
    expect(await api.listMaps()).toEqual([
      { id: "s24c", title: "Application for interim rent" },
    ]);
    const map = await api.getMap("s24c");
    expect(map.root).toBe("s24c");
  });

  it("raises ApiError with code, status and details", async () => {
    const api = client(new FakeService());
    const error = await api.getMap("nope").catch((e) => e);
    expect(error).toBeInstanceOf(ApiError);
    expect(error.status).toBe(404);
    expect(error.code).toBe("map_not_found");
    const session = await api.openSession("s24c");
    const bad = await api
      .postAnswer(session.sessionId, "root/opposed", "perhaps")
      .catch((e) => e);
    expect(bad.status).toBe(422);
    expect(bad.code).toBe("invalid_label");
    expect(bad.details).toEqual({ options: ["no", "yes"] });
  });

  it("opens a session and carries the initial route", async () => {
    const api = client(new FakeService());
    const session = await api.openSession("s24c");
    expect(session.mode).toBe("atomic");
    expect(session.route.status).toBe("AwaitingDecision");
    expect(session.route.pending[0]?.node).toBe("root/opposed");
  });

  it("revalidates the session SVG with If-None-Match", async () => {
    const service = new FakeService();
    const api = client(service);
    const session = await api.openSession("s24c");
    const first = await api.getSessionSvg(session.sessionId);
    expect(first.fromCache).toBe(false);
    expect(first.etag).not.toBeNull();
    const second = await api.getSessionSvg(session.sessionId);
    expect(second.fromCache).toBe(true);
    expect(second.svg).toBe(first.svg);
    await api.postAnswer(session.sessionId, "root/opposed", "no");
    const third = await api.getSessionSvg(session.sessionId);
    expect(third.fromCache).toBe(false);
    expect(third.etag).not.toBe(first.etag);
  });
});
