export { ApiClient, ApiError } from "./api";
export type { FetchLike, SvgResult } from "./api";
export { citationsFor, formatRef, nodeForPathId } from "./citations";
export { SessionStore, routeDiff } from "./session";
export type { Listener, RouteDiff, UiSessionState } from "./session";
export * from "./types";
export { WalkthroughView } from "./view";

import { ApiClient } from "./api";
import { SessionStore } from "./session";
import { WalkthroughView } from "./view";

/**
 * Mounts the walkthrough into `root`. The session id is mirrored into the
 * URL (`?session=`) so a reload resumes the same session.
 */
export async function mount(
  root: HTMLElement,
  baseUrl: string,
  mapId: string,
  mode = "atomic",
): Promise<WalkthroughView> {
  const store = new SessionStore(new ApiClient(baseUrl));
  const view = new WalkthroughView(root, store);
  const params = new URLSearchParams(window.location.search);
  const existing = params.get("session") ?? undefined;
  await view.load(mapId, mode, existing);
  const opened = store.getState().sessionId;
  if (opened && opened !== existing) {
    params.set("session", opened);
    window.history.replaceState(null, "", `?${params.toString()}`);
  }
  return view;
}
