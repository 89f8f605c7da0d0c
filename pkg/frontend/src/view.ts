import { citationsFor, nodeForPathId } from "./citations";
import type { RouteDiff, SessionStore, UiSessionState } from "./session";
import type { MapSet, PendingDecision } from "./types";

/**
 * DOM view over a SessionStore. The SVG arrives pre-rendered from the
 * service with stable element ids equal to route path-ids; the view only
 * toggles classes on those ids, wires pan/zoom, and renders question
 * cards, the citation panel and the what-if diff.
 */
export class WalkthroughView {
  private readonly root: HTMLElement;
  private readonly store: SessionStore;
  private maps: MapSet | null = null;
  private readonly svgPane: HTMLElement;
  private readonly sidebar: HTMLElement;
  private unsubscribe: (() => void) | null = null;
  private zoom = 1;
  private panX = 0;
  private panY = 0;

  constructor(root: HTMLElement, store: SessionStore) {
    this.root = root;
    this.store = store;
    this.root.classList.add("lawmap-walkthrough");
    this.svgPane = document.createElement("div");
    this.svgPane.className = "svg-pane";
    this.sidebar = document.createElement("div");
    this.sidebar.className = "sidebar";
    this.root.append(this.svgPane, this.sidebar);
    this.wirePanZoom();
  }

  /** Opens the session (or resumes `sessionId`) and starts rendering. */
  async load(mapId: string, mode = "atomic", sessionId?: string): Promise<void> {
    this.unsubscribe?.();
    this.unsubscribe = this.store.subscribe((state) => this.render(state));
    const opened = await this.store.open(mapId, mode, sessionId);
    if (opened) {
      this.maps = await this.store.api.getMap(mapId);
    }
    this.render(this.store.getState());
  }

  private wirePanZoom(): void {
    this.svgPane.addEventListener("wheel", (event) => {
      event.preventDefault();
      const factor = event.deltaY < 0 ? 1.1 : 1 / 1.1;
      this.zoom = Math.min(10, Math.max(0.1, this.zoom * factor));
      this.applyTransform();
    });
    let dragging: { x: number; y: number } | null = null;
    this.svgPane.addEventListener("pointerdown", (event) => {
      dragging = { x: event.clientX - this.panX, y: event.clientY - this.panY };
    });
    this.svgPane.addEventListener("pointermove", (event) => {
      if (!dragging) return;
      this.panX = event.clientX - dragging.x;
      this.panY = event.clientY - dragging.y;
      this.applyTransform();
    });
    this.svgPane.addEventListener("pointerup", () => {
      dragging = null;
    });
  }

  private applyTransform(): void {
    const svg = this.svgPane.querySelector("svg");
    if (svg) {
      svg.style.transform = `translate(${this.panX}px, ${this.panY}px) scale(${this.zoom})`;
      svg.style.transformOrigin = "0 0";
    }
  }

  private render(state: UiSessionState): void {
    this.renderSvg(state);
    this.sidebar.replaceChildren();
    if (state.notFound) {
      this.sidebar.append(this.notFoundView());
      return;
    }
    if (state.error && !state.route) {
      this.sidebar.append(this.retryBanner(state));
      return;
    }
    if (!state.route) return;
    if (state.error) this.sidebar.append(this.inlineError(state));
    if (state.route.status === "Complete") {
      this.sidebar.append(this.completionBanner(state));
    }
    for (const pending of state.route.pending) {
      this.sidebar.append(this.questionCard(pending, state));
    }
    if (state.route.blocked.length) {
      this.sidebar.append(this.blockedPanel(state));
    }
    const diff = this.store.diff();
    if (diff) this.sidebar.append(this.diffPanel(diff));
    if (state.selectedNode) {
      this.sidebar.append(this.citationPanel(state.selectedNode));
    }
  }

  private renderSvg(state: UiSessionState): void {
    if (!state.svg) return;
    this.svgPane.innerHTML = state.svg;
    this.applyTransform();
    const svg = this.svgPane.querySelector("svg");
    if (!svg) return;
    svg.addEventListener("click", (event) => {
      const group = (event.target as Element).closest("g[id]");
      if (group) this.store.selectNode(group.id);
    });
    const diff = this.store.diff();
    if (diff) {
      for (const id of diff.added) {
        svg.querySelector(`[id="${id}"]`)?.classList.add("diff-added");
      }
      for (const id of diff.removed) {
        svg.querySelector(`[id="${id}"]`)?.classList.add("diff-removed");
      }
    }
  }

  private notFoundView(): HTMLElement {
    const panel = document.createElement("div");
    panel.className = "not-found";
    panel.textContent = "Map not found.";
    return panel;
  }

  private retryBanner(state: UiSessionState): HTMLElement {
    const banner = document.createElement("div");
    banner.className = "retry-banner";
    const message = document.createElement("span");
    message.textContent = `Service unavailable: ${state.error?.message ?? ""}`;
    const retry = document.createElement("button");
    retry.textContent = "Retry";
    retry.addEventListener("click", () => {
      if (state.mapId) void this.load(state.mapId, state.mode);
    });
    banner.append(message, retry);
    return banner;
  }

  private inlineError(state: UiSessionState): HTMLElement {
    const note = document.createElement("div");
    note.className = "inline-error";
    note.textContent = state.error?.message ?? "";
    return note;
  }

  private questionCard(
    pending: PendingDecision,
    state: UiSessionState,
  ): HTMLElement {
    const card = document.createElement("div");
    card.className = "question-card";
    card.dataset.decision = pending.node;
    const prompt = document.createElement("p");
    prompt.className = "prompt";
    prompt.textContent = pending.prompt ?? pending.node;
    card.append(prompt);
    for (const option of pending.options) {
      const button = document.createElement("button");
      button.textContent = option;
      button.disabled = state.inFlight;
      button.addEventListener("click", () => {
        void this.store.answer(pending.node, option);
      });
      card.append(button);
    }
    return card;
  }

  private completionBanner(state: UiSessionState): HTMLElement {
    const banner = document.createElement("div");
    banner.className = "completion-banner";
    for (const exit of state.route?.reachedExits ?? []) {
      const line = document.createElement("p");
      line.className = "exit";
      const resolved = this.maps ? nodeForPathId(exit.node, this.maps) : null;
      const label = resolved?.node.label ?? exit.node;
      line.textContent = `${label} (${exit.outcome})`;
      banner.append(line);
      if (resolved) {
        for (const citation of citationsFor(resolved.node, resolved.doc)) {
          const cite = document.createElement("p");
          cite.className = "citation";
          cite.textContent = citation;
          banner.append(cite);
        }
      }
    }
    return banner;
  }

  private blockedPanel(state: UiSessionState): HTMLElement {
    const panel = document.createElement("div");
    panel.className = "blocked-panel";
    for (const blocked of state.route?.blocked ?? []) {
      const line = document.createElement("p");
      const waiting = blocked.waitingOn.join(", ");
      line.textContent = `${blocked.node} is waiting on: ${waiting}`;
      panel.append(line);
    }
    return panel;
  }

  private diffPanel(diff: RouteDiff): HTMLElement {
    const panel = document.createElement("div");
    panel.className = "diff-panel";
    const describe = (title: string, ids: string[], cls: string) => {
      for (const id of ids) {
        const line = document.createElement("p");
        line.className = cls;
        line.textContent = `${title} ${id}`;
        panel.append(line);
      }
    };
    describe("+", diff.added, "diff-added");
    describe("-", diff.removed, "diff-removed");
    describe("exit +", diff.exitsAdded, "diff-added");
    describe("exit -", diff.exitsRemoved, "diff-removed");
    if (!panel.childElementCount) {
      const empty = document.createElement("p");
      empty.className = "diff-empty";
      empty.textContent = "No difference.";
      panel.append(empty);
    }
    const unpin = document.createElement("button");
    unpin.className = "unpin";
    unpin.textContent = "Unpin";
    unpin.addEventListener("click", () => this.store.unpin());
    panel.append(unpin);
    return panel;
  }

  private citationPanel(pathId: string): HTMLElement {
    const panel = document.createElement("div");
    panel.className = "citation-panel";
    const resolved = this.maps ? nodeForPathId(pathId, this.maps) : null;
    if (!resolved) {
      panel.textContent = pathId;
      return panel;
    }
    const title = document.createElement("h3");
    title.textContent = resolved.node.label ?? resolved.node.id;
    panel.append(title);
    for (const citation of citationsFor(resolved.node, resolved.doc)) {
      const line = document.createElement("p");
      line.className = "citation";
      line.textContent = citation;
      panel.append(line);
    }
    for (const explanation of resolved.node.explanations) {
      const line = document.createElement("p");
      line.className = `note note-${explanation.kind.toLowerCase()}`;
      line.textContent = explanation.text;
      panel.append(line);
    }
    return panel;
  }
}
