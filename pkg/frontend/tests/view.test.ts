import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api";
import { SessionStore } from "../src/session";
import { WalkthroughView } from "../src/view";
import { FakeService } from "./fake";

async function mounted(mapId = "s24c") {
  const service = new FakeService();
  const store = new SessionStore(new ApiClient("http://fake", service.fetch));
  const root = document.createElement("div");
  document.body.append(root);
  const view = new WalkthroughView(root, store);
  await view.load(mapId);
  return { service, store, root, view };
}

function clickOption(root: HTMLElement, decision: string, label: string) {
  const card = root.querySelector<HTMLElement>(
    `.question-card[data-decision="${decision}"]`,
  );
  expect(card, `card for ${decision}`).not.toBeNull();
  const button = [...card!.querySelectorAll("button")].find(
    (b) => b.textContent === label,
  );
  expect(button, `option ${label}`).toBeDefined();
  button!.click();
}

async function settle(store: SessionStore) {
  while (store.getState().inFlight) {
    await new Promise((resolve) => setTimeout(resolve, 0));
  }
  await new Promise((resolve) => setTimeout(resolve, 0));
}

describe("WalkthroughView", () => {
  it("shows the map SVG and one question card with option buttons", async () => {
    const { root } = await mounted();
    expect(root.querySelector("svg")).not.toBeNull();
    const cards = root.querySelectorAll(".question-card");
    expect(cards).toHaveLength(1);
    expect(cards[0]!.querySelector(".prompt")!.textContent).toContain(
      "landlord opposed",
    );
    const labels = [...cards[0]!.querySelectorAll("button")].map((b) => b.textContent);
    expect(labels).toEqual(["no", "yes"]);
  });

  it("shows the not-found view for an unknown map", async () => {
    const { root } = await mounted("nope");
    expect(root.querySelector(".not-found")).not.toBeNull();
    expect(root.querySelector(".question-card")).toBeNull();
  });

  it("advances card by card to the completion banner with citations", async () => {
    const { root, store } = await mounted();
    clickOption(root, "root/opposed", "no");
    await settle(store);
    expect(root.querySelector(".question-card")!.getAttribute("data-decision")).toBe(
      "root/differs_3b",
    );
    clickOption(root, "root/differs_3b", "no");
    await settle(store);
    clickOption(root, "root/differs_3a", "yes");
    await settle(store);
    const banner = root.querySelector(".completion-banner")!;
    expect(banner.querySelector(".exit")!.textContent).toBe(
      "Interim rent is the relevant rent (s24C(5))",
    );
    expect(banner.querySelector(".citation")!.textContent).toBe(
      "Landlord and Tenant Act 1954, s 24C(5)",
    );
    const highlighted = root.querySelector('svg [id="root/out_5"]')!;
    expect(highlighted.getAttribute("class")).toContain("highlight");
  });

  it("surfaces a 422 inline and keeps the card", async () => {
    const { root, store } = await mounted();
    await store.answer("root/opposed", "perhaps");
    await settle(store);
    expect(root.querySelector(".inline-error")!.textContent).toContain("perhaps");
    expect(root.querySelector(".question-card")).not.toBeNull();
  });

  it("renders the what-if diff with the exit change colour-coded", async () => {
    const { root, store } = await mounted();
    await store.answer("root/opposed", "no");
    await store.answer("root/differs_3b", "no");
    await store.answer("root/differs_3a", "yes");
    await store.whatIf("root/differs_3a", "no");
    await settle(store);
    const panel = root.querySelector(".diff-panel")!;
    const added = [...panel.querySelectorAll(".diff-added")].map((n) => n.textContent);
    const removed = [...panel.querySelectorAll(".diff-removed")].map((n) => n.textContent);
    expect(added).toContain("exit + root/out_2");
    expect(removed).toContain("exit - root/out_5");
    expect(
      root.querySelector('svg [id="root/out_2"]')!.classList.contains("diff-added"),
    ).toBe(true);
    (panel.querySelector("button.unpin") as HTMLButtonElement).click();
    await settle(store);
    expect(root.querySelector(".diff-panel")).toBeNull();
  });

  it("opens the citation panel when an SVG node is clicked", async () => {
    const { root, store } = await mounted();
    const group = root.querySelector<SVGGElement>('svg [id="root/opposed"]')!;
    group.dispatchEvent(new MouseEvent("click", { bubbles: true }));
    await settle(store);
    const panel = root.querySelector(".citation-panel")!;
    expect(panel.querySelector("h3")!.textContent).toBe("Landlord opposition");
    expect(panel.querySelector(".citation")!.textContent).toBe(
      "Landlord and Tenant Act 1954, s 24C(1)",
    );
  });
});
