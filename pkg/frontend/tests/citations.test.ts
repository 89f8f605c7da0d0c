import { describe, expect, it } from "vitest";

import { citationsFor, formatRef, nodeForPathId } from "../src/citations";
import type { MapSet } from "../src/types";
import { FAKE_MAP } from "./fake";

describe("formatRef", () => {
  it("formats statutes as act plus joined section path", () => {
    expect(
      formatRef({
        kind: "Statute",
        act: "Landlord and Tenant Act 1954",
        sectionPath: ["24C", "(3)", "(a)"],
      }),
    ).toBe("Landlord and Tenant Act 1954, s 24C(3)(a)");
  });

  it("formats a statute without a section path as the act alone", () => {
    expect(formatRef({ kind: "Statute", act: "An Act" })).toBe("An Act");
  });

  it("formats case law with its quote", () => {
    expect(
      formatRef({
        kind: "CaseLaw",
        citation: "Cardshops v Davies [1971] 1 WLR 591",
        quote: "disputes must be resolved",
      }),
    ).toBe("Cardshops v Davies [1971] 1 WLR 591: “disputes must be resolved”");
  });

  it("passes through practice rules and free text", () => {
    expect(formatRef({ kind: "PracticeRule", rule: "MLR 2017" })).toBe("MLR 2017");
    expect(formatRef({ kind: "Text", text: "see commentary" })).toBe("see commentary");
  });
});

describe("citationsFor", () => {
  it("uses the node's own refs when present", () => {
    const node = FAKE_MAP.docs.s24c!.nodes.find((n) => n.id === "out_5")!;
    expect(citationsFor(node, FAKE_MAP.docs.s24c)).toEqual([
      "Landlord and Tenant Act 1954, s 24C(5)",
    ]);
  });

  it("falls back to the document refs for unreferenced nodes", () => {
    const node = FAKE_MAP.docs.s24c!.nodes.find((n) => n.id === "out_2")!;
    expect(citationsFor(node, FAKE_MAP.docs.s24c)).toEqual([
      "Landlord and Tenant Act 1954, s 24C",
    ]);
  });
});

describe("nodeForPathId", () => {
  const nested: MapSet = {
    root: "outer",
    docs: {
      outer: {
        id: "outer",
        title: "Outer",
        nodes: [
          {
            id: "step",
            kind: "NestedActivity",
            nestedRef: "inner",
            explanations: [],
            refs: [],
          },
        ],
      },
      inner: {
        id: "inner",
        title: "Inner",
        nodes: [{ id: "leaf", kind: "Activity", label: "Leaf", explanations: [], refs: [] }],
      },
    },
  };

  it("resolves a root-level path id", () => {
    const hit = nodeForPathId("root/opposed", FAKE_MAP);
    expect(hit?.node.label).toBe("Landlord opposition");
  });

  it("resolves dotted ids through nested sub-maps", () => {
    const hit = nodeForPathId("root/step.leaf", nested);
    expect(hit?.node.label).toBe("Leaf");
    expect(hit?.doc.id).toBe("inner");
  });

  it("returns null for unknown ids", () => {
    expect(nodeForPathId("root/ghost", FAKE_MAP)).toBeNull();
    expect(nodeForPathId("root/step.ghost", nested)).toBeNull();
  });
});
