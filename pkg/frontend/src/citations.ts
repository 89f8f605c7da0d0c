import type { MapDoc, MapNode, SourceRef } from "./types";

/**
 * Formats a source reference as a legal citation string. Raw data stays on
 * the wire; presentation rules live here.
 */
export function formatRef(ref: SourceRef): string {
  switch (ref.kind) {
    case "Statute": {
      const path = ref.sectionPath ?? [];
      const section = path.length
        ? `, s ${path[0]}${path.slice(1).join("")}`
        : "";
      return `${ref.act ?? ""}${section}`;
    }
    case "CaseLaw": {
      const quote = ref.quote ? `: “${ref.quote}”` : "";
      return `${ref.citation ?? ""}${quote}`;
    }
    case "PracticeRule":
      return ref.rule ?? "";
    case "Text":
      return ref.text ?? "";
  }
}

/**
 * Citations for a node, falling back to the containing document's own
 * references when the node carries none (e.g. plain exits).
 */
export function citationsFor(node: MapNode, doc?: MapDoc): string[] {
  const refs = node.refs.length ? node.refs : (doc?.refs ?? []);
  return refs.map(formatRef).filter((c) => c.length > 0);
}

/** Resolves a route path-id like "root/s_instruct.i_verify" to its node. */
export function nodeForPathId(
  pathId: string,
  maps: { root: string; docs: Record<string, MapDoc> },
): { node: MapNode; doc: MapDoc } | null {
  const local = pathId.replace(/^root\//, "");
  const segments = local.split(".");
  let doc = maps.docs[maps.root];
  for (let i = 0; i < segments.length; i++) {
    if (!doc) return null;
    const node = doc.nodes.find((n) => n.id === segments[i]);
    if (!node) return null;
    if (i === segments.length - 1) return { node, doc };
    if (!node.nestedRef || !maps.docs[node.nestedRef]) return null;
    doc = maps.docs[node.nestedRef];
  }
  return null;
}
