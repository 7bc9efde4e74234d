import { Transport } from "../src/api";
import { ParseResponse, TreeViewNode } from "../src/types";

export interface RecordedCall {
  method: string;
  path: string;
  body?: unknown;
}

/** Transport that records every call and replays canned payloads. */
export function recorder(responses: Record<string, unknown | ((body: unknown) => unknown)>) {
  const calls: RecordedCall[] = [];
  const transport: Transport = async (method, path, body) => {
    calls.push(body === undefined ? { method, path } : { method, path, body });
    const key = `${method} ${path}`;
    if (!(key in responses)) {
      throw new Error(`unexpected call ${key}`);
    }
    const canned = responses[key];
    return typeof canned === "function" ? (canned as (b: unknown) => unknown)(body) : canned;
  };
  return { calls, transport };
}

export function leaf(label: string, word: string): TreeViewNode {
  return { label, glyph: "", word, top: "", bottom: "", children: [] };
}

export function node(
  label: string,
  children: TreeViewNode[],
  extra: Partial<TreeViewNode> = {}
): TreeViewNode {
  return { label, glyph: "", word: null, top: "", bottom: "", children, ...extra };
}

export const JOHN_LOVES_MARY_TREE: TreeViewNode = node("S", [
  node("NP", [node("PropN", [leaf("John", "John")])], { top: "{agr: {num: sg}, case: nom}" }),
  node("VP", [
    node("V", [leaf("loves", "loves")], { bottom: "{agr: {num: sg}, mode: ind, tense: pres}" }),
    node("NP", [node("PropN", [leaf("Mary", "Mary")])], { top: "{case: acc}" }),
  ]),
]);

export const PARSE_OK: ParseResponse = {
  tokens: ["John", "loves", "Mary"],
  parsed: true,
  pass: "filtered",
  seconds: 0.0042,
  timing: { filtered: 0.0042, total: 0.0042 },
  truncated: false,
  diagnostics: {
    candidate_counts: [1, 2, 1],
    tag_sequences: [{ tags: ["PropN", "V", "PropN"], score: -11.25 }],
  },
  derivations: [
    {
      expr: "(alpha_nx0Vnx1[loves] (subst@0.0 (alpha_NXPn[John])) (subst@0.1.1 (alpha_NXPn[Mary])))",
      bracketed: "(S (NP (PropN John)) (VP (V loves) (NP (PropN Mary))))",
      constituents: 7,
      tree: JOHN_LOVES_MARY_TREE,
    },
  ],
};

export const PARSE_NONE: ParseResponse = {
  tokens: ["loves", "John", "Mary"],
  parsed: false,
  pass: "none",
  seconds: 0.002,
  timing: { filtered: 0.001, retry: 0.001, total: 0.002 },
  truncated: false,
  diagnostics: { candidate_counts: [2, 1, 1], tagger_retry: true },
  derivations: [],
};
