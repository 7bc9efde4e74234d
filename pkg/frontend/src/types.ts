/** JSON shapes of the workbench service. The client renders these verbatim. */

export interface TreeViewNode {
  label: string;
  glyph: string; // "↓" substitution, "*" foot, "◊" unanchored anchor, "" otherwise
  word: string | null;
  top: string; // feature term text, "" when empty
  bottom: string;
  children: TreeViewNode[];
}

export interface DerivationView {
  expr: string;
  bracketed: string;
  constituents: number;
  tree: TreeViewNode;
}

export interface ParseResponse {
  tokens: string[];
  parsed: boolean;
  pass: string; // "filtered" | "retry" | "none"
  seconds: number;
  timing: Record<string, number>;
  truncated: boolean;
  diagnostics: {
    tokens?: string[];
    morph_counts?: number[];
    blended_counts?: number[];
    candidate_counts?: number[];
    tag_sequences?: { tags: string[]; score: number }[];
    tagger_retry?: boolean;
    [key: string]: unknown;
  };
  derivations: DerivationView[];
}

export interface TagResponse {
  tokens: string[];
  sequences: { tags: string[]; score: number }[];
}

export interface MorphEntryJson {
  inflected: string;
  root: string;
  pos: string;
  inflections: string[];
}

export interface SyntEntryJson {
  index_word: string;
  pos: string;
  trees: string[];
  families: string[];
  equations: string[];
}

export interface GrammarSummary {
  start: string;
  categories: string[];
  trees: Record<string, { type: string; anchors: number }>;
  families: Record<string, string[]>;
}

export interface CombineResponse {
  ok: boolean;
  message: string;
  failure_path: string | null;
  left: string | null;
  right: string | null;
  tree: TreeViewNode;
}

export interface ScratchResponse {
  name: string;
  tree: TreeViewNode;
}

export interface ExportResponse {
  name: string;
  format: string;
  document: string;
}

export interface StatsResponse {
  counts: { pos: string; tree: string; count: number }[];
}

export interface PipelineConfigJson {
  start_category: string | null;
  tagger_mode: string;
  n_best: number;
  top_k: number;
  derivation_cap: number;
  [key: string]: unknown;
}
