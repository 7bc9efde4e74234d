/** Nested rendering of service tree JSON.
 *
 * The rendered structure is isomorphic to the payload: one element per node,
 * label/glyph/word and the feature-term strings reproduced verbatim. The
 * client never recomputes features or spans; addresses are navigation
 * bookkeeping only (the same 0.1.0 surface form the service uses).
 */

import { TreeViewNode } from "./types";

export function escapeHtml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function addressOf(path: number[]): string {
  return ["0", ...path.map(String)].join(".");
}

/** Node at a surface address like "0.1.0", or null. */
export function nodeAt(root: TreeViewNode, address: string): TreeViewNode | null {
  const segments = address.split(".");
  if (segments[0] !== "0") return null;
  let node = root;
  for (const seg of segments.slice(1)) {
    const i = Number(seg);
    if (!Number.isInteger(i) || i < 0 || i >= node.children.length) return null;
    node = node.children[i];
  }
  return node;
}

export interface TreeRenderOptions {
  selected?: string; // address of the selected node
  inlineNote?: { address: string; html: string }; // e.g. a clash diagnostic
  showFeatures?: boolean;
}

export function renderTree(
  root: TreeViewNode,
  options: TreeRenderOptions = {}
): string {
  const showFeatures = options.showFeatures ?? true;

  const renderNode = (node: TreeViewNode, path: number[]): string => {
    const address = addressOf(path);
    const classes = ["node"];
    if (options.selected === address) classes.push("selected");
    const head =
      `<span class="label">${escapeHtml(node.label)}</span>` +
      (node.glyph ? `<span class="glyph">${escapeHtml(node.glyph)}</span>` : "") +
      (node.word !== null && node.children.length === 0
        ? ` <span class="word">${escapeHtml(node.word)}</span>`
        : "");
    let features = "";
    if (showFeatures && (node.top || node.bottom)) {
      const rows = [];
      if (node.top) rows.push(`<div class="fs top">t: ${escapeHtml(node.top)}</div>`);
      if (node.bottom)
        rows.push(`<div class="fs bottom">b: ${escapeHtml(node.bottom)}</div>`);
      features = `<details class="features"><summary>features</summary>${rows.join("")}</details>`;
    }
    const note =
      options.inlineNote && options.inlineNote.address === address
        ? `<div class="diagnostic">${options.inlineNote.html}</div>`
        : "";
    const children = node.children.length
      ? `<ul>${node.children
          .map((c, i) => `<li>${renderNode(c, [...path, i])}</li>`)
          .join("")}</ul>`
      : "";
    return (
      `<div class="${classes.join(" ")}" data-address="${address}">` +
      head +
      note +
      features +
      children +
      `</div>`
    );
  };

  return `<div class="treeview">${renderNode(root, [])}</div>`;
}

/** All (address, node) pairs in preorder; used by panels for pickers. */
export function walk(root: TreeViewNode): { address: string; node: TreeViewNode }[] {
  const out: { address: string; node: TreeViewNode }[] = [];
  const rec = (node: TreeViewNode, path: number[]) => {
    out.push({ address: addressOf(path), node });
    node.children.forEach((c, i) => rec(c, [...path, i]));
  };
  rec(root, []);
  return out;
}
