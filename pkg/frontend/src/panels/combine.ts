/** Hand-combination panel: pick a node, pick a tree, substitute or adjoin.
 *
 * Legality is enforced before calling the service: substitution is offered
 * only at substitution nodes (glyph "↓"), adjunction only for auxiliary
 * source trees at non-substitution nodes. Unification failures come back
 * from the service and are shown inline at the selected node.
 */

import { ApiClient, ApiError } from "../api";
import { GrammarSummary, TreeViewNode } from "../types";
import { escapeHtml, nodeAt, renderTree } from "../treeview";

const SUBST_GLYPH = "↓";

export class CombinePanel {
  tree: TreeViewNode | null = null;
  selected: string | null = null;
  diagnostic: { address: string; html: string } | null = null;
  undoDepth = 0;

  constructor(
    private api: ApiClient,
    public target: string,
    private grammar: GrammarSummary
  ) {}

  async open(treeName: string, lexemes?: string[]): Promise<string> {
    const r = await this.api.scratchNew(this.target, treeName, lexemes);
    this.tree = r.tree;
    this.undoDepth = 0;
    return this.render();
  }

  adopt(tree: TreeViewNode): string {
    this.tree = tree;
    return this.render();
  }

  select(address: string): string {
    this.selected = address;
    this.diagnostic = null;
    return this.render();
  }

  /** Ops the UI may offer for the selected node with a given source tree. */
  allowedOps(address: string, sourceTree: string): ("substitution" | "adjunction")[] {
    if (this.tree === null) return [];
    const node = nodeAt(this.tree, address);
    if (node === null) return [];
    const info = this.grammar.trees[sourceTree];
    if (info === undefined) return [];
    const ops: ("substitution" | "adjunction")[] = [];
    if (node.glyph === SUBST_GLYPH && info.type === "initial") ops.push("substitution");
    if (node.glyph !== SUBST_GLYPH && info.type === "auxiliary") ops.push("adjunction");
    return ops;
  }

  async combine(
    sourceTree: string,
    op: "substitution" | "adjunction",
    lexemes?: string[]
  ): Promise<string> {
    if (this.tree === null || this.selected === null) {
      throw new Error("select a node first");
    }
    if (!this.allowedOps(this.selected, sourceTree).includes(op)) {
      throw new Error(`${op} is not legal at ${this.selected} with ${sourceTree}`);
    }
    this.diagnostic = null;
    try {
      const r = await this.api.combine({
        target: this.target,
        address: this.selected,
        source: sourceTree,
        op,
        lexemes,
      });
      if (r.ok) {
        this.tree = r.tree;
        this.undoDepth += 1;
      } else {
        // unification clash: tree unchanged, diagnostic rendered at the node
        this.diagnostic = {
          address: this.selected,
          html:
            `<span class="clash">` +
            escapeHtml(`${r.failure_path}: ${r.left} ≠ ${r.right}`) +
            `</span>`,
        };
      }
    } catch (e) {
      this.diagnostic = {
        address: this.selected,
        html: `<span class="error">${escapeHtml(
          e instanceof ApiError ? `${e.status}: ${e.detail}` : String(e)
        )}</span>`,
      };
    }
    return this.render();
  }

  async undo(): Promise<string> {
    const r = await this.api.undo(this.target);
    this.tree = r.tree;
    this.undoDepth = Math.max(0, this.undoDepth - 1);
    this.diagnostic = null;
    return this.render();
  }

  render(): string {
    if (this.tree === null) {
      return `<div class="combine-panel"><div class="empty">no scratch tree</div></div>`;
    }
    const header =
      `<div class="scratch-name">${escapeHtml(this.target)}</div>` +
      `<div class="undo-depth">undo depth: ${this.undoDepth}</div>`;
    return (
      `<div class="combine-panel">` +
      header +
      renderTree(this.tree, {
        selected: this.selected ?? undefined,
        inlineNote: this.diagnostic ?? undefined,
      }) +
      `</div>`
    );
  }
}
