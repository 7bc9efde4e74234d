/** Database browse/edit panel: field-scoped search over one database,
 * row edit (PUT), row delete (DELETE), and a new-entry form (POST) with the
 * service's validation errors rendered inline.
 */

import { ApiClient, ApiError } from "../api";
import { MorphEntryJson, SyntEntryJson } from "../types";
import { escapeHtml } from "../treeview";

export type DbName = "morph" | "synt";

type AnyEntry = MorphEntryJson | SyntEntryJson;

export class DbPanel {
  rows: AnyEntry[] = [];
  error: string | null = null;

  constructor(private api: ApiClient, public database: DbName) {}

  private async guard<T>(action: () => Promise<T>): Promise<T | null> {
    this.error = null;
    try {
      return await action();
    } catch (e) {
      this.error = e instanceof ApiError ? `${e.status}: ${e.detail}` : String(e);
      return null;
    }
  }

  async search(field: string, pattern: string): Promise<string> {
    const rows = await this.guard<AnyEntry[]>(() =>
      this.database === "morph"
        ? this.api.morphSearch(field, pattern)
        : this.api.syntSearch(field, pattern)
    );
    if (rows !== null) this.rows = rows;
    return this.render();
  }

  async listAll(): Promise<string> {
    const rows = await this.guard<AnyEntry[]>(() =>
      this.database === "morph" ? this.api.morphEntries() : this.api.syntEntries()
    );
    if (rows !== null) this.rows = rows;
    return this.render();
  }

  async insert(entry: AnyEntry): Promise<string> {
    const ok = await this.guard(() =>
      this.database === "morph"
        ? this.api.morphInsert(entry as MorphEntryJson)
        : this.api.syntInsert(entry as SyntEntryJson)
    );
    if (ok !== null) this.rows = [...this.rows, entry];
    return this.render();
  }

  async editRow(index: number, replacement: AnyEntry): Promise<string> {
    const old = this.rows[index];
    if (old === undefined) throw new Error(`no row ${index}`);
    const ok = await this.guard(() =>
      this.database === "morph"
        ? this.api.morphUpdate(old as MorphEntryJson, replacement as MorphEntryJson)
        : this.api.syntUpdate(old as SyntEntryJson, replacement as SyntEntryJson)
    );
    if (ok !== null) {
      this.rows = this.rows.map((r, i) => (i === index ? replacement : r));
    }
    return this.render();
  }

  async deleteRow(index: number): Promise<string> {
    const old = this.rows[index];
    if (old === undefined) throw new Error(`no row ${index}`);
    const ok = await this.guard(() =>
      this.database === "morph"
        ? this.api.morphDelete(old as MorphEntryJson)
        : this.api.syntDelete(old as SyntEntryJson)
    );
    if (ok !== null) {
      this.rows = this.rows.filter((_, i) => i !== index);
    }
    return this.render();
  }

  private cells(entry: AnyEntry): string[] {
    if (this.database === "morph") {
      const e = entry as MorphEntryJson;
      return [e.inflected, e.root, e.pos, e.inflections.join(",")];
    }
    const e = entry as SyntEntryJson;
    return [
      e.index_word,
      e.pos,
      [...e.families, ...e.trees].join(" "),
      e.equations.join(", "),
    ];
  }

  headers(): string[] {
    return this.database === "morph"
      ? ["inflected", "root", "pos", "inflections"]
      : ["word", "pos", "trees/families", "equations"];
  }

  render(): string {
    const parts: string[] = [];
    if (this.error !== null) {
      parts.push(`<div class="error inline">${escapeHtml(this.error)}</div>`);
    }
    const head = this.headers()
      .map((h) => `<th>${escapeHtml(h)}</th>`)
      .join("");
    const body = this.rows
      .map(
        (row, i) =>
          `<tr data-row="${i}">` +
          this.cells(row)
            .map((c) => `<td>${escapeHtml(c)}</td>`)
            .join("") +
          `</tr>`
      )
      .join("");
    parts.push(
      `<table class="grid"><thead><tr>${head}</tr></thead><tbody>${body}</tbody></table>`
    );
    return `<div class="db-panel ${this.database}">${parts.join("")}</div>`;
  }
}
