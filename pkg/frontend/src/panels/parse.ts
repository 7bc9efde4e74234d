/** Parse-and-inspect panel: submit a sentence, browse derivations.
 *
 * Everything shown (tokens, pass, derivation expressions, bracketings,
 * constituent counts, feature terms, candidate counts) is the service
 * payload verbatim; the panel only arranges it.
 */

import { ApiClient, ApiError } from "../api";
import { ParseResponse } from "../types";
import { escapeHtml, renderTree } from "../treeview";

export interface ParseParameters {
  tagger_mode?: string;
  n_best?: number;
  top_k?: number;
  start_category?: string;
}

export class ParsePanel {
  lastResponse: ParseResponse | null = null;
  lastError: string | null = null;

  constructor(private api: ApiClient, public parameters: ParseParameters = {}) {}

  async submit(sentence: string): Promise<string> {
    this.lastError = null;
    try {
      this.lastResponse = await this.api.parse({
        sentence,
        ...this.parameters,
      });
    } catch (e) {
      this.lastResponse = null;
      this.lastError = e instanceof ApiError ? `${e.status}: ${e.detail}` : String(e);
      return this.render();
    }
    return this.render();
  }

  /** Change one parameter and re-submit the same sentence. */
  async setParameter(
    sentence: string,
    name: keyof ParseParameters,
    value: string | number
  ): Promise<string> {
    (this.parameters as Record<string, unknown>)[name] = value;
    return this.submit(sentence);
  }

  render(): string {
    if (this.lastError !== null) {
      return `<div class="parse-panel"><div class="error">${escapeHtml(this.lastError)}</div></div>`;
    }
    const r = this.lastResponse;
    if (r === null) {
      return `<div class="parse-panel"><div class="empty">no sentence submitted</div></div>`;
    }
    const parts: string[] = [];
    parts.push(
      `<div class="tokens">${r.tokens.map((t) => escapeHtml(t)).join(" ")}</div>`
    );
    if (!r.parsed) {
      parts.push(
        `<div class="banner no-parse">no parse (after ${escapeHtml(r.pass)})</div>`
      );
      const counts = r.diagnostics.candidate_counts;
      if (counts) {
        const rows = r.tokens
          .map(
            (t, i) =>
              `<tr><td>${escapeHtml(t)}</td><td>${counts[i] ?? 0}</td></tr>`
          )
          .join("");
        parts.push(
          `<table class="candidates"><tr><th>word</th><th>candidates</th></tr>${rows}</table>`
        );
      }
    } else {
      parts.push(
        `<div class="banner parsed">${r.derivations.length} derivation(s), pass=${escapeHtml(
          r.pass
        )}</div>`
      );
    }
    r.derivations.forEach((d, i) => {
      parts.push(
        `<section class="derivation" data-index="${i}">` +
          `<div class="expr">${escapeHtml(d.expr)}</div>` +
          `<div class="bracketed">${escapeHtml(d.bracketed)}</div>` +
          `<div class="constituents">constituents: ${d.constituents}</div>` +
          renderTree(d.tree) +
          `</section>`
      );
    });
    return `<div class="parse-panel">${parts.join("")}</div>`;
  }
}
