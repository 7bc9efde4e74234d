/** Browser wiring: three panels over one service.
 *
 * This file touches the DOM and is not covered by the unit tests (panels
 * render HTML strings and are tested against a mocked transport).
 */

import { ApiClient, httpTransport } from "./api";
import { CombinePanel } from "./panels/combine";
import { DbPanel, DbName } from "./panels/db";
import { ParsePanel } from "./panels/parse";
import { loadSession, updateParameters } from "./session";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing element #${id}`);
  return node as T;
}

export async function boot(): Promise<void> {
  const base = (el<HTMLInputElement>("service-url").value || "http://127.0.0.1:8077").replace(
    /\/$/,
    ""
  );
  const api = new ApiClient(httpTransport(base));
  let session = await loadSession(api);
  const grammar = await api.grammarTrees();

  // parse panel
  const parsePanel = new ParsePanel(api, {
    tagger_mode: session.parameters.tagger_mode,
    n_best: session.parameters.n_best,
    top_k: session.parameters.top_k,
  });
  const parseOut = el<HTMLDivElement>("parse-output");
  const sentenceInput = el<HTMLInputElement>("parse-sentence");
  el<HTMLButtonElement>("parse-go").addEventListener("click", async () => {
    parseOut.innerHTML = await parsePanel.submit(sentenceInput.value);
  });
  el<HTMLSelectElement>("parse-tagger").addEventListener("change", async (ev) => {
    const value = (ev.target as HTMLSelectElement).value;
    session = await updateParameters(api, session, { tagger_mode: value });
    parseOut.innerHTML = await parsePanel.setParameter(
      sentenceInput.value, "tagger_mode", value
    );
  });

  // combine panel
  const combinePanel = new CombinePanel(api, "ui-scratch", grammar);
  const combineOut = el<HTMLDivElement>("combine-output");
  const treePicker = el<HTMLSelectElement>("combine-tree");
  for (const name of Object.keys(grammar.trees)) {
    const option = document.createElement("option");
    option.value = name;
    option.textContent = `${name} (${grammar.trees[name].type})`;
    treePicker.appendChild(option);
  }
  el<HTMLButtonElement>("combine-open").addEventListener("click", async () => {
    const lexemes = el<HTMLInputElement>("combine-lexemes").value.trim();
    combineOut.innerHTML = await combinePanel.open(
      treePicker.value,
      lexemes ? lexemes.split(/\s+/) : undefined
    );
    hookSelection();
  });
  el<HTMLButtonElement>("combine-apply").addEventListener("click", async () => {
    const source = el<HTMLSelectElement>("combine-source").value;
    const op = el<HTMLSelectElement>("combine-op").value as
      | "substitution"
      | "adjunction";
    const lexemes = el<HTMLInputElement>("combine-source-lexemes").value.trim();
    combineOut.innerHTML = await combinePanel.combine(
      source, op, lexemes ? lexemes.split(/\s+/) : undefined
    );
    hookSelection();
  });
  el<HTMLButtonElement>("combine-undo").addEventListener("click", async () => {
    combineOut.innerHTML = await combinePanel.undo();
    hookSelection();
  });
  const sourcePicker = el<HTMLSelectElement>("combine-source");
  for (const name of Object.keys(grammar.trees)) {
    const option = document.createElement("option");
    option.value = name;
    option.textContent = name;
    sourcePicker.appendChild(option);
  }

  function hookSelection(): void {
    combineOut.querySelectorAll<HTMLElement>(".node").forEach((node) => {
      node.addEventListener("click", (ev) => {
        ev.stopPropagation();
        combineOut.innerHTML = combinePanel.select(node.dataset.address ?? "0");
        hookSelection();
      });
    });
  }

  // db panel
  const dbPanel = new DbPanel(api, "morph");
  const dbOut = el<HTMLDivElement>("db-output");
  el<HTMLSelectElement>("db-name").addEventListener("change", (ev) => {
    dbPanel.database = (ev.target as HTMLSelectElement).value as DbName;
  });
  el<HTMLButtonElement>("db-search").addEventListener("click", async () => {
    dbOut.innerHTML = await dbPanel.search(
      el<HTMLInputElement>("db-field").value,
      el<HTMLInputElement>("db-pattern").value
    );
  });
  el<HTMLButtonElement>("db-all").addEventListener("click", async () => {
    dbOut.innerHTML = await dbPanel.listAll();
  });
}

if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", () => {
    el<HTMLButtonElement>("connect").addEventListener("click", () => {
      boot().catch((e) => {
        el<HTMLDivElement>("status").textContent = String(e);
      });
    });
  });
}
