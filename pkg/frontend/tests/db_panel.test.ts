import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api";
import { DbPanel } from "../src/panels/db";
import { MorphEntryJson } from "../src/types";
import { recorder } from "./helpers";

const BOOKS_N: MorphEntryJson = {
  inflected: "books",
  root: "book",
  pos: "N",
  inflections: ["pl"],
};
const BOOKS_V: MorphEntryJson = {
  inflected: "books",
  root: "book",
  pos: "V",
  inflections: ["3sg", "pres"],
};

describe("db panel", () => {
  it("search issues exactly GET /db/morph/search with field and pattern", async () => {
    const { calls, transport } = recorder({
      "GET /db/morph/search?field=root&pattern=book": [BOOKS_N, BOOKS_V],
    });
    const panel = new DbPanel(new ApiClient(transport), "morph");
    const html = await panel.search("root", "book");
    expect(calls).toEqual([
      { method: "GET", path: "/db/morph/search?field=root&pattern=book" },
    ]);
    expect(html).toContain("<td>books</td>");
    expect(html).toContain("<td>3sg,pres</td>");
  });

  it("edit flow issues exactly one PUT with {old, new}", async () => {
    const { calls, transport } = recorder({
      "GET /db/morph/search?field=root&pattern=book": [BOOKS_N],
      "PUT /db/morph/entries": { ok: true },
    });
    const panel = new DbPanel(new ApiClient(transport), "morph");
    await panel.search("root", "book");
    const replacement = { ...BOOKS_N, inflections: ["pl", "irreg"] };
    const html = await panel.editRow(0, replacement);
    expect(calls[1]).toEqual({
      method: "PUT",
      path: "/db/morph/entries",
      body: { old: BOOKS_N, new: replacement },
    });
    expect(html).toContain("pl,irreg");
  });

  it("delete flow issues exactly one DELETE with the row as body", async () => {
    const { calls, transport } = recorder({
      "GET /db/morph/search?field=root&pattern=book": [BOOKS_N, BOOKS_V],
      "DELETE /db/morph/entries": { ok: true },
    });
    const panel = new DbPanel(new ApiClient(transport), "morph");
    await panel.search("root", "book");
    const html = await panel.deleteRow(0);
    expect(calls[1]).toEqual({
      method: "DELETE",
      path: "/db/morph/entries",
      body: BOOKS_N,
    });
    expect(html).not.toContain("<td>pl</td>");
    expect(html).toContain("3sg,pres");
  });

  it("insert posts the new entry and renders it", async () => {
    const { calls, transport } = recorder({ "POST /db/morph/entries": { ok: true } });
    const panel = new DbPanel(new ApiClient(transport), "morph");
    const html = await panel.insert(BOOKS_N);
    expect(calls).toEqual([
      { method: "POST", path: "/db/morph/entries", body: BOOKS_N },
    ]);
    expect(html).toContain("<td>books</td>");
  });

  it("renders service validation errors inline and keeps rows unchanged", async () => {
    const { transport } = recorder({
      "GET /db/synt/search?field=family&pattern=Tnx0V": [
        {
          index_word: "bark",
          pos: "V",
          trees: [],
          families: ["Tnx0V"],
          equations: [],
        },
      ],
      "POST /db/synt/entries": () => {
        const err = new Error("unknown family 'NoSuch' in entry for 'zz'");
        throw err;
      },
    });
    const panel = new DbPanel(new ApiClient(transport), "synt");
    await panel.search("family", "Tnx0V");
    const html = await panel.insert({
      index_word: "zz",
      pos: "V",
      trees: [],
      families: ["NoSuch"],
      equations: [],
    });
    expect(html).toContain("unknown family");
    expect(html).toContain("<td>bark</td>");
    expect(html).not.toContain("<td>zz</td>");
  });

  it("synt rows render trees, families, and equations verbatim", async () => {
    const { transport } = recorder({
      "GET /db/synt/entries": [
        {
          index_word: "these",
          pos: "Det",
          trees: ["beta_Dnx"],
          families: [],
          equations: ["anchor.bot.agr.num=pl"],
        },
      ],
    });
    const panel = new DbPanel(new ApiClient(transport), "synt");
    const html = await panel.listAll();
    expect(html).toContain("<td>these</td>");
    expect(html).toContain("<td>beta_Dnx</td>");
    expect(html).toContain("<td>anchor.bot.agr.num=pl</td>");
  });
});
