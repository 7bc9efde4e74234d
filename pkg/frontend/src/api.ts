/** Typed client for the workbench service.
 *
 * Every call goes through a single injectable transport, so tests can record
 * the exact (method, path, body) sequence and feed back canned payloads.
 */

import {
  CombineResponse,
  ExportResponse,
  GrammarSummary,
  MorphEntryJson,
  ParseResponse,
  PipelineConfigJson,
  ScratchResponse,
  StatsResponse,
  SyntEntryJson,
  TagResponse,
  TreeViewNode,
} from "./types";

export type Transport = (
  method: string,
  path: string,
  body?: unknown
) => Promise<unknown>;

export class ApiError extends Error {
  constructor(public status: number, public detail: string) {
    super(detail);
  }
}

/** fetch-based transport against a service base URL. */
export function httpTransport(baseUrl: string): Transport {
  return async (method, path, body) => {
    const response = await fetch(baseUrl + path, {
      method,
      headers: body === undefined ? {} : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json();
    if (!response.ok) {
      const detail =
        typeof payload === "object" && payload !== null && "detail" in payload
          ? String((payload as { detail: unknown }).detail)
          : response.statusText;
      throw new ApiError(response.status, detail);
    }
    return payload;
  };
}

function query(params: Record<string, string>): string {
  const qs = new URLSearchParams(params).toString();
  return qs ? `?${qs}` : "";
}

export class ApiClient {
  constructor(private transport: Transport) {}

  parse(req: {
    sentence: string;
    tagger_mode?: string;
    n_best?: number;
    top_k?: number;
    start_category?: string;
  }): Promise<ParseResponse> {
    return this.transport("POST", "/parse", req) as Promise<ParseResponse>;
  }

  tag(sentence: string, nBest: number): Promise<TagResponse> {
    return this.transport("POST", "/tag", {
      sentence,
      n_best: nBest,
    }) as Promise<TagResponse>;
  }

  // -- morphological database

  morphEntries(word?: string): Promise<MorphEntryJson[]> {
    const qs = word === undefined ? "" : query({ word });
    return this.transport("GET", `/db/morph/entries${qs}`) as Promise<MorphEntryJson[]>;
  }

  morphSearch(field: string, pattern: string): Promise<MorphEntryJson[]> {
    return this.transport(
      "GET",
      `/db/morph/search${query({ field, pattern })}`
    ) as Promise<MorphEntryJson[]>;
  }

  morphInsert(entry: MorphEntryJson): Promise<unknown> {
    return this.transport("POST", "/db/morph/entries", entry);
  }

  morphUpdate(oldEntry: MorphEntryJson, newEntry: MorphEntryJson): Promise<unknown> {
    return this.transport("PUT", "/db/morph/entries", { old: oldEntry, new: newEntry });
  }

  morphDelete(entry: MorphEntryJson): Promise<unknown> {
    return this.transport("DELETE", "/db/morph/entries", entry);
  }

  // -- syntactic database

  syntEntries(word?: string, pos?: string): Promise<SyntEntryJson[]> {
    const params: Record<string, string> = {};
    if (word !== undefined) params.word = word;
    if (pos !== undefined) params.pos = pos;
    return this.transport(
      "GET",
      `/db/synt/entries${query(params)}`
    ) as Promise<SyntEntryJson[]>;
  }

  syntSearch(field: string, pattern: string): Promise<SyntEntryJson[]> {
    return this.transport(
      "GET",
      `/db/synt/search${query({ field, pattern })}`
    ) as Promise<SyntEntryJson[]>;
  }

  syntInsert(entry: SyntEntryJson): Promise<unknown> {
    return this.transport("POST", "/db/synt/entries", entry);
  }

  syntUpdate(oldEntry: SyntEntryJson, newEntry: SyntEntryJson): Promise<unknown> {
    return this.transport("PUT", "/db/synt/entries", { old: oldEntry, new: newEntry });
  }

  syntDelete(entry: SyntEntryJson): Promise<unknown> {
    return this.transport("DELETE", "/db/synt/entries", entry);
  }

  // -- grammar, workspace, export, stats, config

  grammarTrees(): Promise<GrammarSummary> {
    return this.transport("GET", "/grammar/trees") as Promise<GrammarSummary>;
  }

  grammarTree(name: string): Promise<{ name: string; type: string; text: string; tree: TreeViewNode }> {
    return this.transport("GET", `/grammar/trees${query({ name })}`) as Promise<{
      name: string;
      type: string;
      text: string;
      tree: TreeViewNode;
    }>;
  }

  scratchList(): Promise<Record<string, TreeViewNode>> {
    return this.transport("GET", "/workspace/scratch") as Promise<
      Record<string, TreeViewNode>
    >;
  }

  scratchNew(name: string, tree: string, lexemes?: string[]): Promise<ScratchResponse> {
    return this.transport("POST", "/workspace/scratch", {
      name,
      tree,
      lexemes: lexemes ?? null,
    }) as Promise<ScratchResponse>;
  }

  combine(req: {
    target: string;
    address: string;
    source: string;
    op: "substitution" | "adjunction";
    lexemes?: string[];
  }): Promise<CombineResponse> {
    return this.transport("POST", "/workspace/combine", {
      ...req,
      lexemes: req.lexemes ?? null,
    }) as Promise<CombineResponse>;
  }

  undo(name: string): Promise<ScratchResponse> {
    return this.transport("POST", "/workspace/undo", { name }) as Promise<ScratchResponse>;
  }

  exportTree(name: string, format: string): Promise<ExportResponse> {
    return this.transport(
      "GET",
      `/export/${encodeURIComponent(name)}${query({ format })}`
    ) as Promise<ExportResponse>;
  }

  stats(): Promise<StatsResponse> {
    return this.transport("GET", "/stats") as Promise<StatsResponse>;
  }

  getConfig(): Promise<PipelineConfigJson> {
    return this.transport("GET", "/config") as Promise<PipelineConfigJson>;
  }

  putConfig(partial: Partial<PipelineConfigJson>): Promise<PipelineConfigJson> {
    return this.transport("PUT", "/config", partial) as Promise<PipelineConfigJson>;
  }
}
