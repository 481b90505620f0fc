/**
 * Typed client for the ontopure service. Every request the UI makes goes
 * through this module, and only the documented endpoints exist here.
 */

export interface VersionHeaderJson {
  version: string;
  backwardCompatibleWith: string[];
  incompatibleWith: string[];
  priorVersion: string | null;
}

export interface NodeJson {
  id: number;
  label: string;
  parent: number | null;
  synonyms: string[];
  properties: Record<string, string>;
}

export interface OntologyJson {
  domain: string;
  version: VersionHeaderJson;
  nodes: NodeJson[];
}

export interface SearchResultJson {
  id: number;
  path: string[];
  score: number;
  links: number[];
}

export interface MismatchReportJson {
  mismatches: Array<{
    id: number;
    kinds: string[];
    local: NodeJson | null;
    reference: NodeJson | null;
  }>;
  M: number;
  N: number;
  mi: string;
}

export type OutcomeKind = "hits" | "noMatch" | "needsPurification";

export interface SearchResponse {
  outcome: OutcomeKind;
  results: SearchResultJson[];
  report: MismatchReportJson | null;
  revision: number;
}

export interface MutationResponse<R> {
  revision: number;
  result: R;
}

export interface PurifyResponse {
  revision: number;
  patchLog: Array<{ seq: number; op: string; args: Record<string, unknown> }>;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    readonly detail: string,
  ) {
    super(`${code}: ${detail}`);
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** Node id 0 never exists (ids start at 1), so a delete against it can
 * only ever answer 401 (bad token) or 409 (token accepted) — a safe,
 * mutation-free probe using a documented endpoint. */
const PROBE_NODE_ID = 0;

export class ApiClient {
  token: string | null = null;

  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown, auth = false): Promise<T> {
    const headers: Record<string, string> = {};
    if (body !== undefined) headers["Content-Type"] = "application/json";
    if (auth) {
      if (!this.token) throw new ApiError(401, "BadToken", "no token entered");
      headers["Authorization"] = `Bearer ${this.token}`;
    }
    const response = await this.fetchFn(this.baseUrl + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload: unknown = await response.json();
    if (!response.ok) {
      const err = payload as { error?: string; detail?: string };
      throw new ApiError(response.status, err.error ?? "Unknown", err.detail ?? "");
    }
    return payload as T;
  }

  search(q: string, domain: string): Promise<SearchResponse> {
    const params = new URLSearchParams({ q, domain });
    return this.request("GET", `/search?${params}`);
  }

  ontology(): Promise<OntologyJson> {
    return this.request("GET", "/ontology");
  }

  async revision(): Promise<number> {
    const body = await this.request<{ revision: number }>("GET", "/revision");
    return body.revision;
  }

  report(): Promise<MismatchReportJson> {
    return this.request("GET", "/report");
  }

  insertNode(
    parent: number,
    label: string,
    synonyms: string[],
    properties: Record<string, string>,
  ): Promise<MutationResponse<{ id: number }>> {
    return this.request("POST", "/admin/nodes", { parent, label, synonyms, properties }, true);
  }

  modifyNode(
    id: number,
    deltas: { label?: string; synonyms?: string[]; properties?: Record<string, string> },
  ): Promise<MutationResponse<{ node: NodeJson }>> {
    return this.request("PUT", `/admin/nodes/${id}`, deltas, true);
  }

  deleteNode(
    id: number,
    policy: "subtree" | "reparent",
  ): Promise<MutationResponse<{ removed: number[] }>> {
    return this.request("DELETE", `/admin/nodes/${id}?policy=${policy}`, undefined, true);
  }

  purify(): Promise<PurifyResponse> {
    return this.request("POST", "/admin/purify", {}, true);
  }

  /** True when the token is accepted; throws ApiError(401) when it is not. */
  async probeToken(): Promise<boolean> {
    try {
      await this.deleteNode(PROBE_NODE_ID, "subtree");
    } catch (error) {
      if (error instanceof ApiError && error.status !== 401) return true;
      throw error;
    }
    return true; // unreachable in practice: id 0 can never exist
  }
}
