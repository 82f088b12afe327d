/** Client for the graph service HTTP interface. */

export type NodeKind = "object" | "edge" | "attribute" | "value";

export interface NodeDoc {
  id: number;
  kind: NodeKind;
  name: string;
  intervals: string;
}

export interface EdgeDoc {
  from: number;
  to: number;
}

export interface GraphDocument {
  schema_version: string;
  name: string;
  granularity: string;
  nodes: NodeDoc[];
  edges: EdgeDoc[];
}

export interface GraphSummary {
  id: string;
  name: string;
  nodes: number;
  edges: number;
}

export interface InstantRange {
  min_instant: number;
  max_instant: number;
  has_now: boolean;
}

export interface FetchResponse {
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}

export type FetchLike = (url: string) => Promise<FetchResponse>;

function defaultFetch(): FetchLike {
  return (url) => globalThis.fetch(url);
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = defaultFetch(),
  ) {}

  private async get(path: string): Promise<unknown> {
    const response = await this.fetchImpl(this.baseUrl + path);
    if (response.status === 204) {
      return null;
    }
    if (!response.ok) {
      throw new Error(`GET ${path} failed with status ${response.status}`);
    }
    return response.json();
  }

  async listGraphs(): Promise<GraphSummary[]> {
    const body = (await this.get("/graphs")) as { graphs: GraphSummary[] };
    return body.graphs;
  }

  async graph(id: string): Promise<GraphDocument> {
    return (await this.get(`/graphs/${id}`)) as GraphDocument;
  }

  async range(id: string): Promise<InstantRange | null> {
    return (await this.get(`/graphs/${id}/range`)) as InstantRange | null;
  }

  async snapshot(
    id: string,
    t: number | "Now",
    query?: string,
  ): Promise<GraphDocument> {
    const params = new URLSearchParams({ t: String(t) });
    if (query !== undefined && query.trim() !== "") {
      params.set("q", query);
    }
    return (await this.get(
      `/graphs/${id}/snapshot?${params.toString()}`,
    )) as GraphDocument;
  }
}
