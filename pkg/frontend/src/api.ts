/** Typed client for the temporal alpha-shape query service. */

export interface Meta {
  n: number;
  alpha_min_observed: number | null;
  alpha_max_finite: number | null;
  cuboid_count: number;
  dataset_name: string;
  stride?: number;
}

export interface EdgeRow {
  a: number;
  b: number;
  side: number;
  alpha_lo: number;
  alpha_hi: number | "inf";
}

export interface QueryResult {
  edges: EdgeRow[];
  count: number;
  elapsed_microseconds: number;
}

export interface PointRow {
  index: number;
  x: number;
  y: number;
}

export class ApiClient {
  constructor(
    private baseUrl: string,
    private fetchFn: typeof fetch = fetch.bind(globalThis),
  ) {}

  private async get<T>(path: string): Promise<T> {
    const res = await this.fetchFn(`${this.baseUrl}${path}`);
    if (!res.ok) {
      throw new Error(`${path} failed: ${res.status}`);
    }
    return (await res.json()) as T;
  }

  meta(): Promise<Meta> {
    return this.get<Meta>("/meta");
  }

  query(i: number, j: number, alpha: number): Promise<QueryResult> {
    const a = alpha === Infinity ? "inf" : String(alpha);
    return this.get<QueryResult>(`/query?i=${i}&j=${j}&alpha=${encodeURIComponent(a)}`);
  }

  async points(i: number, j: number): Promise<PointRow[]> {
    const body = await this.get<{ points: PointRow[] }>(`/points?i=${i}&j=${j}`);
    return body.points;
  }
}
