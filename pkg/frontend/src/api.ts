import type { RecommendResponse, RoListResponse, RoSummary } from "./types";

export type FetchLike = (
  url: string,
  init?: RequestInit
) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string
  ) {
    super(message);
  }
}

/**
 * Thin client for the research-object service. All requests go through the
 * documented JSON endpoints; the UI holds no other channel to the backend.
 */
export class ApiClient {
  private token: string | null = null;

  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init)
  ) {}

  setToken(token: string | null): void {
    this.token = token;
  }

  private async request<T>(path: string, signal?: AbortSignal): Promise<T> {
    const headers: Record<string, string> = {};
    if (this.token) {
      headers["Authorization"] = `Bearer ${this.token}`;
    }
    const response = await this.fetchFn(`${this.baseUrl}${path}`, {
      headers,
      signal,
    });
    if (!response.ok) {
      let code = "HttpError";
      let message = `${response.status}`;
      try {
        const body = await response.json();
        code = body?.error?.code ?? code;
        message = body?.error?.message ?? message;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, code, message);
    }
    return (await response.json()) as T;
  }

  /** List research object ids, optionally filtered by facet values. */
  async listRos(params: Record<string, string> = {}): Promise<string[]> {
    const query = new URLSearchParams({ size: "1000", ...params });
    const body = await this.request<RoListResponse>(`/ros?${query}`);
    return body.items;
  }

  /** Landing metadata for one research object. */
  async getRo(id: string): Promise<RoSummary> {
    const body = await this.request<Record<string, unknown>>(
      `/ros/${encodeURIComponent(id)}`
    );
    return {
      id: body["id"] as string,
      title: (body["title"] as string) ?? (body["id"] as string),
      creators: (body["creators"] as string[]) ?? [],
      status: (body["status"] as string) ?? "",
      modified: (body["modified"] as string | null) ?? null,
      doi: (body["doi"] as string | null) ?? null,
    };
  }

  /** Landing metadata for every research object in the store. */
  async listSummaries(): Promise<RoSummary[]> {
    const ids = await this.listRos();
    return Promise.all(ids.map((id) => this.getRo(id)));
  }

  /** Ranked recommendations for a context of 1..3 research object ids. */
  async recommend(
    context: string[],
    config: string,
    n: number,
    signal?: AbortSignal
  ): Promise<RecommendResponse> {
    const query = new URLSearchParams({
      context: context.join(","),
      config,
      n: String(n),
    });
    return this.request<RecommendResponse>(`/recommend?${query}`, signal);
  }
}
