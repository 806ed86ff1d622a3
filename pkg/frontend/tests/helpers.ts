import { ApiClient, FetchLike } from "../src/api";

export interface RecordedRequest {
  url: string;
  signal: AbortSignal | null;
}

export interface FakeBackend {
  /** id -> landing JSON body */
  ros: Record<string, Record<string, unknown>>;
  /** creator -> authored ro ids, served for /ros?creator= */
  byCreator: Record<string, string[]>;
  /** canned /recommend payload */
  recommend: Record<string, unknown>;
  /** HTTP status for /recommend (default 200) */
  recommendStatus?: number;
  /** delay before the recommend response resolves (ms) */
  recommendDelayMs?: number;
}

/** In-memory stand-in for the service; records every request it sees. */
export function fakeFetch(backend: FakeBackend, log: RecordedRequest[]): FetchLike {
  return async (url, init) => {
    log.push({ url, signal: init?.signal ?? null });
    const parsed = new URL(url, "http://testhost");
    const respond = (body: unknown, status = 200) =>
      new Response(JSON.stringify(body), {
        status,
        headers: { "content-type": "application/json" },
      });

    if (parsed.pathname === "/ros") {
      const creator = parsed.searchParams.get("creator");
      const items = creator
        ? backend.byCreator[creator] ?? []
        : Object.keys(backend.ros).sort();
      return respond({ items, page: 1, size: items.length, total: items.length });
    }
    if (parsed.pathname.startsWith("/ros/")) {
      const id = decodeURIComponent(parsed.pathname.slice("/ros/".length));
      const body = backend.ros[id];
      return body
        ? respond(body)
        : respond({ error: { code: "UnknownId", message: id } }, 404);
    }
    if (parsed.pathname === "/recommend") {
      if (backend.recommendDelayMs) {
        await new Promise((resolve) => setTimeout(resolve, backend.recommendDelayMs));
      }
      const signal = init?.signal;
      if (signal?.aborted) {
        throw new DOMException("aborted", "AbortError");
      }
      return respond(backend.recommend, backend.recommendStatus ?? 200);
    }
    return respond({ error: { code: "UnknownRoute", message: url } }, 404);
  };
}

export function landing(
  id: string,
  creators: string[],
  title?: string,
  modified?: string
): Record<string, unknown> {
  return {
    id,
    title: title ?? id,
    creators,
    status: "Live",
    modified: modified ?? null,
    doi: null,
  };
}

export function clientFor(backend: FakeBackend, log: RecordedRequest[]): ApiClient {
  return new ApiClient("http://testhost", fakeFetch(backend, log));
}
