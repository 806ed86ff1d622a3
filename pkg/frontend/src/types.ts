/** Shared types mirroring the engine's JSON responses. */

export type Band = "inner" | "outer";

export interface Recommendation {
  id: string;
  score: number;
  band: Band;
}

export interface RecommendResponse {
  context: string[];
  config: string;
  results: Recommendation[];
}

export interface RoListResponse {
  items: string[];
  page: number;
  size: number;
  total: number;
}

/** Subset of the landing JSON the UI cares about. */
export interface RoSummary {
  id: string;
  title: string;
  creators: string[];
  status: string;
  modified: string | null;
  doi: string | null;
}

/** A context slot holds research objects or scientists (proxies to their
 * authored research objects). */
export type ContextItem =
  | { kind: "ro"; id: string }
  | { kind: "scientist"; id: string };

export function itemKey(item: ContextItem): string {
  return `${item.kind}:${item.id}`;
}
