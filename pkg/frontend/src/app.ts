import { ApiClient, ApiError } from "./api";
import {
  ContextFullError,
  DuplicateItemError,
  RecommendationContext,
} from "./context";
import { layoutSpheres, SphereLayout } from "./layout";
import { groupByProximity, PanelGroups } from "./panel";
import type { ContextItem, RoSummary } from "./types";

export interface AppState {
  user: string | null;
  groups: PanelGroups | null;
  context: ContextItem[];
  layout: SphereLayout | null;
  /** Metadata card for the most recently selected item. */
  info: RoSummary | null;
  /** One-line feedback, e.g. when a fourth drop is rejected. */
  hint: string | null;
}

export interface AppOptions {
  api: ApiClient;
  onRender: (state: AppState) => void;
  config?: string;
  n?: number;
}

/**
 * Collaboration Spheres controller. Owns the recommendation context,
 * issues recommend calls when it changes, cancels stale in-flight
 * requests, and pushes immutable state snapshots to the renderer.
 */
export class SpheresApp {
  private readonly api: ApiClient;
  private readonly onRender: (state: AppState) => void;
  private readonly config: string;
  private readonly n: number;
  private readonly context = new RecommendationContext();
  private inflight: AbortController | null = null;
  private state: AppState = {
    user: null,
    groups: null,
    context: [],
    layout: null,
    info: null,
    hint: null,
  };

  constructor(options: AppOptions) {
    this.api = options.api;
    this.onRender = options.onRender;
    this.config = options.config ?? "SemAllText";
    this.n = options.n ?? 10;
  }

  getState(): AppState {
    return { ...this.state, context: this.context.list() };
  }

  private render(patch: Partial<AppState>): void {
    this.state = { ...this.state, ...patch, context: this.context.list() };
    this.onRender(this.state);
  }

  /**
   * Authenticate and personalize: the panel groups are loaded and the
   * context is seeded with the user's most recently modified research
   * object, so recommendations start from their own work.
   */
  async signIn(token: string, userId: string): Promise<void> {
    this.api.setToken(token);
    const summaries = await this.api.listSummaries();
    const groups = groupByProximity(userId, summaries);
    this.context.clear();
    const seed = [...groups.own].sort((a, b) =>
      (b.modified ?? "").localeCompare(a.modified ?? "")
    )[0];
    this.render({ user: userId, groups, hint: null, info: seed ?? null });
    if (seed) {
      this.context.add({ kind: "ro", id: seed.id });
      await this.refresh();
    }
  }

  /** Handle a drop onto the context sphere. */
  async drop(item: ContextItem): Promise<void> {
    try {
      this.context.add(item);
    } catch (err) {
      if (err instanceof ContextFullError || err instanceof DuplicateItemError) {
        this.render({ hint: err.message });
        return;
      }
      throw err;
    }
    if (item.kind === "ro") {
      try {
        const info = await this.api.getRo(item.id);
        this.render({ info, hint: null });
      } catch {
        this.render({ hint: null });
      }
    } else {
      this.render({ hint: null });
    }
    await this.refresh();
  }

  async removeFromContext(item: ContextItem): Promise<void> {
    this.context.remove(item);
    await this.refresh();
  }

  /** Re-run the recommendation for the current context. */
  private async refresh(): Promise<void> {
    if (this.inflight) {
      this.inflight.abort();
      this.inflight = null;
    }
    if (this.context.size === 0) {
      this.render({ layout: null });
      return;
    }
    const controller = new AbortController();
    this.inflight = controller;
    try {
      const ids = await this.context.expand(this.api);
      const response = await this.api.recommend(
        ids,
        this.config,
        this.n,
        controller.signal
      );
      if (controller.signal.aborted) {
        return;
      }
      this.render({ layout: layoutSpheres(response.results), hint: null });
    } catch (err) {
      if (controller.signal.aborted) {
        return; // superseded by a newer context change
      }
      if (err instanceof ApiError) {
        this.render({ hint: err.message });
        return;
      }
      throw err;
    } finally {
      if (this.inflight === controller) {
        this.inflight = null;
      }
    }
  }
}
