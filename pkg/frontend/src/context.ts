import type { ApiClient } from "./api";
import type { ContextItem } from "./types";
import { itemKey } from "./types";

export const MAX_CONTEXT_ITEMS = 3;

export class ContextFullError extends Error {
  constructor() {
    super(`the context holds at most ${MAX_CONTEXT_ITEMS} items`);
  }
}

export class DuplicateItemError extends Error {
  constructor(key: string) {
    super(`${key} is already in the context`);
  }
}

/**
 * The recommendation context: up to three research objects or scientists.
 * Scientists are proxies; before a recommend call they expand to the union
 * of the research objects they authored.
 */
export class RecommendationContext {
  private items: ContextItem[] = [];

  get size(): number {
    return this.items.length;
  }

  list(): ContextItem[] {
    return [...this.items];
  }

  add(item: ContextItem): void {
    if (this.items.length >= MAX_CONTEXT_ITEMS) {
      throw new ContextFullError();
    }
    if (this.items.some((existing) => itemKey(existing) === itemKey(item))) {
      throw new DuplicateItemError(itemKey(item));
    }
    this.items.push(item);
  }

  remove(item: ContextItem): void {
    this.items = this.items.filter(
      (existing) => itemKey(existing) !== itemKey(item)
    );
  }

  clear(): void {
    this.items = [];
  }

  /**
   * Resolve the context to research object ids for the recommend call:
   * research objects pass through, scientists expand to their authored
   * research objects. Order is insertion order, duplicates collapse.
   */
  async expand(api: ApiClient): Promise<string[]> {
    const ids: string[] = [];
    for (const item of this.items) {
      if (item.kind === "ro") {
        ids.push(item.id);
      } else {
        ids.push(...(await api.listRos({ creator: item.id })));
      }
    }
    return [...new Set(ids)];
  }
}
