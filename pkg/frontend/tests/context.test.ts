import { describe, expect, it } from "vitest";

import {
  ContextFullError,
  DuplicateItemError,
  RecommendationContext,
} from "../src/context";
import { clientFor, landing, RecordedRequest } from "./helpers";

describe("RecommendationContext", () => {
  it("rejects a fourth item", () => {
    const ctx = new RecommendationContext();
    ctx.add({ kind: "ro", id: "a" });
    ctx.add({ kind: "ro", id: "b" });
    ctx.add({ kind: "scientist", id: "alice" });
    expect(() => ctx.add({ kind: "ro", id: "d" })).toThrow(ContextFullError);
    expect(ctx.size).toBe(3);
  });

  it("rejects duplicates", () => {
    const ctx = new RecommendationContext();
    ctx.add({ kind: "ro", id: "a" });
    expect(() => ctx.add({ kind: "ro", id: "a" })).toThrow(DuplicateItemError);
    // same id under a different kind is a different item
    ctx.add({ kind: "scientist", id: "a" });
    expect(ctx.size).toBe(2);
  });

  it("removes by key and clears", () => {
    const ctx = new RecommendationContext();
    ctx.add({ kind: "ro", id: "a" });
    ctx.add({ kind: "ro", id: "b" });
    ctx.remove({ kind: "ro", id: "a" });
    expect(ctx.list()).toEqual([{ kind: "ro", id: "b" }]);
    ctx.clear();
    expect(ctx.size).toBe(0);
  });

  it("expands scientists to their authored research objects", async () => {
    const log: RecordedRequest[] = [];
    const api = clientFor(
      {
        ros: { "urn:ro:x": landing("urn:ro:x", ["bob"]) },
        byCreator: { alice: ["urn:ro:a1", "urn:ro:a2"] },
        recommend: {},
      },
      log
    );
    const ctx = new RecommendationContext();
    ctx.add({ kind: "ro", id: "urn:ro:x" });
    ctx.add({ kind: "scientist", id: "alice" });
    expect(await ctx.expand(api)).toEqual(["urn:ro:x", "urn:ro:a1", "urn:ro:a2"]);
  });

  it("collapses duplicate ids after expansion", async () => {
    const log: RecordedRequest[] = [];
    const api = clientFor(
      {
        ros: {},
        byCreator: { alice: ["urn:ro:a1"] },
        recommend: {},
      },
      log
    );
    const ctx = new RecommendationContext();
    ctx.add({ kind: "ro", id: "urn:ro:a1" });
    ctx.add({ kind: "scientist", id: "alice" });
    expect(await ctx.expand(api)).toEqual(["urn:ro:a1"]);
  });
});
