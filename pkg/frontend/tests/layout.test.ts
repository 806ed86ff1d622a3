import { describe, expect, it } from "vitest";

import { layoutSpheres } from "../src/layout";
import type { Recommendation } from "../src/types";

const FIXED: Recommendation[] = [
  { id: "urn:ro:a", score: 0.91, band: "inner" },
  { id: "urn:ro:b", score: 0.74, band: "inner" },
  { id: "urn:ro:c", score: 0.52, band: "inner" },
  { id: "urn:ro:d", score: 0.31, band: "outer" },
  { id: "urn:ro:e", score: 0.3, band: "outer" },
  { id: "urn:ro:f", score: 0.05, band: "outer" },
];

describe("layoutSpheres", () => {
  it("renders higher scores closer to the center", () => {
    const layout = layoutSpheres(FIXED);
    for (const a of layout.placed) {
      for (const b of layout.placed) {
        if (a.score > b.score) {
          expect(a.radius).toBeLessThanOrEqual(b.radius);
        }
      }
    }
  });

  it("keeps the inner band strictly inside the outer band", () => {
    const layout = layoutSpheres(FIXED);
    const innerMax = Math.max(
      ...layout.placed.filter((p) => p.band === "inner").map((p) => p.radius)
    );
    const outerMin = Math.min(
      ...layout.placed.filter((p) => p.band === "outer").map((p) => p.radius)
    );
    expect(innerMax).toBeLessThan(outerMin);
  });

  it("is deterministic for a given result list", () => {
    expect(layoutSpheres(FIXED)).toEqual(layoutSpheres(FIXED));
  });

  it("assigns distinct angles within a band", () => {
    const layout = layoutSpheres(FIXED);
    const innerAngles = layout.placed
      .filter((p) => p.band === "inner")
      .map((p) => p.angle);
    expect(new Set(innerAngles).size).toBe(innerAngles.length);
  });

  it("handles empty result lists", () => {
    const layout = layoutSpheres([]);
    expect(layout.placed).toEqual([]);
    expect(layout.rings.inner).toBeGreaterThan(layout.rings.context);
  });

  it("matches the layout snapshot for fixed scores", () => {
    expect(layoutSpheres(FIXED)).toMatchSnapshot();
  });
});
