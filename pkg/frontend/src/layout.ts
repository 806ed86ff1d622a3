import type { Band, Recommendation } from "./types";

export interface PlacedResult {
  id: string;
  score: number;
  band: Band;
  radius: number;
  angle: number;
  x: number;
  y: number;
}

export interface SphereLayout {
  placed: PlacedResult[];
  center: { x: number; y: number };
  rings: { context: number; inner: number; outer: number };
}

export interface LayoutOptions {
  center?: { x: number; y: number };
  /** Radius of the interactive context ring. */
  contextRadius?: number;
  /** Base radius of the second sphere (higher-scored results). */
  innerRadius?: number;
  /** Base radius of the third sphere. */
  outerRadius?: number;
  /** Radial spread inside one band; must stay below the band gap. */
  spread?: number;
}

const DEFAULTS: Required<LayoutOptions> = {
  center: { x: 300, y: 300 },
  contextRadius: 70,
  innerRadius: 150,
  outerRadius: 240,
  spread: 40,
};

/**
 * Place ranked results on the concentric spheres. The higher the score,
 * the closer to the center: results are ordered by score (ties by id) and
 * the radius grows with the rank inside each band, so score(A) > score(B)
 * always renders A at a radius <= B for API-shaped responses. Angles are
 * assigned by rank around the circle and depend only on the result list.
 */
export function layoutSpheres(
  results: Recommendation[],
  options: LayoutOptions = {}
): SphereLayout {
  const opts = { ...DEFAULTS, ...options };
  const ranked = [...results].sort(
    (a, b) => b.score - a.score || (a.id < b.id ? -1 : a.id > b.id ? 1 : 0)
  );
  const bandOf = (band: Band) => ranked.filter((r) => r.band === band);
  const counts = { inner: bandOf("inner").length, outer: bandOf("outer").length };

  const placed: PlacedResult[] = [];
  const indexInBand = { inner: 0, outer: 0 };
  for (const result of ranked) {
    const base =
      result.band === "inner" ? opts.innerRadius : opts.outerRadius;
    const count = counts[result.band];
    const index = indexInBand[result.band]++;
    const step = count > 1 ? opts.spread / (count - 1) : 0;
    const radius = base + index * step;
    const angle = -Math.PI / 2 + (count > 0 ? (2 * Math.PI * index) / count : 0);
    placed.push({
      id: result.id,
      score: result.score,
      band: result.band,
      radius,
      angle,
      x: opts.center.x + radius * Math.cos(angle),
      y: opts.center.y + radius * Math.sin(angle),
    });
  }
  return {
    placed,
    center: opts.center,
    rings: {
      context: opts.contextRadius,
      inner: opts.innerRadius,
      outer: opts.outerRadius,
    },
  };
}
