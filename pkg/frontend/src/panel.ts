import type { RoSummary } from "./types";

export interface PanelGroups {
  own: RoSummary[];
  collaborators: RoSummary[];
  rest: RoSummary[];
}

/**
 * Segment the collection in decreasing order of proximity to the user:
 * their own research objects, those of collaborators (co-contributors to
 * the user's research objects), and the rest.
 */
export function groupByProximity(userId: string, ros: RoSummary[]): PanelGroups {
  const own = ros.filter((ro) => ro.creators.includes(userId));
  const collaboratorIds = new Set<string>();
  for (const ro of own) {
    for (const creator of ro.creators) {
      if (creator !== userId) {
        collaboratorIds.add(creator);
      }
    }
  }
  const collaborators = ros.filter(
    (ro) =>
      !ro.creators.includes(userId) &&
      ro.creators.some((creator) => collaboratorIds.has(creator))
  );
  const placed = new Set([...own, ...collaborators].map((ro) => ro.id));
  const rest = ros.filter((ro) => !placed.has(ro.id));
  return { own, collaborators, rest };
}

/** Case-insensitive title-substring filter applied inside each group. */
export function filterByTitle(groups: PanelGroups, query: string): PanelGroups {
  const needle = query.trim().toLowerCase();
  if (!needle) {
    return groups;
  }
  const match = (ro: RoSummary) => ro.title.toLowerCase().includes(needle);
  return {
    own: groups.own.filter(match),
    collaborators: groups.collaborators.filter(match),
    rest: groups.rest.filter(match),
  };
}
