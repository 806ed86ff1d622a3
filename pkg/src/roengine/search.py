"""Full-text, faceted and geospatial search over the research-object store.

Full-text ranking reuses the similarity module's TF-IDF weighting (one
weighting scheme for the whole engine). Facet filtering is a conjunction
across facets with disjunction inside each facet; research-area selections
expand downward through a broader-than vocabulary, so selecting a broad
area also matches objects tagged with any of its narrower areas.
Geospatial search is closed-interval box intersection without antimeridian
wrapping.
"""

from __future__ import annotations

import threading
from collections import Counter
from dataclasses import dataclass

from . import vocab
from .enrichment import extract_text, tokenize
from .errors import InvalidBox, UnknownFacet
from .manifest import ro_statements
from .model import GeoExtent, Literal, ResearchObject
from .similarity import tfidf_weight

FACET_NAMES = ("creator", "roType", "status", "discipline", "researchArea", "createdYear")


def boxes_intersect(a: GeoExtent, b: GeoExtent) -> bool:
    """Closed-interval intersection: touching edges count."""
    return (
        a.west <= b.east
        and b.west <= a.east
        and a.south <= b.north
        and b.south <= a.north
    )


def _check_box(box: GeoExtent) -> None:
    if not (-180.0 <= box.west <= box.east <= 180.0) or not (
        -90.0 <= box.south <= box.north <= 90.0
    ):
        raise InvalidBox(
            f"invalid bounding box [{box.west}, {box.south}, {box.east}, {box.north}]"
        )


@dataclass
class _Entry:
    tokens: Counter
    facets: dict[str, set[str]]
    box: GeoExtent | None


def document_text(ro: ResearchObject) -> str:
    """The searchable text of a research object: contributing resource
    content plus every literal asserted in annotation bodies (so enriched
    labels are findable)."""
    parts = [seg[2] for seg in extract_text(ro).segments]
    for stmt in ro.statements():
        if isinstance(stmt.object, Literal):
            parts.append(stmt.object.text)
    return "\n".join(parts)


def facet_values(ro: ResearchObject) -> dict[str, set[str]]:
    values: dict[str, set[str]] = {
        "creator": set(ro.creators),
        "roType": {ro.ro_type.value},
        "status": {ro.status.value},
        "discipline": set(),
        "researchArea": set(),
        "createdYear": set(),
    }
    if ro.es_meta.discipline:
        values["discipline"].add(ro.es_meta.discipline)
    if ro.created is not None:
        values["createdYear"].add(str(ro.created.year))
    for stmt in ro_statements(ro):
        if stmt.predicate.value == vocab.ROES_RESEARCH_AREA and isinstance(stmt.object, Literal):
            values["researchArea"].add(stmt.object.text)
    return values


class SearchIndex:
    """In-memory index; writes are serialized, reads see the last commit."""

    def __init__(self, research_area_vocab: list[tuple[str, str]] | None = None):
        # vocabulary edges run narrower -> broader
        self._narrower: dict[str, set[str]] = {}
        for narrower, broader in research_area_vocab or ():
            self._narrower.setdefault(broader, set()).add(narrower)
        self._entries: dict[str, _Entry] = {}
        self._lock = threading.Lock()

    # ---- maintenance ----------------------------------------------------

    def index(self, ro: ResearchObject) -> None:
        """Insert or replace the entry for one research object."""
        entry = _Entry(
            tokens=Counter(tokenize(document_text(ro))),
            facets=facet_values(ro),
            box=ro.es_meta.geospatial,
        )
        with self._lock:
            self._entries[ro.id.value] = entry

    def remove(self, ro_id: str) -> None:
        with self._lock:
            self._entries.pop(ro_id, None)

    def __len__(self) -> int:
        return len(self._entries)

    # ---- queries ---------------------------------------------------------

    def full_text_search(self, terms: str, page: int = 1, size: int = 10) -> list[tuple[str, float]]:
        """Rank documents by the summed TF-IDF weight of matched query
        tokens; ties break on id. Empty queries return nothing."""
        query = tokenize(terms)
        if not query:
            return []
        with self._lock:
            entries = dict(self._entries)
        n_docs = len(entries)
        if n_docs == 0:
            return []
        df: Counter = Counter()
        for entry in entries.values():
            df.update(entry.tokens.keys())
        scored = []
        for ro_id, entry in entries.items():
            matched = [t for t in query if t in entry.tokens]
            if not matched:
                continue
            # a term present in every document still matches, it just
            # carries zero discriminating weight
            score = sum(tfidf_weight(entry.tokens[t], n_docs, df[t]) for t in matched)
            scored.append((ro_id, score))
        scored.sort(key=lambda pair: (-pair[1], pair[0]))
        start = (max(page, 1) - 1) * size
        return scored[start:start + size]

    def _expand_research_area(self, term: str) -> set[str]:
        out = {term}
        frontier = [term]
        while frontier:
            node = frontier.pop()
            for narrower in self._narrower.get(node, ()):
                if narrower not in out:
                    out.add(narrower)
                    frontier.append(narrower)
        return out

    def faceted_filter(self, selections: dict[str, set[str]]) -> set[str]:
        """AND across facets, OR within one facet."""
        for facet in selections:
            if facet not in FACET_NAMES:
                raise UnknownFacet(f"unknown facet {facet!r}")
        with self._lock:
            entries = dict(self._entries)
        result = set(entries)
        for facet, wanted in selections.items():
            if facet == "researchArea":
                expanded: set[str] = set()
                for term in wanted:
                    expanded |= self._expand_research_area(term)
                wanted = expanded
            result = {
                ro_id for ro_id in result if entries[ro_id].facets.get(facet, set()) & wanted
            }
        return result

    def geo_search(self, box: GeoExtent) -> set[str]:
        _check_box(box)
        with self._lock:
            entries = dict(self._entries)
        return {
            ro_id
            for ro_id, entry in entries.items()
            if entry.box is not None and boxes_intersect(entry.box, box)
        }
