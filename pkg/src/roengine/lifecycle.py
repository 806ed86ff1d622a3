"""Research-object lifecycle: snapshot, archive, fork and DOI minting.

Snapshots and archives are immutable deep copies released under a freshly
minted DOI; forks are mutable branches of public live objects that
automatically cite their source. Status transitions happen under the
store's per-id lock with a compare-and-swap on the persisted status, so
concurrent conflicting transitions resolve to one winner.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from datetime import datetime

from . import vocab
from .errors import NotLive, NotMutable, NotPublic, NotReleased, RegistryUnavailable
from .model import (
    AccessLevel,
    Annotation,
    Iri,
    LifecycleStatus,
    Literal,
    Provenance,
    ResearchObject,
    Statement,
    utcnow,
)
from .store import EvolutionRecord, RoStore

DOI_RE = re.compile(r"^10\.\d{2,9}/\S+$")
TEST_DOI_PREFIX = "10.5072"


@dataclass(frozen=True)
class DoiRecord:
    doi: str
    ro_id: str
    minted_at: str
    landing_url: str

    def to_dict(self) -> dict:
        return {
            "doi": self.doi,
            "roId": self.ro_id,
            "mintedAt": self.minted_at,
            "landingUrl": self.landing_url,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DoiRecord":
        return cls(d["doi"], d["roId"], d["mintedAt"], d["landingUrl"])


class DoiRegistry:
    """Abstract DOI registry client."""

    def mint(self, metadata: dict) -> str:
        raise NotImplementedError


class StubRegistry(DoiRegistry):
    """Deterministic registry issuing ``10.5072/ro-<n>`` with a monotonic
    counter (10.5072 is the conventional test registrant)."""

    def __init__(self) -> None:
        self._counter = 0

    def mint(self, metadata: dict) -> str:
        self._counter += 1
        return f"{TEST_DOI_PREFIX}/ro-{self._counter}"


class FailingRegistry(DoiRegistry):
    """Registry stub that always fails; useful to exercise mint-failure paths."""

    def mint(self, metadata: dict) -> str:
        raise RegistryUnavailable("DOI registry did not respond")


def _derived_id(store: RoStore, source: Iri, tag: str) -> Iri:
    base = source.value.rstrip("/")
    n = 1
    while store.exists(Iri(f"{base}-{tag}-{n}")):
        n += 1
    return Iri(f"{base}-{tag}-{n}")


def _doi_metadata(ro: ResearchObject) -> dict:
    year = ro.created.year if ro.created else utcnow().year
    title = ro.id.value
    for stmt in ro.statements():
        if stmt.predicate.value == vocab.DC_TITLE and isinstance(stmt.object, Literal):
            title = stmt.object.text
            break
    return {
        "title": title,
        "creators": list(ro.creators),
        "year": year,
        "url": landing_url(ro.id),
    }


def landing_url(ro_id: Iri) -> str:
    return f"/ros/{ro_id.value}"


class LifecycleManager:
    """Drives status transitions for research objects held in a store."""

    def __init__(self, store: RoStore, registry: DoiRegistry | None = None):
        self.store = store
        self.registry = registry or StubRegistry()

    # ---- releases -------------------------------------------------------

    def snapshot(self, live: ResearchObject, actor: str = "") -> tuple[ResearchObject, DoiRecord]:
        return self._release(live, LifecycleStatus.SNAPSHOT, "Snapshotted", "snap", actor)

    def archive(self, live: ResearchObject, actor: str = "") -> tuple[ResearchObject, DoiRecord]:
        return self._release(live, LifecycleStatus.ARCHIVED, "Archived", "arch", actor)

    def _release(
        self,
        live: ResearchObject,
        status: LifecycleStatus,
        event: str,
        tag: str,
        actor: str,
    ) -> tuple[ResearchObject, DoiRecord]:
        if not live.status.mutable:
            raise NotMutable(f"{live.id} has status {live.status.value}")
        with self.store.lock_for(live.id):
            stored = self.store.load(live.id)
            if not stored.status.mutable:
                raise NotMutable(f"{live.id} has status {stored.status.value}")

            new_id = _derived_id(self.store, live.id, tag)
            now = utcnow()
            released = replace(
                live,
                id=new_id,
                status=status,
                modified=now,
                annotations=_rebase_annotations(live, new_id),
            )
            released = _with_provenance(released, live.id, actor, now)

            # mint before persisting: a failed mint must not leave a release
            doi = self.registry.mint(_doi_metadata(released))
            record = DoiRecord(
                doi=doi,
                ro_id=new_id.value,
                minted_at=_ts_text(now),
                landing_url=landing_url(new_id),
            )
            released = replace(released, es_meta=replace(released.es_meta, doi=doi))
            self.store.add(released)
            self._store_doi(record)
        self.store.append_evolution(
            EvolutionRecord(event, live.id.value, new_id.value, _ts_text(now), actor)
        )
        return released, record

    def fork(self, source: ResearchObject, new_owner: str) -> ResearchObject:
        access = source.es_meta.access
        if access is None or access.level != AccessLevel.PUBLIC:
            raise NotPublic(f"{source.id} is not public")
        if source.status != LifecycleStatus.LIVE:
            raise NotLive(f"{source.id} has status {source.status.value}")
        with self.store.lock_for(source.id):
            stored = self.store.load(source.id)
            if stored.status != LifecycleStatus.LIVE:
                raise NotLive(f"{source.id} has status {stored.status.value}")

            new_id = _derived_id(self.store, source.id, "fork")
            now = utcnow()
            # lineage annotations describe the source's own history; the
            # fork records only its direct citation, and earlier ancestors
            # stay reachable transitively through the store
            kept = tuple(a for a in source.annotations if not _is_lineage(a))
            forked = replace(
                source,
                id=new_id,
                status=LifecycleStatus.FORKED,
                creators=(new_owner,),
                modified=now,
                annotations=_rebase_annotations(replace(source, annotations=kept), new_id),
                es_meta=replace(source.es_meta, doi=None),
            )
            forked = _with_citation(forked, source, new_owner, now)
            self.store.add(forked)
        self.store.append_evolution(
            EvolutionRecord("Forked", source.id.value, new_id.value, _ts_text(now), new_owner)
        )
        return forked

    # ---- DOIs -----------------------------------------------------------

    def mint_doi(self, ro: ResearchObject) -> DoiRecord:
        """Mint (or return the already-minted) DOI of a released object.

        Released manifests are immutable, so a late mint only stores the
        DoiRecord; landing views merge it with the manifest metadata."""
        if ro.status not in (LifecycleStatus.SNAPSHOT, LifecycleStatus.ARCHIVED):
            raise NotReleased(f"{ro.id} has status {ro.status.value}")
        with self.store.lock_for(ro.id):
            existing = self.doi_for(ro.id)
            if existing is not None:
                return existing
            doi = ro.es_meta.doi or self.registry.mint(_doi_metadata(ro))
            record = DoiRecord(
                doi=doi,
                ro_id=ro.id.value,
                minted_at=_ts_text(utcnow()),
                landing_url=landing_url(ro.id),
            )
            self._store_doi(record)
        return record

    def doi_for(self, ro_id: Iri) -> DoiRecord | None:
        rec = self.store.doi_records().get(ro_id.value)
        return DoiRecord.from_dict(rec) if rec else None

    def _store_doi(self, record: DoiRecord) -> None:
        records = self.store.doi_records()
        records[record.ro_id] = record.to_dict()
        self.store.save_doi_records(records)


def _ts_text(ts: datetime) -> str:
    return ts.isoformat().replace("+00:00", "Z")


_LINEAGE_PREDICATES = frozenset({vocab.CITO_CITES, vocab.PROV_DERIVED_FROM})


def _is_lineage(ann: Annotation) -> bool:
    return ann.provenance is Provenance.MACHINE and all(
        s.predicate.value in _LINEAGE_PREDICATES for s in ann.body
    )


def _rebase_annotations(ro: ResearchObject, new_id: Iri) -> tuple[Annotation, ...]:
    """Re-home annotation ids and RO-targeting statements onto the copy.

    Resource ids and their content references are kept verbatim, so the
    copy aggregates bit-identical content.
    """
    old_base = ro.id.value.rstrip("/")
    new_base = new_id.value.rstrip("/")

    def swap(iri: Iri) -> Iri:
        if iri == ro.id:
            return new_id
        if iri.value.startswith(old_base + "/"):
            return Iri(new_base + iri.value[len(old_base):])
        return iri

    out = []
    for ann in ro.annotations:
        out.append(
            replace(
                ann,
                id=swap(ann.id),
                target=swap(ann.target),
                body=tuple(
                    Statement(swap(s.subject), s.predicate, s.object if isinstance(s.object, Literal) else swap(s.object))
                    for s in ann.body
                ),
            )
        )
    return tuple(out)


def _free_annotation_id(ro: ResearchObject, name: str) -> Iri:
    base = f"{ro.id.value.rstrip('/')}/annotations/{name}"
    taken = {a.id.value for a in ro.annotations}
    if base not in taken:
        return Iri(base)
    n = 2
    while f"{base}-{n}" in taken:
        n += 1
    return Iri(f"{base}-{n}")


def _with_provenance(ro: ResearchObject, source: Iri, actor: str, now: datetime) -> ResearchObject:
    ann = Annotation(
        id=_free_annotation_id(ro, "provenance"),
        target=ro.id,
        body=(Statement(ro.id, Iri(vocab.PROV_DERIVED_FROM), source),),
        creator=actor,
        created=now,
        provenance=Provenance.MACHINE,
    )
    return replace(ro, annotations=ro.annotations + (ann,))


def _with_citation(ro: ResearchObject, source: ResearchObject, actor: str, now: datetime) -> ResearchObject:
    body = [Statement(ro.id, Iri(vocab.CITO_CITES), source.id)]
    if source.es_meta.doi:
        body.append(
            Statement(ro.id, Iri(vocab.CITO_CITES), Iri(f"https://doi.org/{source.es_meta.doi}"))
        )
    ann = Annotation(
        id=_free_annotation_id(ro, "citation"),
        target=ro.id,
        body=tuple(body),
        creator=actor,
        created=now,
        provenance=Provenance.MACHINE,
    )
    return replace(ro, annotations=ro.annotations + (ann,))


def citation_chain(store: RoStore, ro_id: Iri) -> list[Iri]:
    """Follow machine citation statements transitively back to the
    original research object; returns the cited ids in order."""
    chain: list[Iri] = []
    current = store.load(ro_id)
    seen = {ro_id}
    while True:
        cited = None
        for ann in current.annotations:
            if ann.provenance != Provenance.MACHINE:
                continue
            for stmt in ann.body:
                if stmt.predicate.value == vocab.CITO_CITES and isinstance(stmt.object, Iri):
                    if store.exists(stmt.object) and stmt.object not in seen:
                        cited = stmt.object
                        break
            if cited:
                break
        if cited is None:
            return chain
        chain.append(cited)
        seen.add(cited)
        current = store.load(cited)
