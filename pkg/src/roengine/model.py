"""Research-object data model with earth-science extensions.

All model values are immutable snapshots: mutating operations return new
values and never touch their input, which makes them safe to hand between
threads. Invariants are reported by :func:`validate` rather than enforced
in constructors, so malformed data stays representable for diagnostics.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from enum import Enum
from typing import Union
from urllib.parse import urlsplit

from . import vocab
from .errors import DuplicateResource, EmptyBody, ImmutableObject, UnknownTarget


class RoType(str, Enum):
    WORKFLOW_CENTRIC = "WorkflowCentric"
    DATA_CENTRIC = "DataCentric"
    SERVICE_CENTRIC = "ServiceCentric"
    DOCUMENTATION = "Documentation"
    BIBLIOGRAPHIC = "Bibliographic"


class LifecycleStatus(str, Enum):
    LIVE = "Live"
    SNAPSHOT = "Snapshot"
    ARCHIVED = "Archived"
    FORKED = "Forked"

    @property
    def mutable(self) -> bool:
        return self in (LifecycleStatus.LIVE, LifecycleStatus.FORKED)


class ResourceKind(str, Enum):
    TITLE = "Title"
    DESCRIPTION = "Description"
    DOCUMENT = "Document"
    BIBLIOGRAPHIC_RESOURCE = "BibliographicResource"
    CONCLUSIONS = "Conclusions"
    HYPOTHESIS = "Hypothesis"
    RESEARCH_QUESTION = "ResearchQuestion"
    PAPER = "Paper"
    WORKFLOW = "Workflow"
    DATASET = "Dataset"
    SERVICE = "Service"
    OTHER = "Other"


class AccessLevel(str, Enum):
    PUBLIC = "Public"
    RESTRICTED = "Restricted"
    PRIVATE = "Private"


class Provenance(str, Enum):
    HUMAN = "Human"
    MACHINE = "Machine"


@dataclass(frozen=True, order=True)
class Iri:
    """Absolute identifier, compared by exact text equality."""

    value: str

    def __str__(self) -> str:
        return self.value

    @property
    def scheme(self) -> str:
        return urlsplit(self.value).scheme


@dataclass(frozen=True, order=True)
class Literal:
    """Literal term with an optional datatype tag; untyped compares as text."""

    text: str
    datatype: str | None = None


Term = Union[Iri, Literal]


@dataclass(frozen=True)
class Statement:
    """A (subject, predicate, object) assertion."""

    subject: Iri
    predicate: Iri
    object: Term


@dataclass(frozen=True)
class Resource:
    id: Iri
    kind: ResourceKind
    media_type: str = ""
    size_bytes: int = 0
    content_ref: str | None = None
    content_text: str | None = None


@dataclass(frozen=True)
class GeoExtent:
    """Bounding box in decimal degrees (west/east longitude, south/north latitude)."""

    west: float
    south: float
    east: float
    north: float


@dataclass(frozen=True)
class TimePeriod:
    start: datetime
    end: datetime


@dataclass(frozen=True)
class IprInfo:
    copyright_holder: str = ""
    start_year: int | None = None
    license: str = ""
    attribution: str = ""


@dataclass(frozen=True)
class AccessPolicy:
    level: AccessLevel
    policy: str = ""


@dataclass(frozen=True)
class EarthScienceMetadata:
    geospatial: GeoExtent | None = None
    time_period: TimePeriod | None = None
    ipr: IprInfo | None = None
    access: AccessPolicy | None = None
    discipline: str = ""
    doi: str | None = None
    community: str = ""


@dataclass(frozen=True)
class Annotation:
    id: Iri
    target: Iri
    body: tuple[Statement, ...]
    creator: str = ""
    created: datetime | None = None
    provenance: Provenance = Provenance.HUMAN


@dataclass(frozen=True)
class ResearchObject:
    id: Iri
    ro_type: RoType
    status: LifecycleStatus = LifecycleStatus.LIVE
    creators: tuple[str, ...] = ()
    created: datetime | None = None
    modified: datetime | None = None
    resources: tuple[Resource, ...] = ()
    annotations: tuple[Annotation, ...] = ()
    es_meta: EarthScienceMetadata = field(default_factory=EarthScienceMetadata)

    def resource_ids(self) -> set[Iri]:
        return {r.id for r in self.resources}

    def get_resource(self, res_id: Iri) -> Resource | None:
        for r in self.resources:
            if r.id == res_id:
                return r
        return None

    def statements(self) -> list[Statement]:
        """All annotation-body statements, in annotation order."""
        return [s for a in self.annotations for s in a.body]


@dataclass(frozen=True)
class Violation:
    """A named invariant breach; violations are data, not exceptions."""

    field: str
    rule: str
    message: str


DOI_PATTERN = re.compile(r"^10\.\d{2,9}/\S+$")


def utcnow() -> datetime:
    return datetime.now(timezone.utc).replace(microsecond=0)


def _as_utc(ts: datetime) -> datetime:
    if ts.tzinfo is None:
        return ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def new_ro(
    ro_id: Iri,
    ro_type: RoType,
    creator: str,
    now: datetime | None = None,
) -> ResearchObject:
    """Build a fresh Live research object (store-level uniqueness is
    checked by :meth:`roengine.store.RoStore.create_ro`)."""
    ts = _as_utc(now) if now else utcnow()
    return ResearchObject(
        id=ro_id,
        ro_type=ro_type,
        status=LifecycleStatus.LIVE,
        creators=(creator,),
        created=ts,
        modified=ts,
    )


def _check_mutable(ro: ResearchObject) -> None:
    if not ro.status.mutable:
        raise ImmutableObject(f"{ro.id} has immutable status {ro.status.value}")


def add_resource(
    ro: ResearchObject, res: Resource, now: datetime | None = None
) -> ResearchObject:
    """Return a copy of ``ro`` aggregating ``res``; the input is unchanged."""
    _check_mutable(ro)
    if res.id in ro.resource_ids():
        raise DuplicateResource(f"resource {res.id} already aggregated")
    return replace(
        ro,
        resources=ro.resources + (res,),
        modified=_as_utc(now) if now else utcnow(),
    )


def _next_annotation_id(ro: ResearchObject) -> Iri:
    base = ro.id.value.rstrip("/")
    taken = {a.id.value for a in ro.annotations}
    n = len(ro.annotations) + 1
    while f"{base}/annotations/{n}" in taken:
        n += 1
    return Iri(f"{base}/annotations/{n}")


def annotate(
    ro: ResearchObject,
    target: Iri,
    body: list[Statement] | tuple[Statement, ...],
    creator: str,
    provenance: Provenance = Provenance.HUMAN,
    now: datetime | None = None,
) -> ResearchObject:
    """Append an annotation on ``target`` (the RO itself or one of its
    resources) with a fresh id and timestamp."""
    _check_mutable(ro)
    if target != ro.id and target not in ro.resource_ids():
        raise UnknownTarget(f"annotation target {target} not in {ro.id}")
    if not body:
        raise EmptyBody("annotation body must contain at least one statement")
    ts = _as_utc(now) if now else utcnow()
    ann = Annotation(
        id=_next_annotation_id(ro),
        target=target,
        body=tuple(body),
        creator=creator,
        created=ts,
        provenance=provenance,
    )
    return replace(ro, annotations=ro.annotations + (ann,), modified=ts)


def validate(ro: ResearchObject) -> list[Violation]:
    """Check every type invariant; an empty list means the RO is well formed."""
    out: list[Violation] = []

    def bad(fld: str, rule: str, msg: str) -> None:
        out.append(Violation(fld, rule, msg))

    if not ro.id.value:
        bad("id", "non-empty", "research object id is empty")
    elif not ro.id.scheme:
        bad("id", "has-scheme", f"id {ro.id.value!r} has no scheme")

    seen: set[Iri] = set()
    for res in ro.resources:
        if res.id in seen:
            bad("resources", "unique-ids", f"duplicate resource id {res.id}")
        seen.add(res.id)
        if not res.id.scheme:
            bad("resources", "has-scheme", f"resource id {res.id.value!r} has no scheme")
        if res.size_bytes < 0:
            bad("resources", "size-nonnegative", f"{res.id} has negative size")
        if res.content_text is not None:
            actual = len(res.content_text.encode("utf-8"))
            if res.size_bytes != actual:
                bad(
                    "resources",
                    "size-matches-content",
                    f"{res.id} declares {res.size_bytes} bytes, inline content is {actual}",
                )

    for ann in ro.annotations:
        if ann.target != ro.id and ann.target not in seen:
            bad("annotations", "target-resolvable", f"{ann.id} targets unknown {ann.target}")
        if not ann.body:
            bad("annotations", "body-non-empty", f"{ann.id} has an empty body")
        owned = {ro.id} | seen | {a.id for a in ro.annotations}
        for stmt in ann.body:
            if not stmt.subject.scheme:
                bad("annotations", "statement-subject-iri", f"{ann.id}: subject {stmt.subject.value!r} has no scheme")
            if not stmt.predicate.scheme:
                bad("annotations", "statement-predicate-iri", f"{ann.id}: predicate {stmt.predicate.value!r} has no scheme")
            if stmt.predicate.value in vocab.RESERVED_PREDICATES:
                bad("annotations", "reserved-predicate", f"{ann.id}: {stmt.predicate.value} is reserved")
            if (
                stmt.predicate.value == vocab.RDF_TYPE
                and isinstance(stmt.object, Iri)
                and stmt.object.value in (vocab.RO_RESEARCH_OBJECT, vocab.OA_ANNOTATION)
            ):
                bad("annotations", "reserved-class", f"{ann.id}: bodies may not declare new research objects or annotations")
            if (
                stmt.subject in owned
                and stmt.predicate.value in vocab.STRUCTURAL_PREDICATES
            ):
                bad(
                    "annotations",
                    "structural-predicate",
                    f"{ann.id}: {stmt.predicate.value} on {stmt.subject} collides with the manifest structure",
                )

    es = ro.es_meta
    if es.geospatial is not None:
        g = es.geospatial
        if not (-180.0 <= g.west <= g.east <= 180.0):
            bad("esMeta.geospatial", "lon-ordering", f"need -180 <= west <= east <= 180, got [{g.west}, {g.east}]")
        if not (-90.0 <= g.south <= g.north <= 90.0):
            bad("esMeta.geospatial", "lat-ordering", f"need -90 <= south <= north <= 90, got [{g.south}, {g.north}]")
    if es.time_period is not None and es.time_period.start > es.time_period.end:
        bad("esMeta.timePeriod", "start-before-end", "time period start is after end")
    if es.ipr is not None and es.ipr.start_year is not None:
        if not 1000 <= es.ipr.start_year <= 9999:
            bad("esMeta.ipr", "four-digit-year", f"copyright start year {es.ipr.start_year} is not a 4-digit year")
    if es.doi is not None and not DOI_PATTERN.match(es.doi):
        bad("esMeta.doi", "doi-pattern", f"doi {es.doi!r} does not match 10.<registrant>/<suffix>")

    return out
