"""Canonical manifest serialization for research objects.

The format is a restricted Turtle-style grammar: a fixed prefix block
followed by one sorted triple per line. Sorting plus pinned prefix order
makes serialization byte-deterministic, so equal research objects always
produce identical manifests and manifests diff cleanly.

Annotation bodies are emitted twice over: every body statement appears as
a plain triple (so downstream consumers see the metadata directly), and
the owning annotation lists a content digest per body statement so the
parser can reassign statements to bodies losslessly. Within one body,
statements behave as a set.
"""

from __future__ import annotations

import hashlib
import re
from datetime import datetime, timezone

from . import vocab
from .errors import ManifestSyntaxError, ModelError
from .model import (
    AccessLevel,
    AccessPolicy,
    Annotation,
    EarthScienceMetadata,
    GeoExtent,
    IprInfo,
    Iri,
    LifecycleStatus,
    Literal,
    Provenance,
    Resource,
    ResourceKind,
    ResearchObject,
    RoType,
    Statement,
    Term,
    TimePeriod,
    validate,
)

MANIFEST_EXTENSION = ".ttl-ro"

_LOCAL_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_-]*$")
_DATETIME_RE = re.compile(
    r"^(\d{4})-(\d{2})-(\d{2})T(\d{2}):(\d{2}):(\d{2})(?:\.(\d{1,6}))?Z$"
)

_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}
_UNESCAPES = {"\\": "\\", '"': '"', "n": "\n", "r": "\r", "t": "\t"}


# ---------------------------------------------------------------------------
# Term rendering
# ---------------------------------------------------------------------------

def _escape(text: str) -> str:
    out = []
    for ch in text:
        if ch in _ESCAPES:
            out.append(_ESCAPES[ch])
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


def render_iri(iri: Iri) -> str:
    for prefix, ns in vocab.PREFIXES:
        if iri.value.startswith(ns):
            local = iri.value[len(ns):]
            if _LOCAL_RE.match(local):
                return f"{prefix}:{local}"
    return f"<{iri.value}>"


def render_term(term: Term) -> str:
    if isinstance(term, Iri):
        return render_iri(term)
    text = f'"{_escape(term.text)}"'
    if term.datatype:
        return f"{text}^^{render_iri(Iri(term.datatype))}"
    return text


def _render_predicate(pred: Iri) -> str:
    if pred.value == vocab.RDF_TYPE:
        return "a"
    return render_iri(pred)


def render_statement(stmt: Statement) -> str:
    """Canonical one-space form used for sorting keys and body digests."""
    return (
        f"{render_iri(stmt.subject)} {_render_predicate(stmt.predicate)} "
        f"{render_term(stmt.object)}"
    )


def statement_digest(stmt: Statement) -> str:
    return hashlib.sha256(render_statement(stmt).encode("utf-8")).hexdigest()[:16]


def _dt_literal(ts: datetime) -> Literal:
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    ts = ts.astimezone(timezone.utc)
    base = ts.strftime("%Y-%m-%dT%H:%M:%S")
    if ts.microsecond:
        base += f".{ts.microsecond:06d}".rstrip("0")
    return Literal(base + "Z", vocab.XSD_DATETIME)


def _int_literal(n: int) -> Literal:
    return Literal(str(n), vocab.XSD_INTEGER)


def _dec_literal(x: float) -> Literal:
    return Literal(repr(float(x)), vocab.XSD_DECIMAL)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def structural_statements(ro: ResearchObject) -> list[Statement]:
    """The statements encoding the research object's own structure
    (identity, lifecycle, resources, metadata and annotation headers),
    without the body-ownership digests."""
    s: list[Statement] = []
    rid = ro.id

    def emit(subj: Iri, pred: str, obj: Term) -> None:
        s.append(Statement(subj, Iri(pred), obj))

    emit(rid, vocab.RDF_TYPE, Iri(vocab.RO_RESEARCH_OBJECT))
    emit(rid, vocab.ROES_RO_TYPE, Literal(ro.ro_type.value))
    emit(rid, vocab.ROEVO_STATUS, Literal(ro.status.value))
    for creator in ro.creators:
        emit(rid, vocab.DC_CREATOR, Literal(creator))
    if ro.created is not None:
        emit(rid, vocab.DC_CREATED, _dt_literal(ro.created))
    if ro.modified is not None:
        emit(rid, vocab.DC_MODIFIED, _dt_literal(ro.modified))

    for res in ro.resources:
        emit(rid, vocab.ORE_AGGREGATES, res.id)
        emit(res.id, vocab.ROES_KIND, Literal(res.kind.value))
        emit(res.id, vocab.ROES_SIZE_BYTES, _int_literal(res.size_bytes))
        if res.media_type:
            emit(res.id, vocab.DC_FORMAT, Literal(res.media_type))
        if res.content_ref is not None:
            emit(res.id, vocab.ROES_CONTENT_REF, Literal(res.content_ref))
        if res.content_text is not None:
            emit(res.id, vocab.ROES_CONTENT_TEXT, Literal(res.content_text))

    es = ro.es_meta
    if es.geospatial is not None:
        g = es.geospatial
        emit(rid, vocab.ROES_WEST, _dec_literal(g.west))
        emit(rid, vocab.ROES_SOUTH, _dec_literal(g.south))
        emit(rid, vocab.ROES_EAST, _dec_literal(g.east))
        emit(rid, vocab.ROES_NORTH, _dec_literal(g.north))
    if es.time_period is not None:
        emit(rid, vocab.ROES_PERIOD_START, _dt_literal(es.time_period.start))
        emit(rid, vocab.ROES_PERIOD_END, _dt_literal(es.time_period.end))
    if es.ipr is not None:
        # copyrightHolder doubles as the presence marker for the IPR block
        emit(rid, vocab.ROES_COPYRIGHT_HOLDER, Literal(es.ipr.copyright_holder))
        if es.ipr.start_year is not None:
            emit(rid, vocab.ROES_COPYRIGHT_YEAR, _int_literal(es.ipr.start_year))
        if es.ipr.license:
            emit(rid, vocab.DC_LICENSE, Literal(es.ipr.license))
        if es.ipr.attribution:
            emit(rid, vocab.ROES_ATTRIBUTION, Literal(es.ipr.attribution))
    if es.access is not None:
        emit(rid, vocab.ROES_ACCESS_LEVEL, Literal(es.access.level.value))
        if es.access.policy:
            emit(rid, vocab.ROES_ACCESS_POLICY, Literal(es.access.policy))
    if es.discipline:
        emit(rid, vocab.ROES_DISCIPLINE, Literal(es.discipline))
    if es.doi is not None:
        emit(rid, vocab.ROES_DOI, Literal(es.doi))
    if es.community:
        emit(rid, vocab.ROES_COMMUNITY, Literal(es.community))

    for ann in ro.annotations:
        emit(ann.id, vocab.RDF_TYPE, Iri(vocab.OA_ANNOTATION))
        emit(ann.id, vocab.OA_HAS_TARGET, ann.target)
        if ann.creator:
            emit(ann.id, vocab.DC_CREATOR, Literal(ann.creator))
        if ann.created is not None:
            emit(ann.id, vocab.DC_CREATED, _dt_literal(ann.created))
        emit(ann.id, vocab.ROES_PROVENANCE, Literal(ann.provenance.value))

    return s


def ro_statements(ro: ResearchObject) -> list[Statement]:
    """Structural statements plus all annotation bodies: the full
    statement view that quality rules and facet indexing query."""
    return structural_statements(ro) + ro.statements()


def serialize_manifest(ro: ResearchObject) -> str:
    triples = structural_statements(ro)
    for ann in ro.annotations:
        for stmt in ann.body:
            triples.append(stmt)
            triples.append(
                Statement(
                    ann.id,
                    Iri(vocab.ROES_BODY_DIGEST),
                    Literal(statement_digest(stmt)),
                )
            )

    lines = sorted(
        {
            (
                render_iri(t.subject),
                _render_predicate(t.predicate),
                render_term(t.object),
            )
            for t in triples
        }
    )
    out = [f"@prefix {p}: <{ns}> ." for p, ns in vocab.PREFIXES]
    out.append("")
    out.extend(f"{s}  {p}  {o} ." for s, p, o in lines)
    out.append("")
    return "\n".join(out)


def structurally_equal(a: ResearchObject, b: ResearchObject) -> bool:
    """Equality up to statement/annotation ordering: two research objects
    are structurally equal exactly when their manifests are byte-identical."""
    return serialize_manifest(a) == serialize_manifest(b)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

class _LineScanner:
    """Single-line token scanner with column tracking."""

    def __init__(self, text: str, line_no: int):
        self.text = text
        self.pos = 0
        self.line_no = line_no

    def error(self, msg: str) -> ManifestSyntaxError:
        return ManifestSyntaxError(msg, self.line_no, self.pos + 1)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def expect(self, ch: str) -> None:
        self.skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != ch:
            raise self.error(f"expected {ch!r}")
        self.pos += 1

    def _read_iriref(self) -> str:
        # caller consumed '<'
        end = self.text.find(">", self.pos)
        if end < 0:
            raise self.error("unterminated IRI reference")
        value = self.text[self.pos:end]
        self.pos = end + 1
        return value

    def _read_quoted(self) -> str:
        # caller consumed the opening quote
        out: list[str] = []
        while True:
            if self.pos >= len(self.text):
                raise self.error("unterminated string literal")
            ch = self.text[self.pos]
            if ch == '"':
                self.pos += 1
                return "".join(out)
            if ch == "\\":
                self.pos += 1
                if self.pos >= len(self.text):
                    raise self.error("dangling escape")
                esc = self.text[self.pos]
                if esc in _UNESCAPES:
                    out.append(_UNESCAPES[esc])
                    self.pos += 1
                elif esc == "u":
                    hexpart = self.text[self.pos + 1:self.pos + 5]
                    if len(hexpart) < 4 or any(c not in "0123456789abcdefABCDEF" for c in hexpart):
                        raise self.error("bad \\u escape")
                    out.append(chr(int(hexpart, 16)))
                    self.pos += 5
                else:
                    raise self.error(f"unknown escape \\{esc}")
            else:
                out.append(ch)
                self.pos += 1

    def _read_curie(self, prefixes: dict[str, str]) -> str:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] not in " \t":
            self.pos += 1
        token = self.text[start:self.pos]
        if ":" not in token:
            self.pos = start
            raise self.error(f"expected an IRI, prefixed name or literal, got {token!r}")
        prefix, local = token.split(":", 1)
        if prefix not in prefixes:
            self.pos = start
            raise self.error(f"unknown prefix {prefix!r}")
        return prefixes[prefix] + local

    def read_iri(self, prefixes: dict[str, str]) -> Iri:
        self.skip_ws()
        if self.pos >= len(self.text):
            raise self.error("unexpected end of line")
        if self.text[self.pos] == "<":
            self.pos += 1
            return Iri(self._read_iriref())
        return Iri(self._read_curie(prefixes))

    def read_predicate(self, prefixes: dict[str, str]) -> Iri:
        self.skip_ws()
        if self.text[self.pos:self.pos + 2] in ("a ", "a\t"):
            self.pos += 1
            return Iri(vocab.RDF_TYPE)
        return self.read_iri(prefixes)

    def read_term(self, prefixes: dict[str, str]) -> Term:
        self.skip_ws()
        if self.pos >= len(self.text):
            raise self.error("unexpected end of line")
        if self.text[self.pos] == '"':
            self.pos += 1
            text = self._read_quoted()
            datatype = None
            if self.text[self.pos:self.pos + 2] == "^^":
                self.pos += 2
                datatype = self.read_iri(prefixes).value
            return Literal(text, datatype)
        return self.read_iri(prefixes)


_PREFIX_LINE_RE = re.compile(r"^@prefix\s+([A-Za-z][A-Za-z0-9_-]*):\s+<([^>]*)>\s+\.\s*$")


def parse_statements(text: str) -> list[Statement]:
    """Parse manifest text into raw statements (syntax level only)."""
    prefixes: dict[str, str] = {}
    triples: list[Statement] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("@"):
            m = _PREFIX_LINE_RE.match(line)
            if not m:
                raise ManifestSyntaxError("malformed @prefix line", line_no)
            prefixes[m.group(1)] = m.group(2)
            continue
        sc = _LineScanner(raw, line_no)
        subj = sc.read_iri(prefixes)
        pred = sc.read_predicate(prefixes)
        obj = sc.read_term(prefixes)
        sc.expect(".")
        if not sc.at_end():
            raise sc.error("trailing content after '.'")
        triples.append(Statement(subj, pred, obj))
    return triples


def _literal_text(term: Term, what: str) -> str:
    if not isinstance(term, Literal):
        raise ModelError(f"{what} must be a literal")
    return term.text


def _parse_dt(text: str, what: str) -> datetime:
    m = _DATETIME_RE.match(text)
    if not m:
        raise ModelError(f"{what}: bad timestamp {text!r}")
    y, mo, d, h, mi, s = (int(m.group(i)) for i in range(1, 7))
    us = int(m.group(7).ljust(6, "0")) if m.group(7) else 0
    return datetime(y, mo, d, h, mi, s, us, tzinfo=timezone.utc)


class _TripleView:
    """Index of parsed triples with consumption tracking."""

    def __init__(self, triples: list[Statement]):
        self.triples = list(dict.fromkeys(triples))
        self.by_sp: dict[tuple[str, str], list[Statement]] = {}
        for t in self.triples:
            self.by_sp.setdefault((t.subject.value, t.predicate.value), []).append(t)
        self.consumed: set[Statement] = set()

    def all(self, subj: Iri, pred: str) -> list[Term]:
        hits = self.by_sp.get((subj.value, pred), [])
        self.consumed.update(hits)
        return [t.object for t in hits]

    def one(self, subj: Iri, pred: str, required: bool = False) -> Term | None:
        objs = self.all(subj, pred)
        if len(objs) > 1:
            raise ModelError(f"multiple values for {pred} on {subj}")
        if not objs:
            if required:
                raise ModelError(f"missing {pred} on {subj}")
            return None
        return objs[0]

    def text(self, subj: Iri, pred: str) -> str | None:
        obj = self.one(subj, pred)
        return None if obj is None else _literal_text(obj, pred)


def parse_manifest(text: str) -> ResearchObject:
    view = _TripleView(parse_statements(text))

    ro_ids = [
        t.subject
        for t in view.triples
        if t.predicate.value == vocab.RDF_TYPE
        and isinstance(t.object, Iri)
        and t.object.value == vocab.RO_RESEARCH_OBJECT
    ]
    if len(ro_ids) != 1:
        raise ModelError(f"manifest must describe exactly one research object, found {len(ro_ids)}")
    rid = ro_ids[0]
    view.all(rid, vocab.RDF_TYPE)

    try:
        ro_type = RoType(view.text(rid, vocab.ROES_RO_TYPE) or "")
    except ValueError as exc:
        raise ModelError(f"unknown research object type: {exc}") from None
    try:
        status = LifecycleStatus(view.text(rid, vocab.ROEVO_STATUS) or "")
    except ValueError as exc:
        raise ModelError(f"unknown lifecycle status: {exc}") from None

    creators = tuple(sorted(_literal_text(o, "creator") for o in view.all(rid, vocab.DC_CREATOR)))
    created_txt = view.text(rid, vocab.DC_CREATED)
    modified_txt = view.text(rid, vocab.DC_MODIFIED)

    resources = []
    res_ids = view.all(rid, vocab.ORE_AGGREGATES)
    for obj in res_ids:
        if not isinstance(obj, Iri):
            raise ModelError("aggregated resource id must be an IRI")
    for res_id in sorted((o for o in res_ids if isinstance(o, Iri)), key=lambda i: i.value):
        kind_txt = view.text(res_id, vocab.ROES_KIND)
        if kind_txt is None:
            raise ModelError(f"aggregated resource {res_id} has no kind")
        try:
            kind = ResourceKind(kind_txt)
        except ValueError:
            raise ModelError(f"unknown resource kind {kind_txt!r}") from None
        size_txt = view.text(res_id, vocab.ROES_SIZE_BYTES)
        try:
            size = int(size_txt) if size_txt is not None else 0
        except ValueError:
            raise ModelError(f"bad sizeBytes on {res_id}: {size_txt!r}") from None
        resources.append(
            Resource(
                id=res_id,
                kind=kind,
                media_type=view.text(res_id, vocab.DC_FORMAT) or "",
                size_bytes=size,
                content_ref=view.text(res_id, vocab.ROES_CONTENT_REF),
                content_text=view.text(res_id, vocab.ROES_CONTENT_TEXT),
            )
        )

    es_meta = _parse_es_meta(view, rid)

    digest_map = {statement_digest(t): t for t in view.triples}
    ann_ids = sorted(
        (
            t.subject
            for t in view.triples
            if t.predicate.value == vocab.RDF_TYPE
            and isinstance(t.object, Iri)
            and t.object.value == vocab.OA_ANNOTATION
        ),
        key=lambda i: i.value,
    )
    annotations = []
    for ann_id in ann_ids:
        view.all(ann_id, vocab.RDF_TYPE)
        target = view.one(ann_id, vocab.OA_HAS_TARGET, required=True)
        if not isinstance(target, Iri):
            raise ModelError(f"annotation {ann_id} target must be an IRI")
        prov_txt = view.text(ann_id, vocab.ROES_PROVENANCE)
        try:
            prov = Provenance(prov_txt) if prov_txt else Provenance.HUMAN
        except ValueError:
            raise ModelError(f"unknown provenance {prov_txt!r}") from None
        created_ann = view.text(ann_id, vocab.DC_CREATED)
        body = []
        for obj in view.all(ann_id, vocab.ROES_BODY_DIGEST):
            digest = _literal_text(obj, "body digest")
            stmt = digest_map.get(digest)
            if stmt is None:
                raise ModelError(f"annotation {ann_id} references missing body statement {digest}")
            view.consumed.add(stmt)
            body.append(stmt)
        body.sort(key=render_statement)
        annotations.append(
            Annotation(
                id=ann_id,
                target=target,
                body=tuple(body),
                creator=view.text(ann_id, vocab.DC_CREATOR) or "",
                created=_parse_dt(created_ann, "annotation created") if created_ann else None,
                provenance=prov,
            )
        )

    leftovers = [t for t in view.triples if t not in view.consumed]
    if leftovers:
        raise ModelError(
            f"statement not owned by the research object structure or any annotation: "
            f"{render_statement(leftovers[0])}"
        )

    ro = ResearchObject(
        id=rid,
        ro_type=ro_type,
        status=status,
        creators=creators,
        created=_parse_dt(created_txt, "created") if created_txt else None,
        modified=_parse_dt(modified_txt, "modified") if modified_txt else None,
        resources=tuple(resources),
        annotations=tuple(annotations),
        es_meta=es_meta,
    )
    violations = validate(ro)
    if violations:
        raise ModelError("; ".join(f"{v.field}/{v.rule}: {v.message}" for v in violations))
    return ro


def _parse_float(text: str | None, what: str) -> float | None:
    if text is None:
        return None
    try:
        return float(text)
    except ValueError:
        raise ModelError(f"bad {what}: {text!r}") from None


def _parse_es_meta(view: _TripleView, rid: Iri) -> EarthScienceMetadata:
    west = _parse_float(view.text(rid, vocab.ROES_WEST), "west")
    south = _parse_float(view.text(rid, vocab.ROES_SOUTH), "south")
    east = _parse_float(view.text(rid, vocab.ROES_EAST), "east")
    north = _parse_float(view.text(rid, vocab.ROES_NORTH), "north")
    coords = (west, south, east, north)
    geospatial = None
    if any(c is not None for c in coords):
        if any(c is None for c in coords):
            raise ModelError("geospatial extent needs all four of west/south/east/north")
        geospatial = GeoExtent(west, south, east, north)  # type: ignore[arg-type]

    start_txt = view.text(rid, vocab.ROES_PERIOD_START)
    end_txt = view.text(rid, vocab.ROES_PERIOD_END)
    time_period = None
    if start_txt is not None or end_txt is not None:
        if start_txt is None or end_txt is None:
            raise ModelError("time period needs both start and end")
        time_period = TimePeriod(
            _parse_dt(start_txt, "period start"), _parse_dt(end_txt, "period end")
        )

    holder = view.text(rid, vocab.ROES_COPYRIGHT_HOLDER)
    year_txt = view.text(rid, vocab.ROES_COPYRIGHT_YEAR)
    license_txt = view.text(rid, vocab.DC_LICENSE)
    attribution = view.text(rid, vocab.ROES_ATTRIBUTION)
    ipr = None
    if holder is not None or year_txt is not None or license_txt is not None or attribution is not None:
        try:
            year = int(year_txt) if year_txt is not None else None
        except ValueError:
            raise ModelError(f"bad copyright year {year_txt!r}") from None
        ipr = IprInfo(
            copyright_holder=holder or "",
            start_year=year,
            license=license_txt or "",
            attribution=attribution or "",
        )

    level_txt = view.text(rid, vocab.ROES_ACCESS_LEVEL)
    policy_txt = view.text(rid, vocab.ROES_ACCESS_POLICY)
    access = None
    if level_txt is not None:
        try:
            access = AccessPolicy(AccessLevel(level_txt), policy_txt or "")
        except ValueError:
            raise ModelError(f"unknown access level {level_txt!r}") from None
    elif policy_txt is not None:
        raise ModelError("access policy text without an access level")

    return EarthScienceMetadata(
        geospatial=geospatial,
        time_period=time_period,
        ipr=ipr,
        access=access,
        discipline=view.text(rid, vocab.ROES_DISCIPLINE) or "",
        doi=view.text(rid, vocab.ROES_DOI),
        community=view.text(rid, vocab.ROES_COMMUNITY) or "",
    )
