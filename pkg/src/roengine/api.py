"""HTTP facade over the store, lifecycle, quality, enrichment, search and
recommendation modules.

JSON everywhere except the OpenSearch surface, which is XML: a
description document advertising the search template (with ``{searchTerms}``
and ``{geo:box?}`` parameters, bbox ordered west,south,east,north) and an
Atom feed whose entries carry a georss box in south/west/north/east corner
order. Every modeled module error maps to exactly one (status, code) pair.
"""

from __future__ import annotations

import json
from pathlib import Path
from xml.sax.saxutils import escape

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse

from . import vocab
from .enrichment import KnowledgeLexicon, analyze, enrich, extract_text, starter_lexicon
from .errors import (
    ContextSizeOutOfRange,
    ImmutableObject,
    InvalidBox,
    RoEngineError,
    UnknownChecklist,
)
from .lifecycle import DoiRegistry, LifecycleManager, landing_url
from .manifest import parse_manifest
from .model import GeoExtent, Iri, Literal, ResearchObject
from .quality import checklist_by_name, evaluate
from .search import FACET_NAMES, SearchIndex
from .similarity import CorpusDocument, FeatureConfig, similar
from .store import RoStore

ERROR_STATUS = {
    "DuplicateId": 409,
    "UnknownId": 404,
    "DuplicateResource": 409,
    "ImmutableObject": 409,
    "UnknownTarget": 400,
    "EmptyBody": 400,
    "SyntaxError": 400,
    "ModelError": 400,
    "NotMutable": 409,
    "NotPublic": 409,
    "NotLive": 409,
    "NotReleased": 409,
    "RegistryUnavailable": 502,
    "UnknownChecklist": 400,
    "EmptyHistory": 400,
    "UnknownDocument": 404,
    "ContextSizeOutOfRange": 400,
    "UnknownCategory": 400,
    "NoPath": 400,
    "NoCommonAncestor": 400,
    "DatasetTooSmall": 400,
    "UnknownFacet": 400,
    "InvalidBox": 400,
    "EngineError": 400,
}


class ApiError(Exception):
    """Auth and request-shape failures raised by the HTTP layer itself."""

    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


def load_tokens(path: str | Path) -> dict[str, str]:
    """Static token file: one ``<token> <agent>`` pair per line."""
    tokens = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        token, _, agent = line.partition(" ")
        if not agent:
            raise ValueError(f"token line without agent: {line!r}")
        tokens[token] = agent.strip()
    return tokens


def _ro_title(ro: ResearchObject) -> str:
    for stmt in ro.statements():
        if stmt.predicate.value == vocab.DC_TITLE and isinstance(stmt.object, Literal):
            return stmt.object.text
    return ro.id.value


def _fmt_coord(value: float) -> str:
    return f"{value:g}"


def create_app(
    store: RoStore,
    lexicon: KnowledgeLexicon | None = None,
    tokens: dict[str, str] | None = None,
    registry: DoiRegistry | None = None,
    research_area_vocab: list[tuple[str, str]] | None = None,
) -> FastAPI:
    """Assemble the service; with ``tokens=None`` authentication is off
    (desk mode), otherwise writes need a bearer token and non-public
    research objects are readable by their creators only."""
    # the route table is the contract: no auto-generated docs endpoints
    app = FastAPI(
        title="roengine",
        version="0.1.0",
        docs_url=None,
        redoc_url=None,
        openapi_url=None,
    )
    lexicon = lexicon or starter_lexicon()
    lifecycle = LifecycleManager(store, registry)
    index = SearchIndex(research_area_vocab)
    for ro in store.load_all():
        index.index(ro)

    # ---- auth helpers ---------------------------------------------------

    def agent_of(request: Request) -> str | None:
        if tokens is None:
            return None
        header = request.headers.get("authorization", "")
        if header.lower().startswith("bearer "):
            return tokens.get(header[7:].strip())
        return None

    def require_agent(request: Request) -> str | None:
        if tokens is None:
            return None
        agent = agent_of(request)
        if agent is None:
            raise ApiError(401, "Unauthorized", "a valid bearer token is required")
        return agent

    def check_readable(ro: ResearchObject, request: Request) -> None:
        if tokens is None:
            return
        access = ro.es_meta.access
        if access is not None and access.level.value == "Public":
            return
        agent = agent_of(request)
        if agent is None or agent not in ro.creators:
            raise ApiError(403, "Forbidden", "owner-or-public read policy")

    def require_owner(ro: ResearchObject, request: Request) -> str | None:
        agent = require_agent(request)
        if tokens is not None and agent not in ro.creators:
            raise ApiError(403, "Forbidden", "only a creator may modify this research object")
        return agent

    # ---- error mapping ---------------------------------------------------

    @app.exception_handler(RoEngineError)
    async def engine_error(_request: Request, exc: RoEngineError):
        status = ERROR_STATUS.get(exc.code, 400)
        return JSONResponse(
            status_code=status,
            content={"error": {"code": exc.code, "message": str(exc)}},
        )

    @app.exception_handler(ApiError)
    async def api_error(_request: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status,
            content={"error": {"code": exc.code, "message": exc.message}},
        )

    # ---- helpers ----------------------------------------------------------

    def load_ro(ro_id: str) -> ResearchObject:
        return store.load(Iri(ro_id))

    def landing_json(ro: ResearchObject) -> dict:
        doi_record = lifecycle.doi_for(ro.id)
        basic = evaluate(ro, checklist_by_name("Basic"))
        es = ro.es_meta
        return {
            "id": ro.id.value,
            "roType": ro.ro_type.value,
            "status": ro.status.value,
            "creators": list(ro.creators),
            "created": ro.created.isoformat() if ro.created else None,
            "modified": ro.modified.isoformat() if ro.modified else None,
            "doi": es.doi or (doi_record.doi if doi_record else None),
            "doiRecord": doi_record.to_dict() if doi_record else None,
            "discipline": es.discipline,
            "community": es.community,
            "accessLevel": es.access.level.value if es.access else None,
            "geospatial": (
                {
                    "west": es.geospatial.west,
                    "south": es.geospatial.south,
                    "east": es.geospatial.east,
                    "north": es.geospatial.north,
                }
                if es.geospatial
                else None
            ),
            "resourceCount": len(ro.resources),
            "annotationCount": len(ro.annotations),
            "quality": {
                "checklist": basic.checklist_name,
                "completeness": basic.completeness,
                "passesMandatory": basic.passes_mandatory,
            },
        }

    def parse_bbox(raw: str) -> GeoExtent:
        parts = raw.split(",")
        if len(parts) != 4:
            raise InvalidBox(f"bbox must be west,south,east,north, got {raw!r}")
        try:
            west, south, east, north = (float(p) for p in parts)
        except ValueError:
            raise InvalidBox(f"bbox has a non-numeric coordinate: {raw!r}") from None
        box = GeoExtent(west, south, east, north)
        if not (-180.0 <= west <= east <= 180.0 and -90.0 <= south <= north <= 90.0):
            raise InvalidBox(f"bbox coordinates out of order or range: {raw!r}")
        return box

    def facet_selections(request: Request) -> dict[str, set[str]]:
        selections: dict[str, set[str]] = {}
        for facet in FACET_NAMES:
            values = request.query_params.getlist(facet)
            if values:
                selections[facet] = set(values)
        return selections

    def build_corpus() -> list[CorpusDocument]:
        docs = []
        for ro in store.load_all():
            extracted = extract_text(ro)
            docs.append(
                CorpusDocument(
                    doc_id=ro.id.value,
                    title=_ro_title(ro),
                    text=extracted.full_text(),
                    annotations=analyze(extracted, lexicon),
                )
            )
        return docs

    # ---- routes ------------------------------------------------------------

    @app.get("/ros")
    def list_ros(request: Request, page: int = 1, size: int = 20):
        selections = facet_selections(request)
        ids = sorted(i.value for i in store.list_ids())
        if selections:
            allowed = index.faceted_filter(selections)
            ids = [i for i in ids if i in allowed]
        total = len(ids)
        start = (max(page, 1) - 1) * size
        return {"items": ids[start:start + size], "page": page, "size": size, "total": total}

    @app.post("/ros", status_code=201)
    async def create_ro(request: Request):
        require_agent(request)
        body = (await request.body()).decode("utf-8")
        ro = parse_manifest(body)  # rejects syntax and model violations
        store.add(ro)
        index.index(ro)
        return JSONResponse(
            status_code=201,
            content={"id": ro.id.value},
            headers={"Location": landing_url(ro.id)},
        )

    @app.get("/ros/{ro_id:path}/manifest")
    def get_manifest(ro_id: str, request: Request):
        ro = load_ro(ro_id)
        check_readable(ro, request)
        return Response(
            content=store.manifest_bytes(Iri(ro_id)),
            media_type="text/plain; charset=utf-8",
        )

    @app.get("/ros/{ro_id:path}/quality")
    def get_quality(ro_id: str, request: Request, checklist: str = "Basic"):
        ro = load_ro(ro_id)
        check_readable(ro, request)
        try:
            cl = checklist_by_name(checklist)
        except UnknownChecklist:
            raise UnknownChecklist(f"no checklist named {checklist!r}") from None
        return evaluate(ro, cl).to_dict()

    @app.post("/ros/{ro_id:path}/snapshot", status_code=201)
    def snapshot_ro(ro_id: str, request: Request):
        ro = load_ro(ro_id)
        actor = require_owner(ro, request) or (ro.creators[0] if ro.creators else "")
        released, record = lifecycle.snapshot(ro, actor=actor)
        index.index(released)
        return JSONResponse(
            status_code=201,
            content={"id": released.id.value, "doi": record.to_dict()},
            headers={"Location": landing_url(released.id)},
        )

    @app.post("/ros/{ro_id:path}/archive", status_code=201)
    def archive_ro(ro_id: str, request: Request):
        ro = load_ro(ro_id)
        actor = require_owner(ro, request) or (ro.creators[0] if ro.creators else "")
        released, record = lifecycle.archive(ro, actor=actor)
        index.index(released)
        return JSONResponse(
            status_code=201,
            content={"id": released.id.value, "doi": record.to_dict()},
            headers={"Location": landing_url(released.id)},
        )

    @app.post("/ros/{ro_id:path}/fork", status_code=201)
    async def fork_ro(ro_id: str, request: Request):
        agent = require_agent(request)
        raw = await request.body()
        body = json.loads(raw) if raw else {}
        owner = body.get("owner") or agent
        if not owner:
            raise ApiError(400, "ModelError", "fork needs an owner")
        ro = load_ro(ro_id)
        forked = lifecycle.fork(ro, owner)
        index.index(forked)
        return JSONResponse(
            status_code=201,
            content={"id": forked.id.value},
            headers={"Location": landing_url(forked.id)},
        )

    @app.post("/ros/{ro_id:path}/enrich")
    def enrich_ro(ro_id: str, request: Request):
        ro = load_ro(ro_id)
        require_owner(ro, request)
        if not ro.status.mutable:
            raise ImmutableObject(f"{ro.id} has immutable status {ro.status.value}")
        enriched, report = enrich(ro, lexicon)
        if enriched is not ro:
            store.save(enriched)
            index.index(enriched)
        return {
            "id": ro_id,
            "segments": report.segments,
            "annotated": report.annotated,
            "warnings": list(report.warnings),
        }

    @app.get("/ros/{ro_id:path}")
    def get_ro(ro_id: str, request: Request):
        ro = load_ro(ro_id)
        check_readable(ro, request)
        return landing_json(ro)

    @app.get("/search")
    def search(request: Request, q: str = "", bbox: str = "", page: int = 1, size: int = 20):
        allowed: set[str] | None = None
        selections = facet_selections(request)
        if selections:
            allowed = index.faceted_filter(selections)
        if bbox:
            hits = index.geo_search(parse_bbox(bbox))
            allowed = hits if allowed is None else allowed & hits
        if q:
            ranked = index.full_text_search(q, page=1, size=len(index) or 1)
            if allowed is not None:
                ranked = [(i, s) for i, s in ranked if i in allowed]
        else:
            ids = sorted(allowed) if allowed is not None else []
            ranked = [(i, 0.0) for i in ids]
        start = (max(page, 1) - 1) * size
        pageful = ranked[start:start + size]
        return {
            "query": q,
            "total": len(ranked),
            "results": [{"id": i, "score": s} for i, s in pageful],
        }

    @app.get("/search.atom")
    def search_feed(request: Request, q: str = "", bbox: str = ""):
        box = parse_bbox(bbox) if bbox else None
        if q:
            hits = [i for i, _ in index.full_text_search(q, page=1, size=len(index) or 1)]
        else:
            hits = sorted(i.value for i in store.list_ids())
        if box is not None:
            geo_hits = index.geo_search(box)
            hits = [i for i in hits if i in geo_hits]
        entries = []
        for ro_id in hits:
            ro = load_ro(ro_id)
            entry = [
                "  <entry>",
                f"    <id>{escape(ro_id)}</id>",
                f"    <title>{escape(_ro_title(ro))}</title>",
                f'    <link href="{escape(landing_url(ro.id))}"/>',
            ]
            g = ro.es_meta.geospatial
            if g is not None:
                corners = (
                    f"{_fmt_coord(g.south)} {_fmt_coord(g.west)} "
                    f"{_fmt_coord(g.north)} {_fmt_coord(g.east)}"
                )
                entry.append(f"    <georss:box>{corners}</georss:box>")
            entry.append("  </entry>")
            entries.append("\n".join(entry))
        feed = "\n".join(
            [
                '<?xml version="1.0" encoding="UTF-8"?>',
                '<feed xmlns="http://www.w3.org/2005/Atom" xmlns:georss="http://www.georss.org/georss">',
                f"  <title>research object search: {escape(q)}</title>",
                f"  <id>{escape(str(request.url))}</id>",
                *entries,
                "</feed>",
                "",
            ]
        )
        return Response(content=feed, media_type="application/atom+xml; charset=utf-8")

    @app.get("/recommend")
    def recommend(context: str = "", config: str = "SemAllText", n: int = 10):
        ids = [c for c in context.split(",") if c]
        if not 1 <= len(ids) <= 3:
            raise ContextSizeOutOfRange(f"context must hold 1..3 ids, got {len(ids)}")
        try:
            cfg = FeatureConfig(config)
        except ValueError:
            raise ApiError(400, "UnknownConfig", f"unknown feature configuration {config!r}") from None
        corpus = build_corpus()
        results = similar(ids, corpus, cfg, n=n)
        return {
            "context": ids,
            "config": cfg.value,
            "results": [
                {"id": r.ro_id, "score": r.score, "band": r.band} for r in results
            ],
        }

    @app.get("/opensearch.xml")
    def opensearch_description(request: Request):
        base = str(request.base_url).rstrip("/")
        doc = "\n".join(
            [
                '<?xml version="1.0" encoding="UTF-8"?>',
                '<OpenSearchDescription xmlns="http://a9.com/-/spec/opensearch/1.1/"',
                '                       xmlns:geo="http://a9.com/-/opensearch/extensions/geo/1.0/">',
                "  <ShortName>roengine</ShortName>",
                "  <Description>Full-text and geospatial research object search</Description>",
                f'  <Url type="application/atom+xml" template="{base}/search.atom?q={{searchTerms}}&amp;bbox={{geo:box?}}"/>',
                f'  <Url type="application/json" template="{base}/search?q={{searchTerms}}&amp;bbox={{geo:box?}}"/>',
                "</OpenSearchDescription>",
                "",
            ]
        )
        return Response(content=doc, media_type="application/opensearchdescription+xml")

    return app
