"""HTTP surface: every route, auth, error mapping, OpenSearch documents."""

import pytest
from fastapi.testclient import TestClient

from roengine import vocab
from roengine.api import create_app, load_tokens
from roengine.manifest import serialize_manifest
from roengine.model import (
    AccessLevel,
    AccessPolicy,
    EarthScienceMetadata,
    GeoExtent,
    Iri,
    Literal,
    Resource,
    ResourceKind,
    Statement,
    RoType,
    add_resource,
    annotate,
    new_ro,
)
from roengine.store import RoStore


def build_ro(name, creator="alice", public=True, geo=None, text=None, title=None):
    from dataclasses import replace

    ro = new_ro(Iri(f"urn:ro:{name}"), RoType.DATA_CENTRIC, creator)
    es = EarthScienceMetadata(
        access=AccessPolicy(AccessLevel.PUBLIC if public else AccessLevel.PRIVATE),
        geospatial=geo,
        discipline="sea monitoring",
    )
    ro = replace(ro, es_meta=es)
    if text:
        ro = add_resource(
            ro,
            Resource(Iri(f"urn:ro:{name}/doc"), ResourceKind.DOCUMENT, "text/plain",
                     len(text.encode()), content_text=text),
        )
    if title:
        ro = annotate(
            ro, ro.id, [Statement(ro.id, Iri(vocab.DC_TITLE), Literal(title))], creator
        )
    return ro


@pytest.fixture
def service(tmp_path):
    store = RoStore(tmp_path / "store")
    for name, text, geo in (
        ("alpha", "volcano deformation analysis for the supersite", GeoExtent(10, 40, 20, 45)),
        ("beta", "jellyfish distribution trends in the adriatic", None),
        ("gamma", "volcano ash plume monitoring study", GeoExtent(-30, -10, -20, 0)),
    ):
        ro = build_ro(name, text=text, geo=geo, title=f"{name} study")
        store.add(ro)
    app = create_app(store, research_area_vocab=[("astronomy", "space science")])
    return store, TestClient(app)


def manifest_for(name, **kwargs):
    return serialize_manifest(build_ro(name, **kwargs))


# ---------------------------------------------------------------------------
# CRUD and landing
# ---------------------------------------------------------------------------

def test_create_ro_via_manifest(service):
    _store, client = service
    resp = client.post("/ros", content=manifest_for("fresh", text="new object"))
    assert resp.status_code == 201
    assert resp.headers["Location"] == "/ros/urn:ro:fresh"
    assert client.get("/ros/urn:ro:fresh").status_code == 200


def test_create_duplicate_conflict(service):
    _store, client = service
    body = manifest_for("dup")
    assert client.post("/ros", content=body).status_code == 201
    resp = client.post("/ros", content=body)
    assert resp.status_code == 409
    assert resp.json()["error"]["code"] == "DuplicateId"


def test_create_malformed_manifest(service):
    _store, client = service
    resp = client.post("/ros", content="@prefix broken\n")
    assert resp.status_code == 400
    assert resp.json()["error"]["code"] == "SyntaxError"


def test_listing_and_facet_params(service):
    _store, client = service
    everything = client.get("/ros").json()
    assert everything["total"] == 3
    filtered = client.get("/ros", params={"status": "Live", "size": 2}).json()
    assert filtered["total"] == 3
    assert len(filtered["items"]) == 2
    nothing = client.get("/ros", params={"status": "Archived"}).json()
    assert nothing["total"] == 0


def test_landing_json(service):
    _store, client = service
    body = client.get("/ros/urn:ro:alpha").json()
    assert body["id"] == "urn:ro:alpha"
    assert body["status"] == "Live"
    assert body["quality"]["checklist"] == "Basic"
    assert body["geospatial"] == {"west": 10.0, "south": 40.0, "east": 20.0, "north": 45.0}


def test_unknown_ro_404(service):
    _store, client = service
    resp = client.get("/ros/urn:ro:ghost")
    assert resp.status_code == 404
    assert resp.json()["error"]["code"] == "UnknownId"


def test_manifest_fidelity(service):
    store, client = service
    resp = client.get("/ros/urn:ro:alpha/manifest")
    assert resp.status_code == 200
    assert resp.content == store.manifest_bytes(Iri("urn:ro:alpha"))
    assert resp.content == serialize_manifest(store.load(Iri("urn:ro:alpha"))).encode("utf-8")


# ---------------------------------------------------------------------------
# lifecycle routes
# ---------------------------------------------------------------------------

def test_snapshot_archive_fork_flow(service):
    store, client = service
    snap = client.post("/ros/urn:ro:alpha/snapshot")
    assert snap.status_code == 201
    assert snap.json()["id"] == "urn:ro:alpha-snap-1"
    assert snap.json()["doi"]["doi"] == "10.5072/ro-1"
    landing = client.get("/ros/urn:ro:alpha-snap-1").json()
    assert landing["doi"] == "10.5072/ro-1"  # released landing carries its DOI

    arch = client.post("/ros/urn:ro:alpha/archive")
    assert arch.status_code == 201
    assert arch.json()["doi"]["doi"] == "10.5072/ro-2"

    fork = client.post("/ros/urn:ro:alpha/fork", json={"owner": "bob"})
    assert fork.status_code == 201
    forked = store.load(Iri(fork.json()["id"]))
    assert forked.creators == ("bob",)


def test_snapshot_of_snapshot_conflict(service):
    _store, client = service
    client.post("/ros/urn:ro:alpha/snapshot")
    resp = client.post("/ros/urn:ro:alpha-snap-1/snapshot")
    assert resp.status_code == 409
    assert resp.json()["error"]["code"] == "NotMutable"


def test_fork_private_conflict(service):
    _store, client = service
    client.post("/ros", content=manifest_for("secret", public=False))
    resp = client.post("/ros/urn:ro:secret/fork", json={"owner": "bob"})
    assert resp.status_code == 409
    assert resp.json()["error"]["code"] == "NotPublic"


# ---------------------------------------------------------------------------
# quality and enrichment routes
# ---------------------------------------------------------------------------

def test_quality_route(service):
    _store, client = service
    report = client.get("/ros/urn:ro:alpha/quality", params={"checklist": "Basic"}).json()
    assert report["checklist"] == "Basic"
    assert report["requirements"]["title"]["satisfied"] is True
    bad = client.get("/ros/urn:ro:alpha/quality", params={"checklist": "Nope"})
    assert bad.status_code == 400
    assert bad.json()["error"]["code"] == "UnknownChecklist"


def test_enrich_route(service):
    store, client = service
    resp = client.post("/ros/urn:ro:gamma/enrich")
    assert resp.status_code == 200
    assert resp.json()["segments"] == 1
    stored = store.load(Iri("urn:ro:gamma"))
    assert any(a.provenance.value == "Machine" for a in stored.annotations)


def test_enrich_immutable_conflict(service):
    _store, client = service
    snap = client.post("/ros/urn:ro:gamma/snapshot").json()["id"]
    resp = client.post(f"/ros/{snap}/enrich")
    assert resp.status_code == 409
    assert resp.json()["error"]["code"] == "ImmutableObject"


def test_late_minted_doi_shows_on_landing(tmp_path):
    # a released manifest arriving without a DOI record still lands with one
    from dataclasses import replace

    from roengine.lifecycle import LifecycleManager
    from roengine.model import LifecycleStatus

    store = RoStore(tmp_path / "late")
    released = replace(build_ro("ext", text="imported release"), status=LifecycleStatus.SNAPSHOT)
    store.add(released)
    app = create_app(store)
    client = TestClient(app)
    assert client.get("/ros/urn:ro:ext").json()["doi"] is None
    LifecycleManager(store).mint_doi(released)
    landing = client.get("/ros/urn:ro:ext").json()
    assert landing["doi"] == "10.5072/ro-1"
    # the stored manifest stays byte-identical: releases are immutable
    assert store.load(Iri("urn:ro:ext")).es_meta.doi is None


# ---------------------------------------------------------------------------
# search and recommendation routes
# ---------------------------------------------------------------------------

def test_search_route_with_bbox_and_facets(service):
    _store, client = service
    hits = client.get("/search", params={"q": "volcano"}).json()
    assert {r["id"] for r in hits["results"]} == {"urn:ro:alpha", "urn:ro:gamma"}

    boxed = client.get("/search", params={"q": "volcano", "bbox": "0,35,25,50"}).json()
    assert [r["id"] for r in boxed["results"]] == ["urn:ro:alpha"]

    faceted = client.get("/search", params={"discipline": "sea monitoring"}).json()
    assert faceted["total"] == 3

    bad = client.get("/search", params={"q": "x", "bbox": "20,0,10,5"})
    assert bad.status_code == 400
    assert bad.json()["error"]["code"] == "InvalidBox"


def test_recommend_route(service):
    _store, client = service
    resp = client.get(
        "/recommend", params={"context": "urn:ro:alpha", "config": "TextOnly", "n": 2}
    ).json()
    assert resp["results"][0]["id"] == "urn:ro:gamma"  # shares the volcano vocabulary
    assert resp["results"][0]["band"] == "inner"
    assert len(resp["results"]) == 2

    too_many = client.get("/recommend", params={"context": "a,b,c,d"})
    assert too_many.status_code == 400
    assert too_many.json()["error"]["code"] == "ContextSizeOutOfRange"

    missing = client.get("/recommend", params={"context": "urn:ro:ghost"})
    assert missing.status_code == 404
    assert missing.json()["error"]["code"] == "UnknownDocument"


# ---------------------------------------------------------------------------
# OpenSearch surface
# ---------------------------------------------------------------------------

def test_opensearch_description(service):
    _store, client = service
    resp = client.get("/opensearch.xml")
    assert resp.status_code == 200
    assert "opensearchdescription" in resp.headers["content-type"]
    assert "{searchTerms}" in resp.text
    assert "{geo:box?}" in resp.text


def test_opensearch_feed_corner_order(service):
    _store, client = service
    resp = client.get("/search.atom", params={"q": "volcano deformation supersite"})
    assert resp.status_code == 200
    assert "atom" in resp.headers["content-type"]
    # extent west=10 south=40 east=20 north=45 renders south west north east
    assert "<georss:box>40 10 45 20</georss:box>" in resp.text
    assert "<entry>" in resp.text


def test_opensearch_feed_empty_is_valid(service):
    _store, client = service
    resp = client.get("/search.atom", params={"q": "zzznothing"})
    assert resp.status_code == 200
    assert "<feed" in resp.text and "<entry>" not in resp.text


def test_opensearch_feed_bad_box(service):
    _store, client = service
    resp = client.get("/search.atom", params={"q": "volcano", "bbox": "bad"})
    assert resp.status_code == 400


# ---------------------------------------------------------------------------
# auth
# ---------------------------------------------------------------------------

@pytest.fixture
def secured(tmp_path):
    store = RoStore(tmp_path / "store")
    store.add(build_ro("open", creator="alice", public=True, title="public item"))
    store.add(build_ro("closed", creator="alice", public=False))
    tokens_file = tmp_path / "tokens.txt"
    tokens_file.write_text("alice-token alice\nbob-token bob\n")
    app = create_app(store, tokens=load_tokens(tokens_file))
    return TestClient(app)


def auth(token):
    return {"Authorization": f"Bearer {token}"}


def test_write_requires_token(secured):
    resp = secured.post("/ros", content=manifest_for("x1"))
    assert resp.status_code == 401
    ok = secured.post("/ros", content=manifest_for("x1"), headers=auth("alice-token"))
    assert ok.status_code == 201


def test_owner_or_public_read(secured):
    assert secured.get("/ros/urn:ro:open").status_code == 200
    assert secured.get("/ros/urn:ro:closed").status_code == 403
    assert secured.get("/ros/urn:ro:closed", headers=auth("alice-token")).status_code == 200
    assert secured.get("/ros/urn:ro:closed", headers=auth("bob-token")).status_code == 403


def test_owner_write_only(secured):
    resp = secured.post("/ros/urn:ro:open/snapshot", headers=auth("bob-token"))
    assert resp.status_code == 403
    ok = secured.post("/ros/urn:ro:open/snapshot", headers=auth("alice-token"))
    assert ok.status_code == 201


def test_fork_uses_token_agent(secured):
    resp = secured.post("/ros/urn:ro:open/fork", headers=auth("bob-token"))
    assert resp.status_code == 201
    landing = secured.get(f"/ros/{resp.json()['id']}", headers=auth("bob-token")).json()
    assert landing["creators"] == ["bob"]
