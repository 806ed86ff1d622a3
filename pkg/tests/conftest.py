"""Shared fixtures and the randomized research-object generator."""

from __future__ import annotations

import random
from datetime import datetime, timedelta, timezone

import pytest

from roengine import vocab
from roengine.model import (
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
    TimePeriod,
)
from roengine.store import RoStore

EPOCH = datetime(2026, 1, 1, tzinfo=timezone.utc)

# annotation-body predicates that never collide with the manifest structure
BODY_PREDICATES = (
    vocab.DC_TITLE,
    vocab.DC_DESCRIPTION,
    vocab.DC_SUBJECT,
    vocab.SKOS_PREF_LABEL,
    vocab.CITO_CITES,
    vocab.PROV_DERIVED_FROM,
    vocab.ROES + "purpose",
    vocab.ROES + "inputData",
    vocab.ROES_RESEARCH_AREA,
    "https://example.org/vocab#relatesTo",
)

_TEXT_POOL = (
    "habitat suitability model",
    "volcanic unrest at Campi Flegrei",
    'quoted "text" with backslash \\ inside',
    "multi\nline\ttext",
    "ünïcode — løng dashes and Ωmega",
    "植被监测",
    "plain words",
    "",
)


def _ts(rng: random.Random) -> datetime:
    return EPOCH + timedelta(
        days=rng.randrange(365),
        seconds=rng.randrange(86400),
        microseconds=rng.choice((0, 0, rng.randrange(1_000_000))),
    )


def _literal(rng: random.Random) -> Literal:
    if rng.random() < 0.2:
        return Literal(str(rng.randrange(10_000)), vocab.XSD_INTEGER)
    return Literal(rng.choice(_TEXT_POOL), None if rng.random() < 0.8 else vocab.XSD + "string")


def random_ro(rng: random.Random, idx: int) -> ResearchObject:
    """A validate-clean research object with randomized structure."""
    rid = Iri(f"urn:ro:gen-{idx}")
    resources = []
    for r in range(rng.randrange(4)):
        res_id = Iri(f"{rid.value}/res-{r}")
        if rng.random() < 0.5:
            text = rng.choice(_TEXT_POOL)
            resources.append(
                Resource(
                    id=res_id,
                    kind=rng.choice(list(ResourceKind)),
                    media_type=rng.choice(("text/plain", "application/pdf", "")),
                    size_bytes=len(text.encode("utf-8")),
                    content_text=text,
                )
            )
        else:
            resources.append(
                Resource(
                    id=res_id,
                    kind=rng.choice(list(ResourceKind)),
                    media_type="text/plain",
                    size_bytes=rng.randrange(10_000),
                    content_ref=rng.choice(("blob:abc123", "https://example.org/data.csv")),
                )
            )

    subjects = [rid] + [r.id for r in resources] + [
        Iri(f"{rid.value}/subject/{rng.randrange(10**9)}")
    ]
    annotations = []
    for a in range(rng.randrange(4)):
        body = set()
        for _ in range(rng.randrange(1, 5)):
            obj = _literal(rng) if rng.random() < 0.6 else Iri(f"urn:ro:other-{rng.randrange(50)}")
            body.add(
                Statement(rng.choice(subjects), Iri(rng.choice(BODY_PREDICATES)), obj)
            )
        annotations.append(
            Annotation(
                id=Iri(f"{rid.value}/annotations/{a + 1}"),
                target=rng.choice([rid] + [r.id for r in resources]),
                body=tuple(sorted(body, key=repr)),
                creator=rng.choice(("alice", "bob", "")),
                created=_ts(rng) if rng.random() < 0.8 else None,
                provenance=rng.choice(list(Provenance)),
            )
        )

    es = EarthScienceMetadata()
    if rng.random() < 0.5:
        west, east = sorted(rng.uniform(-180, 180) for _ in range(2))
        south, north = sorted(rng.uniform(-90, 90) for _ in range(2))
        es = EarthScienceMetadata(geospatial=GeoExtent(west, south, east, north))
    if rng.random() < 0.4:
        start = _ts(rng)
        es = EarthScienceMetadata(
            geospatial=es.geospatial,
            time_period=TimePeriod(start, start + timedelta(days=rng.randrange(1, 400))),
        )
    ipr = None
    if rng.random() < 0.4:
        ipr = IprInfo(
            copyright_holder=rng.choice(("CNR-ISMAR", "INGV", "")),
            start_year=rng.choice((None, rng.randrange(1990, 2027))),
            license=rng.choice(("CC-BY-4.0", "")),
            attribution=rng.choice(("cite the source", "")),
        )
    access = None
    if rng.random() < 0.7:
        access = AccessPolicy(rng.choice(list(AccessLevel)), rng.choice(("open to all", "")))
    es = EarthScienceMetadata(
        geospatial=es.geospatial,
        time_period=es.time_period,
        ipr=ipr,
        access=access,
        discipline=rng.choice(("volcanology", "sea monitoring", "")),
        doi=f"10.5072/gen-{idx}" if rng.random() < 0.3 else None,
        community=rng.choice(("GSNL", "")),
    )

    return ResearchObject(
        id=rid,
        ro_type=rng.choice(list(RoType)),
        status=rng.choice(list(LifecycleStatus)),
        creators=tuple(sorted(set(rng.choices(("alice", "bob", "carol"), k=rng.randrange(3))))),
        created=_ts(rng) if rng.random() < 0.9 else None,
        modified=_ts(rng) if rng.random() < 0.9 else None,
        resources=tuple(resources),
        annotations=tuple(annotations),
        es_meta=es,
    )


@pytest.fixture
def store(tmp_path) -> RoStore:
    return RoStore(tmp_path / "store")


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20260810)
