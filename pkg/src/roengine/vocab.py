"""Vocabulary namespaces and the term constants used across the engine.

The manifest serializer emits the prefixes in the exact order of
``PREFIXES``; changing that order changes manifest bytes, so treat it as
part of the on-disk format.
"""

from __future__ import annotations

RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RO = "http://purl.org/wf4ever/ro#"
ROEVO = "http://purl.org/wf4ever/roevo#"
ROTERMS = "http://purl.org/wf4ever/roterms#"
ROES = "http://purl.org/wf4ever/roes#"
ORE = "http://www.openarchives.org/ore/terms/"
OA = "http://www.w3.org/ns/oa#"
DC = "http://purl.org/dc/terms/"
SKOS = "http://www.w3.org/2004/02/skos/core#"
CDESC = "https://w3id.org/contentdesc/"
CITO = "http://purl.org/spar/cito/"
PROV = "http://www.w3.org/ns/prov#"
XSD = "http://www.w3.org/2001/XMLSchema#"

# prefix -> namespace, serialization order is significant
PREFIXES = (
    ("rdf", RDF),
    ("ro", RO),
    ("roevo", ROEVO),
    ("roterms", ROTERMS),
    ("roes", ROES),
    ("ore", ORE),
    ("oa", OA),
    ("dc", DC),
    ("skos", SKOS),
    ("cdesc", CDESC),
    ("cito", CITO),
    ("prov", PROV),
    ("xsd", XSD),
)

RDF_TYPE = RDF + "type"

# classes
RO_RESEARCH_OBJECT = RO + "ResearchObject"
OA_ANNOTATION = OA + "Annotation"

# research-object structure
ROES_RO_TYPE = ROES + "roType"
ROEVO_STATUS = ROEVO + "status"
DC_CREATOR = DC + "creator"
DC_CREATED = DC + "created"
DC_MODIFIED = DC + "modified"
ORE_AGGREGATES = ORE + "aggregates"

# resource fields
ROES_KIND = ROES + "kind"
DC_FORMAT = DC + "format"
ROES_SIZE_BYTES = ROES + "sizeBytes"
ROES_CONTENT_REF = ROES + "contentRef"
ROES_CONTENT_TEXT = ROES + "contentText"

# earth-science metadata
ROES_WEST = ROES + "west"
ROES_SOUTH = ROES + "south"
ROES_EAST = ROES + "east"
ROES_NORTH = ROES + "north"
ROES_PERIOD_START = ROES + "periodStart"
ROES_PERIOD_END = ROES + "periodEnd"
ROES_COPYRIGHT_HOLDER = ROES + "copyrightHolder"
ROES_COPYRIGHT_YEAR = ROES + "copyrightYear"
DC_LICENSE = DC + "license"
ROES_ATTRIBUTION = ROES + "attribution"
ROES_ACCESS_LEVEL = ROES + "accessLevel"
ROES_ACCESS_POLICY = ROES + "accessPolicy"
ROES_DISCIPLINE = ROES + "discipline"
ROES_DOI = ROES + "doi"
ROES_COMMUNITY = ROES + "community"
ROES_RESEARCH_AREA = ROES + "researchArea"

# annotation bookkeeping
OA_HAS_TARGET = OA + "hasTarget"
ROES_PROVENANCE = ROES + "provenance"
ROES_BODY_DIGEST = ROES + "bodyDigest"

# common annotation-body predicates
DC_TITLE = DC + "title"
DC_DESCRIPTION = DC + "description"
DC_SUBJECT = DC + "subject"
SKOS_PREF_LABEL = SKOS + "prefLabel"
CITO_CITES = CITO + "cites"
PROV_DERIVED_FROM = PROV + "wasDerivedFrom"

# datatypes
XSD_DATETIME = XSD + "dateTime"
XSD_INTEGER = XSD + "integer"
XSD_DECIMAL = XSD + "decimal"

# predicates reserved for the manifest's structural encoding; annotation
# bodies may not use them on ids owned by the research object (the parser
# could not tell such statements apart from the structure itself)
STRUCTURAL_PREDICATES = frozenset(
    {
        RDF_TYPE,
        ROES_RO_TYPE,
        ROEVO_STATUS,
        DC_CREATOR,
        DC_CREATED,
        DC_MODIFIED,
        ORE_AGGREGATES,
        ROES_KIND,
        DC_FORMAT,
        ROES_SIZE_BYTES,
        ROES_CONTENT_REF,
        ROES_CONTENT_TEXT,
        ROES_WEST,
        ROES_SOUTH,
        ROES_EAST,
        ROES_NORTH,
        ROES_PERIOD_START,
        ROES_PERIOD_END,
        ROES_COPYRIGHT_HOLDER,
        ROES_COPYRIGHT_YEAR,
        DC_LICENSE,
        ROES_ATTRIBUTION,
        ROES_ACCESS_LEVEL,
        ROES_ACCESS_POLICY,
        ROES_DISCIPLINE,
        ROES_DOI,
        ROES_COMMUNITY,
        OA_HAS_TARGET,
        ROES_PROVENANCE,
    }
)

# never allowed in annotation bodies, regardless of subject
RESERVED_PREDICATES = frozenset({ROES_BODY_DIGEST})
