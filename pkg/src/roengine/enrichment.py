"""Three-stage content enrichment: text extraction, lightweight semantic
analysis, and annotation generation.

The analyzer is deliberately transparent: a lexicon file drives concept,
domain and named-entity recognition, compound terms are frequent
stopword-delimited n-grams, and disambiguation picks the sense with the
most distinct matching lemmas in the document. Identical text and lexicon
always produce identical output, so every stage is testable against hand
traces.
"""

from __future__ import annotations

import json
import re
import unicodedata
import zlib
from collections import Counter
from dataclasses import dataclass, replace
from datetime import datetime
from pathlib import Path
from typing import Callable, Iterable

from . import vocab
from .errors import ImmutableObject
from .model import (
    Annotation,
    Iri,
    Literal,
    Provenance,
    Resource,
    ResourceKind,
    ResearchObject,
    Statement,
)

# resource kinds whose text feeds the analyzer
CONTRIBUTING_KINDS = frozenset(
    {
        ResourceKind.TITLE,
        ResourceKind.DESCRIPTION,
        ResourceKind.DOCUMENT,
        ResourceKind.BIBLIOGRAPHIC_RESOURCE,
        ResourceKind.CONCLUSIONS,
        ResourceKind.HYPOTHESIS,
        ResourceKind.RESEARCH_QUESTION,
        ResourceKind.PAPER,
    }
)

ENRICHMENT_ANNOTATION_NAME = "enrichment"

_WORD_RE = re.compile(r"\w+", re.UNICODE)
_SENTENCE_SPLIT_RE = re.compile(r"[.!?;:\n]+")


# ---------------------------------------------------------------------------
# Lexicon
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Concept:
    lemmas: tuple[str, ...]
    domains: tuple[str, ...]
    label: str


@dataclass(frozen=True)
class KnowledgeLexicon:
    concepts: dict[str, Concept]
    stopwords: frozenset[str]
    gazetteer: dict[str, str]  # entity text -> Person | Organization | Place

    @classmethod
    def from_dict(cls, data: dict) -> "KnowledgeLexicon":
        concepts = {}
        for cid, spec in data.get("concepts", {}).items():
            lemmas = tuple(l.lower() for l in spec["lemmas"])
            if not lemmas or not spec.get("label"):
                raise ValueError(f"concept {cid!r} needs at least one lemma and a label")
            concepts[cid] = Concept(lemmas, tuple(spec.get("domains", ())), spec["label"])
        return cls(
            concepts=concepts,
            stopwords=frozenset(w.lower() for w in data.get("stopwords", ())),
            gazetteer=dict(data.get("gazetteer", {})),
        )

    @classmethod
    def from_file(cls, path: str | Path) -> "KnowledgeLexicon":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def starter_lexicon() -> KnowledgeLexicon:
    """The bundled earth-science lexicon."""
    from importlib import resources

    text = resources.files("roengine").joinpath("data/lexicon/earth_science.json").read_text(
        encoding="utf-8"
    )
    return KnowledgeLexicon.from_dict(json.loads(text))


# ---------------------------------------------------------------------------
# Stage 1: text extraction
# ---------------------------------------------------------------------------

Extractor = Callable[[Resource], str]


def _plain_text_extractor(res: Resource) -> str:
    if res.content_ref is None:
        return ""
    path = Path(res.content_ref)
    if not path.exists():
        raise FileNotFoundError(res.content_ref)
    return path.read_text(encoding="utf-8")


DEFAULT_EXTRACTORS: dict[str, Extractor] = {"text/plain": _plain_text_extractor}


@dataclass(frozen=True)
class ExtractedText:
    ro_id: str
    segments: tuple[tuple[str, str, str], ...]  # (resource id, kind, text)
    warnings: tuple[str, ...] = ()

    def full_text(self) -> str:
        return "\n".join(seg[2] for seg in self.segments)


def extract_text(
    ro: ResearchObject, extractors: dict[str, Extractor] | None = None
) -> ExtractedText:
    """Gather the text of every contributing resource; resources whose
    format has no registered extractor degrade to a warning, never an error."""
    extractors = DEFAULT_EXTRACTORS if extractors is None else extractors
    segments: list[tuple[str, str, str]] = []
    warnings: list[str] = []
    for res in ro.resources:
        if res.kind not in CONTRIBUTING_KINDS:
            continue
        if res.content_text is not None:
            text = res.content_text
        elif res.content_ref is not None:
            extractor = extractors.get(res.media_type)
            if extractor is None:
                warnings.append(f"{res.id}: no extractor for media type {res.media_type!r}")
                continue
            try:
                text = extractor(res)
            except Exception as exc:  # degrade per-resource failures to skips
                warnings.append(f"{res.id}: extraction failed: {exc}")
                continue
        else:
            continue
        text = unicodedata.normalize("NFC", text)
        if text.strip():
            segments.append((res.id.value, res.kind.value, text))
    return ExtractedText(ro.id.value, tuple(segments), tuple(warnings))


# ---------------------------------------------------------------------------
# Stage 2: semantic analysis
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TopK:
    concepts: int = 10
    domains: int = 5
    lemmas: int = 10
    compound_terms: int = 10
    named_entities: int = 10


@dataclass(frozen=True)
class SemanticAnnotationSet:
    """Ranked (label, frequency) lists, sorted by frequency descending with
    lexicographic tie-breaks, truncated to the configured limits."""

    concepts: tuple[tuple[str, int], ...] = ()
    domains: tuple[tuple[str, int], ...] = ()
    lemmas: tuple[tuple[str, int], ...] = ()
    compound_terms: tuple[tuple[str, int], ...] = ()
    named_entities: tuple[tuple[str, int], ...] = ()

    def is_empty(self) -> bool:
        return not (
            self.concepts
            or self.domains
            or self.lemmas
            or self.compound_terms
            or self.named_entities
        )


def tokenize(text: str) -> list[str]:
    """Lowercased word tokens of length >= 2."""
    return [t for t in (m.group(0).lower() for m in _WORD_RE.finditer(text)) if len(t) >= 2]


def _ranked(counter: Counter, k: int) -> tuple[tuple[str, int], ...]:
    items = sorted(counter.items(), key=lambda kv: (-kv[1], kv[0]))
    return tuple(items[:k])


def _sentence_tokens(text: str) -> list[list[str]]:
    """Original-case tokens (length >= 2) per sentence."""
    out = []
    for sentence in _SENTENCE_SPLIT_RE.split(text):
        tokens = [m.group(0) for m in _WORD_RE.finditer(sentence) if len(m.group(0)) >= 2]
        if tokens:
            out.append(tokens)
    return out


def _match_phrases(
    tokens: list[str], phrases: dict[tuple[str, ...], str]
) -> tuple[list[str], list[str]]:
    """Greedy longest-first scan; returns matched phrase keys and the
    tokens left unconsumed."""
    max_len = max((len(p) for p in phrases), default=0)
    matched: list[str] = []
    rest: list[str] = []
    i = 0
    while i < len(tokens):
        hit = None
        for size in range(min(max_len, len(tokens) - i), 0, -1):
            window = tuple(tokens[i:i + size])
            if window in phrases:
                hit = phrases[window]
                i += size
                break
        if hit is not None:
            matched.append(hit)
        else:
            rest.append(tokens[i])
            i += 1
    return matched, rest


def analyze(
    text: ExtractedText | str,
    lexicon: KnowledgeLexicon,
    k: TopK | None = None,
) -> SemanticAnnotationSet:
    """Produce the ranked concept/domain/lemma/term/entity lists for a text."""
    k = k or TopK()
    raw = text.full_text() if isinstance(text, ExtractedText) else text
    sentences = _sentence_tokens(raw)

    # lexicon lemma phrases, keyed by their token sequence
    lemma_phrases: dict[tuple[str, ...], str] = {}
    lemma_concepts: dict[str, list[str]] = {}
    for cid, concept in lexicon.concepts.items():
        for lemma in concept.lemmas:
            lemma_phrases[tuple(lemma.split())] = lemma
            lemma_concepts.setdefault(lemma, []).append(cid)

    lemma_counts: Counter = Counter()
    for sent in sentences:
        lower = [t.lower() for t in sent]
        matched, rest = _match_phrases(lower, lemma_phrases)
        lemma_counts.update(matched)
        lemma_counts.update(t for t in rest if t not in lexicon.stopwords)

    # most-frequent-sense disambiguation: a lemma resolves to the concept
    # with the most distinct lemmas matched in this document
    concept_distinct: Counter = Counter()
    for lemma in lemma_counts:
        for cid in lemma_concepts.get(lemma, ()):
            concept_distinct[cid] += 1
    concept_counts: Counter = Counter()
    for lemma, count in lemma_counts.items():
        candidates = lemma_concepts.get(lemma)
        if not candidates:
            continue
        winner = min(candidates, key=lambda cid: (-concept_distinct[cid], cid))
        concept_counts[lexicon.concepts[winner].label] += count

    domain_counts: Counter = Counter()
    for lemma, count in lemma_counts.items():
        candidates = lemma_concepts.get(lemma)
        if not candidates:
            continue
        winner = min(candidates, key=lambda cid: (-concept_distinct[cid], cid))
        for domain in lexicon.concepts[winner].domains:
            domain_counts[domain] += count

    # compound terms: bigrams/trigrams inside stopword-delimited runs
    bigram_counts: Counter = Counter()
    trigram_counts: Counter = Counter()
    for sent in sentences:
        run: list[str] = []
        for token in [t.lower() for t in sent] + ["."]:
            if token in lexicon.stopwords or token == ".":
                for j in range(len(run) - 1):
                    bigram_counts[(run[j], run[j + 1])] += 1
                for j in range(len(run) - 2):
                    trigram_counts[(run[j], run[j + 1], run[j + 2])] += 1
                run = []
            else:
                run.append(token)
    # a bigram fully absorbed by an equally frequent trigram is noise
    absorbed: Counter = Counter()
    for (w1, w2, w3), count in trigram_counts.items():
        absorbed[(w1, w2)] = max(absorbed[(w1, w2)], count)
        absorbed[(w2, w3)] = max(absorbed[(w2, w3)], count)
    term_counts: Counter = Counter()
    for gram, count in trigram_counts.items():
        if count >= 2:
            term_counts[" ".join(gram)] = count
    for gram, count in bigram_counts.items():
        if count >= 2 and count > absorbed[gram]:
            term_counts[" ".join(gram)] = count

    entity_counts = _named_entities(sentences, lexicon)

    return SemanticAnnotationSet(
        concepts=_ranked(concept_counts, k.concepts),
        domains=_ranked(domain_counts, k.domains),
        lemmas=_ranked(lemma_counts, k.lemmas),
        compound_terms=_ranked(term_counts, k.compound_terms),
        named_entities=_ranked(entity_counts, k.named_entities),
    )


def _named_entities(sentences: list[list[str]], lexicon: KnowledgeLexicon) -> Counter:
    """Gazetteer matches plus capitalized multi-token runs that do not
    open a sentence."""
    gazetteer = {tuple(name.lower().split()): name for name in lexicon.gazetteer}
    counts: Counter = Counter()
    max_len = max((len(g) for g in gazetteer), default=0)
    for sent in sentences:
        lower = [t.lower() for t in sent]
        consumed = [False] * len(sent)
        i = 0
        while i < len(sent):
            hit_size = 0
            for size in range(min(max_len, len(sent) - i), 0, -1):
                if tuple(lower[i:i + size]) in gazetteer:
                    counts[gazetteer[tuple(lower[i:i + size])]] += 1
                    hit_size = size
                    break
            if hit_size:
                for j in range(i, i + hit_size):
                    consumed[j] = True
                i += hit_size
            else:
                i += 1
        # capitalized runs of length >= 2; the sentence-opening token is
        # capitalized by convention, so it never counts toward a run
        run_start = None
        for idx in range(len(sent) + 1):
            capital = (
                idx < len(sent)
                and sent[idx][0].isupper()
                and not consumed[idx]
            )
            if capital and run_start is None:
                run_start = idx
            elif not capital and run_start is not None:
                start = run_start if run_start > 0 else 1
                if idx - start >= 2:
                    counts[" ".join(sent[start:idx])] += 1
                run_start = None
    return counts


# ---------------------------------------------------------------------------
# Stage 3: annotation generation
# ---------------------------------------------------------------------------

_TYPE_LABELS = (
    ("concepts", "Concept"),
    ("domains", "Domain"),
    ("compound_terms", "Expression"),
    ("named_entities", "NamedEntity"),
)


def subject_node_id(ro_id: Iri, type_name: str, label: str) -> Iri:
    """Content-addressed subject node so re-runs mint identical ids."""
    n = zlib.crc32(f"{type_name}|{label}".encode("utf-8"))
    return Iri(f"{ro_id.value.rstrip('/')}/subject/{n}")


def generate_annotations(
    ro: ResearchObject,
    aset: SemanticAnnotationSet,
    now: datetime | None = None,
) -> ResearchObject:
    """Attach the analyzer output as one machine-provenance annotation.

    Each emitted concept/domain/expression/entity becomes a ``dc:subject``
    link from the RO to a minted node, typed through the content-description
    vocabulary and labeled with ``skos:prefLabel``. Re-running replaces the
    previous machine annotation; lemmas feed similarity only and are not
    annotated."""
    if not ro.status.mutable:
        raise ImmutableObject(f"{ro.id} has immutable status {ro.status.value}")

    ann_id = Iri(f"{ro.id.value.rstrip('/')}/annotations/{ENRICHMENT_ANNOTATION_NAME}")
    kept = tuple(a for a in ro.annotations if a.id != ann_id)

    body: list[Statement] = []
    for attr, type_name in _TYPE_LABELS:
        for label, _freq in getattr(aset, attr):
            node = subject_node_id(ro.id, type_name, label)
            body.append(Statement(ro.id, Iri(vocab.DC_SUBJECT), node))
            body.append(Statement(node, Iri(vocab.RDF_TYPE), Literal(f"cdesc/{type_name}")))
            body.append(Statement(node, Iri(vocab.SKOS_PREF_LABEL), Literal(label)))

    if not body:
        if len(kept) != len(ro.annotations):
            return replace(ro, annotations=kept, modified=now or ro.modified)
        return ro

    ann = Annotation(
        id=ann_id,
        target=ro.id,
        body=tuple(body),
        creator="enrichment",
        created=now,
        provenance=Provenance.MACHINE,
    )
    return replace(ro, annotations=kept + (ann,), modified=now or ro.modified)


@dataclass(frozen=True)
class EnrichmentReport:
    ro_id: str
    segments: int
    annotated: int  # emitted subject count
    warnings: tuple[str, ...]


def enrich(
    ro: ResearchObject,
    lexicon: KnowledgeLexicon,
    extractors: dict[str, Extractor] | None = None,
    k: TopK | None = None,
    now: datetime | None = None,
) -> tuple[ResearchObject, EnrichmentReport]:
    """Run the full pipeline; research objects without any text come back
    unchanged."""
    extracted = extract_text(ro, extractors)
    if not extracted.segments:
        return ro, EnrichmentReport(ro.id.value, 0, 0, extracted.warnings)
    aset = analyze(extracted, lexicon, k)
    enriched = generate_annotations(ro, aset, now=now)
    emitted = sum(len(getattr(aset, attr)) for attr, _ in _TYPE_LABELS)
    return enriched, EnrichmentReport(
        ro.id.value, len(extracted.segments), emitted, extracted.warnings
    )


def enrich_store(
    store,
    lexicon: KnowledgeLexicon,
    ids: Iterable[Iri] | None = None,
    extractors: dict[str, Extractor] | None = None,
    k: TopK | None = None,
) -> list[EnrichmentReport]:
    """Batch mode over a store selection (all mutable objects by default)."""
    reports = []
    for ro_id in ids if ids is not None else store.list_ids():
        with store.lock_for(ro_id):
            ro = store.load(ro_id)
            if not ro.status.mutable:
                continue
            enriched, report = enrich(ro, lexicon, extractors, k)
            if enriched is not ro:
                store.save(enriched)
        reports.append(report)
    return reports
