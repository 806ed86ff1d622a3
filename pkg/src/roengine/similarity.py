"""Vector-space similarity over research objects.

Documents map to sparse TF-IDF vectors (tf = raw count, idf = ln(N/df),
no smoothing) compared by cosine. Text tokens and semantic annotation
labels share one vector space through term namespaces (``text:``,
``concept:``, ``domain:``, ``lemma:``, ``term:``, ``ne:``), so the nine
feature configurations are just namespace selections. A recommendation
context of up to three documents is combined as the centroid of the
members' L2-normalized vectors.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum

from .enrichment import SemanticAnnotationSet, tokenize
from .errors import ContextSizeOutOfRange, UnknownDocument


class FeatureConfig(str, Enum):
    TEXT_ONLY = "TextOnly"
    CONCEPTS = "Concepts"
    CONCEPTS_NE = "ConceptsNE"
    SEM_ALL = "SemAll"
    SEM_NO_NE = "SemNoNE"
    CONCEPTS_TEXT = "ConceptsText"
    CONCEPTS_NE_TEXT = "ConceptsNEText"
    SEM_ALL_TEXT = "SemAllText"
    SEM_NO_NE_TEXT = "SemNoNEText"


_SEMANTIC = frozenset({"concept", "domain", "lemma", "term", "ne"})

CONFIG_NAMESPACES: dict[FeatureConfig, frozenset[str]] = {
    FeatureConfig.TEXT_ONLY: frozenset({"text"}),
    FeatureConfig.CONCEPTS: frozenset({"concept"}),
    FeatureConfig.CONCEPTS_NE: frozenset({"concept", "ne"}),
    FeatureConfig.SEM_ALL: _SEMANTIC,
    FeatureConfig.SEM_NO_NE: _SEMANTIC - {"ne"},
    FeatureConfig.CONCEPTS_TEXT: frozenset({"concept", "text"}),
    FeatureConfig.CONCEPTS_NE_TEXT: frozenset({"concept", "ne", "text"}),
    FeatureConfig.SEM_ALL_TEXT: _SEMANTIC | {"text"},
    FeatureConfig.SEM_NO_NE_TEXT: (_SEMANTIC - {"ne"}) | {"text"},
}

_ANNOTATION_NAMESPACES = (
    ("concept", "concepts"),
    ("domain", "domains"),
    ("lemma", "lemmas"),
    ("term", "compound_terms"),
    ("ne", "named_entities"),
)


@dataclass(frozen=True)
class CorpusDocument:
    """One similarity corpus entry: raw text plus analyzer output."""

    doc_id: str
    title: str = ""
    text: str = ""
    annotations: SemanticAnnotationSet | None = None


def document_terms(doc: CorpusDocument, config: FeatureConfig) -> Counter:
    """Raw term counts for the namespaces selected by ``config``."""
    namespaces = CONFIG_NAMESPACES[config]
    counts: Counter = Counter()
    if "text" in namespaces:
        for token in tokenize(doc.title + "\n" + doc.text):
            counts[f"text:{token}"] += 1
    aset = doc.annotations
    if aset is not None:
        for ns, attr in _ANNOTATION_NAMESPACES:
            if ns in namespaces:
                for label, freq in getattr(aset, attr):
                    counts[f"{ns}:{label}"] += freq
    return counts


def tfidf_weight(tf: int, n_docs: int, df: int) -> float:
    """tf * ln(N/df); zero when the term is in every document."""
    return tf * math.log(n_docs / df)


@dataclass(frozen=True)
class CorpusStats:
    """One-pass corpus statistics; read-only once built."""

    n_docs: int
    df: dict[str, int]
    vocabulary: frozenset[str]
    _terms: dict[str, Counter]

    @classmethod
    def build(cls, corpus: list[CorpusDocument], config: FeatureConfig) -> "CorpusStats":
        df: Counter = Counter()
        terms: dict[str, Counter] = {}
        for doc in corpus:
            counts = document_terms(doc, config)
            terms[doc.doc_id] = counts
            df.update(counts.keys())
        return cls(
            n_docs=len(corpus),
            df=dict(df),
            vocabulary=frozenset(df),
            _terms=terms,
        )

    def has(self, doc_id: str) -> bool:
        return doc_id in self._terms


@dataclass(frozen=True)
class DocumentVector:
    ro_id: str
    weights: dict[str, float]

    def norm(self) -> float:
        return math.sqrt(sum(w * w for w in self.weights.values()))


def build_vector(
    doc: CorpusDocument | str, config: FeatureConfig, stats: CorpusStats
) -> DocumentVector:
    doc_id = doc if isinstance(doc, str) else doc.doc_id
    if not stats.has(doc_id):
        raise UnknownDocument(f"{doc_id} is not part of the corpus statistics")
    counts = stats._terms[doc_id]
    weights = {}
    for term, tf in counts.items():
        w = tfidf_weight(tf, stats.n_docs, stats.df[term])
        if w != 0.0:
            weights[term] = w
    return DocumentVector(doc_id, weights)


def cosine(a: DocumentVector, b: DocumentVector) -> float:
    if not a.weights or not b.weights:
        return 0.0
    small, large = (a.weights, b.weights) if len(a.weights) <= len(b.weights) else (b.weights, a.weights)
    dot = sum(w * large[t] for t, w in small.items() if t in large)
    if dot == 0.0:
        return 0.0
    return dot / (a.norm() * b.norm())


def combine_context(vectors: list[DocumentVector]) -> DocumentVector:
    """Centroid of the L2-normalized member vectors (1 to 3 of them)."""
    if not 1 <= len(vectors) <= 3:
        raise ContextSizeOutOfRange(f"context must hold 1..3 items, got {len(vectors)}")
    acc: dict[str, float] = {}
    for vec in vectors:
        norm = vec.norm()
        if norm == 0.0:
            continue
        for term, w in vec.weights.items():
            acc[term] = acc.get(term, 0.0) + w / norm
    count = len(vectors)
    combined = {t: v / count for t, v in acc.items() if v != 0.0}
    return DocumentVector("+".join(v.ro_id for v in vectors), combined)


@dataclass(frozen=True)
class Recommendation:
    ro_id: str
    score: float
    band: str  # inner | outer


def similar(
    context_ids: list[str],
    corpus: list[CorpusDocument],
    config: FeatureConfig,
    n: int = 10,
    stats: CorpusStats | None = None,
) -> list[Recommendation]:
    """Rank every non-context document by cosine similarity to the
    combined context; the top half of the requested ``n`` is tagged as the
    inner sphere band, the rest as outer."""
    if not 1 <= len(context_ids) <= 3:
        raise ContextSizeOutOfRange(f"context must hold 1..3 items, got {len(context_ids)}")
    if stats is None:
        stats = CorpusStats.build(corpus, config)
    for cid in context_ids:
        if not stats.has(cid):
            raise UnknownDocument(f"context item {cid} is not in the corpus")

    ctx = combine_context([build_vector(cid, config, stats) for cid in context_ids])
    context = set(context_ids)
    scored = [
        (cosine(ctx, build_vector(doc.doc_id, config, stats)), doc.doc_id)
        for doc in corpus
        if doc.doc_id not in context
    ]
    scored.sort(key=lambda pair: (-pair[0], pair[1]))
    inner_ranks = math.ceil(n / 2)
    return [
        Recommendation(doc_id, score, "inner" if rank <= inner_ranks else "outer")
        for rank, (score, doc_id) in enumerate(scored[:n], start=1)
    ]
