"""Research-object management engine.

Models, stores, versions, enriches, quality-checks, searches and
recommends semantically annotated research objects, and ships a
desk-scale evaluation harness for the similarity protocol.
"""

from .errors import RoEngineError
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
    TimePeriod,
    add_resource,
    annotate,
    new_ro,
    validate,
)
from .manifest import (
    parse_manifest,
    serialize_manifest,
    structurally_equal,
)
from .store import EvolutionRecord, RoStore, replay_evolution
from .lifecycle import DoiRecord, DoiRegistry, LifecycleManager, StubRegistry, citation_chain
from .quality import (
    Checklist,
    QualityHistory,
    QualityReport,
    Requirement,
    builtin_checklists,
    evaluate,
    fair_audit,
    reliability,
    stability,
)
from .enrichment import (
    ExtractedText,
    KnowledgeLexicon,
    SemanticAnnotationSet,
    analyze,
    enrich,
    extract_text,
    generate_annotations,
    starter_lexicon,
)
from .similarity import (
    CorpusDocument,
    CorpusStats,
    DocumentVector,
    FeatureConfig,
    build_vector,
    combine_context,
    cosine,
    similar,
)
from .evaluation import (
    CategoryGraph,
    EvalDataset,
    ExperimentSpec,
    PrecisionReport,
    category_path,
    lcs,
    load_dataset,
    neighbor_categories,
    precision_at_k,
    run_experiment,
    subtree,
)
from .search import SearchIndex, boxes_intersect

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
