"""Category-graph relevance machinery and the two similarity experiments.

Relevance comes from a rooted category DAG: experiment 1 ranks candidates
against single documents and accepts same-category (strict) or
neighbor-category (relaxed) hits; experiment 2 ranks against document
pairs whose categories connect without passing through the root, and
accepts categories on the connecting path (strict) or inside the subtree
of the pair's least common subsumer (relaxed). Precision at k is averaged
over seeded repetitions, so every report is reproducible from its spec.
"""

from __future__ import annotations

import heapq
import json
import random
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .enrichment import KnowledgeLexicon, analyze
from .errors import DatasetTooSmall, NoCommonAncestor, NoPath, UnknownCategory
from .similarity import CorpusDocument, CorpusStats, FeatureConfig, similar


# ---------------------------------------------------------------------------
# Category graph
# ---------------------------------------------------------------------------

class CategoryGraph:
    """Rooted DAG of categories with article assignments."""

    def __init__(
        self,
        edges: list[tuple[str, str]],  # (child, parent)
        root: str,
        assignments: dict[str, set[str]] | None = None,
        labels: dict[str, str] | None = None,
    ):
        self.root = root
        self.parents: dict[str, set[str]] = {}
        self.children: dict[str, set[str]] = {}
        nodes = {root}
        for child, parent in edges:
            nodes.add(child)
            nodes.add(parent)
            self.parents.setdefault(child, set()).add(parent)
            self.children.setdefault(parent, set()).add(child)
        self.nodes = nodes
        self.assignments = {a: set(c) for a, c in (assignments or {}).items()}
        self.labels = labels or {n: n for n in nodes}
        self._depths: dict[str, int] | None = None
        self._check()

    def _check(self) -> None:
        if self.parents.get(self.root):
            raise ValueError(f"root {self.root!r} must not have a parent")
        # cycle check via DFS coloring
        state: dict[str, int] = {}

        def visit(node: str) -> None:
            state[node] = 1
            for child in self.children.get(node, ()):
                mark = state.get(child, 0)
                if mark == 1:
                    raise ValueError(f"category graph has a cycle through {child!r}")
                if mark == 0:
                    visit(child)
            state[node] = 2

        for node in sorted(self.nodes):
            if state.get(node, 0) == 0:
                visit(node)
        reachable = set(self.depths())
        for article, cats in self.assignments.items():
            for cat in cats:
                if cat not in self.nodes:
                    raise ValueError(f"article {article!r} assigned to unknown category {cat!r}")
                if cat not in reachable:
                    raise ValueError(
                        f"article {article!r} assigned to category {cat!r} unreachable from the root"
                    )

    def _require(self, c: str) -> None:
        if c not in self.nodes:
            raise UnknownCategory(f"unknown category {c!r}")

    def depths(self) -> dict[str, int]:
        """Shortest edge distance from the root, per category."""
        if self._depths is None:
            depths = {self.root: 0}
            frontier = [self.root]
            while frontier:
                nxt = []
                for node in frontier:
                    for child in sorted(self.children.get(node, ())):
                        if child not in depths:
                            depths[child] = depths[node] + 1
                            nxt.append(child)
                frontier = nxt
            self._depths = depths
        return self._depths

    def ancestors(self, c: str) -> set[str]:
        """The category itself plus every transitive parent."""
        self._require(c)
        out = {c}
        frontier = [c]
        while frontier:
            node = frontier.pop()
            for parent in self.parents.get(node, ()):
                if parent not in out:
                    out.add(parent)
                    frontier.append(parent)
        return out

    def articles_in(self, c: str) -> set[str]:
        return {a for a, cats in self.assignments.items() if c in cats}


def neighbor_categories(graph: CategoryGraph, c: str) -> set[str]:
    """Parents, siblings (other children of any parent) and children."""
    graph._require(c)
    parents = set(graph.parents.get(c, ()))
    siblings = {
        sib for p in parents for sib in graph.children.get(p, ()) if sib != c
    }
    children = set(graph.children.get(c, ()))
    return (parents | siblings | children) - {c}


def category_path(graph: CategoryGraph, c1: str, c2: str) -> list[str]:
    """Shortest undirected path, endpoints inclusive; equal-length ties
    resolve to the lexicographically smallest node sequence."""
    graph._require(c1)
    graph._require(c2)
    if c1 == c2:
        return [c1]
    undirected: dict[str, set[str]] = {}
    for child, parents in graph.parents.items():
        for parent in parents:
            undirected.setdefault(child, set()).add(parent)
            undirected.setdefault(parent, set()).add(child)
    heap: list[tuple[int, tuple[str, ...]]] = [(0, (c1,))]
    done: set[str] = set()
    while heap:
        length, path = heapq.heappop(heap)
        node = path[-1]
        if node == c2:
            return list(path)
        if node in done:
            continue
        done.add(node)
        for nbr in undirected.get(node, ()):
            if nbr not in done:
                heapq.heappush(heap, (length + 1, path + (nbr,)))
    raise NoPath(f"no path between {c1!r} and {c2!r}")


def subtree(graph: CategoryGraph, c: str) -> set[str]:
    """The category plus all of its descendants."""
    graph._require(c)
    out = {c}
    frontier = [c]
    while frontier:
        node = frontier.pop()
        for child in graph.children.get(node, ()):
            if child not in out:
                out.add(child)
                frontier.append(child)
    return out


def lcs(graph: CategoryGraph, c1: str, c2: str) -> str:
    """Least common subsumer: the deepest common ancestor, ties broken by
    smaller descendant subtree then lexicographic id."""
    depths = graph.depths()
    common = {
        c for c in graph.ancestors(c1) & graph.ancestors(c2) if c in depths
    }
    if not common:
        raise NoCommonAncestor(f"{c1!r} and {c2!r} share no root-reachable ancestor")
    return min(common, key=lambda c: (-depths[c], len(subtree(graph, c)), c))


# ---------------------------------------------------------------------------
# Precision
# ---------------------------------------------------------------------------

def precision_at_k(ranked: list[str], relevant: set[str], k: int) -> float:
    """Fraction of the first k ranked ids that are relevant; a ranking
    shorter than k counts the missing slots as misses."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return sum(1 for doc in ranked[:k] if doc in relevant) / k


# ---------------------------------------------------------------------------
# Experiments
# ---------------------------------------------------------------------------

# Mean precision reported by the original full-scale evaluation (27,019
# articles under 1,210 categories, proprietary NLP enrichment). Desk-scale
# corpora will not reproduce these; they are recorded for orientation only.
# Keys: (experiment, config, variant) -> {k: p@k}.
FULL_SCALE_REFERENCE = {
    (1, FeatureConfig.CONCEPTS_TEXT, "strict"): {1: 0.571, 5: 0.493, 10: 0.448, 15: 0.420, 20: 0.398},
    (1, FeatureConfig.CONCEPTS_TEXT, "relaxed"): {1: 0.717, 5: 0.656, 10: 0.621, 15: 0.598, 20: 0.580},
    (2, FeatureConfig.TEXT_ONLY, "strict"): {1: 0.577, 5: 0.492, 10: 0.445, 15: 0.417, 20: 0.406},
    (2, FeatureConfig.TEXT_ONLY, "relaxed"): {1: 0.740, 5: 0.677, 10: 0.643, 15: 0.626, 20: 0.618},
}


@dataclass(frozen=True)
class ExperimentSpec:
    experiment: int  # 1 | 2
    config: FeatureConfig = FeatureConfig.TEXT_ONLY
    min_category_size: int = 40
    sample_fraction: float = 0.10
    pair_count: int = 1000
    repetitions: int = 10
    ks: tuple[int, ...] = (1, 5, 10, 15, 20)
    seed: int = 0

    def __post_init__(self) -> None:
        if self.experiment not in (1, 2):
            raise ValueError("experiment must be 1 or 2")
        if not 0 < self.sample_fraction <= 1:
            raise ValueError("sample fraction must be in (0, 1]")
        if list(self.ks) != sorted(self.ks):
            raise ValueError("ks must be sorted ascending")


@dataclass(frozen=True)
class PrecisionReport:
    spec: ExperimentSpec
    strict: dict[int, float]   # k -> mean precision across repetitions
    relaxed: dict[int, float]
    sample_sizes: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "experiment": self.spec.experiment,
            "config": self.spec.config.value,
            "seed": self.spec.seed,
            "repetitions": self.spec.repetitions,
            "sampleSizes": list(self.sample_sizes),
            "strict": {str(k): v for k, v in self.strict.items()},
            "relaxed": {str(k): v for k, v in self.relaxed.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_table(self) -> str:
        ks = list(self.spec.ks)
        header = ["variant"] + [f"p@{k}" for k in ks]
        rows = [
            ["strict"] + [f"{self.strict[k]:.3f}" for k in ks],
            ["relaxed"] + [f"{self.relaxed[k]:.3f}" for k in ks],
        ]
        widths = [max(len(r[i]) for r in [header] + rows) for i in range(len(header))]
        lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)) for row in [header] + rows]
        return "\n".join(lines)


@dataclass
class EvalDataset:
    documents: list[CorpusDocument]
    graph: CategoryGraph
    _by_id: dict[str, CorpusDocument] = field(init=False)

    def __post_init__(self) -> None:
        self._by_id = {d.doc_id: d for d in self.documents}
        missing = [d.doc_id for d in self.documents if not self.graph.assignments.get(d.doc_id)]
        if missing:
            raise ValueError(f"documents without category assignment: {missing[:5]}")

    def categories_of(self, doc_id: str) -> set[str]:
        return self.graph.assignments[doc_id]


def _mean(values: list[float]) -> float:
    return sum(values) / len(values) if values else 0.0


def _rank_ids(
    context: list[str],
    dataset: EvalDataset,
    config: FeatureConfig,
    stats: CorpusStats,
) -> list[str]:
    results = similar(
        context, dataset.documents, config, n=len(dataset.documents), stats=stats
    )
    return [r.ro_id for r in results]


def run_experiment(dataset: EvalDataset, spec: ExperimentSpec) -> PrecisionReport:
    stats = CorpusStats.build(dataset.documents, spec.config)
    if spec.experiment == 1:
        return _experiment_one(dataset, spec, stats)
    return _experiment_two(dataset, spec, stats)


def _experiment_one(
    dataset: EvalDataset, spec: ExperimentSpec, stats: CorpusStats
) -> PrecisionReport:
    graph = dataset.graph
    sizes = Counter(c for cats in graph.assignments.values() for c in cats)
    eligible_cats = {c for c, n in sizes.items() if n >= spec.min_category_size}
    pool = sorted(
        d.doc_id
        for d in dataset.documents
        if dataset.categories_of(d.doc_id) & eligible_cats
    )
    if not pool:
        raise DatasetTooSmall(
            f"no category reaches {spec.min_category_size} documents"
        )
    sample_size = max(1, round(spec.sample_fraction * len(pool)))

    neighbor_cache = {c: neighbor_categories(graph, c) for c in graph.nodes}
    strict_by_k: dict[int, list[float]] = {k: [] for k in spec.ks}
    relaxed_by_k: dict[int, list[float]] = {k: [] for k in spec.ks}
    sample_sizes = []
    for rep in range(spec.repetitions):
        rng = random.Random(spec.seed + rep)
        sampled = rng.sample(pool, sample_size)
        sample_sizes.append(len(sampled))
        rep_strict: dict[int, list[float]] = {k: [] for k in spec.ks}
        rep_relaxed: dict[int, list[float]] = {k: [] for k in spec.ks}
        for doc_id in sampled:
            cats = dataset.categories_of(doc_id)
            relaxed_cats = set(cats)
            for c in cats:
                relaxed_cats |= neighbor_cache[c]
            strict_rel = {
                d.doc_id
                for d in dataset.documents
                if d.doc_id != doc_id and dataset.categories_of(d.doc_id) & cats
            }
            relaxed_rel = {
                d.doc_id
                for d in dataset.documents
                if d.doc_id != doc_id and dataset.categories_of(d.doc_id) & relaxed_cats
            }
            ranked = _rank_ids([doc_id], dataset, spec.config, stats)
            for k in spec.ks:
                rep_strict[k].append(precision_at_k(ranked, strict_rel, k))
                rep_relaxed[k].append(precision_at_k(ranked, relaxed_rel, k))
        for k in spec.ks:
            strict_by_k[k].append(_mean(rep_strict[k]))
            relaxed_by_k[k].append(_mean(rep_relaxed[k]))

    return PrecisionReport(
        spec=spec,
        strict={k: _mean(v) for k, v in strict_by_k.items()},
        relaxed={k: _mean(v) for k, v in relaxed_by_k.items()},
        sample_sizes=tuple(sample_sizes),
    )


def _experiment_two(
    dataset: EvalDataset, spec: ExperimentSpec, stats: CorpusStats
) -> PrecisionReport:
    graph = dataset.graph
    path_cache: dict[tuple[str, str], list[str] | None] = {}

    def connecting_path(ca: str, cb: str) -> list[str] | None:
        """Shortest category path that avoids the root, or None."""
        key = (ca, cb) if ca <= cb else (cb, ca)
        if key not in path_cache:
            try:
                path = category_path(graph, key[0], key[1])
            except NoPath:
                path = None
            path_cache[key] = path if path and graph.root not in path else None
        path = path_cache[key]
        if path is None or path[0] == ca:
            return path
        return list(reversed(path))

    def pair_categories(a: str, b: str) -> tuple[str, str, list[str]] | None:
        best = None
        for ca in sorted(dataset.categories_of(a)):
            for cb in sorted(dataset.categories_of(b)):
                path = connecting_path(ca, cb)
                if path is None:
                    continue
                key = (len(path), tuple(path))
                if best is None or key < best[0]:
                    best = (key, ca, cb, path)
        if best is None:
            return None
        return best[1], best[2], best[3]

    ids = sorted(d.doc_id for d in dataset.documents)
    eligible: list[tuple[str, str, str, str, list[str]]] = []
    for i, a in enumerate(ids):
        for b in ids[i + 1:]:
            if dataset.categories_of(a) & dataset.categories_of(b):
                continue
            chosen = pair_categories(a, b)
            if chosen is not None:
                eligible.append((a, b, *chosen))
    if not eligible:
        raise DatasetTooSmall("no document pair connects without crossing the root")

    strict_by_k: dict[int, list[float]] = {k: [] for k in spec.ks}
    relaxed_by_k: dict[int, list[float]] = {k: [] for k in spec.ks}
    sample_sizes = []
    for rep in range(spec.repetitions):
        rng = random.Random(spec.seed + rep)
        chosen = rng.sample(eligible, min(spec.pair_count, len(eligible)))
        sample_sizes.append(len(chosen))
        rep_strict: dict[int, list[float]] = {k: [] for k in spec.ks}
        rep_relaxed: dict[int, list[float]] = {k: [] for k in spec.ks}
        for a, b, ca, cb, path in chosen:
            path_cats = set(path)
            relaxed_cats = path_cats | subtree(graph, lcs(graph, ca, cb))
            exclude = {a, b}
            strict_rel = {
                d.doc_id
                for d in dataset.documents
                if d.doc_id not in exclude and dataset.categories_of(d.doc_id) & path_cats
            }
            relaxed_rel = {
                d.doc_id
                for d in dataset.documents
                if d.doc_id not in exclude and dataset.categories_of(d.doc_id) & relaxed_cats
            }
            ranked = _rank_ids([a, b], dataset, spec.config, stats)
            for k in spec.ks:
                rep_strict[k].append(precision_at_k(ranked, strict_rel, k))
                rep_relaxed[k].append(precision_at_k(ranked, relaxed_rel, k))
        for k in spec.ks:
            strict_by_k[k].append(_mean(rep_strict[k]))
            relaxed_by_k[k].append(_mean(rep_relaxed[k]))

    return PrecisionReport(
        spec=spec,
        strict={k: _mean(v) for k, v in strict_by_k.items()},
        relaxed={k: _mean(v) for k, v in relaxed_by_k.items()},
        sample_sizes=tuple(sample_sizes),
    )


# ---------------------------------------------------------------------------
# Dataset ingestion
# ---------------------------------------------------------------------------

def load_dataset(directory: str | Path, lexicon: KnowledgeLexicon | None = None) -> EvalDataset:
    """Read a dataset directory: ``categories.tsv`` (child <TAB> parent),
    ``assignments.tsv`` (article <TAB> category) and ``articles/<id>.txt``.
    With a lexicon, each article is analyzed so semantic feature
    configurations have input."""
    directory = Path(directory)
    edges = []
    for line in (directory / "categories.tsv").read_text(encoding="utf-8").splitlines():
        if line.strip():
            child, parent = line.split("\t")
            edges.append((child, parent))
    children = {c for c, _ in edges}
    parents = {p for _, p in edges}
    roots = sorted(parents - children)
    if len(roots) != 1:
        raise ValueError(f"dataset must have exactly one root category, found {roots}")

    assignments: dict[str, set[str]] = {}
    for line in (directory / "assignments.tsv").read_text(encoding="utf-8").splitlines():
        if line.strip():
            article, category = line.split("\t")
            assignments.setdefault(article, set()).add(category)

    graph = CategoryGraph(edges, roots[0], assignments)
    documents = []
    for article in sorted(assignments):
        text = (directory / "articles" / f"{article}.txt").read_text(encoding="utf-8")
        first, _, rest = text.partition("\n")
        documents.append(
            CorpusDocument(
                doc_id=article,
                title=first.strip(),
                text=rest,
                annotations=analyze(text, lexicon) if lexicon else None,
            )
        )
    return EvalDataset(documents, graph)


def bundled_dataset_dir() -> Path:
    from importlib import resources

    return Path(str(resources.files("roengine").joinpath("data/synthetic_corpus")))
