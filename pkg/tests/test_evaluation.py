"""Category graph machinery, precision, and the two experiments."""

import random

import pytest

from roengine.errors import DatasetTooSmall, NoPath, UnknownCategory
from roengine.evaluation import (
    CategoryGraph,
    EvalDataset,
    ExperimentSpec,
    bundled_dataset_dir,
    category_path,
    lcs,
    load_dataset,
    neighbor_categories,
    precision_at_k,
    run_experiment,
    subtree,
)
from roengine.similarity import CorpusDocument, FeatureConfig


def example_graph():
    """The oceanography branch used in the worked examples."""
    edges = [
        ("Oceanography", "Earth Science"),
        ("Marine Biology", "Oceanography"),
        ("Marine Geology", "Oceanography"),
        ("Marine Botany", "Marine Biology"),
        ("Cetology", "Marine Biology"),
        ("Ocean Exploration", "Marine Geology"),
    ]
    return CategoryGraph(edges, root="Earth Science")


# ---------------------------------------------------------------------------
# graph operations
# ---------------------------------------------------------------------------

def test_neighbor_categories_worked_example():
    graph = example_graph()
    assert neighbor_categories(graph, "Marine Biology") == {
        "Oceanography", "Marine Geology", "Marine Botany", "Cetology",
    }


def test_neighbors_of_root_and_leaf():
    graph = example_graph()
    assert neighbor_categories(graph, "Earth Science") == {"Oceanography"}
    assert neighbor_categories(graph, "Ocean Exploration") == {"Marine Geology"}


def test_neighbors_unknown():
    with pytest.raises(UnknownCategory):
        neighbor_categories(example_graph(), "Astrobiology")


def test_category_path_worked_example():
    graph = example_graph()
    assert category_path(graph, "Oceanography", "Marine Botany") == [
        "Oceanography", "Marine Biology", "Marine Botany",
    ]


def test_category_path_identity_and_disconnected():
    graph = example_graph()
    assert category_path(graph, "Cetology", "Cetology") == ["Cetology"]
    # islands may exist when no article is assigned to them
    with_island = CategoryGraph([("a", "root"), ("y", "x")], root="root")
    with pytest.raises(NoPath):
        category_path(with_island, "a", "y")


def test_path_tie_breaks_lexicographic():
    # two length-2 routes from x to y: via "m" and via "z"; "m" sorts first
    edges = [("m", "x"), ("z", "x"), ("y", "m"), ("y", "z")]
    graph = CategoryGraph(edges, root="x")
    assert category_path(graph, "x", "y") == ["x", "m", "y"]


def test_lcs_worked_example():
    graph = example_graph()
    assert lcs(graph, "Marine Biology", "Ocean Exploration") == "Oceanography"
    assert lcs(graph, "Cetology", "Cetology") == "Cetology"


def test_lcs_chain():
    graph = CategoryGraph([("A", "root"), ("B", "A")], root="root")
    assert lcs(graph, "A", "B") == "A"


def test_subtree_examples():
    graph = example_graph()
    assert subtree(graph, "Cetology") == {"Cetology"}
    assert subtree(graph, "Earth Science") == graph.nodes
    assert subtree(graph, "Oceanography") == {
        "Oceanography", "Marine Biology", "Marine Geology",
        "Marine Botany", "Cetology", "Ocean Exploration",
    }


def test_cycle_rejected():
    with pytest.raises(ValueError):
        CategoryGraph([("a", "root"), ("b", "a"), ("a", "b")], root="root")


# ---------------------------------------------------------------------------
# lcs vs brute-force oracle on random DAGs
# ---------------------------------------------------------------------------

def oracle_ancestors(graph, c):
    out = {c}
    stack = [c]
    while stack:
        node = stack.pop()
        for parent in graph.parents.get(node, ()):
            if parent not in out:
                out.add(parent)
                stack.append(parent)
    return out


def oracle_depth(graph):
    depths = {graph.root: 0}
    frontier = [graph.root]
    while frontier:
        nxt = []
        for node in frontier:
            for child in graph.children.get(node, ()):
                if child not in depths:
                    depths[child] = depths[node] + 1
                    nxt.append(child)
        frontier = nxt
    return depths


def oracle_subtree_size(graph, c):
    seen = {c}
    stack = [c]
    while stack:
        node = stack.pop()
        for child in graph.children.get(node, ()):
            if child not in seen:
                seen.add(child)
                stack.append(child)
    return len(seen)


def oracle_lcs(graph, c1, c2):
    common = oracle_ancestors(graph, c1) & oracle_ancestors(graph, c2)
    depths = oracle_depth(graph)
    best = None
    best_key = None
    for node in common:
        key = (-depths[node], oracle_subtree_size(graph, node), node)
        if best_key is None or key < best_key:
            best_key = key
            best = node
    return best


def random_dag(rng, max_nodes=50):
    n = rng.randrange(2, max_nodes + 1)
    names = [f"n{i:02d}" for i in range(n)]
    rng.shuffle(names)
    root = names[0]
    edges = []
    for i in range(1, n):
        # every node gets at least one parent among earlier nodes
        parents = rng.sample(names[:i], min(len(names[:i]), rng.randrange(1, 3)))
        for p in parents:
            edges.append((names[i], p))
    return CategoryGraph(edges, root=root)


def test_lcs_matches_oracle_on_random_dags():
    rng = random.Random(1234)
    for _ in range(200):
        graph = random_dag(rng)
        nodes = sorted(graph.nodes)
        for _ in range(5):
            c1, c2 = rng.choice(nodes), rng.choice(nodes)
            assert lcs(graph, c1, c2) == oracle_lcs(graph, c1, c2)


# ---------------------------------------------------------------------------
# precision
# ---------------------------------------------------------------------------

def test_precision_at_k_cases():
    assert precision_at_k(["r1", "n1", "r2", "n2"], {"r1", "r2", "r3"}, 4) == 0.5
    assert precision_at_k(["r1", "r2"], {"r1", "r2"}, 2) == 1.0
    assert precision_at_k(["r1", "r2", "r3"], {"r1", "r2", "r3"}, 5) == pytest.approx(0.6)
    with pytest.raises(ValueError):
        precision_at_k([], set(), 0)


def test_precision_perfect_ranking_anti_monotone():
    ranked = ["r1", "r2", "r3", "x", "y", "z"]
    relevant = {"r1", "r2", "r3"}
    values = [precision_at_k(ranked, relevant, k) for k in (3, 4, 5, 6)]
    assert values == sorted(values, reverse=True)


# ---------------------------------------------------------------------------
# experiments on the bundled corpus
# ---------------------------------------------------------------------------

@pytest.fixture(scope="module")
def bundled():
    return load_dataset(bundled_dataset_dir())


def desk_spec(experiment, **overrides):
    defaults = dict(
        experiment=experiment,
        config=FeatureConfig.TEXT_ONLY,
        min_category_size=5,
        pair_count=20,
        repetitions=3,
        seed=42,
    )
    defaults.update(overrides)
    return ExperimentSpec(**defaults)


def test_bundled_dataset_shape(bundled):
    assert len(bundled.documents) == 60
    assert len(bundled.graph.nodes) == 12
    assert bundled.graph.root == "earth_science"


def test_experiment_one_bounds_and_dominance(bundled):
    report = run_experiment(bundled, desk_spec(1))
    for k in report.spec.ks:
        assert 0.0 <= report.strict[k] <= 1.0
        assert report.relaxed[k] >= report.strict[k] - 1e-12


def test_experiment_two_bounds_and_dominance(bundled):
    report = run_experiment(bundled, desk_spec(2))
    for k in report.spec.ks:
        assert 0.0 <= report.strict[k] <= 1.0
        assert report.relaxed[k] >= report.strict[k] - 1e-12
    assert all(size == 20 for size in report.sample_sizes)


def test_seeded_determinism(bundled):
    a = run_experiment(bundled, desk_spec(2))
    b = run_experiment(bundled, desk_spec(2))
    assert a == b
    c = run_experiment(bundled, desk_spec(2, seed=43))
    assert c != a


def test_dataset_too_small():
    docs = [CorpusDocument("d1", text="alpha beta"), CorpusDocument("d2", text="gamma")]
    graph = CategoryGraph([("a", "root"), ("b", "root")], root="root",
                          assignments={"d1": {"a"}, "d2": {"b"}})
    dataset = EvalDataset(docs, graph)
    with pytest.raises(DatasetTooSmall):
        run_experiment(dataset, desk_spec(1, min_category_size=10))
    # the only pair routes through the root, so experiment 2 has no sample
    with pytest.raises(DatasetTooSmall):
        run_experiment(dataset, desk_spec(2))


def test_report_serialization(bundled):
    report = run_experiment(bundled, desk_spec(1, repetitions=1))
    payload = report.to_dict()
    assert payload["experiment"] == 1
    assert set(payload["strict"]) == {"1", "5", "10", "15", "20"}
    table = report.to_table()
    assert "p@20" in table and "strict" in table and "relaxed" in table


def test_spec_defaults_match_protocol():
    spec = ExperimentSpec(experiment=1)
    assert spec.min_category_size == 40
    assert spec.sample_fraction == 0.10
    assert spec.pair_count == 1000
    assert spec.repetitions == 10
    assert spec.ks == (1, 5, 10, 15, 20)


def test_recorded_reference_magnitudes():
    from roengine.evaluation import FULL_SCALE_REFERENCE

    assert FULL_SCALE_REFERENCE[(1, FeatureConfig.CONCEPTS_TEXT, "strict")][1] == 0.571
    assert FULL_SCALE_REFERENCE[(1, FeatureConfig.CONCEPTS_TEXT, "strict")][20] == 0.398
    assert FULL_SCALE_REFERENCE[(2, FeatureConfig.TEXT_ONLY, "strict")][1] == 0.577
    assert FULL_SCALE_REFERENCE[(2, FeatureConfig.TEXT_ONLY, "relaxed")][1] == 0.740
    for values in FULL_SCALE_REFERENCE.values():
        assert list(values) == [1, 5, 10, 15, 20]
