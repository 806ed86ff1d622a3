"""Command line entry points: serve the HTTP API, run batch enrichment,
and run the evaluation experiments."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .enrichment import KnowledgeLexicon, enrich_store, starter_lexicon
from .errors import RoEngineError
from .evaluation import ExperimentSpec, bundled_dataset_dir, load_dataset, run_experiment
from .model import Iri
from .similarity import FeatureConfig
from .store import RoStore


@click.group()
def main() -> None:
    """Research-object management engine."""


@main.command()
@click.option("--store", "store_dir", required=True, type=click.Path(),
              envvar="ROENGINE_STORE", help="Store directory.")
@click.option("--addr", default="127.0.0.1:8000", show_default=True,
              envvar="ROENGINE_ADDR", help="host:port to bind.")
@click.option("--tokens", "tokens_file", type=click.Path(exists=True), default=None,
              envvar="ROENGINE_TOKENS",
              help="Static bearer token file (token <space> agent per line); omit to disable auth.")
@click.option("--lexicon", "lexicon_file", type=click.Path(exists=True), default=None,
              envvar="ROENGINE_LEXICON",
              help="Lexicon JSON; defaults to the bundled earth-science lexicon.")
@click.option("--research-area-vocab", "vocab_file", type=click.Path(exists=True), default=None,
              envvar="ROENGINE_RESEARCH_AREA_VOCAB",
              help="JSON list of [narrower, broader] research-area pairs.")
def serve(store_dir: str, addr: str, tokens_file: str | None, lexicon_file: str | None,
          vocab_file: str | None) -> None:
    """Run the HTTP service."""
    import uvicorn

    from .api import create_app, load_tokens

    host, _, port = addr.partition(":")
    lexicon = KnowledgeLexicon.from_file(lexicon_file) if lexicon_file else starter_lexicon()
    vocab_edges = None
    if vocab_file:
        vocab_edges = [tuple(pair) for pair in json.loads(Path(vocab_file).read_text())]
    app = create_app(
        RoStore(store_dir),
        lexicon=lexicon,
        tokens=load_tokens(tokens_file) if tokens_file else None,
        research_area_vocab=vocab_edges,
    )
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8000))


@main.command(name="enrich")
@click.option("--store", "store_dir", required=True, type=click.Path(exists=True))
@click.option("--ro", "ro_id", default=None, help="Enrich a single research object.")
@click.option("--all", "all_ros", is_flag=True, help="Enrich every mutable research object.")
@click.option("--lexicon", "lexicon_file", type=click.Path(exists=True), default=None)
def enrich_cmd(store_dir: str, ro_id: str | None, all_ros: bool, lexicon_file: str | None) -> None:
    """Run the enrichment pipeline over the store."""
    if bool(ro_id) == all_ros:
        raise click.UsageError("pass exactly one of --ro <id> or --all")
    store = RoStore(store_dir)
    lexicon = KnowledgeLexicon.from_file(lexicon_file) if lexicon_file else starter_lexicon()
    ids = None if all_ros else [Iri(ro_id)]
    try:
        reports = enrich_store(store, lexicon, ids=ids)
    except RoEngineError as exc:
        raise click.ClickException(str(exc)) from exc
    for report in reports:
        click.echo(
            f"{report.ro_id}: {report.segments} segments, {report.annotated} subjects"
            + (f", {len(report.warnings)} warnings" if report.warnings else "")
        )


@main.command(name="evaluate")
@click.option("--experiment", type=click.Choice(["1", "2"]), required=True)
@click.option("--config", "config_name", default="TextOnly", show_default=True,
              type=click.Choice([c.value for c in FeatureConfig]))
@click.option("--seed", type=int, default=42, show_default=True)
@click.option("--data", "data_dir", type=click.Path(exists=True), default=None,
              help="Dataset directory; defaults to the bundled synthetic corpus.")
@click.option("--min-category-size", type=int, default=None,
              help="Experiment 1 category filter (default 40; bundled corpus wants 5).")
@click.option("--sample-fraction", type=float, default=0.10, show_default=True)
@click.option("--pairs", "pair_count", type=int, default=None,
              help="Experiment 2 pair sample size (default 1000; bundled corpus wants 20).")
@click.option("--repetitions", type=int, default=10, show_default=True)
@click.option("--with-lexicon/--no-lexicon", default=True, show_default=True,
              help="Analyze articles so semantic configurations have features.")
@click.option("--json", "as_json", is_flag=True, help="Print the JSON report only.")
def evaluate_cmd(
    experiment: str,
    config_name: str,
    seed: int,
    data_dir: str | None,
    min_category_size: int | None,
    sample_fraction: float,
    pair_count: int | None,
    repetitions: int,
    with_lexicon: bool,
    as_json: bool,
) -> None:
    """Run a similarity evaluation experiment and print the report."""
    directory = Path(data_dir) if data_dir else bundled_dataset_dir()
    bundled = data_dir is None
    dataset = load_dataset(directory, starter_lexicon() if with_lexicon else None)
    spec = ExperimentSpec(
        experiment=int(experiment),
        config=FeatureConfig(config_name),
        min_category_size=min_category_size if min_category_size is not None else (5 if bundled else 40),
        sample_fraction=sample_fraction,
        pair_count=pair_count if pair_count is not None else (20 if bundled else 1000),
        repetitions=repetitions,
        seed=seed,
    )
    try:
        report = run_experiment(dataset, spec)
    except RoEngineError as exc:
        raise click.ClickException(str(exc)) from exc
    if as_json:
        click.echo(report.to_json())
    else:
        click.echo(report.to_json())
        click.echo("")
        click.echo(report.to_table())


if __name__ == "__main__":
    sys.exit(main())
