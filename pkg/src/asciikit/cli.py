"""Command-line entry points: evolve, bench-run, judge, calibrate, report, serve."""

from __future__ import annotations

import json
import socket
import sys
from pathlib import Path

import click

from . import bench as bench_mod
from . import judge as judge_mod
from . import pipeline as pipe
from . import report as report_mod
from .client import (
    BackendConfig,
    ChatBackend,
    HttpBackend,
    Journal,
    JournaledBackend,
    MockBackend,
    MockScript,
    RetryPolicy,
)
from .grid import FilterPolicy
from .metrics import ZeroVariance, calibrate
from .util import read_jsonl, write_jsonl


class PortInUse(click.ClickException):
    pass


def _load_backend_config(backends_file: str | None, model_id: str) -> BackendConfig:
    if not backends_file:
        raise click.UsageError("--backends FILE is required unless --mock is given")
    registry = json.loads(Path(backends_file).read_text())
    if model_id not in registry:
        raise click.UsageError(f"backend id {model_id!r} not in {backends_file}")
    entry = registry[model_id]
    return BackendConfig(
        endpoint=entry["endpoint"],
        model=entry["model"],
        api_key_env=entry.get("api_key_env", "ASCIIKIT_API_KEY"),
        retry=RetryPolicy(
            max_attempts=int(entry.get("max_attempts", 3)),
            base_backoff=float(entry.get("base_backoff", 0.5)),
        ),
        max_inflight=int(entry.get("max_inflight", 4)),
    )


def _resolve_backend(
    mock: str | None,
    backends_file: str | None,
    model_id: str | None,
    journal_path: str | None,
) -> ChatBackend:
    if mock:
        backend: ChatBackend = MockBackend(MockScript.from_file(mock))
    else:
        if not model_id:
            raise click.UsageError("need --model (with --backends) or --mock")
        backend = HttpBackend(_load_backend_config(backends_file, model_id))
    if journal_path:
        backend = JournaledBackend(backend, Journal(journal_path))
    return backend


@click.group()
def main():
    """ASCII art dataset synthesis, benchmarking, and judging."""


@main.command()
@click.option("--seeds", "seeds_file", required=True, type=click.Path(exists=True))
@click.option("--out", "out_file", required=True, type=click.Path())
@click.option("--budget", default=6, show_default=True, help="variants per seed")
@click.option("--k", default=2, show_default=True, help="few-shot exemplars per call")
@click.option("--mock", type=click.Path(exists=True), help="scripted mock responses (JSON)")
@click.option("--backends", "backends_file", type=click.Path(exists=True))
@click.option("--model", "model_id", help="backend id from the --backends registry")
@click.option("--journal", "journal_path", type=click.Path(), help="request/response log")
@click.option("--curation", "curation_file", type=click.Path(exists=True),
              help="curation export; rejected seed ids are dropped")
@click.option("--parallel", default=1, show_default=True)
@click.option("--sft", "sft_file", type=click.Path(), help="also write the SFT chat-format export")
def evolve(seeds_file, out_file, budget, k, mock, backends_file, model_id,
           journal_path, curation_file, parallel, sft_file):
    """Filter seeds and synthesize the evolved dataset."""
    backend = _resolve_backend(mock, backends_file, model_id, journal_path)
    raw = [obj for _, obj in read_jsonl(seeds_file)]
    if curation_file:
        verdicts = json.loads(Path(curation_file).read_text())
        rejected_ids = set(verdicts.get("rejected", []))
        raw = [obj for obj in raw if str(obj.get("id")) not in rejected_ids]
    policy = FilterPolicy()
    seeds, rejected = pipe.filter_seeds(raw, policy)
    for rej in rejected:
        click.echo(f"rejected {rej.id}: {rej.reason} ({rej.detail})", err=True)
    config = pipe.PipelineConfig(budget=budget, k=k, policy=policy, parallelism=parallel)
    result = pipe.run_pipeline(seeds, config, backend)
    for failure in result.failures:
        click.echo(
            f"dropped {failure.variant_id or failure.seed_id} at {failure.stage}: "
            f"{failure.reason}",
            err=True,
        )
    n = write_jsonl(out_file, (pipe.record_to_json(r) for r in result.records))
    click.echo(f"wrote {n} records to {out_file} "
               f"({len(seeds)} seeds, {n - len(seeds)} variants)")
    if sft_file:
        sft = pipe.export_sft(result.records)
        m = write_jsonl(sft_file, (pipe.supervision_to_json(r) for r in sft))
        click.echo(f"wrote {m} supervision records to {sft_file}")


@main.command("export-sft")
@click.option("--dataset", "dataset_file", required=True, type=click.Path(exists=True))
@click.option("--out", "out_file", required=True, type=click.Path())
def export_sft(dataset_file, out_file):
    """Convert a dataset JSONL into chat-format supervision triplets."""
    records = [pipe.record_from_json(obj) for _, obj in read_jsonl(dataset_file)]
    sft = pipe.export_sft(records)
    n = write_jsonl(out_file, (pipe.supervision_to_json(r) for r in sft))
    click.echo(f"wrote {n} supervision records to {out_file}")


@main.command("bench-run")
@click.option("--manifest", required=True, type=click.Path(exists=True))
@click.option("--model", "model_id", help="backend id from the --backends registry")
@click.option("--out", "out_file", required=True, type=click.Path())
@click.option("--mock", type=click.Path(exists=True))
@click.option("--backends", "backends_file", type=click.Path(exists=True))
@click.option("--journal", "journal_path", type=click.Path())
@click.option("--parallel", default=1, show_default=True)
def bench_run(manifest, model_id, out_file, mock, backends_file, journal_path, parallel):
    """Run a candidate backend over the benchmark tasks."""
    backend = _resolve_backend(mock, backends_file, model_id, journal_path)
    tasks = bench_mod.load_bench(manifest)
    results = bench_mod.run_bench(tasks, backend, parallelism=parallel)
    n = write_jsonl(out_file, (bench_mod.result_to_json(r) for r in results))
    failed = sum(1 for r in results if not r.parse_ok)
    click.echo(f"wrote {n} results to {out_file} ({failed} unparseable)")


@main.command("judge")
@click.option("--results", "results_file", required=True, type=click.Path(exists=True))
@click.option("--bench", "manifest", required=True, type=click.Path(exists=True))
@click.option("--judge", "judge_id", help="backend id of the judge model")
@click.option("--out", "out_file", required=True, type=click.Path())
@click.option("--mock", type=click.Path(exists=True))
@click.option("--backends", "backends_file", type=click.Path(exists=True))
@click.option("--journal", "journal_path", type=click.Path())
def judge_cmd(results_file, manifest, judge_id, out_file, mock, backends_file, journal_path):
    """Score benchmark results with the LLM judge."""
    backend = _resolve_backend(mock, backends_file, judge_id, journal_path)
    tasks = bench_mod.load_bench(manifest)
    results = [bench_mod.result_from_json(obj) for _, obj in read_jsonl(results_file)]
    generation, understanding = judge_mod.judge_results(tasks, results, backend)
    rows = [judge_mod.scored_generation_to_json(g) for g in generation]
    rows += [judge_mod.scored_understanding_to_json(u) for u in understanding]
    n = write_jsonl(out_file, rows)
    click.echo(f"wrote {n} scored rows to {out_file}")


def _read_score_vector(path: str) -> list[float]:
    values = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            try:
                values.append(float(line))
            except ValueError:
                obj = json.loads(line)
                values.append(float(obj["score"]))
    return values


@main.command("calibrate")
@click.option("--judge-scores", "judge_file", required=True, type=click.Path(exists=True))
@click.option("--human", "human_file", required=True, type=click.Path(exists=True))
def calibrate_cmd(judge_file, human_file):
    """Correlate judge scores with averaged human scores."""
    judge_scores = _read_score_vector(judge_file)
    human_scores = _read_score_vector(human_file)
    try:
        rep = calibrate(judge_scores, human_scores)
    except ZeroVariance as exc:
        click.echo(f"correlation undefined (constant vector); mse={exc.mse:.6f}")
        sys.exit(1)
    click.echo(
        f"n={rep.n} pearson={rep.pearson:.4f} spearman={rep.spearman:.4f} mse={rep.mse:.6f}"
    )


@main.command("report")
@click.option("--scored", "scored_files", required=True, multiple=True,
              type=click.Path(exists=True))
@click.option("--baseline", "baseline_files", multiple=True, type=click.Path(exists=True),
              help="scored files of a baseline run; adds a relative-improvement table")
@click.option("--format", "fmt", type=click.Choice(["md", "markdown", "csv"]), default="md")
@click.option("--out", "out_file", required=True, type=click.Path())
def report_cmd(scored_files, baseline_files, fmt, out_file):
    """Render aggregate tables from scored result files."""
    bundle = _bundle_from_files(scored_files)
    if baseline_files:
        baseline = _bundle_from_files(baseline_files)
        bundle.deltas = report_mod.diff_reports(baseline, bundle)
    text = report_mod.render_report(bundle, format=fmt)
    Path(out_file).write_text(text)
    click.echo(f"wrote report to {out_file}")


def _bundle_from_files(paths) -> report_mod.ReportBundle:
    generation, understanding = [], []
    for path in paths:
        for _, obj in read_jsonl(path):
            scored = judge_mod.scored_from_json(obj)
            if isinstance(scored, judge_mod.ScoredGeneration):
                generation.append(scored)
            else:
                understanding.append(scored)
    bundle = report_mod.ReportBundle(metadata={"sources": ", ".join(str(p) for p in paths)})
    if generation:
        bundle.generation = judge_mod.aggregate_generation(generation)
    if understanding:
        bundle.understanding = judge_mod.aggregate_understanding(understanding)
    return bundle


@main.command("serve")
@click.option("--port", default=8765, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--curation", "curation_file", type=click.Path(exists=True))
@click.option("--calibration", "calibration_file", type=click.Path(exists=True))
@click.option("--static", "static_dir", type=click.Path(),
              help="directory of built frontend assets to serve at /ui")
def serve(port, host, curation_file, calibration_file, static_dir):
    """Start the local annotation service."""
    import uvicorn

    from . import service as service_mod

    if not curation_file and not calibration_file:
        raise click.UsageError("need --curation and/or --calibration queue files")
    items = []
    store_paths = {}
    if curation_file:
        items += service_mod.load_queue(service_mod.KIND_CURATION, curation_file)
        store_paths[service_mod.KIND_CURATION] = Path(curation_file + ".annotations")
    if calibration_file:
        items += service_mod.load_queue(service_mod.KIND_CALIBRATION, calibration_file)
        store_paths[service_mod.KIND_CALIBRATION] = Path(calibration_file + ".annotations")
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.bind((host, port))
    except OSError as exc:
        raise PortInUse(f"port {port} unavailable: {exc}") from exc
    finally:
        probe.close()
    store = service_mod.AnnotationStore(items, store_paths)
    app = service_mod.create_app(store, static_dir=static_dir)
    click.echo(f"serving {len(items)} items on http://{host}:{port}")
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
