#!/usr/bin/env python3
"""End-to-end offline demo: evolve a 3-seed corpus, run the fixture bench,
judge the results, and render a report, all against scripted mock backends.

Writes everything under ./runs/demo/. No network, deterministic output.
"""

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))
sys.path.insert(0, str(ROOT / "tests"))

from asciikit.bench import KIND_DIRECT, KIND_GENERATION, KIND_SELECT, build_prompt, load_bench, result_to_json, run_bench
from asciikit.client import MockBackend, MockScript
from asciikit.grid import FilterPolicy
from asciikit.judge import (
    DIMENSIONS,
    aggregate_generation,
    aggregate_understanding,
    build_generation_judge_request,
    build_understanding_judge_request,
    judge_results,
    scored_generation_to_json,
    scored_understanding_to_json,
)
from asciikit.pipeline import PipelineConfig, export_sft, filter_seeds, record_to_json, run_pipeline, supervision_to_json
from asciikit.report import ReportBundle, render_report
from asciikit.util import write_jsonl
from conftest import THREE_SEED_PLANS, build_pipeline_script, load_jsonl, wrap_art

OUT = ROOT / "runs" / "demo"


def main():
    OUT.mkdir(parents=True, exist_ok=True)

    seeds, rejected = filter_seeds(
        load_jsonl(ROOT / "tests" / "data" / "seeds_raw.jsonl"), FilterPolicy()
    )
    print(f"seed curation: {len(seeds)} accepted, {len(rejected)} rejected")
    for rej in rejected:
        print(f"  - {rej.id}: {rej.reason} ({rej.detail})")

    three = [s for s in seeds if s.id in ("r0-cat", "r1-truck", "r2-wizard")]
    renamed = []
    for seed in three:  # the canned plans are keyed by short names
        short = seed.id.split("-", 1)[1]
        renamed.append(type(seed)(id=short, art=seed.art, category=seed.category,
                                  description=seed.description))
    config = PipelineConfig(budget=2, k=2)
    backend = MockBackend(build_pipeline_script(renamed, config, THREE_SEED_PLANS))
    result = run_pipeline(renamed, config, backend)
    write_jsonl(OUT / "dataset.jsonl", (record_to_json(r) for r in result.records))
    write_jsonl(OUT / "sft.jsonl", (supervision_to_json(s) for s in export_sft(result.records)))
    print(f"pipeline: {len(result.records)} records, {len(result.failures)} discards "
          f"({backend.calls} mock calls)")

    tasks = load_bench(ROOT / "tests" / "data" / "bench" / "manifest.json")
    candidate = MockScript()
    for task in tasks:
        if task.kind == KIND_GENERATION:
            candidate.add(build_prompt(task), wrap_art("###\n#_#\n###"))
        elif task.kind == KIND_SELECT:
            candidate.add(build_prompt(task), task.ground_truth)
        else:
            candidate.add(build_prompt(task), f"a {task.ground_truth.lower()}")
    results = run_bench(tasks, MockBackend(candidate))
    write_jsonl(OUT / "bench_results.jsonl", (result_to_json(r) for r in results))
    print(f"bench: {len(results)} results")

    judge_script = MockScript()
    by_id = {t.id: t for t in tasks}
    for res in results:
        task = by_id[res.task_id]
        if task.kind == KIND_GENERATION and res.parse_ok:
            judge_script.add(
                build_generation_judge_request(task, res),
                json.dumps({d: 0.75 for d in DIMENSIONS} | {"reasoning": "demo"}),
            )
        elif task.kind == KIND_DIRECT:
            judge_script.add(
                build_understanding_judge_request(task.ground_truth, res.parsed),
                json.dumps({"is_correct": True, "confidence": 0.9}),
            )
    generation, understanding = judge_results(tasks, results, MockBackend(judge_script))
    rows = [scored_generation_to_json(g) for g in generation]
    rows += [scored_understanding_to_json(u) for u in understanding]
    write_jsonl(OUT / "scored.jsonl", rows)

    bundle = ReportBundle(
        generation=aggregate_generation(generation),
        understanding=aggregate_understanding(understanding),
        metadata={"sources": "runs/demo/scored.jsonl", "backend": "mock"},
    )
    (OUT / "report.md").write_text(render_report(bundle, format="markdown"))
    print(f"report written to {OUT / 'report.md'}")
    print()
    print(render_report(bundle, format="markdown"))


if __name__ == "__main__":
    main()
