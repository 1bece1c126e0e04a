import json

import pytest

from asciikit import prompts
from asciikit.bench import (
    KIND_DIRECT,
    KIND_GENERATION,
    KIND_SELECT,
    BenchManifest,
    ManifestError,
    SchemaError,
    build_prompt,
    dataset_stats,
    load_bench,
    result_from_json,
    result_to_json,
    run_bench,
)
from asciikit.client import MockBackend, MockScript
from asciikit.grid import AsciiArt, normalize
from asciikit.pipeline import DatasetRecord
from conftest import DATA, wrap_art

BENCH = DATA / "bench" / "manifest.json"


@pytest.fixture(scope="module")
def tasks():
    return load_bench(BENCH)


class TestLoadBench:
    def test_fixture_counts(self, tasks):
        assert len(tasks) == 12
        by_kind = {}
        for task in tasks:
            by_kind.setdefault(task.kind, []).append(task)
        assert len(by_kind[KIND_GENERATION]) == 4
        assert len(by_kind[KIND_DIRECT]) == 4
        assert len(by_kind[KIND_SELECT]) == 4
        subsets = {t.subset for t in tasks}
        assert subsets == {"recall", "generalization", "seen", "unseen"}

    def test_selection_invariant(self, tasks):
        for task in tasks:
            if task.kind == KIND_SELECT:
                assert task.options.count(task.ground_truth) == 1

    def test_missing_ground_truth_in_options(self, tmp_path):
        bad = {"id": "x", "art": "##\n##\n##", "category": "Box",
               "options": ["Circle", "Line"]}
        manifest = _write_manifest(tmp_path, seen=[bad])
        with pytest.raises(SchemaError) as exc:
            load_bench(manifest)
        assert exc.value.lineno == 1

    def test_missing_file(self, tmp_path):
        manifest_path = tmp_path / "manifest.json"
        manifest_path.write_text(json.dumps({
            "generation": {"recall": "nope.jsonl", "generalization": "nope.jsonl"},
            "understanding": {"seen": "nope.jsonl", "unseen": "nope.jsonl"},
        }))
        with pytest.raises(ManifestError):
            BenchManifest.load(manifest_path)

    def test_count_mismatch(self, tmp_path):
        manifest = _write_manifest(tmp_path, counts={"recall": 5})
        with pytest.raises(ManifestError):
            load_bench(manifest)

    def test_missing_section(self, tmp_path):
        path = tmp_path / "manifest.json"
        path.write_text(json.dumps({"generation": {}}))
        with pytest.raises(ManifestError):
            BenchManifest.load(path)


def _write_manifest(tmp_path, seen=None, counts=None):
    files = {
        "gr.jsonl": [{"id": "g1", "instruction": "a box", "category": "Box"}],
        "gg.jsonl": [{"id": "g2", "instruction": "a tall box", "category": "Box"}],
        "us.jsonl": seen if seen is not None else [
            {"id": "u1", "art": "##\n##\n##", "category": "Box",
             "options": ["Box", "Circle"]}
        ],
        "uu.jsonl": [{"id": "u2", "art": "()\n()\n()", "category": "Loop",
                      "options": ["Loop", "Box"]}],
    }
    for name, rows in files.items():
        with open(tmp_path / name, "w") as fh:
            for row in rows:
                fh.write(json.dumps(row) + "\n")
    manifest = {
        "generation": {"recall": "gr.jsonl", "generalization": "gg.jsonl"},
        "understanding": {"seen": "us.jsonl", "unseen": "uu.jsonl"},
    }
    if counts:
        manifest["counts"] = counts
    path = tmp_path / "manifest.json"
    path.write_text(json.dumps(manifest))
    return path


class TestBuildPrompt:
    def test_generation_prompt_verbatim(self, tasks):
        task = next(t for t in tasks if t.id == "gr1")
        request = build_prompt(task)
        assert request.user_prompt == task.instruction
        assert request.system_prompt == prompts.GENERATION_SYSTEM
        assert request.system_prompt.startswith("You are an ASCII art generation expert.")

    def test_direct_embeds_art_in_tags(self, tasks):
        task = next(t for t in tasks if t.kind == KIND_DIRECT)
        request = build_prompt(task)
        assert request.user_prompt.startswith("What is depicted in the following ASCII art?")
        assert f"<art>\n{task.art.text}\n</art>" in request.user_prompt

    def test_select_options_one_per_line(self, tasks):
        task = next(t for t in tasks if t.id == "us1:select")
        request = build_prompt(task)
        assert "Options:\nCat\nDog\nFox" in request.user_prompt
        assert "Please respond with only the category name" in request.user_prompt

    def test_system_prompt_shared_per_kind(self, tasks):
        by_kind = {}
        for task in tasks:
            by_kind.setdefault(task.kind, set()).add(build_prompt(task).system_prompt)
        for kind, systems in by_kind.items():
            assert len(systems) == 1, kind

    def test_pure_function(self, tasks):
        for task in tasks:
            assert build_prompt(task) == build_prompt(task)


def scripted_backend(tasks):
    """Well-formed responses for all 12 fixture tasks."""
    script = MockScript()
    for task in tasks:
        if task.kind == KIND_GENERATION:
            script.add(build_prompt(task), wrap_art("###\n# #\n###"))
        elif task.kind == KIND_SELECT:
            script.add(build_prompt(task), f"{task.ground_truth}.")
        else:
            script.add(build_prompt(task), f"This shows a {task.ground_truth.lower()}.")
    return MockBackend(script)


class TestRunBench:
    def test_all_parse(self, tasks):
        results = run_bench(tasks, scripted_backend(tasks))
        assert len(results) == len(tasks)
        assert all(r.parse_ok for r in results)
        assert [r.task_id for r in results] == [t.id for t in tasks]

    def test_unclosed_tag_recorded(self, tasks):
        gen_task = next(t for t in tasks if t.kind == KIND_GENERATION)
        script = MockScript(fallback="fine")
        script.add(build_prompt(gen_task), "<art>\n###\n# #\n###")
        results = run_bench([gen_task], MockBackend(script))
        assert not results[0].parse_ok
        assert results[0].raw.startswith("<art>")
        assert results[0].parsed is None

    def test_rerun_identical(self, tasks):
        first = run_bench(tasks, scripted_backend(tasks))
        second = run_bench(tasks, scripted_backend(tasks))
        assert [result_to_json(r) for r in first] == [result_to_json(r) for r in second]

    def test_answer_line_extraction(self, tasks):
        select = next(t for t in tasks if t.id == "us1:select")
        script = MockScript().add(build_prompt(select), 'Happy to help!\n"Cat."\n')
        results = run_bench([select], MockBackend(script))
        assert results[0].parsed == "Cat"

    def test_parallel_preserves_order(self, tasks):
        results = run_bench(tasks, scripted_backend(tasks), parallelism=4)
        assert [r.task_id for r in results] == [t.id for t in tasks]

    def test_result_json_round_trip(self, tasks):
        for result in run_bench(tasks, scripted_backend(tasks)):
            assert result_from_json(result_to_json(result)) == result


def art_of(text):
    return normalize(AsciiArt.from_text(text))


class TestDatasetStats:
    def test_even_count_median_is_midpoint(self):
        records = [
            DatasetRecord(id="a", art=art_of("\n".join(["x" * 10] * 10)),
                          category="A", description="a"),
            DatasetRecord(id="b", art=art_of("\n".join(["y" * 29] * 7)),
                          category="B", description="b"),
        ]
        stats = dataset_stats(records)["all"]
        assert stats.median_area == pytest.approx((100 + 203) / 2)  # 151.5

    def test_single_art(self):
        records = [DatasetRecord(id="a", art=art_of("\n".join(["x" * 5] * 4)),
                                 category="A", description="a")]
        stats = dataset_stats(records)["all"]
        assert (stats.mean_width, stats.mean_height) == (5.0, 4.0)
        assert stats.median_area == 20 and stats.max_area == 20

    def test_six_art_recomputation(self):
        dims = [(4, 3), (6, 5), (10, 2), (7, 7), (3, 9), (12, 4)]
        records = [
            DatasetRecord(id=f"r{i}", art=art_of("\n".join(["#" * w] * h)),
                          category=f"C{i % 3}", description="d")
            for i, (w, h) in enumerate(dims)
        ]
        stats = dataset_stats(records)["all"]
        # independent recomputation: areas 12, 30, 20, 49, 27, 48
        areas = sorted(w * h for w, h in dims)  # 12, 20, 27, 30, 48, 49
        assert stats.samples == 6
        assert stats.categories == 3
        assert stats.mean_width == pytest.approx(sum(w for w, _ in dims) / 6)
        assert stats.mean_height == pytest.approx(sum(h for _, h in dims) / 6)
        assert stats.median_area == pytest.approx((areas[2] + areas[3]) / 2)
        assert stats.max_area == 49

    def test_bench_tasks_grouped_by_subset(self, tasks):
        stats = dataset_stats(tasks)
        assert set(stats) == {"recall", "generalization", "seen", "unseen"}
        # two understanding tasks share one art: samples count records
        assert stats["seen"].samples == 2
        assert stats["seen"].categories == 2

    def test_permutation_invariance(self, tasks):
        forward = dataset_stats(tasks)
        backward = dataset_stats(list(reversed(tasks)))
        assert forward == backward
