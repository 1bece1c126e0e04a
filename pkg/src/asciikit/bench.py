"""Benchmark assembly and execution.

A bench lives on disk as a JSON manifest naming one JSONL task file per
subset. Generation subsets (recall/generalization) carry instructions;
understanding subsets (seen/unseen) carry arts that are expanded into one
open-ended task and one label-selection task each.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from statistics import median
from typing import Iterable, Sequence

from . import prompts
from .client import BackendError, ChatBackend, ChatRequest
from .grid import ArtError, AsciiArt, extract_answer_line, normalize, parse_art_block
from .util import read_jsonl

KIND_GENERATION = "generation"
KIND_DIRECT = "understand-direct"
KIND_SELECT = "understand-select"

SUBSET_RECALL = "recall"
SUBSET_GENERALIZATION = "generalization"
SUBSET_SEEN = "seen"
SUBSET_UNSEEN = "unseen"

GENERATION_SUBSETS = (SUBSET_RECALL, SUBSET_GENERALIZATION)
UNDERSTANDING_SUBSETS = (SUBSET_SEEN, SUBSET_UNSEEN)


class ManifestError(ValueError):
    """The manifest file is missing, unreadable, or structurally wrong."""


class SchemaError(ValueError):
    """A task line violates the schema; carries file and line number."""

    def __init__(self, path: str | Path, lineno: int, message: str):
        super().__init__(f"{path}:{lineno}: {message}")
        self.path = str(path)
        self.lineno = lineno


@dataclass(frozen=True)
class BenchTask:
    id: str
    kind: str
    subset: str
    instruction: str | None = None
    art: AsciiArt | None = None
    options: tuple[str, ...] | None = None
    ground_truth: str | None = None
    category: str | None = None
    reference_art: AsciiArt | None = None


@dataclass(frozen=True)
class TaskResult:
    task_id: str
    raw: str
    parsed: str | None
    parse_ok: bool
    error: str | None = None


@dataclass(frozen=True)
class BenchManifest:
    root: Path
    files: dict[str, Path]
    counts: dict[str, int]
    schema_version: int = 1

    @classmethod
    def load(cls, path: str | Path) -> "BenchManifest":
        path = Path(path)
        try:
            data = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ManifestError(f"cannot read manifest {path}: {exc}") from exc
        files = {}
        for section, subsets in (
            ("generation", GENERATION_SUBSETS),
            ("understanding", UNDERSTANDING_SUBSETS),
        ):
            block = data.get(section)
            if not isinstance(block, dict):
                raise ManifestError(f"manifest missing '{section}' section")
            for subset in subsets:
                if subset not in block:
                    raise ManifestError(f"manifest missing {section}.{subset} file")
                files[subset] = path.parent / block[subset]
        missing = [str(p) for p in files.values() if not p.exists()]
        if missing:
            raise ManifestError(f"task files not found: {', '.join(missing)}")
        counts = {k: int(v) for k, v in data.get("counts", {}).items()}
        return cls(
            root=path.parent,
            files=files,
            counts=counts,
            schema_version=int(data.get("schema_version", 1)),
        )


def _require(obj: dict, key: str, path, lineno: int) -> object:
    if key not in obj or obj[key] in (None, ""):
        raise SchemaError(path, lineno, f"missing field '{key}'")
    return obj[key]


def _parse_art_field(text: str, path, lineno: int) -> AsciiArt:
    try:
        return normalize(AsciiArt.from_text(str(text)))
    except ArtError as exc:
        raise SchemaError(path, lineno, f"bad art: {exc}") from exc


def load_bench(manifest: BenchManifest | str | Path) -> list[BenchTask]:
    """Load and validate every task named by the manifest.

    Understanding records become two tasks each (direct + select); declared
    counts, when present, are checked against the loaded totals.
    """
    if not isinstance(manifest, BenchManifest):
        manifest = BenchManifest.load(manifest)
    tasks: list[BenchTask] = []
    loaded_counts: dict[str, int] = {}
    for subset in GENERATION_SUBSETS:
        path = manifest.files[subset]
        n = 0
        for lineno, obj in read_jsonl(path):
            task_id = str(_require(obj, "id", path, lineno))
            instruction = str(_require(obj, "instruction", path, lineno))
            ref = obj.get("art")
            tasks.append(
                BenchTask(
                    id=task_id,
                    kind=KIND_GENERATION,
                    subset=subset,
                    instruction=instruction,
                    category=obj.get("category"),
                    reference_art=_parse_art_field(ref, path, lineno) if ref else None,
                )
            )
            n += 1
        loaded_counts[subset] = n
    for subset in UNDERSTANDING_SUBSETS:
        path = manifest.files[subset]
        n = 0
        for lineno, obj in read_jsonl(path):
            record_id = str(_require(obj, "id", path, lineno))
            art = _parse_art_field(_require(obj, "art", path, lineno), path, lineno)
            category = str(_require(obj, "category", path, lineno))
            options = obj.get("options")
            if not isinstance(options, list) or not options:
                raise SchemaError(path, lineno, "missing field 'options'")
            options = [str(o) for o in options]
            if options.count(category) != 1:
                raise SchemaError(
                    path, lineno, "options must contain the ground-truth label exactly once"
                )
            tasks.append(
                BenchTask(
                    id=f"{record_id}:direct",
                    kind=KIND_DIRECT,
                    subset=subset,
                    art=art,
                    ground_truth=category,
                    category=category,
                )
            )
            tasks.append(
                BenchTask(
                    id=f"{record_id}:select",
                    kind=KIND_SELECT,
                    subset=subset,
                    art=art,
                    options=tuple(options),
                    ground_truth=category,
                    category=category,
                )
            )
            n += 1
        loaded_counts[subset] = n
    for subset, declared in manifest.counts.items():
        if loaded_counts.get(subset, 0) != declared:
            raise ManifestError(
                f"subset '{subset}' declares {declared} samples, found "
                f"{loaded_counts.get(subset, 0)}"
            )
    return tasks


def build_prompt(task: BenchTask) -> ChatRequest:
    """Assemble the chat request for a task from the fixed templates.

    Pure: the same task always yields the same request, and all tasks of a
    kind share one system prompt.
    """
    if task.kind == KIND_GENERATION:
        return ChatRequest(
            system_prompt=prompts.GENERATION_SYSTEM,
            user_prompt=prompts.GENERATION_USER.format(instruction=task.instruction),
        )
    assert task.art is not None
    if task.kind == KIND_DIRECT:
        user = prompts.UNDERSTANDING_DIRECT_USER.format(ascii_art=task.art.text)
    elif task.kind == KIND_SELECT:
        user = prompts.UNDERSTANDING_SELECT_USER.format(
            ascii_art=task.art.text,
            options_list=prompts.options_block(list(task.options or ())),
        )
    else:
        raise ValueError(f"unknown task kind {task.kind!r}")
    return ChatRequest(system_prompt=prompts.UNDERSTANDING_SYSTEM, user_prompt=user)


def _run_one(task: BenchTask, backend: ChatBackend) -> TaskResult:
    try:
        response = backend.complete(build_prompt(task))
    except BackendError as exc:
        return TaskResult(task_id=task.id, raw="", parsed=None, parse_ok=False, error=str(exc))
    raw = response.text
    if task.kind == KIND_GENERATION:
        try:
            parsed = parse_art_block(raw).art.text
        except ArtError as exc:
            return TaskResult(task_id=task.id, raw=raw, parsed=None, parse_ok=False, error=str(exc))
        return TaskResult(task_id=task.id, raw=raw, parsed=parsed, parse_ok=True)
    answer = extract_answer_line(raw)
    if not answer:
        return TaskResult(task_id=task.id, raw=raw, parsed=None, parse_ok=False, error="empty reply")
    return TaskResult(task_id=task.id, raw=raw, parsed=answer, parse_ok=True)


def run_bench(
    tasks: Sequence[BenchTask], backend: ChatBackend, parallelism: int = 1
) -> list[TaskResult]:
    """Attempt every task exactly once; results preserve task order."""
    if parallelism > 1:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            return list(pool.map(lambda t: _run_one(t, backend), tasks))
    return [_run_one(task, backend) for task in tasks]


def result_to_json(result: TaskResult) -> dict:
    obj = {
        "task_id": result.task_id,
        "raw": result.raw,
        "parsed": result.parsed,
        "parse_ok": result.parse_ok,
    }
    if result.error is not None:
        obj["error"] = result.error
    return obj


def result_from_json(obj: dict) -> TaskResult:
    return TaskResult(
        task_id=str(obj["task_id"]),
        raw=obj.get("raw", ""),
        parsed=obj.get("parsed"),
        parse_ok=bool(obj.get("parse_ok")),
        error=obj.get("error"),
    )


@dataclass(frozen=True)
class StatsRow:
    samples: int
    categories: int
    mean_width: float
    mean_height: float
    median_area: float
    max_area: int


def dataset_stats(items: Iterable) -> dict[str, StatsRow]:
    """Per-subset structural statistics over bench tasks or dataset records.

    Accepts anything exposing an art (tasks use the understanding art or the
    generation reference art) and an optional subset/category. Median and
    max are order-invariant by construction.
    """
    groups: dict[str, list] = {}
    for item in items:
        subset = getattr(item, "subset", None) or "all"
        groups.setdefault(subset, []).append(item)
    table = {}
    for subset, members in sorted(groups.items()):
        categories = {m.category for m in members if getattr(m, "category", None)}
        arts = []
        seen_ids = set()
        for m in members:
            art = getattr(m, "art", None) or getattr(m, "reference_art", None)
            if art is None:
                continue
            # understanding records expand to two tasks over one art
            key = getattr(m, "id", None)
            key = key.rsplit(":", 1)[0] if isinstance(key, str) and ":" in key else id(m)
            if key in seen_ids:
                continue
            seen_ids.add(key)
            arts.append(art)
        if arts:
            widths = [a.width for a in arts]
            heights = [a.height for a in arts]
            areas = [a.width * a.height for a in arts]
            row = StatsRow(
                samples=len(arts),
                categories=len(categories),
                mean_width=sum(widths) / len(widths),
                mean_height=sum(heights) / len(heights),
                median_area=float(median(areas)),
                max_area=max(areas),
            )
        else:
            row = StatsRow(
                samples=len(members),
                categories=len(categories),
                mean_width=0.0,
                mean_height=0.0,
                median_area=0.0,
                max_area=0,
            )
        table[subset] = row
    return table
