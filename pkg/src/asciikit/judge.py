"""LLM-as-judge scoring, aggregation, and calibration.

Generation outputs are scored on five dimensions in [0, 1] by a judge that
sees both the rendered bitmap and the raw text; understanding outputs get a
binary equivalence verdict. Composite scores are a fixed weighted sum, so
aggregation commutes with compositing (checked at aggregation time).
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field
from typing import Sequence

from . import prompts
from .bench import (
    KIND_DIRECT,
    KIND_GENERATION,
    KIND_SELECT,
    BenchTask,
    TaskResult,
)
from .client import ChatBackend, ChatRequest, fingerprint_request
from .grid import AsciiArt, normalize
from .metrics import CalibrationReport, ZeroVariance, calibrate  # noqa: F401  (re-export)
from .render import RenderConfig, render_png
from .util import clamp01, extract_json_object

DIMENSIONS = ("SA", "IF", "SC", "SL", "CE")

FLAG_UNPARSEABLE = "unparseable_output"
FLAG_JUDGE_PARSE_ERROR = "judge_parse_error"


class JudgeParseError(RuntimeError):
    """The judge reply carried no usable JSON verdict after a re-request."""


@dataclass(frozen=True)
class GenScores:
    SA: float
    IF: float
    SC: float
    SL: float
    CE: float
    reasoning: str = ""
    flags: tuple[str, ...] = ()

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.SA, self.IF, self.SC, self.SL, self.CE)

    @classmethod
    def zeros(cls, reasoning: str = "", flags: tuple[str, ...] = ()) -> "GenScores":
        return cls(0.0, 0.0, 0.0, 0.0, 0.0, reasoning=reasoning, flags=flags)


@dataclass(frozen=True)
class CompositeWeights:
    SA: float = 0.25
    IF: float = 0.35
    SC: float = 0.15
    SL: float = 0.15
    CE: float = 0.10

    def __post_init__(self):
        values = self.as_tuple()
        if any(w < 0 for w in values):
            raise ValueError("weights must be non-negative")
        if abs(sum(values) - 1.0) > 1e-9:
            raise ValueError(f"weights must sum to 1, got {sum(values)!r}")

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.SA, self.IF, self.SC, self.SL, self.CE)


DEFAULT_WEIGHTS = CompositeWeights()


@dataclass(frozen=True)
class JudgeVerdict:
    is_correct: bool
    confidence: float = 0.0
    reasoning: str = ""
    flags: tuple[str, ...] = ()


def composite(scores: GenScores, weights: CompositeWeights = DEFAULT_WEIGHTS) -> float:
    """Weighted sum of the five dimensions; linear and monotone."""
    return sum(w * s for w, s in zip(weights.as_tuple(), scores.as_tuple()))


def build_generation_judge_request(
    task: BenchTask, result: TaskResult, render_config: RenderConfig = RenderConfig()
) -> ChatRequest:
    assert result.parsed is not None
    art = normalize(AsciiArt.from_text(result.parsed))
    return ChatRequest(
        system_prompt=prompts.GENERATION_JUDGE_SYSTEM.format(instruction=task.instruction),
        user_prompt=f"Raw TEXT of the generated art:\n<art>\n{art.text}\n</art>",
        images=(render_png(art, render_config),),
    )


def build_understanding_judge_request(ground_truth: str, output: str) -> ChatRequest:
    return ChatRequest(
        system_prompt=prompts.UNDERSTANDING_JUDGE_SYSTEM,
        user_prompt=prompts.UNDERSTANDING_JUDGE_USER.format(
            ground_truth=ground_truth, model_output=output
        ),
    )


def _call(backend: ChatBackend, request: ChatRequest, trace: list[str] | None) -> str:
    if trace is not None:
        trace.append(fingerprint_request(request))
    return backend.complete(request).text


def judge_generation(
    task: BenchTask,
    result: TaskResult,
    backend: ChatBackend,
    render_config: RenderConfig = RenderConfig(),
    trace: list[str] | None = None,
) -> GenScores:
    """Score one generation output on the five dimensions.

    Unparseable candidate outputs score all-zero without any judge call.
    A judge reply without usable JSON is re-requested once, then scored
    all-zero with a flag. Scores are clamped to [0, 1].
    """
    if not result.parse_ok or result.parsed is None:
        return GenScores.zeros(reasoning="candidate output unparseable", flags=(FLAG_UNPARSEABLE,))
    request = build_generation_judge_request(task, result, render_config)
    for _ in range(2):
        text = _call(backend, request, trace)
        obj = extract_json_object(text)
        if obj is None:
            continue
        try:
            values = {dim: clamp01(float(obj[dim])) for dim in DIMENSIONS}
        except (KeyError, TypeError, ValueError):
            continue
        return GenScores(**values, reasoning=str(obj.get("reasoning", "")))
    return GenScores.zeros(reasoning="judge reply unparseable", flags=(FLAG_JUDGE_PARSE_ERROR,))


_MATCH_STRIP = string.whitespace + string.punctuation + "\"'`"


def _normalize_label(text: str) -> str:
    return text.strip(_MATCH_STRIP).casefold()


def judge_understanding(
    ground_truth: str,
    output: str,
    backend: ChatBackend,
    selection: bool = False,
    trace: list[str] | None = None,
) -> JudgeVerdict:
    """Binary semantic-equivalence verdict.

    For selection tasks an exact case-insensitive label match short-circuits
    to correct without consulting the judge. A judge reply without usable
    JSON is re-requested once, then marked incorrect with a flag.
    """
    if selection and _normalize_label(output) == _normalize_label(ground_truth):
        return JudgeVerdict(is_correct=True, confidence=1.0, reasoning="exact label match")
    request = build_understanding_judge_request(ground_truth, output)
    for _ in range(2):
        text = _call(backend, request, trace)
        obj = extract_json_object(text)
        if obj is None or not isinstance(obj.get("is_correct"), bool):
            continue
        try:
            confidence = clamp01(float(obj.get("confidence", 0.0)))
        except (TypeError, ValueError):
            confidence = 0.0
        return JudgeVerdict(
            is_correct=obj["is_correct"],
            confidence=confidence,
            reasoning=str(obj.get("reasoning", "")),
        )
    return JudgeVerdict(
        is_correct=False, confidence=0.0,
        reasoning="judge reply unparseable", flags=(FLAG_JUDGE_PARSE_ERROR,),
    )


@dataclass(frozen=True)
class ScoredGeneration:
    task_id: str
    subset: str
    scores: GenScores
    composite: float


@dataclass(frozen=True)
class ScoredUnderstanding:
    task_id: str
    subset: str
    kind: str
    verdict: JudgeVerdict


def judge_results(
    tasks: Sequence[BenchTask],
    results: Sequence[TaskResult],
    backend: ChatBackend,
    weights: CompositeWeights = DEFAULT_WEIGHTS,
    render_config: RenderConfig = RenderConfig(),
) -> tuple[list[ScoredGeneration], list[ScoredUnderstanding]]:
    """Judge a full results file against its bench tasks, split by task type."""
    by_id = {task.id: task for task in tasks}
    generation: list[ScoredGeneration] = []
    understanding: list[ScoredUnderstanding] = []
    for result in results:
        task = by_id.get(result.task_id)
        if task is None:
            raise KeyError(f"result references unknown task {result.task_id!r}")
        if task.kind == KIND_GENERATION:
            scores = judge_generation(task, result, backend, render_config)
            generation.append(
                ScoredGeneration(
                    task_id=task.id, subset=task.subset,
                    scores=scores, composite=composite(scores, weights),
                )
            )
        else:
            if not result.parse_ok or result.parsed is None:
                verdict = JudgeVerdict(
                    is_correct=False, reasoning="candidate output unparseable",
                    flags=(FLAG_UNPARSEABLE,),
                )
            else:
                verdict = judge_understanding(
                    task.ground_truth or "", result.parsed, backend,
                    selection=task.kind == KIND_SELECT,
                )
            understanding.append(
                ScoredUnderstanding(
                    task_id=task.id, subset=task.subset, kind=task.kind, verdict=verdict,
                )
            )
    return generation, understanding


@dataclass(frozen=True)
class GenerationAggregate:
    n: int
    means: GenScores
    composite_of_means: float
    mean_composite: float


def aggregate_generation(
    scored: Sequence[ScoredGeneration], weights: CompositeWeights = DEFAULT_WEIGHTS
) -> dict[str, GenerationAggregate]:
    """Per-subset arithmetic means of each dimension plus the composite.

    The composite of the mean sub-scores and the mean of per-item composites
    are equal by linearity; both are computed and asserted to agree.
    """
    groups: dict[str, list[ScoredGeneration]] = {}
    for item in scored:
        groups.setdefault(item.subset, []).append(item)
    table = {}
    for subset, members in sorted(groups.items()):
        n = len(members)
        dim_means = [
            sum(m.scores.as_tuple()[i] for m in members) / n for i in range(len(DIMENSIONS))
        ]
        means = GenScores(*dim_means)
        comp_of_means = composite(means, weights)
        mean_comp = sum(m.composite for m in members) / n
        if abs(comp_of_means - mean_comp) > 1e-9:
            raise AssertionError(
                f"composite aggregation mismatch in {subset}: "
                f"{comp_of_means!r} vs {mean_comp!r}"
            )
        table[subset] = GenerationAggregate(
            n=n, means=means, composite_of_means=comp_of_means, mean_composite=mean_comp
        )
    return table


@dataclass(frozen=True)
class AccuracyCell:
    correct: int
    total: int

    @property
    def percent(self) -> float:
        return 100.0 * self.correct / self.total if self.total else 0.0


@dataclass(frozen=True)
class UnderstandingTable:
    """Accuracy (%) per (task kind, subset) with per-kind Seen/Unseen average."""

    cells: dict[tuple[str, str], AccuracyCell] = field(default_factory=dict)

    def accuracy(self, kind: str, subset: str) -> float:
        return self.cells[(kind, subset)].percent

    def average(self, kind: str) -> float:
        seen = self.accuracy(kind, "seen")
        unseen = self.accuracy(kind, "unseen")
        return (seen + unseen) / 2.0


def aggregate_understanding(
    scored: Sequence[ScoredUnderstanding],
) -> UnderstandingTable:
    cells: dict[tuple[str, str], list[bool]] = {}
    for item in scored:
        cells.setdefault((item.kind, item.subset), []).append(item.verdict.is_correct)
    return UnderstandingTable(
        cells={
            key: AccuracyCell(correct=sum(flags), total=len(flags))
            for key, flags in sorted(cells.items())
        }
    )


def relative_improvement(baseline: float, new: float) -> float:
    """(new - baseline) / baseline as a percentage; undefined at baseline 0."""
    if baseline == 0:
        raise ZeroDivisionError("relative improvement undefined for zero baseline")
    return (new - baseline) / baseline * 100.0


def scored_generation_to_json(item: ScoredGeneration) -> dict:
    return {
        "task_id": item.task_id,
        "subset": item.subset,
        "kind": KIND_GENERATION,
        "scores": {dim: getattr(item.scores, dim) for dim in DIMENSIONS},
        "composite": item.composite,
        "reasoning": item.scores.reasoning,
        "flags": list(item.scores.flags),
    }


def scored_understanding_to_json(item: ScoredUnderstanding) -> dict:
    return {
        "task_id": item.task_id,
        "subset": item.subset,
        "kind": item.kind,
        "is_correct": item.verdict.is_correct,
        "confidence": item.verdict.confidence,
        "reasoning": item.verdict.reasoning,
        "flags": list(item.verdict.flags),
    }


def scored_from_json(obj: dict) -> ScoredGeneration | ScoredUnderstanding:
    if obj.get("kind") == KIND_GENERATION:
        scores = GenScores(
            **{dim: float(obj["scores"][dim]) for dim in DIMENSIONS},
            reasoning=obj.get("reasoning", ""),
            flags=tuple(obj.get("flags", ())),
        )
        return ScoredGeneration(
            task_id=str(obj["task_id"]),
            subset=obj["subset"],
            scores=scores,
            composite=float(obj["composite"]),
        )
    verdict = JudgeVerdict(
        is_correct=bool(obj["is_correct"]),
        confidence=float(obj.get("confidence", 0.0)),
        reasoning=obj.get("reasoning", ""),
        flags=tuple(obj.get("flags", ())),
    )
    return ScoredUnderstanding(
        task_id=str(obj["task_id"]),
        subset=obj["subset"],
        kind=obj["kind"],
        verdict=verdict,
    )
