"""Seed-and-evolve synthesis pipeline.

Curated seed arts are expanded into stylistically-locked variants in three
backend-driven stages: style-rule extraction, mode-guided generation with
few-shot exemplars, and visual-feedback refinement. Every accepted record
carries the request fingerprints of the calls that produced it, so a run
against a scripted mock is reproducible byte for byte.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from . import prompts
from .client import ChatBackend, ChatRequest, fingerprint_request
from .grid import (
    ArtError,
    AsciiArt,
    FilterPolicy,
    char_palette,
    normalize,
    parse_art_block,
    similarity,
    validate_structural,
)
from .render import RenderConfig, render_png
from .util import extract_json_object

log = logging.getLogger(__name__)

MODE_MICRO = "micro"
MODE_CREATIVE = "creative"
MODE_GLOBAL = "global"

SENSITIVE = "sensitive"
INSENSITIVE = "insensitive"

GENERATION_MODE = "generation"
DESCRIBE_MODE = "understanding-describe"
CLASSIFY_MODE = "understanding-classify"

# Category lexicon that overrides the backend call: organic, morphology-bound
# subjects resist reshaping; rigid ones do not.
SENSITIVE_CATEGORIES = frozenset(
    """
    cat dog rabbit bunny bird fish horse bear fox wolf owl mouse frog snake
    butterfly spider elephant deer pig cow sheep duck chicken penguin monkey
    lion tiger whale dolphin crab turtle bee ant bat rat squirrel hedgehog
    face smiley person man woman girl boy skull flower tree plant rose tulip
    cactus mushroom leaf
    """.split()
)
INSENSITIVE_CATEGORIES = frozenset(
    """
    truck car boat ship sailboat train plane airplane rocket bicycle bike bus
    tractor submarine helicopter hammer wrench screwdriver saw axe scissors
    knife sword shield key lock clock lamp chair table house castle tower
    bridge building church barn windmill lighthouse robot computer phone
    television camera umbrella cup mug bottle box book guitar piano
    """.split()
)

_MICRO_DIRECTIVE = (
    "Make one small local change to the subject (a different expression, "
    "marking, or accessory) while keeping the overall outline unchanged."
)
_CREATIVE_DIRECTIVE = (
    "Transform the subject into a different kind of object entirely, reusing "
    "the same character style and construction technique."
)
_GLOBAL_TALL_DIRECTIVE = (
    "Stretch the composition vertically into a noticeably taller layout "
    "while preserving its structure."
)
_GLOBAL_WIDE_DIRECTIVE = (
    "Stretch the composition horizontally into a noticeably wider layout "
    "while preserving its structure."
)

_DESCRIPTION_SUFFIX = {
    MODE_MICRO: "with a small variation",
    MODE_CREATIVE: "reimagined in the same style",
    MODE_GLOBAL: "in a stretched layout",
}


class PipelineError(RuntimeError):
    """Base class for per-item synthesis failures."""


class ExtractionParseError(PipelineError):
    pass


class ClassificationParseError(PipelineError):
    pass


class GenerationParseError(PipelineError):
    pass


class RefinementParseError(PipelineError):
    pass


class StructuralFail(PipelineError):
    def __init__(self, violations: Sequence[str]):
        super().__init__(f"structural violations: {', '.join(violations)}")
        self.violations = tuple(violations)


class StyleDrift(PipelineError):
    def __init__(self, extra_glyphs: Sequence[str]):
        super().__init__(f"glyphs outside the rule palette: {''.join(extra_glyphs)}")
        self.extra_glyphs = tuple(extra_glyphs)


@dataclass(frozen=True)
class SeedRecord:
    id: str
    art: AsciiArt
    category: str
    description: str


@dataclass(frozen=True)
class StyleRules:
    """Extracted constraints: allowed glyph set plus a topology description."""

    palette: frozenset[str]
    structural_logic: str
    raw_judgment: str = ""


@dataclass(frozen=True)
class EvolutionMode:
    kind: str
    directive: str


@dataclass(frozen=True)
class Sensitivity:
    value: str
    rationale: str = ""

    @property
    def is_sensitive(self) -> bool:
        return self.value == SENSITIVE


@dataclass(frozen=True)
class FewShotSet:
    exemplars: tuple[SeedRecord, ...] = ()


@dataclass(frozen=True)
class VariantDraft:
    art: AsciiArt
    mode: EvolutionMode
    parent_id: str
    stage_trace: tuple[str, ...] = ()
    category: str | None = None
    description: str | None = None


@dataclass(frozen=True)
class DatasetRecord:
    id: str
    art: AsciiArt
    category: str
    description: str
    parent_id: str | None = None
    mode_kind: str | None = None
    stage_trace: dict[str, tuple[str, ...]] | None = None

    @property
    def is_seed(self) -> bool:
        return self.parent_id is None


@dataclass(frozen=True)
class SupervisionRecord:
    x: str
    y: str
    mode: str


@dataclass(frozen=True)
class RejectedCandidate:
    index: int
    id: str
    reason: str
    detail: str = ""


@dataclass(frozen=True)
class PipelineFailure:
    seed_id: str
    variant_id: str | None
    stage: str
    reason: str
    detail: str = ""


@dataclass(frozen=True)
class PipelineConfig:
    budget: int = 6
    k: int = 2
    policy: FilterPolicy = FilterPolicy()
    refine_rounds: int = 2
    parallelism: int = 1
    render: RenderConfig = RenderConfig()


@dataclass
class PipelineResult:
    records: list[DatasetRecord] = field(default_factory=list)
    failures: list[PipelineFailure] = field(default_factory=list)


def filter_seeds(
    raw: Iterable[dict], policy: FilterPolicy
) -> tuple[list[SeedRecord], list[RejectedCandidate]]:
    """Normalize, validate, and dedup raw candidates into seed records.

    Greedy dedup keeps the first of a near-duplicate group. All metadata
    other than id/art/category/description is dropped. Rejections are data:
    each carries a reason code and detail.
    """
    accepted: list[SeedRecord] = []
    rejected: list[RejectedCandidate] = []
    for index, item in enumerate(raw):
        cid = str(item.get("id") or f"seed-{index:04d}")
        category = str(item.get("category") or "").strip()
        description = str(item.get("description") or "").strip()
        if not item.get("art") or not category or not description:
            rejected.append(
                RejectedCandidate(index, cid, "MissingField", "need art, category, description")
            )
            continue
        try:
            art = normalize(AsciiArt.from_text(str(item["art"])))
        except ArtError as exc:
            rejected.append(RejectedCandidate(index, cid, "CorruptLayout", str(exc)))
            continue
        report = validate_structural(art, policy)
        if not report.ok:
            rejected.append(
                RejectedCandidate(index, cid, "StructuralFail", ", ".join(report.violations))
            )
            continue
        dup = next(
            (s for s in accepted if similarity(art, s.art) >= policy.similarity_threshold),
            None,
        )
        if dup is not None:
            rejected.append(
                RejectedCandidate(index, cid, "NearDuplicate", f"duplicate of {dup.id}")
            )
            continue
        accepted.append(SeedRecord(id=cid, art=art, category=category, description=description))
    return accepted, rejected


def _call(
    backend: ChatBackend, request: ChatRequest, trace: list[str] | None
) -> str:
    if trace is not None:
        trace.append(fingerprint_request(request))
    return backend.complete(request).text


def _palette_str(palette: frozenset[str]) -> str:
    return " ".join(sorted(palette))


def build_style_extraction_request(
    seed: SeedRecord, render_config: RenderConfig = RenderConfig()
) -> ChatRequest:
    return ChatRequest(
        system_prompt=prompts.STYLE_EXTRACTION_SYSTEM,
        user_prompt=prompts.STYLE_EXTRACTION_USER.format(
            category=seed.category,
            description=seed.description,
            ascii_art=seed.art.text,
        ),
        images=(render_png(seed.art, render_config),),
    )


def build_sensitivity_request(seed: SeedRecord) -> ChatRequest:
    return ChatRequest(
        system_prompt=prompts.SENSITIVITY_SYSTEM,
        user_prompt=prompts.SENSITIVITY_USER.format(
            category=seed.category, description=seed.description
        ),
    )


def build_variant_request(
    seed: SeedRecord,
    rules: StyleRules,
    fewshot: FewShotSet,
    mode: EvolutionMode,
    render_config: RenderConfig = RenderConfig(),
) -> ChatRequest:
    fewshot_block = "".join(
        prompts.FEWSHOT_EXEMPLAR.format(category=ex.category, ascii_art=ex.art.text)
        for ex in fewshot.exemplars
    )
    return ChatRequest(
        system_prompt=prompts.VARIANT_SYSTEM.format(
            palette=_palette_str(rules.palette),
            structural_logic=rules.structural_logic,
            directive=mode.directive,
        ),
        user_prompt=prompts.VARIANT_USER.format(
            category=seed.category,
            description=seed.description,
            ascii_art=seed.art.text,
            fewshot_block=fewshot_block,
        ),
        images=(
            render_png(seed.art, render_config),
            *(render_png(ex.art, render_config) for ex in fewshot.exemplars),
        ),
    )


def build_review_request(
    seed: SeedRecord,
    draft_art: AsciiArt,
    rules: StyleRules,
    mode: EvolutionMode,
    render_config: RenderConfig = RenderConfig(),
) -> ChatRequest:
    return ChatRequest(
        system_prompt=prompts.REVIEW_SYSTEM.format(
            palette=_palette_str(rules.palette),
            structural_logic=rules.structural_logic,
            directive=mode.directive,
        ),
        user_prompt=prompts.REVIEW_USER.format(ascii_art=draft_art.text),
        images=(
            render_png(seed.art, render_config),
            render_png(draft_art, render_config),
        ),
    )


def _parse_rules_response(text: str) -> tuple[frozenset[str], str] | None:
    obj = extract_json_object(text)
    if not obj:
        return None
    raw_palette = obj.get("palette")
    logic = obj.get("structural_logic")
    if not isinstance(logic, str) or not logic.strip():
        return None
    glyphs: set[str] = set()
    entries = raw_palette if isinstance(raw_palette, list) else [raw_palette]
    for entry in entries:
        if isinstance(entry, str):
            glyphs.update(ch for ch in entry if ch != " ")
    if not glyphs:
        return None
    return frozenset(glyphs), logic.strip()


def extract_style_rules(
    seed: SeedRecord,
    backend: ChatBackend,
    render_config: RenderConfig = RenderConfig(),
    trace: list[str] | None = None,
) -> StyleRules:
    """Stage 1: ask the backend for the seed's character palette and topology.

    The parsed palette must be a subset of the glyphs actually present in
    the seed (spaces aside); an out-of-palette reply is re-requested once
    and then clamped by intersection.
    """
    request = build_style_extraction_request(seed, render_config)
    allowed = char_palette(seed.art).glyphs
    last: tuple[frozenset[str], str, str] | None = None
    for _ in range(2):
        text = _call(backend, request, trace)
        parsed = _parse_rules_response(text)
        if parsed is None:
            continue
        palette, logic = parsed
        if palette <= allowed:
            return StyleRules(palette=palette, structural_logic=logic, raw_judgment=text)
        last = (palette, logic, text)
    if last is not None:
        clamped = last[0] & allowed
        if clamped:
            return StyleRules(palette=clamped, structural_logic=last[1], raw_judgment=last[2])
    raise ExtractionParseError(f"no usable style rules for seed {seed.id}")


def lexicon_sensitivity(category: str) -> Sensitivity | None:
    """Deterministic override when the category label names a known subject."""
    tokens = {t for t in "".join(c if c.isalpha() else " " for c in category.lower()).split()}
    if tokens & SENSITIVE_CATEGORIES:
        return Sensitivity(SENSITIVE, rationale="category lexicon")
    if tokens & INSENSITIVE_CATEGORIES:
        return Sensitivity(INSENSITIVE, rationale="category lexicon")
    return None


def classify_sensitivity(
    seed: SeedRecord, backend: ChatBackend, trace: list[str] | None = None
) -> Sensitivity:
    """Stage 2 gate: is the subject's style bound to its morphology?"""
    override = lexicon_sensitivity(seed.category)
    if override is not None:
        return override
    text = _call(backend, build_sensitivity_request(seed), trace)
    obj = extract_json_object(text)
    if obj:
        value = str(obj.get("sensitivity", "")).strip().lower()
        if value in (SENSITIVE, INSENSITIVE):
            return Sensitivity(value, rationale=str(obj.get("rationale", "")))
    raise ClassificationParseError(f"unusable sensitivity reply for seed {seed.id}")


def select_modes(sensitivity: Sensitivity, per_seed_budget: int) -> list[EvolutionMode]:
    """Round-robin over the mode kinds legal for this sensitivity.

    Sensitive subjects never get creative (category-swapping) modes; global
    stretch directives alternate tall/wide deterministically.
    """
    if per_seed_budget < 1:
        raise ValueError("budget must be >= 1")
    kinds = (
        [MODE_MICRO, MODE_GLOBAL]
        if sensitivity.is_sensitive
        else [MODE_MICRO, MODE_CREATIVE, MODE_GLOBAL]
    )
    modes = []
    globals_used = 0
    for i in range(per_seed_budget):
        kind = kinds[i % len(kinds)]
        if kind == MODE_MICRO:
            directive = _MICRO_DIRECTIVE
        elif kind == MODE_CREATIVE:
            directive = _CREATIVE_DIRECTIVE
        else:
            directive = (
                _GLOBAL_TALL_DIRECTIVE if globals_used % 2 == 0 else _GLOBAL_WIDE_DIRECTIVE
            )
            globals_used += 1
        modes.append(EvolutionMode(kind=kind, directive=directive))
    return modes


def retrieve_few_shot(
    seed: SeedRecord, corpus: Sequence[SeedRecord], k: int
) -> FewShotSet:
    """Top-k corpus seeds by glyph-set Jaccard against the evolving seed."""
    own = char_palette(seed.art).glyphs
    scored = []
    for other in corpus:
        if other.id == seed.id:
            continue
        theirs = char_palette(other.art).glyphs
        union = own | theirs
        score = len(own & theirs) / len(union) if union else 0.0
        scored.append((-score, other.id, other))
    scored.sort(key=lambda t: (t[0], t[1]))
    return FewShotSet(exemplars=tuple(item[2] for item in scored[:k]))


_TRAILER_KEYS = ("category", "description")


def _parse_trailer(text: str) -> dict[str, str]:
    """Optional `Category:` / `Description:` lines after the art block."""
    tail = text.rsplit("</art>", 1)[-1] if "</art>" in text else ""
    found = {}
    for line in tail.split("\n"):
        key, _, value = line.partition(":")
        key = key.strip().lower()
        if key in _TRAILER_KEYS and value.strip():
            found[key] = value.strip()
    return found


def generate_variant(
    seed: SeedRecord,
    rules: StyleRules,
    fewshot: FewShotSet,
    mode: EvolutionMode,
    backend: ChatBackend,
    policy: FilterPolicy = FilterPolicy(),
    render_config: RenderConfig = RenderConfig(),
    trace: list[str] | None = None,
) -> VariantDraft:
    """Stage 2: one mode-directed draft, parsed and structurally validated."""
    request = build_variant_request(seed, rules, fewshot, mode, render_config)
    own_trace = trace if trace is not None else []
    art = None
    text = ""
    for _ in range(2):
        text = _call(backend, request, own_trace)
        try:
            art = parse_art_block(text).art
            break
        except ArtError:
            continue
    if art is None:
        raise GenerationParseError(f"no art block in reply for seed {seed.id}")
    report = validate_structural(art, policy)
    if not report.ok:
        raise StructuralFail(report.violations)
    trailer = _parse_trailer(text)
    return VariantDraft(
        art=art,
        mode=mode,
        parent_id=seed.id,
        stage_trace=tuple(own_trace),
        category=trailer.get("category"),
        description=trailer.get("description"),
    )


def refine_variant(
    seed: SeedRecord,
    draft: VariantDraft,
    rules: StyleRules,
    backend: ChatBackend,
    max_rounds: int = 2,
    render_config: RenderConfig = RenderConfig(),
    trace: list[str] | None = None,
) -> AsciiArt:
    """Stage 3: review the rendered draft against the rendered seed.

    The reviewer sees both bitmaps plus the draft text and answers with a
    corrected block; a reply equal to the current draft is a fixed point and
    ends the loop early. The final art must stay inside the rule palette
    (plus spaces) or the variant is discarded as style drift.
    """
    current = draft.art
    for _ in range(max_rounds):
        request = build_review_request(seed, current, rules, draft.mode, render_config)
        text = _call(backend, request, trace)
        try:
            revised = parse_art_block(text).art
        except ArtError as exc:
            raise RefinementParseError(str(exc)) from exc
        if revised == current:
            break
        current = revised
    extra = char_palette(current).glyphs - rules.palette
    if extra:
        raise StyleDrift(sorted(extra))
    return current


@dataclass
class _SeedOutcome:
    seed: SeedRecord
    extract_trace: tuple[str, ...] = ()
    classify_trace: tuple[str, ...] = ()
    candidates: list = field(default_factory=list)
    failure: PipelineFailure | None = None


@dataclass(frozen=True)
class _Candidate:
    variant_id: str
    art: AsciiArt | None
    mode: EvolutionMode
    category: str
    description: str
    generate_trace: tuple[str, ...] = ()
    refine_trace: tuple[str, ...] = ()
    failure: PipelineFailure | None = None


def _variant_description(seed: SeedRecord, draft: VariantDraft) -> str:
    if draft.description:
        return draft.description
    return f"{seed.description}, {_DESCRIPTION_SUFFIX[draft.mode.kind]}"


def _evolve_seed(
    seed: SeedRecord,
    corpus: Sequence[SeedRecord],
    config: PipelineConfig,
    backend: ChatBackend,
) -> _SeedOutcome:
    outcome = _SeedOutcome(seed=seed)
    extract_trace: list[str] = []
    classify_trace: list[str] = []
    try:
        rules = extract_style_rules(seed, backend, config.render, trace=extract_trace)
        sensitivity = classify_sensitivity(seed, backend, trace=classify_trace)
    except PipelineError as exc:
        outcome.failure = PipelineFailure(
            seed_id=seed.id,
            variant_id=None,
            stage="extract" if isinstance(exc, ExtractionParseError) else "classify",
            reason=type(exc).__name__,
            detail=str(exc),
        )
        return outcome
    finally:
        outcome.extract_trace = tuple(extract_trace)
        outcome.classify_trace = tuple(classify_trace)

    fewshot = retrieve_few_shot(seed, corpus, config.k)
    for idx, mode in enumerate(select_modes(sensitivity, config.budget), start=1):
        variant_id = f"{seed.id}/v{idx}"
        generate_trace: list[str] = []
        refine_trace: list[str] = []
        try:
            draft = generate_variant(
                seed, rules, fewshot, mode, backend,
                policy=config.policy, render_config=config.render, trace=generate_trace,
            )
            final_art = refine_variant(
                seed, draft, rules, backend,
                max_rounds=config.refine_rounds, render_config=config.render,
                trace=refine_trace,
            )
        except PipelineError as exc:
            stage = "generate" if isinstance(exc, (GenerationParseError, StructuralFail)) else "refine"
            outcome.candidates.append(
                _Candidate(
                    variant_id=variant_id, art=None, mode=mode,
                    category="", description="",
                    generate_trace=tuple(generate_trace), refine_trace=tuple(refine_trace),
                    failure=PipelineFailure(
                        seed_id=seed.id, variant_id=variant_id, stage=stage,
                        reason=type(exc).__name__, detail=str(exc),
                    ),
                )
            )
            continue
        outcome.candidates.append(
            _Candidate(
                variant_id=variant_id,
                art=final_art,
                mode=mode,
                category=draft.category or seed.category,
                description=_variant_description(seed, draft),
                generate_trace=tuple(generate_trace),
                refine_trace=tuple(refine_trace),
            )
        )
    return outcome


def run_pipeline(
    seeds: Sequence[SeedRecord],
    config: PipelineConfig,
    backend: ChatBackend,
) -> PipelineResult:
    """Evolve every seed and admit variants through validation and dedup.

    Backend-bound stages may run with bounded parallelism, but admission is
    serialized in seed order so the output is deterministic: a scripted mock
    yields byte-identical record streams across runs. Per-item failures are
    collected, never fatal. The returned records start with each seed
    followed by its accepted variants.
    """
    if config.parallelism > 1:
        with ThreadPoolExecutor(max_workers=config.parallelism) as pool:
            outcomes = list(
                pool.map(lambda s: _evolve_seed(s, seeds, config, backend), seeds)
            )
    else:
        outcomes = [_evolve_seed(seed, seeds, config, backend) for seed in seeds]

    result = PipelineResult()
    dedup_pool: list[AsciiArt] = [seed.art for seed in seeds]
    for outcome in outcomes:
        seed = outcome.seed
        result.records.append(
            DatasetRecord(
                id=seed.id, art=seed.art,
                category=seed.category, description=seed.description,
            )
        )
        if outcome.failure is not None:
            log.warning("seed %s failed: %s", seed.id, outcome.failure.detail)
            result.failures.append(outcome.failure)
            continue
        for cand in outcome.candidates:
            if cand.failure is not None:
                log.warning("variant %s failed: %s", cand.variant_id, cand.failure.detail)
                result.failures.append(cand.failure)
                continue
            assert cand.art is not None
            report = validate_structural(cand.art, config.policy)
            if not report.ok:
                result.failures.append(
                    PipelineFailure(
                        seed_id=seed.id, variant_id=cand.variant_id, stage="validate",
                        reason="StructuralFail", detail=", ".join(report.violations),
                    )
                )
                continue
            if any(
                similarity(cand.art, prior) >= config.policy.similarity_threshold
                for prior in dedup_pool
            ):
                result.failures.append(
                    PipelineFailure(
                        seed_id=seed.id, variant_id=cand.variant_id, stage="dedup",
                        reason="NearDuplicate", detail="matches a seed or earlier output",
                    )
                )
                continue
            dedup_pool.append(cand.art)
            result.records.append(
                DatasetRecord(
                    id=cand.variant_id,
                    art=cand.art,
                    category=cand.category,
                    description=cand.description,
                    parent_id=seed.id,
                    mode_kind=cand.mode.kind,
                    stage_trace={
                        "extract": outcome.extract_trace,
                        "classify": outcome.classify_trace,
                        "generate": cand.generate_trace,
                        "refine": cand.refine_trace,
                    },
                )
            )
    return result


def record_to_json(record: DatasetRecord) -> dict:
    """DatasetRecord -> JSONL object; lineage keys only for synthesized rows."""
    obj = {
        "id": record.id,
        "art": record.art.text,
        "category": record.category,
        "description": record.description,
    }
    if not record.is_seed:
        obj["parent_id"] = record.parent_id
        obj["mode"] = record.mode_kind
        obj["stage_trace"] = {k: list(v) for k, v in (record.stage_trace or {}).items()}
    return obj


def record_from_json(obj: dict) -> DatasetRecord:
    trace = obj.get("stage_trace")
    return DatasetRecord(
        id=str(obj["id"]),
        art=normalize(AsciiArt.from_text(obj["art"])),
        category=obj["category"],
        description=obj["description"],
        parent_id=obj.get("parent_id"),
        mode_kind=obj.get("mode"),
        stage_trace={k: tuple(v) for k, v in trace.items()} if trace else None,
    )


def export_sft(records: Sequence[DatasetRecord]) -> list[SupervisionRecord]:
    """Three supervision triplets per record: one generation, two understanding.

    The generation target is the art wrapped in ``<art>`` tags; the
    understanding inputs reuse the open-ended benchmark template with the
    description or the category label as target.
    """
    out = []
    for record in records:
        wrapped = f"<art>\n{record.art.text}\n</art>"
        out.append(SupervisionRecord(x=record.description, y=wrapped, mode=GENERATION_MODE))
        question = prompts.UNDERSTANDING_DIRECT_USER.format(ascii_art=record.art.text)
        out.append(SupervisionRecord(x=question, y=record.description, mode=DESCRIBE_MODE))
        out.append(SupervisionRecord(x=question, y=record.category, mode=CLASSIFY_MODE))
    return out


def supervision_to_json(record: SupervisionRecord) -> dict:
    """Chat-format JSONL object consumable by common SFT tooling."""
    system = (
        prompts.GENERATION_SYSTEM
        if record.mode == GENERATION_MODE
        else prompts.UNDERSTANDING_SYSTEM
    )
    return {
        "messages": [
            {"role": "system", "content": system},
            {"role": "user", "content": record.x},
            {"role": "assistant", "content": record.y},
        ],
        "mode": record.mode,
    }
