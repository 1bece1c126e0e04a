import json
from dataclasses import dataclass, field
from pathlib import Path

import pytest

from asciikit.client import MockScript
from asciikit.grid import AsciiArt, FilterPolicy, normalize
from asciikit.pipeline import (
    PipelineConfig,
    SeedRecord,
    Sensitivity,
    StyleRules,
    build_review_request,
    build_sensitivity_request,
    build_style_extraction_request,
    build_variant_request,
    filter_seeds,
    lexicon_sensitivity,
    retrieve_few_shot,
    select_modes,
)

DATA = Path(__file__).parent / "data"


def load_jsonl(path):
    with open(path) as fh:
        return [json.loads(line) for line in fh if line.strip()]


@pytest.fixture(scope="session")
def corpus_arts() -> list[AsciiArt]:
    return [
        normalize(AsciiArt.from_text(obj["art"])) for obj in load_jsonl(DATA / "corpus.jsonl")
    ]


@pytest.fixture(scope="session")
def three_seeds() -> list[SeedRecord]:
    accepted, rejected = filter_seeds(load_jsonl(DATA / "seeds_three.jsonl"), FilterPolicy())
    assert not rejected
    return accepted


def wrap_art(text: str) -> str:
    return f"<art>\n{text}\n</art>"


@dataclass
class VariantPlan:
    """Scripted responses for one variant slot: the generated draft and the
    reviewer's reply (defaults to the draft itself, a fixed point)."""

    art: str
    review: str | None = None


@dataclass
class SeedPlan:
    palette: str
    logic: str
    variants: list[VariantPlan] = field(default_factory=list)
    classify: str | None = None  # scripted sensitivity when the lexicon misses


def plan_rules(plan: SeedPlan) -> StyleRules:
    return StyleRules(palette=frozenset(set(plan.palette)), structural_logic=plan.logic)


def build_pipeline_script(
    seeds: list[SeedRecord],
    config: PipelineConfig,
    plans: dict[str, SeedPlan],
    fallback: str | None = None,
) -> MockScript:
    """Precompute the full request/response script for a pipeline run.

    Walks the same deterministic stage order the pipeline uses, building
    each request with the public builders so fingerprints match exactly.
    """
    script = MockScript(fallback=fallback)
    for seed in seeds:
        plan = plans[seed.id]
        rules_reply = json.dumps(
            {"palette": sorted(set(plan.palette)), "structural_logic": plan.logic}
        )
        script.add(build_style_extraction_request(seed, config.render), rules_reply)
        sensitivity = lexicon_sensitivity(seed.category)
        if sensitivity is None:
            assert plan.classify, f"seed {seed.id} needs a scripted classification"
            script.add(
                build_sensitivity_request(seed),
                json.dumps({"sensitivity": plan.classify, "rationale": "scripted"}),
            )
            sensitivity = Sensitivity(plan.classify)
        rules = plan_rules(plan)
        modes = select_modes(sensitivity, config.budget)
        fewshot = retrieve_few_shot(seed, seeds, config.k)
        assert len(plan.variants) == len(modes), f"plan for {seed.id} must cover all modes"
        for mode, vp in zip(modes, plan.variants):
            draft = normalize(AsciiArt.from_text(vp.art))
            script.add(
                build_variant_request(seed, rules, fewshot, mode, config.render),
                wrap_art(vp.art),
            )
            review_text = vp.review if vp.review is not None else draft.text
            script.add(
                build_review_request(seed, draft, rules, mode, config.render),
                wrap_art(review_text),
            )
            if review_text != draft.text:
                revised = normalize(AsciiArt.from_text(review_text))
                script.add(
                    build_review_request(seed, revised, rules, mode, config.render),
                    wrap_art(review_text),
                )
    return script


# The three-seed evolution scenario used by the pipeline tests and the
# acceptance suite: budget 2, one scripted style-drift discard.
THREE_SEED_PLANS = {
    "cat": SeedPlan(
        palette="/\\_(o.)>^<",
        logic="sparse angular line-art",
        variants=[
            VariantPlan(art=" /\\_/\\\n( >.< )\n > ^ <"),
            VariantPlan(art=" /\\_/\\\n(  o  )\n(  .  )\n(  o  )\n > ^ <"),
        ],
    ),
    "truck": SeedPlan(
        palette="|_\\(o)",
        logic="boxy outline with wheel glyphs",
        variants=[
            VariantPlan(art=" ____\n|    |______\n|____|______\\\n (o)     (o)"),
            VariantPlan(art="  ___\n | o |\n |___|\n(|   |)"),
        ],
    ),
    "wizard": SeedPlan(
        palette="/\\_(o)|db",
        logic="stacked triangles over a thin body",
        classify="insensitive",
        variants=[
            VariantPlan(art="   /\\\n  /__\\\n  (ob)\n /|/\\|\\\n  b  d"),
            # reviewer keeps the out-of-palette '#': discarded as style drift
            VariantPlan(art="   /\\\n  /##\\\n  (##)\n /|##|\\\n  d  b"),
        ],
    ),
}


@pytest.fixture
def three_seed_config() -> PipelineConfig:
    return PipelineConfig(budget=2, k=2)
