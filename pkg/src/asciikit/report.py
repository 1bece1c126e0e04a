"""Deterministic rendering of aggregate tables as markdown or CSV.

Stored values keep full precision; rounding (half-up, matching the printed
precision of score tables) happens only at render time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal

from .bench import KIND_DIRECT, KIND_SELECT
from .judge import (
    DIMENSIONS,
    GenerationAggregate,
    UnderstandingTable,
    relative_improvement,
)


class ShapeMismatch(ValueError):
    """Two bundles disagree on table layout and cannot be diffed."""


@dataclass(frozen=True)
class DeltaRow:
    table: str
    row: str
    metric: str
    baseline: float
    new: float
    delta_pct: float


@dataclass
class ReportBundle:
    generation: dict[str, GenerationAggregate] = field(default_factory=dict)
    understanding: UnderstandingTable | None = None
    deltas: list[DeltaRow] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)


def fmt_score(value: float) -> str:
    """Three decimals, half-up."""
    return str(Decimal(repr(value)).quantize(Decimal("0.001"), rounding=ROUND_HALF_UP))


def fmt_accuracy(value: float) -> str:
    """One decimal, half-up."""
    return str(Decimal(repr(value)).quantize(Decimal("0.1"), rounding=ROUND_HALF_UP))


def fmt_delta(value: float) -> str:
    pct = fmt_accuracy(abs(value))
    if value > 0:
        return f"↑ {pct}%"
    if value < 0:
        return f"↓ {pct}%"
    return "0.0%"


_KIND_LABEL = {KIND_DIRECT: "Direct", KIND_SELECT: "Select"}


def _generation_rows(bundle: ReportBundle) -> list[tuple[str, list[str]]]:
    rows = []
    for subset, agg in sorted(bundle.generation.items()):
        values = [fmt_score(v) for v in agg.means.as_tuple()]
        values.append(fmt_score(agg.composite_of_means))
        rows.append((subset, values))
    return rows


def _understanding_rows(bundle: ReportBundle) -> list[tuple[str, list[str]]]:
    table = bundle.understanding
    if table is None:
        return []
    kinds = sorted({kind for kind, _ in table.cells}, key=lambda k: _KIND_LABEL.get(k, k))
    rows = []
    for kind in kinds:
        values = [
            fmt_accuracy(table.accuracy(kind, "seen")),
            fmt_accuracy(table.accuracy(kind, "unseen")),
            fmt_accuracy(table.average(kind)),
        ]
        rows.append((_KIND_LABEL.get(kind, kind), values))
    return rows


def render_report(bundle: ReportBundle, format: str = "markdown") -> str:
    """Serialize the bundle; identical bundles render to identical bytes."""
    if format in ("markdown", "md"):
        return _render_markdown(bundle)
    if format == "csv":
        return _render_csv(bundle)
    raise ValueError(f"unknown format {format!r}")


def _md_table(header: list[str], rows: list[list[str]]) -> list[str]:
    lines = ["| " + " | ".join(header) + " |"]
    lines.append("|" + "|".join("---" for _ in header) + "|")
    for row in rows:
        lines.append("| " + " | ".join(row) + " |")
    return lines


def _render_markdown(bundle: ReportBundle) -> str:
    lines: list[str] = ["# Evaluation Report", ""]
    if bundle.metadata:
        for key in sorted(bundle.metadata):
            lines.append(f"- {key}: {bundle.metadata[key]}")
        lines.append("")
    gen_rows = _generation_rows(bundle)
    if gen_rows:
        lines.append("## Generation")
        lines.append("")
        lines.extend(
            _md_table(
                ["Subset", "n"] + list(DIMENSIONS) + ["Comp."],
                [[subset, str(bundle.generation[subset].n)] + values for subset, values in gen_rows],
            )
        )
        lines.append("")
    und_rows = _understanding_rows(bundle)
    if und_rows:
        lines.append("## Understanding (Accuracy %)")
        lines.append("")
        lines.extend(
            _md_table(
                ["Task", "Seen", "Unseen", "Avg."],
                [[label] + values for label, values in und_rows],
            )
        )
        lines.append("")
    if bundle.deltas:
        lines.append("## Relative Improvement")
        lines.append("")
        lines.extend(
            _md_table(
                ["Table", "Row", "Metric", "Baseline", "New", "Δ"],
                [
                    [
                        d.table,
                        d.row,
                        d.metric,
                        fmt_score(d.baseline) if d.table == "generation" else fmt_accuracy(d.baseline),
                        fmt_score(d.new) if d.table == "generation" else fmt_accuracy(d.new),
                        fmt_delta(d.delta_pct),
                    ]
                    for d in bundle.deltas
                ],
            )
        )
        lines.append("")
    return "\n".join(lines)


def _render_csv(bundle: ReportBundle) -> str:
    """Long format: table,row,metric,value — same numbers as the markdown."""
    lines = ["table,row,metric,value"]
    for subset, values in _generation_rows(bundle):
        lines.append(f"generation,{subset},n,{bundle.generation[subset].n}")
        for metric, value in zip(list(DIMENSIONS) + ["Comp."], values):
            lines.append(f"generation,{subset},{metric},{value}")
    for label, values in _understanding_rows(bundle):
        for metric, value in zip(["Seen", "Unseen", "Avg."], values):
            lines.append(f"understanding,{label},{metric},{value}")
    for d in bundle.deltas:
        lines.append(f"delta,{d.row},{d.metric},{fmt_delta(d.delta_pct)}")
    return "\n".join(lines) + "\n"


def diff_reports(baseline: ReportBundle, new: ReportBundle) -> list[DeltaRow]:
    """Per-cell relative improvement between two matching bundles."""
    if sorted(baseline.generation) != sorted(new.generation):
        raise ShapeMismatch("generation subsets differ")
    deltas: list[DeltaRow] = []
    for subset in sorted(baseline.generation):
        old_agg = baseline.generation[subset]
        new_agg = new.generation[subset]
        for i, dim in enumerate(DIMENSIONS):
            old_v = old_agg.means.as_tuple()[i]
            new_v = new_agg.means.as_tuple()[i]
            deltas.append(
                DeltaRow(
                    table="generation", row=subset, metric=dim,
                    baseline=old_v, new=new_v,
                    delta_pct=relative_improvement(old_v, new_v) if old_v else 0.0,
                )
            )
        deltas.append(
            DeltaRow(
                table="generation", row=subset, metric="Comp.",
                baseline=old_agg.composite_of_means, new=new_agg.composite_of_means,
                delta_pct=relative_improvement(
                    old_agg.composite_of_means, new_agg.composite_of_means
                )
                if old_agg.composite_of_means
                else 0.0,
            )
        )
    if (baseline.understanding is None) != (new.understanding is None):
        raise ShapeMismatch("understanding table present in only one bundle")
    if baseline.understanding is not None and new.understanding is not None:
        if sorted(baseline.understanding.cells) != sorted(new.understanding.cells):
            raise ShapeMismatch("understanding cells differ")
        kinds = sorted({kind for kind, _ in baseline.understanding.cells})
        for kind in kinds:
            old_v = baseline.understanding.average(kind)
            new_v = new.understanding.average(kind)
            deltas.append(
                DeltaRow(
                    table="understanding", row=_KIND_LABEL.get(kind, kind), metric="Avg.",
                    baseline=old_v, new=new_v,
                    delta_pct=relative_improvement(old_v, new_v) if old_v else 0.0,
                )
            )
    return deltas
