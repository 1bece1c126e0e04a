"""Canonical grid model for ASCII art.

An :class:`AsciiArt` is an immutable rectangular-normalized grid of printable
ASCII characters (0x20-0x7E). Rows may have different lengths; the grid width
is the maximum row length. Everything downstream (rendering, synthesis,
benchmarking, judging) operates on this type.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from typing import NamedTuple

TAB_STOP = 4
MIN_PRINTABLE = 0x20
MAX_PRINTABLE = 0x7E

ART_OPEN = "<art>"
ART_CLOSE = "</art>"


class ArtError(ValueError):
    """Base class for grid parsing/normalization failures."""


class EmptyArt(ArtError):
    """The art block contains only whitespace."""


class UnclosedTag(ArtError):
    """An opening <art> tag has no matching closing tag."""


class NoArtBlock(ArtError):
    """No <art> block present and the text does not qualify as a bare grid."""


class IllegalCharacter(ArtError):
    """A character outside printable ASCII survived normalization."""

    def __init__(self, codepoint: int, row: int, col: int):
        super().__init__(f"illegal character U+{codepoint:04X} at row {row}, col {col}")
        self.codepoint = codepoint
        self.row = row
        self.col = col


@dataclass(frozen=True)
class AsciiArt:
    """A grid of text rows. Construct via :func:`parse_art_block` or
    :func:`normalize`; raw construction performs no validation."""

    rows: tuple[str, ...]

    @property
    def width(self) -> int:
        return max((len(r) for r in self.rows), default=0)

    @property
    def height(self) -> int:
        return len(self.rows)

    @property
    def text(self) -> str:
        """Serialized form: rows joined by newlines, no trailing newline."""
        return "\n".join(self.rows)

    @classmethod
    def from_text(cls, text: str) -> "AsciiArt":
        return cls(rows=tuple(text.split("\n")))


@dataclass(frozen=True)
class CharacterPalette:
    """Distinct non-space glyphs of an art with counts and ink density."""

    glyphs: frozenset[str]
    frequencies: dict[str, int] = field(hash=False)
    density: float = 0.0


@dataclass(frozen=True)
class FilterPolicy:
    """Structural bounds applied when curating seeds and accepting variants.

    Defaults bracket the sizes observed in practice with some margin.
    """

    min_width: int = 3
    max_width: int = 400
    min_height: int = 3
    max_height: int = 120
    min_density: float = 0.02
    max_density: float = 0.70
    similarity_threshold: float = 0.90

    def __post_init__(self):
        if self.min_width > self.max_width or self.min_height > self.max_height:
            raise ValueError("min bound exceeds max bound")
        if not self.min_density <= self.max_density:
            raise ValueError("min_density exceeds max_density")
        if not 0.0 < self.similarity_threshold <= 1.0:
            raise ValueError("similarity_threshold must be in (0, 1]")


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[str, ...] = ()


class ParsedBlock(NamedTuple):
    art: AsciiArt
    tagless: bool


def normalize(art: AsciiArt) -> AsciiArt:
    """Return the canonical form of *art*.

    Tabs expand at stop 4, carriage returns are dropped, trailing whitespace
    is stripped per row (leading whitespace is layout and survives). Any
    remaining character outside 0x20-0x7E raises :class:`IllegalCharacter`.
    Idempotent: normalizing a normalized art is the identity.
    """
    rows = []
    for i, raw in enumerate(art.rows):
        row = raw.replace("\r", "").expandtabs(TAB_STOP).rstrip()
        for j, ch in enumerate(row):
            cp = ord(ch)
            if cp < MIN_PRINTABLE or cp > MAX_PRINTABLE:
                raise IllegalCharacter(cp, i, j)
        rows.append(row)
    if not any(rows):
        raise EmptyArt("art contains no visible characters")
    return AsciiArt(rows=tuple(rows))


def parse_art_block(text: str) -> ParsedBlock:
    """Extract the art between the first ``<art>`` and the next ``</art>``.

    A single newline directly after the opening tag and before the closing
    tag is stripped, then the grid is normalized. When no tags are present
    the whole text is accepted as a tagless grid only if it spans at least
    two rows (a lone line is indistinguishable from prose).
    """
    start = text.find(ART_OPEN)
    if start == -1:
        body = text
        if len(body.split("\n")) < 2:
            raise NoArtBlock("no <art> block and input is not a grid")
        tagless = True
    else:
        end = text.find(ART_CLOSE, start + len(ART_OPEN))
        if end == -1:
            raise UnclosedTag("opening <art> tag without closing </art>")
        body = text[start + len(ART_OPEN) : end]
        tagless = False
    if body.startswith("\n"):
        body = body[1:]
    if body.endswith("\n"):
        body = body[:-1]
    if not body.strip():
        raise EmptyArt("art block contains only whitespace")
    return ParsedBlock(art=normalize(AsciiArt.from_text(body)), tagless=tagless)


def dimensions(art: AsciiArt) -> tuple[int, int, int]:
    """(width, height, area) of a normalized art."""
    w, h = art.width, art.height
    return w, h, w * h


def char_palette(art: AsciiArt) -> CharacterPalette:
    """Distinct non-space glyphs, their counts, and ink density."""
    counts = Counter(ch for row in art.rows for ch in row if ch != " ")
    w, h, area = dimensions(art)
    return CharacterPalette(
        glyphs=frozenset(counts),
        frequencies=dict(sorted(counts.items())),
        density=sum(counts.values()) / area if area else 0.0,
    )


def _shingles(text: str, n: int = 3) -> frozenset[str]:
    if len(text) < n:
        return frozenset({text})
    return frozenset(text[i : i + n] for i in range(len(text) - n + 1))


def similarity(a: AsciiArt, b: AsciiArt) -> float:
    """Jaccard overlap of character 3-gram shingles over the row-joined text.

    Symmetric, in [0, 1], and exactly 1.0 iff the shingle sets are equal.
    """
    sa, sb = _shingles(a.text), _shingles(b.text)
    union = sa | sb
    if not union:
        return 1.0
    return len(sa & sb) / len(union)


def validate_structural(art: AsciiArt, policy: FilterPolicy) -> ValidationReport:
    """Check dimension and density bounds. Failures are data, not errors."""
    w, h, _ = dimensions(art)
    density = char_palette(art).density
    violations = []
    if w < policy.min_width:
        violations.append("WidthTooSmall")
    if w > policy.max_width:
        violations.append("WidthTooLarge")
    if h < policy.min_height:
        violations.append("HeightTooSmall")
    if h > policy.max_height:
        violations.append("HeightTooLarge")
    if density < policy.min_density:
        violations.append("DensityTooLow")
    if density > policy.max_density:
        violations.append("DensityTooHigh")
    return ValidationReport(ok=not violations, violations=tuple(violations))


_ANSWER_JUNK = re.compile(r'^[\s"\'`*_.,:;!?()\[\]-]+|[\s"\'`*_.,:;!?()\[\]-]+$')


def extract_answer_line(text: str) -> str:
    """Final non-empty line of a model reply, stripped of quotes/punctuation.

    Used for understanding-task outputs, where models tend to prepend
    chatter before the actual label.
    """
    for line in reversed(text.split("\n")):
        cleaned = _ANSWER_JUNK.sub("", line)
        if cleaned:
            return cleaned
    return ""
