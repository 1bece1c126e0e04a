"""Deterministic bitmap rendering of ASCII art.

Glyphs come from a frozen 8x16 atlas checked into the repo, so identical
art and config produce bit-identical pixels on every machine. Cells other
than the native size are filled by nearest-neighbor scaling of the atlas
glyph (pure integer arithmetic).
"""

from __future__ import annotations

import base64
import io
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from PIL import Image

from . import _atlas_data
from .grid import AsciiArt

INK = 0
PAPER = 255


@dataclass(frozen=True)
class RenderConfig:
    cell_width: int = _atlas_data.CELL_WIDTH
    cell_height: int = _atlas_data.CELL_HEIGHT

    def __post_init__(self):
        if self.cell_width < 1 or self.cell_height < 1:
            raise ValueError("cell dimensions must be positive")


@dataclass(frozen=True)
class RenderedImage:
    """Grayscale bitmap: 0 = ink, 255 = paper."""

    pixels: np.ndarray
    cell_width: int
    cell_height: int

    def __eq__(self, other):
        if not isinstance(other, RenderedImage):
            return NotImplemented
        return (
            self.cell_width == other.cell_width
            and self.cell_height == other.cell_height
            and np.array_equal(self.pixels, other.pixels)
        )

    __hash__ = None


@lru_cache(maxsize=None)
def _atlas() -> dict[str, np.ndarray]:
    """Decode the packed atlas into per-glyph boolean ink masks."""
    blob = base64.b85decode("".join(_atlas_data._PACKED))
    w, h = _atlas_data.CELL_WIDTH, _atlas_data.CELL_HEIGHT
    glyphs = {}
    for i, cp in enumerate(
        range(_atlas_data.FIRST_CODEPOINT, _atlas_data.LAST_CODEPOINT + 1)
    ):
        rows = blob[i * h : (i + 1) * h]
        mask = np.zeros((h, w), dtype=bool)
        for y, byte in enumerate(rows):
            for x in range(w):
                mask[y, x] = bool(byte & (0x80 >> x))
        glyphs[chr(cp)] = mask
    return glyphs


def glyph_bitmap(ch: str) -> np.ndarray:
    """Native-size ink mask for a printable character."""
    return _atlas()[ch].copy()


@lru_cache(maxsize=4096)
def _scaled_glyph(ch: str, cw: int, ch_px: int) -> np.ndarray:
    native = _atlas()[ch]
    nh, nw = native.shape
    if (nw, nh) == (cw, ch_px):
        return native
    ys = (np.arange(ch_px) * nh) // ch_px
    xs = (np.arange(cw) * nw) // cw
    return native[np.ix_(ys, xs)]


def render(art: AsciiArt, config: RenderConfig = RenderConfig()) -> RenderedImage:
    """Paint black glyphs on a white bitmap, one cell per character.

    Output dimensions are exactly (art.height * cell_height,
    art.width * cell_width).
    """
    cw, ch = config.cell_width, config.cell_height
    width, height = art.width, art.height
    pixels = np.full((height * ch, width * cw), PAPER, dtype=np.uint8)
    for row_idx, row in enumerate(art.rows):
        y0 = row_idx * ch
        for col_idx, glyph in enumerate(row):
            if glyph == " ":
                continue
            mask = _scaled_glyph(glyph, cw, ch)
            x0 = col_idx * cw
            block = pixels[y0 : y0 + ch, x0 : x0 + cw]
            block[mask] = INK
    pixels.setflags(write=False)
    return RenderedImage(pixels=pixels, cell_width=cw, cell_height=ch)


def to_png(image: RenderedImage) -> bytes:
    """Encode the bitmap as PNG bytes."""
    buf = io.BytesIO()
    Image.fromarray(np.asarray(image.pixels), mode="L").save(buf, format="PNG")
    return buf.getvalue()


def render_png(art: AsciiArt, config: RenderConfig = RenderConfig()) -> bytes:
    return to_png(render(art, config))
