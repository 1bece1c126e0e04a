#!/usr/bin/env python3
"""Regenerate the frozen glyph atlas shipped in src/asciikit/_atlas_data.py.

The package never rasterizes from system fonts at runtime; it reads the
frozen bitmap produced here. Re-run this only to change the atlas (the
output is checked in, so rendering stays bit-identical across machines).
"""

import base64
from pathlib import Path

from PIL import Image, ImageDraw, ImageFont

FONT_PATH = "/usr/share/fonts/truetype/dejavu/DejaVuSansMono.ttf"
FONT_SIZE = 13
CELL_W, CELL_H = 8, 16
FIRST, LAST = 0x20, 0x7E

OUT = Path(__file__).resolve().parents[1] / "src" / "asciikit" / "_atlas_data.py"

TEMPLATE = '''"""Frozen 8x16 monospace glyph bitmaps for code points 0x20-0x7E.

Generated by scripts/rebuild_glyph_atlas.py; do not edit by hand.
Each glyph is {cell_h} bytes, one byte per pixel row, bit 7 = leftmost column.
"""

CELL_WIDTH = {cell_w}
CELL_HEIGHT = {cell_h}
FIRST_CODEPOINT = {first}
LAST_CODEPOINT = {last}

_PACKED = (
{packed}
)
'''


def rasterize(ch: str, font) -> bytes:
    im = Image.new("L", (CELL_W, CELL_H), 255)
    ImageDraw.Draw(im).text((0, 0), ch, font=font, fill=0)
    px = im.load()
    rows = bytearray()
    for y in range(CELL_H):
        b = 0
        for x in range(CELL_W):
            if px[x, y] < 128:
                b |= 0x80 >> x
        rows.append(b)
    return bytes(rows)


def main() -> None:
    font = ImageFont.truetype(FONT_PATH, FONT_SIZE)
    blob = b"".join(rasterize(chr(cp), font) for cp in range(FIRST, LAST + 1))
    encoded = base64.b85encode(blob).decode("ascii")
    chunks = [encoded[i : i + 76] for i in range(0, len(encoded), 76)]
    packed = "\n".join(f'    "{c}"' for c in chunks)
    OUT.write_text(
        TEMPLATE.format(
            cell_w=CELL_W, cell_h=CELL_H, first=FIRST, last=LAST, packed=packed
        )
    )
    print(f"wrote {OUT} ({len(blob)} glyph bytes)")


if __name__ == "__main__":
    main()
