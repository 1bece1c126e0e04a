#!/usr/bin/env python3
"""Regenerate the checked-in test fixtures under tests/data/.

Hand-drawn arts plus procedurally generated shapes, sanity-checked against
the default filter policy before writing. Deterministic: re-running leaves
the files unchanged.
"""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from asciikit.grid import AsciiArt, FilterPolicy, normalize, similarity, validate_structural

ROOT = Path(__file__).resolve().parents[1]
DATA = ROOT / "tests" / "data"

CAT = [
    " /\\_/\\",
    "( o.o )",
    " > ^ <",
]
TRUCK = [
    " ______",
    "| |__| |___",
    "|_|__|_|__ \\",
    " (o)    (o)",
]
WIZARD = [
    "   /\\",
    "  /__\\",
    "  (oo)",
    " /|/\\|\\",
    "  d  b",
]
HOUSE = [
    "   /\\",
    "  /  \\",
    " /____\\",
    " | [] |",
    " |____|",
]
FISH = [
    "  _____",
    " /     \\",
    "<  o    >=",
    " \\_____/",
]
BOAT = [
    "    |\\",
    "    | \\",
    "    |__\\",
    " ___|____",
    " \\______/",
]
STAR = [
    "   *",
    "  ***",
    "*******",
    "  ***",
    " *   *",
]
HEART = [
    " ** **",
    "*******",
    " *****",
    "  ***",
    "   *",
]
TREE = [
    "   ^",
    "  ^^^",
    " ^^^^^",
    "^^^^^^^",
    "   |",
    "   |",
]
CUP = [
    " ____",
    "|    |__",
    "|    |  |",
    "|    |__|",
    " \\__/",
]
MOON = [
    "  ___",
    " /  )",
    "|  (",
    " \\__)",
]
ARROW = [
    "    /\\",
    "   /  \\",
    "  / /\\ \\",
    "   /  \\",
    "   |  |",
]
SNAKE = [
    " ____",
    "/    \\",
    "\\___  \\",
    " ___)  )",
    "(_____/",
]
ROCKET = [
    "   /\\",
    "  |==|",
    "  |  |",
    "  |  |",
    " /|##|\\",
    "  vvvv",
]
FACE = [
    " .----.",
    "| o  o |",
    "|  __  |",
    " '----'",
]

HAND_DRAWN = {
    "cat": CAT,
    "truck": TRUCK,
    "wizard": WIZARD,
    "house": HOUSE,
    "fish": FISH,
    "boat": BOAT,
    "star": STAR,
    "heart": HEART,
    "tree": TREE,
    "cup": CUP,
    "moon": MOON,
    "arrow": ARROW,
    "snake": SNAKE,
    "rocket": ROCKET,
    "face": FACE,
}


def box(w, h, edge):
    top = edge * w
    mid = edge + " " * (w - 2) + edge
    return [top] + [mid] * (h - 2) + [top]


def diamond(r, glyph):
    rows = []
    for i in range(r):
        rows.append(" " * (r - 1 - i) + glyph * (2 * i + 1))
    for i in range(r - 2, -1, -1):
        rows.append(" " * (r - 1 - i) + glyph * (2 * i + 1))
    return rows


def triangle(h, glyph):
    return [" " * (h - 1 - i) + glyph * (2 * i + 1) for i in range(h)]


def zigzag(w, h, glyph):
    rows = []
    for y in range(h):
        row = [" "] * w
        for x in range(w):
            if (x + y) % 4 == 0:
                row[x] = glyph
        rows.append("".join(row).rstrip())
    return rows


def checker(w, h, glyph):
    return [
        "".join(glyph if (x + y) % 2 == 0 else " " for x in range(w)).rstrip()
        for y in range(h)
    ]


def procedural():
    arts = {}
    for i, edge in enumerate("#*+=ox"):
        arts[f"box-{edge}-{i}"] = box(5 + i, 3 + i % 3, edge)
    for i, glyph in enumerate("@%&$#*"):
        arts[f"diamond-{glyph}-{i}"] = diamond(3 + i % 4, glyph)
    for i, glyph in enumerate("^~.:+x#o"):
        arts[f"triangle-{glyph}-{i}"] = triangle(3 + i % 5, glyph)
    for i, glyph in enumerate("/\\|-"):
        arts[f"zigzag-{i}"] = zigzag(10 + i, 4 + i, glyph)
    for i, glyph in enumerate("#@*o"):
        arts[f"checker-{i}"] = checker(6 + i, 4 + i, glyph)
    for w in (4, 6, 8, 10, 12):
        arts[f"ladder-{w}"] = ["|" + "_" * (w - 2) + "|"] * 3 + ["|" + " " * (w - 2) + "|"]
    for n in (3, 5, 7):
        arts[f"wave-{n}"] = ["/\\" * n, "\\/" * n, "/\\" * n][: 2 + n % 2]
    return arts


def art_text(rows):
    return "\n".join(rows)


def write_corpus():
    arts = dict(HAND_DRAWN)
    arts.update(procedural())
    records = []
    for name in sorted(arts):
        art = normalize(AsciiArt.from_text(art_text(arts[name])))
        records.append({"id": name, "art": art.text})
    assert len(records) >= 50, f"corpus too small: {len(records)}"
    path = DATA / "corpus.jsonl"
    with open(path, "w") as fh:
        for rec in records:
            fh.write(json.dumps(rec) + "\n")
    print(f"wrote {len(records)} corpus arts to {path}")


SEEDS = [
    ("cat", "Cat", "a small cat face with pointed ears", CAT),
    ("truck", "Truck", "a delivery truck seen from the side", TRUCK),
    ("wizard", "Wizard", "a wizard with a pointed hat and beard", WIZARD),
]


def write_seed_fixtures():
    policy = FilterPolicy()
    three = []
    for sid, category, description, rows in SEEDS:
        art = normalize(AsciiArt.from_text(art_text(rows)))
        report = validate_structural(art, policy)
        assert report.ok, f"{sid}: {report.violations}"
        three.append(
            {"id": sid, "art": art.text, "category": category, "description": description}
        )
    for a in three:
        for b in three:
            if a["id"] < b["id"]:
                sim = similarity(
                    AsciiArt.from_text(a["art"]), AsciiArt.from_text(b["art"])
                )
                assert sim < policy.similarity_threshold, (a["id"], b["id"], sim)
    with open(DATA / "seeds_three.jsonl", "w") as fh:
        for rec in three:
            fh.write(json.dumps(rec) + "\n")
    print(f"wrote {len(three)} seeds to seeds_three.jsonl")

    # 10 raw candidates: 7 good, 2 duplicates, 1 corrupt (bell character)
    raw = [
        {"id": "r0-cat", "art": art_text(CAT), "category": "Cat",
         "description": "a small cat face", "source_user": "u123"},
        {"id": "r1-truck", "art": art_text(TRUCK), "category": "Truck",
         "description": "a delivery truck"},
        {"id": "r2-wizard", "art": art_text(WIZARD), "category": "Wizard",
         "description": "a wizard with a hat"},
        {"id": "r3-house", "art": art_text(HOUSE), "category": "House",
         "description": "a house with a door"},
        {"id": "r4-fish", "art": art_text(FISH), "category": "Fish",
         "description": "a fish swimming right"},
        {"id": "r5-cat-dup", "art": art_text(CAT), "category": "Cat",
         "description": "another cat face"},
        {"id": "r6-boat", "art": art_text(BOAT), "category": "Boat",
         "description": "a small sailboat"},
        {"id": "r7-corrupt", "art": "ding\x07dong\nding", "category": "Bell",
         "description": "a broken bell"},
        {"id": "r8-truck-dup", "art": art_text(TRUCK), "category": "Truck",
         "description": "the same delivery truck"},
        {"id": "r9-star", "art": art_text(STAR), "category": "Star",
         "description": "a five pointed star"},
    ]
    with open(DATA / "seeds_raw.jsonl", "w") as fh:
        for rec in raw:
            fh.write(json.dumps(rec) + "\n")
    print(f"wrote {len(raw)} raw candidates to seeds_raw.jsonl")


def write_bench():
    bench_dir = DATA / "bench"
    bench_dir.mkdir(parents=True, exist_ok=True)
    gen_recall = [
        {"id": "gr1", "instruction": "a small sailboat", "category": "Sailboat",
         "art": art_text(BOAT)},
        {"id": "gr2", "instruction": "a cup of coffee with a handle", "category": "Cup",
         "art": art_text(CUP)},
    ]
    gen_generalization = [
        {"id": "gg1", "instruction": "a five pointed star above a small heart",
         "category": "Star", "art": art_text(STAR)},
        {"id": "gg2", "instruction": "a rocket ready for launch, facing up",
         "category": "Rocket", "art": art_text(ROCKET)},
    ]
    und_seen = [
        {"id": "us1", "art": art_text(CAT), "category": "Cat",
         "options": ["Cat", "Dog", "Fox"]},
        {"id": "us2", "art": art_text(HOUSE), "category": "House",
         "options": ["Barn", "House", "Castle"]},
    ]
    und_unseen = [
        {"id": "uu1", "art": art_text(FISH), "category": "Fish",
         "options": ["Whale", "Boat", "Fish"]},
        {"id": "uu2", "art": art_text(STAR), "category": "Star",
         "options": ["Star", "Sun", "Moon"]},
    ]
    files = {
        "generation_recall.jsonl": gen_recall,
        "generation_generalization.jsonl": gen_generalization,
        "understanding_seen.jsonl": und_seen,
        "understanding_unseen.jsonl": und_unseen,
    }
    for name, rows in files.items():
        with open(bench_dir / name, "w") as fh:
            for rec in rows:
                fh.write(json.dumps(rec) + "\n")
    manifest = {
        "schema_version": 1,
        "generation": {
            "recall": "generation_recall.jsonl",
            "generalization": "generation_generalization.jsonl",
        },
        "understanding": {
            "seen": "understanding_seen.jsonl",
            "unseen": "understanding_unseen.jsonl",
        },
        "counts": {"recall": 2, "generalization": 2, "seen": 2, "unseen": 2},
    }
    (bench_dir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    print(f"wrote bench fixture to {bench_dir}")


if __name__ == "__main__":
    DATA.mkdir(parents=True, exist_ok=True)
    write_corpus()
    write_seed_fixtures()
    write_bench()
