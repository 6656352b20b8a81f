"""Writers for small WordNet-format fixture directories."""

from __future__ import annotations

from pathlib import Path

HEADER = [
    "  1 This is a test fixture in WordNet 3.0 database format.  ",
    "  2 Lines beginning with two spaces are skipped by readers.  ",
]
FILES = {"n": "data.noun", "v": "data.verb", "a": "data.adj", "s": "data.adj", "r": "data.adv"}
SS_TYPE = {"n": 1, "v": 2, "a": 3, "r": 4, "s": 5}


def write_wordnet(root: Path, entries) -> dict[str, tuple[str, int]]:
    """Write data.* and index.sense under ``root``.

    ``entries`` are ``(ss_type, lex_filenum, [(word, lex_id, sense_number)], gloss)``
    tuples, optionally with a fifth ``head`` element (``"word:id"``) for
    satellites. Offsets are real byte offsets. Returns sense key ->
    (data file name, offset).
    """
    root.mkdir(parents=True, exist_ok=True)
    chunks: dict[str, list[str]] = {name: [h + "\n" for h in HEADER] for name in set(FILES.values())}
    sizes = {name: sum(len(c.encode()) for c in lines) for name, lines in chunks.items()}
    index_lines = []
    keys = {}
    for entry in entries:
        ss_type, lexfile, words, gloss = entry[:4]
        head = entry[4] if len(entry) > 4 else ":"
        fname = FILES[ss_type]
        offset = sizes[fname]
        word_fields = " ".join(f"{w} {lex_id:x}" for w, lex_id, _ in words)
        line = f"{offset:08d} {lexfile:02d} {ss_type} {len(words):02x} {word_fields} 000 | {gloss}  \n"
        chunks[fname].append(line)
        sizes[fname] += len(line.encode())
        for w, lex_id, number in words:
            base = w.lower().split("(")[0]
            key = f"{base}%{SS_TYPE[ss_type]}:{lexfile:02d}:{lex_id:02d}:{head}"
            index_lines.append(f"{key} {offset:08d} {number} 0\n")
            keys[key] = (fname, offset)
    for name, lines in chunks.items():
        (root / name).write_text("".join(lines), encoding="utf-8")
    (root / "index.sense").write_text("".join(sorted(index_lines)), encoding="utf-8")
    return keys


DOG = [("n", 5, [("dog", 0, 1)], 'a domesticated canid; "the dog barked"')]

SMALL = [
    ("n", 14, [("board", 0, 1)], 'a committee having supervisory powers; "the board has seven members"'),
    ("n", 13, [("board", 1, 2), ("table", 1, 3)], 'food or meals in general; "she sets a fine table"; "room and board"'),
    ("n", 6, [("plank", 0, 1), ("board", 2, 3)], 'a stout length of sawn timber; "he nailed boards across the windows"'),
    ("v", 38, [("board", 0, 1)], "get on board of (trains, buses, ships, aircraft, etc.)"),
    (
        "n", 4,
        [("campaign", 0, 1), ("political_campaign", 0, 1), ("election_campaign", 0, 1)],
        'a race between candidates for elective office; "I managed his campaign for governor"',
    ),
    ("n", 4, [("campaign", 1, 2)], 'a series of actions advancing a principle; "he supported populist campaigns"'),
    ("a", 0, [("good", 0, 1)], 'having desirable or positive qualities; "a good report card"'),
    ("s", 0, [("full", 0, 1)], 'having the normally expected amount; "gives full measure"', "good:00"),
    ("r", 2, [("quickly", 0, 1), ("rapidly", 0, 1)], 'with rapid movements; "he works quickly"'),
    ("n", 5, [("dog", 0, 1), ("domestic_dog", 0, 1)], 'a member of the genus Canis; "the dog barked all night; nobody slept"'),
    ("n", 17, [("bank", 0, 1)], 'sloping land beside water; "he sat on the bank"'),
    ("n", 14, [("bank", 1, 2)], 'a financial institution; "he sat on the bank"; "he cashed a check at the bank"'),
]
