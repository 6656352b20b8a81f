"""Task instances (WSD, TSV, WiC), solver signatures, and dataset loaders.

Spans are half-open character offsets into the context text. WiC's token
indices are converted by whitespace tokenization of the stored sentence.
"""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence, Union

from .errors import FormatError, LengthMismatch, MissingFile, MissingTag, SpanError, UnknownTagId
from .inventory import PartOfSpeech, canonical_lemma

log = logging.getLogger(__name__)

POS_TAGS = {
    "N": PartOfSpeech.NOUN,
    "NOUN": PartOfSpeech.NOUN,
    "V": PartOfSpeech.VERB,
    "VERB": PartOfSpeech.VERB,
    "ADJ": PartOfSpeech.ADJECTIVE,
    "A": PartOfSpeech.ADJECTIVE,
    "ADV": PartOfSpeech.ADVERB,
    "R": PartOfSpeech.ADVERB,
}
POS_NAMES = {
    PartOfSpeech.NOUN: "N",
    PartOfSpeech.VERB: "V",
    PartOfSpeech.ADJECTIVE: "ADJ",
    PartOfSpeech.ADJECTIVE_SATELLITE: "ADJ",
    PartOfSpeech.ADVERB: "ADV",
}


def parse_pos(tag: str) -> PartOfSpeech:
    """Map a dataset POS tag (N, V, ADJ, ADV and long forms) to a POS."""
    return POS_TAGS[tag.strip().upper()]


@dataclass(frozen=True, slots=True)
class Context:
    text: str
    start: int
    end: int

    def __post_init__(self):
        if not (0 <= self.start < self.end <= len(self.text)):
            raise ValueError(
                f"span [{self.start}, {self.end}) invalid for text of length {len(self.text)}"
            )

    @property
    def span(self) -> tuple[int, int]:
        return self.start, self.end

    @property
    def surface(self) -> str:
        return self.text[self.start : self.end]


@dataclass(frozen=True, slots=True)
class TargetWord:
    lemma: str
    pos: Optional[PartOfSpeech]  # None when the dataset gives no POS (WiC-TSV)

    def __post_init__(self):
        if not self.lemma or self.lemma != self.lemma.lower():
            raise ValueError(f"target lemma must be non-empty lowercase: {self.lemma!r}")


@dataclass(frozen=True, slots=True)
class WsdInstance:
    id: str
    context: Context
    target: TargetWord
    gold: Optional[str] = None


@dataclass(frozen=True, slots=True)
class TsvInstance:
    """One context and one candidate sense, given as a key or a definition."""

    id: str
    context: Context
    target: TargetWord
    sense_key: Optional[str] = None
    definition: Optional[str] = None
    gold: Optional[bool] = None

    def __post_init__(self):
        if (self.sense_key is None) == (self.definition is None):
            raise ValueError("exactly one of sense_key / definition must be given")


@dataclass(frozen=True, slots=True)
class WicInstance:
    id: str
    context1: Context
    context2: Context
    target: TargetWord
    gold: Optional[bool] = None


Instance = Union[WsdInstance, TsvInstance, WicInstance]

# A WSD solver returns a sense key, or None to abstain.
WsdSolver = Callable[[WsdInstance], Optional[str]]
TsvSolver = Callable[[TsvInstance], bool]
WicSolver = Callable[[WicInstance], bool]


# -- helpers -----------------------------------------------------------------


def token_span(sentence: str, index: int) -> tuple[int, int]:
    """Character span of the ``index``-th whitespace-delimited token."""
    for i, m in enumerate(re.finditer(r"\S+", sentence)):
        if i == index:
            return m.start(), m.end()
    raise IndexError(index)


def _read_lines(path: Path) -> list[str]:
    if not path.is_file():
        raise MissingFile(path)
    with open(path, encoding="utf-8") as fh:
        lines = [ln.rstrip("\r\n") for ln in fh]
    while lines and not lines[-1].strip():
        lines.pop()
    return lines


def _parse_tf(path: Path, lineno: int, value: str) -> bool:
    v = value.strip().upper()
    if v in ("T", "TRUE", "1"):
        return True
    if v in ("F", "FALSE", "0"):
        return False
    raise FormatError(path, lineno, f"expected T/F label, got {value!r}")


def split_name(path: Path) -> str:
    name = path.name
    for suffix in (".data.txt", "_examples.txt", ".data.json", ".json", ".txt"):
        if name.endswith(suffix):
            return name[: -len(suffix)]
    return path.stem


def _check_surface(instance_id: str, lemma: str, surface: str) -> None:
    # inflection and tokenization mismatches are expected in real data
    if canonical_lemma(surface)[:3] != lemma[:3]:
        log.warning("%s: surface %r does not look like lemma %r", instance_id, surface, lemma)


# -- WiC ---------------------------------------------------------------------


def load_wic(data_path: str | Path, gold_path: str | Path | None = None) -> list[WicInstance]:
    """Read a WiC v1.0 split (``*.data.txt`` plus optional ``*.gold.txt``).

    Instance ids are ``<split>.<line index>``, the split taken from the data
    file name.
    """
    data_path = Path(data_path)
    rows = _read_lines(data_path)
    golds: list[Optional[bool]] = [None] * len(rows)
    if gold_path is not None:
        gold_path = Path(gold_path)
        gold_lines = _read_lines(gold_path)
        if len(gold_lines) != len(rows):
            raise LengthMismatch(f"{gold_path} vs {data_path}", len(rows), len(gold_lines))
        golds = [_parse_tf(gold_path, i, g) for i, g in enumerate(gold_lines, 1)]

    split = split_name(data_path)
    out = []
    for i, (row, gold) in enumerate(zip(rows, golds)):
        lineno = i + 1
        cols = row.split("\t")
        if len(cols) == 6 and not cols[5].strip():
            cols = cols[:5]
        if len(cols) != 5:
            raise FormatError(data_path, lineno, f"expected 5 tab-separated columns, got {len(cols)}")
        word, tag, indices, s1, s2 = cols
        try:
            pos = parse_pos(tag)
        except KeyError:
            raise FormatError(data_path, lineno, f"unknown POS tag {tag!r}") from None
        try:
            i1, i2 = (int(x) for x in indices.split("-"))
        except ValueError:
            raise FormatError(data_path, lineno, f"bad token indices {indices!r}") from None
        try:
            c1 = Context(s1, *token_span(s1, i1))
            c2 = Context(s2, *token_span(s2, i2))
        except IndexError as exc:
            raise SpanError(data_path, lineno, f"token index {exc.args[0]} out of range") from None
        inst = WicInstance(f"{split}.{i}", c1, c2, TargetWord(canonical_lemma(word), pos), gold)
        _check_surface(inst.id, inst.target.lemma, c1.surface)
        _check_surface(inst.id, inst.target.lemma, c2.surface)
        out.append(inst)
    return out


# -- MCL-WiC -----------------------------------------------------------------


def _read_tags(path: Path) -> dict[str, bool]:
    """Gold tags either as the official JSON list or as ``id<TAB>tag`` lines."""
    if not path.is_file():
        raise MissingFile(path)
    text = path.read_text(encoding="utf-8")
    tags: dict[str, bool] = {}
    if text.lstrip().startswith("["):
        try:
            records = json.loads(text)
            pairs = [(str(r["id"]), r["tag"]) for r in records]
        except (ValueError, KeyError, TypeError) as exc:
            raise FormatError(path, None, f"bad tag JSON: {exc}") from None
        for n, (iid, tag) in enumerate(pairs, 1):
            tags[iid] = _parse_tf(path, n, tag)
        return tags
    for n, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        cols = line.split("\t")
        if len(cols) != 2:
            raise FormatError(path, n, f"expected id<TAB>tag, got {len(cols)} columns")
        tags[cols[0]] = _parse_tf(path, n, cols[1])
    return tags


def _offset(path: Path, n: int, rec: dict, key: str) -> int:
    try:
        return int(rec[key])
    except (KeyError, TypeError, ValueError):
        raise FormatError(path, n, f"record needs integer {key!r}") from None


def load_mclwic(json_path: str | Path, tags_path: str | Path | None = None) -> list[WicInstance]:
    """Read an MCL-WiC English split; character offsets are used verbatim.

    Error line numbers refer to the record's position in the JSON array.
    """
    json_path = Path(json_path)
    if not json_path.is_file():
        raise MissingFile(json_path)
    try:
        records = json.loads(json_path.read_text(encoding="utf-8"))
    except ValueError as exc:
        raise FormatError(json_path, None, f"invalid JSON: {exc}") from None
    if not isinstance(records, list):
        raise FormatError(json_path, None, "expected a JSON array of records")

    out = []
    for n, rec in enumerate(records, 1):
        if not isinstance(rec, dict):
            raise FormatError(json_path, n, "record is not an object")
        try:
            iid = str(rec["id"])
            lemma = canonical_lemma(rec["lemma"])
            tag = rec["pos"]
            s1, s2 = rec["sentence1"], rec["sentence2"]
        except KeyError as exc:
            raise FormatError(json_path, n, f"missing field {exc.args[0]!r}") from None
        try:
            pos = parse_pos(tag)
        except (KeyError, AttributeError):
            raise FormatError(json_path, n, f"unknown POS tag {tag!r}") from None
        spans = [_offset(json_path, n, rec, k) for k in ("start1", "end1", "start2", "end2")]
        try:
            c1 = Context(s1, spans[0], spans[1])
            c2 = Context(s2, spans[2], spans[3])
        except ValueError as exc:
            raise SpanError(json_path, n, str(exc)) from None
        inst = WicInstance(iid, c1, c2, TargetWord(lemma, pos))
        _check_surface(iid, lemma, c1.surface)
        _check_surface(iid, lemma, c2.surface)
        out.append(inst)

    if tags_path is None:
        return out
    tags = _read_tags(Path(tags_path))
    ids = {inst.id for inst in out}
    for iid in tags:
        if iid not in ids:
            raise UnknownTagId(iid)
    labelled = []
    for inst in out:
        if inst.id not in tags:
            raise MissingTag(inst.id)
        labelled.append(WicInstance(inst.id, inst.context1, inst.context2, inst.target, tags[inst.id]))
    return labelled


# -- WiC-TSV -----------------------------------------------------------------


def wictsv_sibling(examples_path: str | Path, kind: str) -> Path:
    """Path of the ``definitions``/``hypernyms``/``labels`` file for a split."""
    p = Path(examples_path)
    if "_examples" not in p.name:
        raise ValueError(f"not a WiC-TSV examples file: {p}")
    return p.with_name(p.name.replace("_examples", f"_{kind}"))


def load_wictsv(
    examples_path: str | Path,
    definitions_path: str | Path | None = None,
    labels_path: str | Path | None = None,
) -> list[TsvInstance]:
    """Read a WiC-TSV split for the definition sub-task.

    Definitions default to the sibling ``*_definitions.txt``; labels to the
    sibling ``*_labels.txt`` when it exists (blind test sets have none).
    Hypernym files are not read.
    """
    examples_path = Path(examples_path)
    if definitions_path is None:
        definitions_path = wictsv_sibling(examples_path, "definitions")
    definitions_path = Path(definitions_path)
    if labels_path is None:
        candidate = wictsv_sibling(examples_path, "labels")
        labels_path = candidate if candidate.is_file() else None

    rows = _read_lines(examples_path)
    defs = _read_lines(definitions_path)
    if len(defs) != len(rows):
        raise LengthMismatch(f"{definitions_path} vs {examples_path}", len(rows), len(defs))
    golds: list[Optional[bool]] = [None] * len(rows)
    if labels_path is not None:
        labels_path = Path(labels_path)
        labels = _read_lines(labels_path)
        if len(labels) != len(rows):
            raise LengthMismatch(f"{labels_path} vs {examples_path}", len(rows), len(labels))
        golds = [_parse_tf(labels_path, i, v) for i, v in enumerate(labels, 1)]

    split = split_name(examples_path)
    out = []
    for i, (row, definition, gold) in enumerate(zip(rows, defs, golds)):
        lineno = i + 1
        cols = row.split("\t")
        if len(cols) != 3:
            raise FormatError(examples_path, lineno, f"expected 3 tab-separated columns, got {len(cols)}")
        word, position, text = cols
        try:
            start, end = token_span(text, int(position))
        except ValueError:
            raise FormatError(examples_path, lineno, f"bad token position {position!r}") from None
        except IndexError:
            raise SpanError(examples_path, lineno, f"token position {position} out of range") from None
        if not definition.strip():
            raise FormatError(definitions_path, lineno, "empty definition")
        inst = TsvInstance(
            f"{split}.{i}",
            Context(text, start, end),
            TargetWord(canonical_lemma(word), None),
            definition=definition.strip(),
            gold=gold,
        )
        out.append(inst)
    return out


# -- unified dump ------------------------------------------------------------

DUMP_COLUMNS = ("task", "id", "lemma", "pos", "span1", "text1", "span2", "text2", "candidate", "gold")


def _gold_field(gold) -> str:
    if gold is None:
        return "-"
    if isinstance(gold, bool):
        return "T" if gold else "F"
    return str(gold)


def _clean(text: str) -> str:
    if "\t" in text or "\n" in text:
        raise ValueError(f"text contains tab or newline: {text!r}")
    return text


def dump_row(inst: Instance) -> list[str]:
    pos = POS_NAMES[inst.target.pos] if inst.target.pos is not None else "-"
    if isinstance(inst, WicInstance):
        c1, c2 = inst.context1, inst.context2
        return [
            "wic", inst.id, inst.target.lemma, pos,
            f"{c1.start}:{c1.end}", _clean(c1.text),
            f"{c2.start}:{c2.end}", _clean(c2.text),
            "", _gold_field(inst.gold),
        ]
    c = inst.context
    if isinstance(inst, TsvInstance):
        candidate = f"key:{inst.sense_key}" if inst.sense_key is not None else f"def:{inst.definition}"
        task = "tsv"
    else:
        candidate = ""
        task = "wsd"
    return [
        task, inst.id, inst.target.lemma, pos,
        f"{c.start}:{c.end}", _clean(c.text), "", "",
        _clean(candidate), _gold_field(inst.gold),
    ]


def write_dump(instances: Iterable[Instance], path_or_file) -> int:
    """Write the unified tab-separated instance dump; returns the row count."""
    own = isinstance(path_or_file, (str, Path))
    fh = open(path_or_file, "w", encoding="utf-8", newline="\n") if own else path_or_file
    try:
        fh.write("\t".join(DUMP_COLUMNS) + "\n")
        n = 0
        for inst in instances:
            fh.write("\t".join(dump_row(inst)) + "\n")
            n += 1
        return n
    finally:
        if own:
            fh.close()


def read_dump(path: str | Path) -> list[Instance]:
    path = Path(path)
    lines = _read_lines(path)
    if not lines or tuple(lines[0].split("\t")) != DUMP_COLUMNS:
        raise FormatError(path, 1, "missing dump header")
    out: list[Instance] = []
    for lineno, line in enumerate(lines[1:], 2):
        cols = line.split("\t")
        if len(cols) != len(DUMP_COLUMNS):
            raise FormatError(path, lineno, f"expected {len(DUMP_COLUMNS)} columns, got {len(cols)}")
        task, iid, lemma, pos_tag, span1, text1, span2, text2, candidate, gold = cols
        try:
            pos = None if pos_tag == "-" else parse_pos(pos_tag)
            target = TargetWord(lemma, pos)
            c1 = Context(text1, *(int(x) for x in span1.split(":")))
            if task == "wic":
                c2 = Context(text2, *(int(x) for x in span2.split(":")))
                out.append(WicInstance(iid, c1, c2, target, None if gold == "-" else gold == "T"))
            elif task == "tsv":
                kind, _, value = candidate.partition(":")
                kw = {"sense_key": value} if kind == "key" else {"definition": value}
                out.append(TsvInstance(iid, c1, target, gold=None if gold == "-" else gold == "T", **kw))
            elif task == "wsd":
                out.append(WsdInstance(iid, c1, target, None if gold == "-" else gold))
            else:
                raise ValueError(f"unknown task {task!r}")
        except (KeyError, ValueError, TypeError) as exc:
            raise FormatError(path, lineno, str(exc)) from None
    return out


def gold_labels(dataset: Sequence[Instance]) -> list:
    return [inst.gold for inst in dataset]
