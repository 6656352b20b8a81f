"""WordNet 3.0 database reader and the immutable sense inventory built from it.

Only the parts needed for sense identity are read: synset membership, glosses
with their quoted usage examples, and ``index.sense`` for sense keys and
frequency ranks. Pointers and verb frames are skipped.
"""

from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

from .errors import DanglingSense, MissingFile, ParseError, UnknownSense

DATA_FILES = ("data.noun", "data.verb", "data.adj", "data.adv")
INDEX_SENSE = "index.sense"
DUMP_HEADER = "#sense_reduce-inventory\t1"

_EXAMPLE_RE = re.compile(r'"([^"]*)"')
_ADJ_MARKER_RE = re.compile(r"\((?:a|p|ip)\)$")


class PartOfSpeech(enum.Enum):
    NOUN = "n"
    VERB = "v"
    ADJECTIVE = "a"
    ADJECTIVE_SATELLITE = "s"
    ADVERB = "r"

    @property
    def lookup_pos(self) -> PartOfSpeech:
        """POS used for lemma lookup; satellites fold into adjectives."""
        if self is PartOfSpeech.ADJECTIVE_SATELLITE:
            return PartOfSpeech.ADJECTIVE
        return self

    @property
    def ss_type_number(self) -> int:
        return _SS_TYPE_NUMBERS[self]

    @classmethod
    def from_ss_type_number(cls, number: int) -> PartOfSpeech:
        for pos, n in _SS_TYPE_NUMBERS.items():
            if n == number:
                return pos
        raise ValueError(f"bad ss_type number {number}")


_SS_TYPE_NUMBERS = {
    PartOfSpeech.NOUN: 1,
    PartOfSpeech.VERB: 2,
    PartOfSpeech.ADJECTIVE: 3,
    PartOfSpeech.ADVERB: 4,
    PartOfSpeech.ADJECTIVE_SATELLITE: 5,
}

# Order in which POS-less lookups enumerate senses.
LOOKUP_ORDER = (
    PartOfSpeech.NOUN,
    PartOfSpeech.VERB,
    PartOfSpeech.ADJECTIVE,
    PartOfSpeech.ADVERB,
)


@dataclass(frozen=True, slots=True)
class SynsetId:
    pos: PartOfSpeech
    offset: int

    def __str__(self) -> str:
        return f"{self.offset:08d}-{self.pos.value}"

    # enum members are not orderable; order by the POS letter instead
    def __lt__(self, other: SynsetId) -> bool:
        return (self.pos.value, self.offset) < (other.pos.value, other.offset)


@dataclass(frozen=True, slots=True)
class Synset:
    id: SynsetId
    lemmas: tuple[str, ...]
    gloss: str
    examples: tuple[str, ...]


@dataclass(frozen=True, slots=True)
class Sense:
    sense_key: str
    lemma: str
    synset: SynsetId
    sense_number: int

    @property
    def pos(self) -> PartOfSpeech:
        return self.synset.pos


def canonical_lemma(lemma: str) -> str:
    return "_".join(lemma.strip().lower().split())


def split_gloss(raw: str) -> tuple[str, tuple[str, ...]]:
    """Split a raw gloss into its definition and quoted usage examples.

    Every double-quoted segment is an example (quotes removed); the
    definition is what remains once those segments are cut out, with empty
    ``;``-separated leftovers dropped.

    >>> split_gloss('food or meals in general; "she sets a fine table"; "room and board"')
    ('food or meals in general', ('she sets a fine table', 'room and board'))
    """
    examples = tuple(m.group(1) for m in _EXAMPLE_RE.finditer(raw))
    rest = _EXAMPLE_RE.sub("", raw)
    parts = [p.strip() for p in rest.split(";")]
    definition = "; ".join(p for p in parts if p)
    return definition, examples


class SenseInventory:
    """Read-only store of synsets and senses with a (lemma, POS) index.

    Construction validates linkage (every sense resolves to a synset, keys
    and (lemma, synset) pairs unique). Mappings are exposed as read-only
    proxies; lists as tuples.
    """

    __slots__ = ("_synsets", "_senses", "_lemma_index", "_by_lemma_synset")

    def __init__(self, synsets: Iterable[Synset], senses: Iterable[Sense]):
        synset_map: dict[SynsetId, Synset] = {}
        for ss in synsets:
            if ss.id in synset_map:
                raise ValueError(f"duplicate synset {ss.id}")
            if not ss.lemmas:
                raise ValueError(f"synset {ss.id} has no lemmas")
            synset_map[ss.id] = ss

        sense_map: dict[str, Sense] = {}
        by_pair: dict[tuple[str, SynsetId], Sense] = {}
        index: dict[tuple[str, PartOfSpeech], list[Sense]] = {}
        for sense in senses:
            if sense.synset not in synset_map:
                raise DanglingSense(sense.sense_key, sense.synset)
            if sense.sense_key in sense_map:
                raise ValueError(f"duplicate sense key {sense.sense_key}")
            pair = (sense.lemma, sense.synset)
            if pair in by_pair:
                raise ValueError(f"duplicate (lemma, synset) pair {pair}")
            sense_map[sense.sense_key] = sense
            by_pair[pair] = sense
            index.setdefault((sense.lemma, sense.pos.lookup_pos), []).append(sense)

        self._synsets = MappingProxyType(synset_map)
        self._senses = MappingProxyType(sense_map)
        self._by_lemma_synset = MappingProxyType(by_pair)
        self._lemma_index = MappingProxyType(
            {
                key: tuple(sorted(group, key=lambda s: (s.sense_number, s.sense_key)))
                for key, group in index.items()
            }
        )

    @property
    def synsets(self) -> Mapping[SynsetId, Synset]:
        return self._synsets

    @property
    def senses(self) -> Mapping[str, Sense]:
        return self._senses

    @property
    def lemma_index(self) -> Mapping[tuple[str, PartOfSpeech], tuple[Sense, ...]]:
        return self._lemma_index

    def sense(self, sense_key: str) -> Sense:
        try:
            return self._senses[sense_key]
        except KeyError:
            raise UnknownSense(sense_key) from None

    def synset_of(self, sense: Sense | str) -> Synset:
        if isinstance(sense, str):
            sense = self.sense(sense)
        return self._synsets[sense.synset]

    def sense_for(self, lemma: str, synset: SynsetId) -> Sense | None:
        """The sense of ``lemma`` in ``synset``, if the lemma is a member."""
        return self._by_lemma_synset.get((canonical_lemma(lemma), synset))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SenseInventory):
            return NotImplemented
        return dict(self._synsets) == dict(other._synsets) and dict(
            self._senses
        ) == dict(other._senses)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"<SenseInventory synsets={len(self._synsets)} senses={len(self._senses)}>"


def senses_of(
    inv: SenseInventory, lemma: str, pos: PartOfSpeech | None
) -> list[Sense]:
    """Senses of ``lemma`` ordered by sense number; empty if unknown.

    With ``pos=None`` the senses of every POS are concatenated in
    noun, verb, adjective, adverb order.
    """
    key = canonical_lemma(lemma)
    if pos is None:
        out: list[Sense] = []
        for p in LOOKUP_ORDER:
            out.extend(inv.lemma_index.get((key, p), ()))
        return out
    return list(inv.lemma_index.get((key, pos.lookup_pos), ()))


def examples_of(inv: SenseInventory, s: Sense | str) -> list[str]:
    key = s if isinstance(s, str) else s.sense_key
    if key not in inv.senses:
        raise UnknownSense(key)
    return list(inv.synset_of(key).examples)


# -- WordNet database files --------------------------------------------------


def _parse_data_line(path: Path, lineno: int, line: str) -> Synset:
    head, sep, gloss = line.partition("|")
    if not sep:
        raise ParseError(path, lineno, "no gloss separator '|'")
    fields = head.split()
    try:
        offset = int(fields[0])
        pos = PartOfSpeech(fields[2])
        w_cnt = int(fields[3], 16)
    except (IndexError, ValueError) as exc:
        raise ParseError(path, lineno, f"bad synset header: {exc}") from None
    words = fields[4 : 4 + 2 * w_cnt : 2]
    if w_cnt < 1 or len(words) != w_cnt or len(fields) < 5 + 2 * w_cnt:
        raise ParseError(path, lineno, f"expected {w_cnt} words")
    try:
        p_cnt = int(fields[4 + 2 * w_cnt])
    except ValueError:
        raise ParseError(path, lineno, "bad pointer count") from None
    if len(fields) < 5 + 2 * w_cnt + 4 * p_cnt:
        raise ParseError(path, lineno, f"expected {p_cnt} pointers")
    lemmas = tuple(_ADJ_MARKER_RE.sub("", w) for w in words)
    definition, examples = split_gloss(gloss.strip())
    return Synset(SynsetId(pos, offset), lemmas, definition, examples)


def iter_data_file(path: Path) -> Iterator[Synset]:
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if line.startswith("  ") or not line.strip():
                continue
            yield _parse_data_line(path, lineno, line)


def _parse_sense_key(key: str) -> tuple[str, PartOfSpeech]:
    lemma, pct, rest = key.partition("%")
    if not pct or not lemma:
        raise ValueError("no '%' in sense key")
    parts = rest.split(":")
    if len(parts) != 5:
        raise ValueError("sense key needs 5 ':'-separated fields after '%'")
    return lemma, PartOfSpeech.from_ss_type_number(int(parts[0]))


def iter_index_sense(path: Path) -> Iterator[Sense]:
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            fields = line.split()
            if len(fields) != 4:
                raise ParseError(path, lineno, f"expected 4 fields, got {len(fields)}")
            key, offset, number, _tag_cnt = fields
            try:
                lemma, pos = _parse_sense_key(key)
                sense_number = int(number)
                synset = SynsetId(pos, int(offset))
            except ValueError as exc:
                raise ParseError(path, lineno, str(exc)) from None
            if sense_number < 1:
                raise ParseError(path, lineno, "sense number must be positive")
            yield Sense(key, lemma.lower(), synset, sense_number)


def load_inventory(dict_dir: str | Path) -> SenseInventory:
    """Load a WordNet 3.0 ``dict`` directory into a :class:`SenseInventory`."""
    root = Path(dict_dir)
    paths = [root / name for name in (*DATA_FILES, INDEX_SENSE)]
    for p in paths:
        if not p.is_file():
            raise MissingFile(p)
    synsets: list[Synset] = []
    for p in paths[:-1]:
        synsets.extend(iter_data_file(p))
    return SenseInventory(synsets, iter_index_sense(paths[-1]))


# -- canonical dump ----------------------------------------------------------


def dump_inventory(inv: SenseInventory, path: str | Path) -> None:
    """Write the inventory as a tab-separated, one-record-per-line dump.

    ``S`` lines hold synsets, ``K`` lines senses; text fields are JSON
    encoded so tabs and newlines cannot leak into the framing.
    """
    with open(path, "w", encoding="utf-8", newline="\n") as out:
        out.write(DUMP_HEADER + "\n")
        for sid in sorted(inv.synsets):
            ss = inv.synsets[sid]
            out.write(
                "\t".join(
                    (
                        "S",
                        sid.pos.value,
                        str(sid.offset),
                        json.dumps(list(ss.lemmas), ensure_ascii=False),
                        json.dumps(ss.gloss, ensure_ascii=False),
                        json.dumps(list(ss.examples), ensure_ascii=False),
                    )
                )
                + "\n"
            )
        for key in sorted(inv.senses):
            s = inv.senses[key]
            out.write(
                "\t".join(
                    (
                        "K",
                        key,
                        json.dumps(s.lemma, ensure_ascii=False),
                        s.synset.pos.value,
                        str(s.synset.offset),
                        str(s.sense_number),
                    )
                )
                + "\n"
            )


def read_inventory_dump(path: str | Path) -> SenseInventory:
    path = Path(path)
    if not path.is_file():
        raise MissingFile(path)
    synsets: list[Synset] = []
    senses: list[Sense] = []
    with open(path, encoding="utf-8") as fh:
        first = fh.readline().rstrip("\n")
        if first != DUMP_HEADER:
            raise ParseError(path, 1, "not an inventory dump")
        for lineno, line in enumerate(fh, 2):
            fields = line.rstrip("\n").split("\t")
            try:
                if fields[0] == "S" and len(fields) == 6:
                    sid = SynsetId(PartOfSpeech(fields[1]), int(fields[2]))
                    synsets.append(
                        Synset(
                            sid,
                            tuple(json.loads(fields[3])),
                            json.loads(fields[4]),
                            tuple(json.loads(fields[5])),
                        )
                    )
                elif fields[0] == "K" and len(fields) == 6:
                    sid = SynsetId(PartOfSpeech(fields[3]), int(fields[4]))
                    senses.append(
                        Sense(fields[1], json.loads(fields[2]), sid, int(fields[5]))
                    )
                else:
                    raise ValueError(f"bad record type or width ({len(fields)} fields)")
            except ValueError as exc:
                raise ParseError(path, lineno, str(exc)) from None
    return SenseInventory(synsets, senses)
