"""Sense identification by exact lookup of sentences among gloss examples.

A sentence identifies the sense of a target when, after normalization, it is
one of the usage examples of exactly one synset containing the target lemma
(with a compatible POS). Sentences that hit several senses count as misses.
"""

from __future__ import annotations

import hashlib
import random
import re
from dataclasses import dataclass
from types import MappingProxyType
from typing import Callable, Iterable, Mapping, NamedTuple, Optional, Sequence, Union

from .errors import EmptyDataset, UnknownLemma
from .inventory import PartOfSpeech, SenseInventory, senses_of
from .tasks import TargetWord, WicInstance, WsdInstance

_QUOTES = "\"'`“”‘’«»"
_TERMINAL = ".!?;"
_DETOK_BEFORE = re.compile(r" (?=[,.;:!?)\]}%]|'s\b|'re\b|'ve\b|'ll\b|'d\b|'m\b|n't\b)")
_DETOK_AFTER = re.compile(r"(?<=[(\[{$]) ")


def _casefold(text: str) -> str:
    return " ".join(text.lower().split())


def normalize_sentence(text: str) -> str:
    """Lowercase, collapse whitespace, strip terminal punctuation and quotes.

    >>> normalize_sentence("The  dog barked .")
    'the dog barked'
    """
    s = _casefold(text)
    while True:
        t = s.strip(_QUOTES).rstrip(_TERMINAL).strip()
        if t == s:
            return s
        s = t


def _detokenized(text: str) -> str:
    s = normalize_sentence(text)
    s = _DETOK_BEFORE.sub("", s)
    s = _DETOK_AFTER.sub("", s)
    return normalize_sentence(s)


# Normalization ladder, weakest first. "punct" is the default matching key.
NORMALIZERS: dict[str, Callable[[str], str]] = {
    "raw": str.strip,
    "casefold": _casefold,
    "punct": normalize_sentence,
    "detok": _detokenized,
}
DEFAULT_NORMALIZATION = "punct"


class IndexEntry(NamedTuple):
    lemma: str
    sense_key: str
    pos: PartOfSpeech


class ExampleIndex:
    """Normalized example sentence -> entries of the senses that carry it."""

    def __init__(self, entries: Mapping[str, Sequence[IndexEntry]], normalization: str = DEFAULT_NORMALIZATION):
        self.normalization = normalization
        self.normalize = NORMALIZERS[normalization]
        self._entries = MappingProxyType({k: tuple(v) for k, v in entries.items()})

    @property
    def entries(self) -> Mapping[str, tuple[IndexEntry, ...]]:
        return self._entries

    def lookup(self, sentence: str) -> tuple[IndexEntry, ...]:
        return self._entries.get(self.normalize(sentence), ())

    def __len__(self) -> int:
        return sum(len(v) for v in self._entries.values())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExampleIndex):
            return NotImplemented
        return self.normalization == other.normalization and dict(self._entries) == dict(other._entries)

    __hash__ = None  # type: ignore[assignment]


def build_example_index(inv: SenseInventory, normalization: str = DEFAULT_NORMALIZATION) -> ExampleIndex:
    """One entry per (synset example, member lemma) pair."""
    normalize = NORMALIZERS[normalization]
    entries: dict[str, list[IndexEntry]] = {}
    for sid in sorted(inv.synsets):
        ss = inv.synsets[sid]
        if not ss.examples:
            continue
        members = [inv.sense_for(lemma, sid) for lemma in ss.lemmas]
        for example in ss.examples:
            key = normalize(example)
            for sense in members:
                if sense is not None:
                    entries.setdefault(key, []).append(IndexEntry(sense.lemma, sense.sense_key, sid.pos))
    return ExampleIndex(entries, normalization)


def _pos_compatible(entry_pos: PartOfSpeech, pos: Optional[PartOfSpeech]) -> bool:
    return pos is None or entry_pos.lookup_pos == pos.lookup_pos


def candidate_senses(idx: ExampleIndex, sentence: str, target: TargetWord) -> list[str]:
    """Distinct sense keys of the target lemma indexed under this sentence."""
    seen: list[str] = []
    for e in idx.lookup(sentence):
        if e.lemma == target.lemma and _pos_compatible(e.pos, target.pos) and e.sense_key not in seen:
            seen.append(e.sense_key)
    return seen


@dataclass
class MatchCounter:
    matched: int = 0
    missed: int = 0
    ambiguous: int = 0


def match_sentence(
    idx: ExampleIndex,
    sentence: str,
    target: TargetWord,
    counter: MatchCounter | None = None,
) -> str | None:
    keys = candidate_senses(idx, sentence, target)
    if counter is not None:
        if len(keys) == 1:
            counter.matched += 1
        else:
            counter.missed += 1
            if len(keys) > 1:
                counter.ambiguous += 1
    return keys[0] if len(keys) == 1 else None


# -- back-off solver ---------------------------------------------------------


@dataclass(frozen=True)
class Abstain:
    pass


@dataclass(frozen=True)
class RandomUniform:
    seed: int = 0


BackoffPolicy = Union[Abstain, RandomUniform]


def instance_rng(seed: int, instance_id: str) -> random.Random:
    """Generator seeded from (seed, instance id) only, so evaluation order
    and parallelism cannot change the draws."""
    digest = hashlib.sha256(f"{seed}\x00{instance_id}".encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


class MatchingWsdSolver:
    def __init__(self, idx: ExampleIndex, inv: SenseInventory, policy: BackoffPolicy):
        self.index = idx
        self.inventory = inv
        self.policy = policy

    def explain(self, inst: WsdInstance) -> tuple[Optional[str], bool]:
        """(sense or None, whether the sentence itself identified it)."""
        key = match_sentence(self.index, inst.context.text, inst.target)
        if key is not None:
            return key, True
        if isinstance(self.policy, Abstain):
            return None, False
        senses = senses_of(self.inventory, inst.target.lemma, inst.target.pos)
        if not senses:
            raise UnknownLemma(inst.target.lemma, inst.target.pos)
        rng = instance_rng(self.policy.seed, inst.id)
        return senses[rng.randrange(len(senses))].sense_key, False

    def __call__(self, inst: WsdInstance) -> Optional[str]:
        return self.explain(inst)[0]

    def __repr__(self) -> str:
        return f"matching_wsd({self.policy!r})"


def matching_wsd_solver(idx: ExampleIndex, inv: SenseInventory, policy: BackoffPolicy) -> MatchingWsdSolver:
    return MatchingWsdSolver(idx, inv, policy)


# -- match statistics --------------------------------------------------------


@dataclass(frozen=True)
class MatchReport:
    n: int
    n_both_matched: int
    n_ambiguous: int

    @property
    def fraction(self) -> float:
        return self.n_both_matched / self.n


def match_report(idx: ExampleIndex, dataset: Iterable[WicInstance]) -> MatchReport:
    """Count instances whose two sentences both identify a sense.

    ``n_ambiguous`` counts sentences (not instances) that hit several senses.
    """
    counter = MatchCounter()
    n = both = 0
    for inst in dataset:
        n += 1
        k1 = match_sentence(idx, inst.context1.text, inst.target, counter)
        k2 = match_sentence(idx, inst.context2.text, inst.target, counter)
        both += k1 is not None and k2 is not None
    if n == 0:
        raise EmptyDataset("match fraction of an empty dataset")
    return MatchReport(n, both, counter.ambiguous)


def match_fraction(idx: ExampleIndex, dataset: Sequence[WicInstance]) -> float:
    return match_report(idx, dataset).fraction
