"""Seeded miniature worlds: a toy inventory plus gold senses for every context.

Each lemma gets between ``min_senses`` and ``max_senses`` senses, each sense a
synset of its own. Every sense owns ``examples_per_sense`` contexts whose texts
become the synset's gloss examples, plus optional held-out contexts that are
not in the inventory (useful for exercising matcher back-off). Every context
text is unique and mentions its lemma exactly once.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .errors import InvalidParameter, UnknownContext
from .inventory import PartOfSpeech, Sense, SenseInventory, Synset, SynsetId
from .tasks import Context, TargetWord, TsvInstance, WicInstance, WsdInstance

_FILLERS = (
    "the", "a", "we", "saw", "near", "under", "very", "old", "quiet", "river",
    "some", "they", "took", "again", "with", "every", "small", "house", "after",
    "rain", "morning", "found", "there", "soon", "green", "about", "window",
)
_ONSETS = "bdfgklmnprstvz"
_VOWELS = "aeiou"


@dataclass(frozen=True)
class SyntheticWorld:
    inventory: SenseInventory
    contexts: dict[str, tuple[Context, TargetWord]]
    gold_sense_of_context: dict[str, str]
    example_context_ids: frozenset[str]
    wsd: list[WsdInstance]
    tsv: list[TsvInstance]
    wic: list[WicInstance]
    _by_context: dict[Context, str] = field(repr=False, compare=False, default_factory=dict)

    def context_id(self, context: Context) -> str:
        try:
            return self._by_context[context]
        except KeyError:
            raise UnknownContext(context) from None

    def sense_of(self, context: Context) -> str:
        return self.gold_sense_of_context[self.context_id(context)]


def _pseudo_word(rng: random.Random) -> str:
    n = rng.randint(2, 3)
    return "".join(rng.choice(_ONSETS) + rng.choice(_VOWELS) for _ in range(n)) + rng.choice("nrstl")


def generate_synthetic_world(
    seed: int,
    n_lemmas: int,
    max_senses: int,
    examples_per_sense: int,
    *,
    min_senses: int = 1,
    held_out_per_sense: int = 0,
) -> SyntheticWorld:
    for name, value in (
        ("n_lemmas", n_lemmas),
        ("max_senses", max_senses),
        ("examples_per_sense", examples_per_sense),
        ("min_senses", min_senses),
    ):
        if value < 1:
            raise InvalidParameter(f"{name} must be >= 1, got {value}")
    if held_out_per_sense < 0:
        raise InvalidParameter(f"held_out_per_sense must be >= 0, got {held_out_per_sense}")
    if min_senses > max_senses:
        raise InvalidParameter("min_senses exceeds max_senses")

    rng = random.Random(seed)
    lemmas: list[str] = []
    while len(lemmas) < n_lemmas:
        w = _pseudo_word(rng)
        if w not in lemmas and w not in _FILLERS:
            lemmas.append(w)

    synsets: list[Synset] = []
    senses: list[Sense] = []
    contexts: dict[str, tuple[Context, TargetWord]] = {}
    gold: dict[str, str] = {}
    example_ids: set[str] = set()
    by_lemma: dict[str, list[str]] = {}
    sense_keys: dict[str, list[str]] = {}
    counter = itertools.count()
    offset = 1000

    for lemma in lemmas:
        pos = rng.choice((PartOfSpeech.NOUN, PartOfSpeech.VERB))
        target = TargetWord(lemma, pos)
        k = rng.randint(min_senses, max_senses)
        for j in range(k):
            sid = SynsetId(pos, offset)
            offset += 100
            key = f"{lemma}%{pos.ss_type_number}:00:{j:02d}::"
            sense_keys.setdefault(lemma, []).append(key)
            texts = []
            for e in range(examples_per_sense + held_out_per_sense):
                cid = f"c{next(counter):05d}"
                left = " ".join(rng.choice(_FILLERS) for _ in range(rng.randint(1, 4)))
                right = " ".join(rng.choice(_FILLERS) for _ in range(rng.randint(1, 4)))
                text = f"{left} {lemma} {right} {cid}"
                start = len(left) + 1
                contexts[cid] = (Context(text, start, start + len(lemma)), target)
                gold[cid] = key
                by_lemma.setdefault(lemma, []).append(cid)
                if e < examples_per_sense:
                    texts.append(text)
                    example_ids.add(cid)
            synsets.append(Synset(sid, (lemma,), f"sense {j + 1} of {lemma}", tuple(texts)))
            senses.append(Sense(key, lemma, sid, j + 1))

    inventory = SenseInventory(synsets, senses)

    wsd = [WsdInstance(f"wsd.{cid}", ctx, tw, gold[cid]) for cid, (ctx, tw) in contexts.items()]
    tsv = [
        TsvInstance(f"tsv.{cid}.{n}", ctx, tw, sense_key=key, gold=(key == gold[cid]))
        for cid, (ctx, tw) in contexts.items()
        for n, key in enumerate(sense_keys[tw.lemma])
    ]
    wic = []
    for lemma in lemmas:
        for a, b in itertools.combinations(by_lemma[lemma], 2):
            (ca, tw), (cb, _) = contexts[a], contexts[b]
            wic.append(WicInstance(f"wic.{a}.{b}", ca, cb, tw, gold[a] == gold[b]))

    return SyntheticWorld(
        inventory=inventory,
        contexts=contexts,
        gold_sense_of_context=gold,
        example_context_ids=frozenset(example_ids),
        wsd=wsd,
        tsv=tsv,
        wic=wic,
        _by_context={ctx: cid for cid, (ctx, _) in contexts.items()},
    )
