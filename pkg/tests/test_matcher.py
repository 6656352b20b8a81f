from __future__ import annotations

import math
from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import DATA
from sense_reduce.errors import EmptyDataset, UnknownLemma
from sense_reduce.inventory import PartOfSpeech, SenseInventory, load_inventory
from sense_reduce.matcher import (
    NORMALIZERS,
    Abstain,
    MatchCounter,
    RandomUniform,
    build_example_index,
    match_fraction,
    match_report,
    match_sentence,
    matching_wsd_solver,
    normalize_sentence,
)
from sense_reduce.tasks import Context, TargetWord, WsdInstance, load_wic

N = PartOfSpeech.NOUN
BOARD = TargetWord("board", N)


def wsd(text, lemma="board", pos=N, id="w"):
    start = text.lower().index(lemma)
    return WsdInstance(id, Context(text, start, start + len(lemma)), TargetWord(lemma, pos))


# -- normalization -----------------------------------------------------------


@pytest.mark.parametrize(
    "raw, expected",
    [
        ("The  dog barked .", "the dog barked"),
        ("", ""),
        ('"Room and board."', "room and board"),
        ("He works quickly!?", "he works quickly"),
        ("  a\tb\nc ", "a b c"),
    ],
)
def test_normalize_sentence(raw, expected):
    assert normalize_sentence(raw) == expected


@given(st.text(max_size=40))
def test_every_normalizer_is_idempotent(text):
    for normalize in NORMALIZERS.values():
        once = normalize(text)
        assert normalize(once) == once


def test_detok_rung_rejoins_clitics():
    assert NORMALIZERS["detok"]("He did n't like it , really .") == "he didn't like it, really"


# -- index -------------------------------------------------------------------


def test_dog_index(dog_dir):
    inv = load_inventory(dog_dir)
    idx = build_example_index(inv)
    assert list(idx.entries) == ["the dog barked"]
    ((lemma, key, pos),) = idx.entries["the dog barked"]
    assert (lemma, key, pos) == ("dog", "dog%1:05:00::", N)


def test_index_of_exampleless_inventory_is_empty(dog_dir):
    inv = load_inventory(dog_dir)
    bare = SenseInventory(
        [type(ss)(ss.id, ss.lemmas, ss.gloss, ()) for ss in inv.synsets.values()],
        inv.senses.values(),
    )
    assert len(build_example_index(bare)) == 0


def test_index_has_entry_per_member_lemma(small_inv):
    idx = build_example_index(small_inv)
    lemmas = {e.lemma for e in idx.entries["i managed his campaign for governor"]}
    assert lemmas == {"campaign", "political_campaign", "election_campaign"}


def test_index_is_deterministic(small_inv):
    assert build_example_index(small_inv) == build_example_index(small_inv)


# -- matching ----------------------------------------------------------------


def test_match_hit_and_miss(small_inv):
    idx = build_example_index(small_inv)
    counter = MatchCounter()
    assert match_sentence(idx, "Room and board .", BOARD, counter) == "board%1:13:01::"
    assert match_sentence(idx, "The board met on Tuesday .", BOARD, counter) is None
    assert (counter.matched, counter.missed, counter.ambiguous) == (1, 1, 0)


def test_ambiguous_sentence_is_a_miss(small_inv):
    idx = build_example_index(small_inv)
    counter = MatchCounter()
    assert match_sentence(idx, "He sat on the bank .", TargetWord("bank", N), counter) is None
    assert (counter.matched, counter.missed, counter.ambiguous) == (0, 1, 1)


def test_pos_must_be_compatible(small_inv):
    idx = build_example_index(small_inv)
    assert match_sentence(idx, "Room and board .", TargetWord("board", PartOfSpeech.VERB)) is None
    assert match_sentence(idx, "Room and board .", TargetWord("board", None)) == "board%1:13:01::"
    # satellites match an adjective target
    full = match_sentence(idx, "Gives full measure .", TargetWord("full", PartOfSpeech.ADJECTIVE))
    assert full == "full%5:00:00:good:00"


def test_lemma_must_belong_to_the_synset(small_inv):
    idx = build_example_index(small_inv)
    assert match_sentence(idx, "Room and board .", TargetWord("room", N)) is None


def test_match_implies_normalized_equality(small_inv):
    idx = build_example_index(small_inv)
    for inst in load_wic(DATA / "wic" / "train.data.txt"):
        for ctx in (inst.context1, inst.context2):
            key = match_sentence(idx, ctx.text, inst.target)
            if key is not None:
                examples = small_inv.synset_of(small_inv.sense(key)).examples
                assert normalize_sentence(ctx.text) in [normalize_sentence(e) for e in examples]


def test_normalization_rungs_differ(small_inv):
    strict = build_example_index(small_inv, "raw")
    loose = build_example_index(small_inv, "punct")
    assert match_sentence(strict, "Room and board .", BOARD) is None
    assert match_sentence(loose, "Room and board .", BOARD) is not None


# -- solver and back-off -----------------------------------------------------


def test_matched_sense_ignores_policy(small_inv):
    idx = build_example_index(small_inv)
    inst = wsd("He nailed boards across the windows .")
    for policy in (Abstain(), RandomUniform(0), RandomUniform(99)):
        assert matching_wsd_solver(idx, small_inv, policy)(inst) == "board%1:06:02::"


def test_abstain_policy(small_inv):
    idx = build_example_index(small_inv)
    solver = matching_wsd_solver(idx, small_inv, Abstain())
    assert solver(wsd("The board met .")) is None
    assert solver.explain(wsd("Room and board .")) == ("board%1:13:01::", True)


def test_random_backoff_unknown_lemma(small_inv):
    idx = build_example_index(small_inv)
    solver = matching_wsd_solver(idx, small_inv, RandomUniform(0))
    with pytest.raises(UnknownLemma):
        solver(wsd("a zzz here", lemma="zzz"))


def test_random_backoff_is_uniform(small_inv):
    idx = build_example_index(small_inv)
    solver = matching_wsd_solver(idx, small_inv, RandomUniform(3))
    draws = 10_000
    counts = Counter(solver(wsd("The board met .", id=f"i{n}")) for n in range(draws))
    assert set(counts) == {"board%1:14:00::", "board%1:13:01::", "board%1:06:02::"}
    p = 1 / 3
    sigma = math.sqrt(draws * p * (1 - p))
    for c in counts.values():
        assert abs(c - draws * p) < 3 * sigma


def test_random_backoff_is_seed_stable(small_inv):
    idx = build_example_index(small_inv)
    insts = [wsd("The board met .", id=f"i{n}") for n in range(50)]
    a = [matching_wsd_solver(idx, small_inv, RandomUniform(5))(i) for i in insts]
    b = [matching_wsd_solver(idx, small_inv, RandomUniform(5))(i) for i in reversed(insts)]
    assert a == b[::-1]
    c = [matching_wsd_solver(idx, small_inv, RandomUniform(6))(i) for i in insts]
    assert a != c


# -- match fraction ----------------------------------------------------------


def test_match_fraction_on_fixture(small_inv):
    idx = build_example_index(small_inv)
    data = load_wic(DATA / "wic" / "train.data.txt")
    report = match_report(idx, data)
    assert (report.n, report.n_both_matched, report.n_ambiguous) == (6, 3, 1)
    assert match_fraction(idx, data) == 0.5


def test_match_fraction_zero_without_examples(dog_dir):
    idx = build_example_index(load_inventory(dog_dir))
    assert match_fraction(idx, load_wic(DATA / "wic" / "train.data.txt")) == 0.0


def test_match_fraction_of_empty_dataset(small_inv):
    with pytest.raises(EmptyDataset):
        match_fraction(build_example_index(small_inv), [])
