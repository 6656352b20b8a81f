from __future__ import annotations

import itertools
import json
import logging

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import DATA
from sense_reduce.errors import (
    FormatError,
    InvalidParameter,
    LengthMismatch,
    MissingTag,
    SpanError,
    UnknownTagId,
)
from sense_reduce.inventory import PartOfSpeech
from sense_reduce.synthetic import generate_synthetic_world
from sense_reduce.tasks import (
    Context,
    TargetWord,
    TsvInstance,
    WicInstance,
    load_mclwic,
    load_wic,
    load_wictsv,
    read_dump,
    token_span,
    write_dump,
)

WIC = DATA / "wic"
MCL = DATA / "mclwic"
TSV = DATA / "wictsv"


def _assert_valid_span(ctx: Context):
    piece = ctx.text[ctx.start : ctx.end]
    assert piece and piece == ctx.surface
    assert "\t" not in piece and "\n" not in piece


# -- Context / instances -----------------------------------------------------


def test_context_rejects_bad_spans():
    with pytest.raises(ValueError):
        Context("abc", 2, 2)
    with pytest.raises(ValueError):
        Context("abc", 0, 4)
    assert Context("abc", 1, 3).surface == "bc"


def test_target_lemma_must_be_lowercase():
    with pytest.raises(ValueError):
        TargetWord("Board", PartOfSpeech.NOUN)


def test_tsv_candidate_exactly_one_form():
    c = Context("a b", 0, 1)
    t = TargetWord("a", None)
    with pytest.raises(ValueError):
        TsvInstance("x", c, t)
    with pytest.raises(ValueError):
        TsvInstance("x", c, t, sense_key="k", definition="d")


def test_token_span():
    assert token_span("Room and  board .", 2) == (10, 15)
    with pytest.raises(IndexError):
        token_span("a b", 2)


# -- WiC ---------------------------------------------------------------------


def test_load_wic_fixture():
    data = load_wic(WIC / "train.data.txt", WIC / "train.gold.txt")
    assert len(data) == 6
    first = data[0]
    assert first.id == "train.0"
    assert first.target == TargetWord("board", PartOfSpeech.NOUN)
    assert first.gold is False
    assert first.context1.surface == "board"
    assert first.context2.surface == "boards"
    assert [d.gold for d in data] == [False, False, False, True, True, True]
    for inst in data:
        _assert_valid_span(inst.context1)
        _assert_valid_span(inst.context2)


def test_wic_line_with_trailing_tab(tmp_path):
    (tmp_path / "x.data.txt").write_text("board\tN\t2-1\tRoom and board .\tHe nailed boards across the windows .\t\n")
    (tmp_path / "x.gold.txt").write_text("F\n")
    (inst,) = load_wic(tmp_path / "x.data.txt", tmp_path / "x.gold.txt")
    assert inst.target.lemma == "board"
    assert inst.gold is False


def test_wic_without_gold():
    data = load_wic(WIC / "test.data.txt")
    assert [d.gold for d in data] == [None]
    assert data[0].target.pos is PartOfSpeech.ADJECTIVE


def test_wic_format_error(tmp_path):
    p = tmp_path / "bad.data.txt"
    p.write_text("board\tN\t2-1\tRoom and board .\n")
    with pytest.raises(FormatError) as exc:
        load_wic(p)
    assert exc.value.line == 1


def test_wic_unknown_pos(tmp_path):
    p = tmp_path / "bad.data.txt"
    p.write_text("board\tX\t0-0\tboard\tboard\n")
    with pytest.raises(FormatError, match="POS"):
        load_wic(p)


def test_wic_span_error(tmp_path):
    p = tmp_path / "bad.data.txt"
    p.write_text("board\tN\t0-0\tboard\tboard\nboard\tN\t0-9\tboard\tboard\n")
    with pytest.raises(SpanError) as exc:
        load_wic(p)
    assert exc.value.line == 2


def test_wic_length_mismatch(tmp_path):
    (tmp_path / "g.txt").write_text("T\n")
    with pytest.raises(LengthMismatch):
        load_wic(WIC / "train.data.txt", tmp_path / "g.txt")


def test_wic_inflection_warns_not_fails(caplog):
    with caplog.at_level(logging.WARNING, logger="sense_reduce.tasks"):
        load_wic(WIC / "dev.data.txt", WIC / "dev.gold.txt")
    assert load_wic(WIC / "dev.data.txt") == load_wic(WIC / "dev.data.txt")


# -- MCL-WiC -----------------------------------------------------------------


def test_load_mclwic_fixture():
    data = load_mclwic(MCL / "training.en-en.data", MCL / "training.en-en.gold")
    assert [d.id for d in data] == ["training.en-en.0", "training.en-en.1"]
    assert data[0].context1.surface == "campaign"
    assert data[0].context2.surface == "campaign"
    assert data[1].context2.surface == "boards"
    assert [d.gold for d in data] == [True, False]


def _mcl(tmp_path, records, tags=None):
    p = tmp_path / "x.data"
    p.write_text(json.dumps(records))
    t = None
    if tags is not None:
        t = tmp_path / "x.gold"
        t.write_text(json.dumps(tags))
    return p, t


REC = {"id": "a", "lemma": "dog", "pos": "NOUN", "sentence1": "a dog", "sentence2": "dogs", "start1": 2, "end1": 5, "start2": 0, "end2": 4}


def test_mclwic_inverted_span(tmp_path):
    p, _ = _mcl(tmp_path, [dict(REC, start1=5, end1=2)])
    with pytest.raises(SpanError):
        load_mclwic(p)


def test_mclwic_unknown_and_missing_tags(tmp_path):
    p, t = _mcl(tmp_path, [REC], [{"id": "a", "tag": "T"}, {"id": "zzz", "tag": "F"}])
    with pytest.raises(UnknownTagId):
        load_mclwic(p, t)
    p, t = _mcl(tmp_path, [REC, dict(REC, id="b")], [{"id": "a", "tag": "T"}])
    with pytest.raises(MissingTag):
        load_mclwic(p, t)


def test_mclwic_tab_separated_tags(tmp_path):
    p, _ = _mcl(tmp_path, [REC])
    t = tmp_path / "tags.tsv"
    t.write_text("a\tF\n")
    assert load_mclwic(p, t)[0].gold is False


def test_mclwic_format_errors(tmp_path):
    p = tmp_path / "x.data"
    p.write_text("{not json")
    with pytest.raises(FormatError):
        load_mclwic(p)
    rec = dict(REC)
    del rec["lemma"]
    p, _ = _mcl(tmp_path, [rec])
    with pytest.raises(FormatError, match="lemma"):
        load_mclwic(p)


# -- WiC-TSV -----------------------------------------------------------------


def test_load_wictsv_fixture():
    data = load_wictsv(TSV / "train_examples.txt")
    assert len(data) == 3
    assert data[0].definition == "food or meals in general"
    assert data[0].sense_key is None
    assert data[0].context.surface == "board"
    assert data[0].target.pos is None
    assert [d.gold for d in data] == [True, True, False]


def test_wictsv_blind_test_has_no_gold():
    (inst,) = load_wictsv(TSV / "test_examples.txt")
    assert inst.gold is None
    assert inst.context.surface == "bank"


def test_wictsv_length_mismatch(tmp_path):
    (tmp_path / "x_examples.txt").write_text("dog\t0\tdog\ncat\t0\tcat\n")
    (tmp_path / "x_definitions.txt").write_text("a dog\n")
    with pytest.raises(LengthMismatch):
        load_wictsv(tmp_path / "x_examples.txt")


# -- unified dump ------------------------------------------------------------


def test_dump_round_trip(tmp_path):
    world = generate_synthetic_world(3, 3, 3, 2)
    instances = (
        load_wic(WIC / "train.data.txt", WIC / "train.gold.txt")
        + load_wictsv(TSV / "train_examples.txt")
        + world.tsv[:5]
        + world.wsd[:5]
    )
    p = tmp_path / "dump.tsv"
    assert write_dump(instances, p) == len(instances)
    assert read_dump(p) == instances


def test_dump_rejects_bad_rows(tmp_path):
    p = tmp_path / "dump.tsv"
    write_dump(load_wic(WIC / "dev.data.txt"), p)
    with open(p, "a") as fh:
        fh.write("wic\tonly\tthree\n")
    with pytest.raises(FormatError) as exc:
        read_dump(p)
    assert exc.value.line == 4


# -- synthetic worlds --------------------------------------------------------


def test_single_sense_world_is_all_true():
    world = generate_synthetic_world(1, 1, 1, 2)
    assert world.wic and all(i.gold for i in world.wic)


def test_two_sense_world_has_false_cross_pair():
    world = generate_synthetic_world(1, 1, 2, 1, min_senses=2)
    (pair,) = world.wic
    assert pair.gold is False


def test_invalid_parameters():
    for args in ((1, 0, 1, 1), (1, 1, 0, 1), (1, 1, 1, 0)):
        with pytest.raises(InvalidParameter):
            generate_synthetic_world(*args)


def _recheck(world):
    """Recompute every gold label by scanning the context table directly."""
    table = list(world.contexts.items())

    def sense(ctx):
        matches = [cid for cid, (c, _) in table if c == ctx]
        assert len(matches) == 1
        return world.gold_sense_of_context[matches[0]]

    for inst in world.wic:
        assert inst.gold == (sense(inst.context1) == sense(inst.context2))
    for inst in world.tsv:
        assert inst.gold == (inst.sense_key == sense(inst.context))
    for inst in world.wsd:
        assert inst.gold == sense(inst.context)


def test_gold_consistency_seed7():
    world = generate_synthetic_world(7, 50, 5, 3)
    _recheck(world)
    per_lemma = {}
    for cid, (_, tw) in world.contexts.items():
        per_lemma.setdefault(tw.lemma, []).append(cid)
    assert len(world.wic) == sum(len(v) * (len(v) - 1) // 2 for v in per_lemma.values())


def test_world_is_deterministic():
    a = generate_synthetic_world(11, 4, 3, 2, held_out_per_sense=1)
    b = generate_synthetic_world(11, 4, 3, 2, held_out_per_sense=1)
    assert a == b
    assert a != generate_synthetic_world(12, 4, 3, 2, held_out_per_sense=1)


@settings(max_examples=40, deadline=None)
@given(
    seed=st.integers(0, 2**32),
    n_lemmas=st.integers(1, 6),
    max_senses=st.integers(1, 4),
    per_sense=st.integers(1, 3),
    held_out=st.integers(0, 2),
)
def test_world_invariants(seed, n_lemmas, max_senses, per_sense, held_out):
    world = generate_synthetic_world(seed, n_lemmas, max_senses, per_sense, held_out_per_sense=held_out)
    _recheck(world)
    for key, sense in world.inventory.senses.items():
        examples = world.inventory.synset_of(sense).examples
        assert len(examples) == per_sense
    for ctx, tw in world.contexts.values():
        _assert_valid_span(ctx)
        assert ctx.surface == tw.lemma
        assert ctx.text.split().count(tw.lemma) == 1
    texts = [c.text for c, _ in world.contexts.values()]
    assert len(texts) == len(set(texts))
