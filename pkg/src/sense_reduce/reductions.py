"""Solver adapters turning a solver for one task into a solver for another.

* :func:`wic_via_wsd` -- disambiguate both contexts, compare the senses.
* :func:`wsd_via_tsv` -- verify every candidate sense, return the unique hit.
* :func:`tsv_via_wic` -- pair the context with an example of the candidate
  sense and ask whether the target means the same thing in both.

Adapters add no randomness of their own. Failures the reductions cannot
recover from (abstentions, zero or several verified senses, senses without
examples) are raised as :class:`~sense_reduce.errors.ReductionError`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Optional

from .errors import (
    AbstainedUpstream,
    MultiTrue,
    NoExample,
    UnknownLemma,
    UnresolvedDefinition,
    ZeroTrue,
)
from .inventory import Sense, SenseInventory, senses_of
from .synthetic import SyntheticWorld
from .tasks import (
    Context,
    TsvInstance,
    TsvSolver,
    WicInstance,
    WicSolver,
    WsdInstance,
    WsdSolver,
)

ExampleProvider = Callable[[Sense], Optional[Context]]


def _inflections(lemma: str) -> list[str]:
    base = lemma.replace("_", " ")
    forms = {base, base + "s", base + "es", base + "ed", base + "ing"}
    if base.endswith("e"):
        forms |= {base + "d", base[:-1] + "ing"}
    return sorted(forms, key=len, reverse=True)


def locate_target(text: str, lemma: str) -> tuple[int, int] | None:
    """First case-insensitive whole-word match of the lemma or a naive inflection."""
    alternatives = "|".join(re.escape(f) for f in _inflections(lemma))
    m = re.search(rf"(?<!\w)(?:{alternatives})(?!\w)", text, flags=re.IGNORECASE)
    return (m.start(), m.end()) if m else None


class GlossExampleProvider:
    """Example context for a sense: the first gloss example of its synset in
    which the sense's lemma can be located."""

    def __init__(self, inventory: SenseInventory):
        self.inventory = inventory

    def __call__(self, sense: Sense) -> Context | None:
        for text in self.inventory.synsets[sense.synset].examples:
            span = locate_target(text, sense.lemma)
            if span is not None:
                return Context(text, *span)
        return None


def _normalize_gloss(text: str) -> str:
    return " ".join(text.lower().split()).rstrip(" .;")


def resolve_definition(inv: SenseInventory, inst: TsvInstance) -> Sense:
    """Sense of the target whose gloss equals the free-text definition."""
    wanted = _normalize_gloss(inst.definition or "")
    hits = [
        s
        for s in senses_of(inv, inst.target.lemma, inst.target.pos)
        if _normalize_gloss(inv.synsets[s.synset].gloss) == wanted
    ]
    if len(hits) != 1:
        raise UnresolvedDefinition(inst.id, inst.definition or "")
    return hits[0]


@dataclass(frozen=True)
class WicTrace:
    prediction: Optional[bool]
    sense1: Optional[str]
    sense2: Optional[str]
    matched1: Optional[bool] = None
    matched2: Optional[bool] = None


class WicViaWsd:
    def __init__(self, wsd: WsdSolver):
        self.wsd = wsd

    def _side(self, inst: WicInstance, n: int) -> tuple[Optional[str], Optional[bool]]:
        context = inst.context1 if n == 1 else inst.context2
        query = WsdInstance(f"{inst.id}#{n}", context, inst.target)
        explain = getattr(self.wsd, "explain", None)
        if explain is not None:
            return explain(query)
        return self.wsd(query), None

    def trace(self, inst: WicInstance) -> WicTrace:
        """Both sides' senses and match flags; prediction None on abstention."""
        s1, m1 = self._side(inst, 1)
        s2, m2 = self._side(inst, 2)
        pred = None if s1 is None or s2 is None else s1 == s2
        return WicTrace(pred, s1, s2, m1, m2)

    def __call__(self, inst: WicInstance) -> bool:
        t = self.trace(inst)
        if t.prediction is None:
            raise AbstainedUpstream(inst.id)
        return t.prediction

    def __repr__(self) -> str:
        return f"wic_via_wsd({self.wsd!r})"


class WsdViaTsv:
    def __init__(self, tsv: TsvSolver, inventory: SenseInventory):
        self.tsv = tsv
        self.inventory = inventory

    def candidates(self, inst: WsdInstance) -> list[TsvInstance]:
        return [
            TsvInstance(f"{inst.id}@{s.sense_key}", inst.context, inst.target, sense_key=s.sense_key)
            for s in senses_of(self.inventory, inst.target.lemma, inst.target.pos)
        ]

    def __call__(self, inst: WsdInstance) -> str:
        queries = self.candidates(inst)
        if not queries:
            raise UnknownLemma(inst.target.lemma, inst.target.pos)
        # exhaustive on purpose: several hits must be reported, not hidden
        verified = [q.sense_key for q in queries if self.tsv(q)]
        if not verified:
            raise ZeroTrue(inst.id)
        if len(verified) > 1:
            raise MultiTrue(inst.id, verified)
        return verified[0]

    def __repr__(self) -> str:
        return f"wsd_via_tsv({self.tsv!r})"


class TsvViaWic:
    def __init__(self, wic: WicSolver, examples: ExampleProvider, inventory: SenseInventory):
        self.wic = wic
        self.examples = examples
        self.inventory = inventory

    def candidate_sense(self, inst: TsvInstance) -> Sense:
        if inst.sense_key is not None:
            return self.inventory.sense(inst.sense_key)
        return resolve_definition(self.inventory, inst)

    def __call__(self, inst: TsvInstance) -> bool:
        sense = self.candidate_sense(inst)
        example = self.examples(sense)
        if example is None:
            raise NoExample(sense.sense_key)
        return self.wic(WicInstance(f"{inst.id}~{sense.sense_key}", inst.context, example, inst.target))

    def __repr__(self) -> str:
        return f"tsv_via_wic({self.wic!r})"


def wic_via_wsd(wsd: WsdSolver) -> WicViaWsd:
    return WicViaWsd(wsd)


def wsd_via_tsv(tsv: TsvSolver, inv: SenseInventory) -> WsdViaTsv:
    return WsdViaTsv(tsv, inv)


def tsv_via_wic(
    wic: WicSolver,
    examples: ExampleProvider,
    inv: SenseInventory | None = None,
) -> TsvViaWic:
    """``inv`` defaults to the provider's own inventory when it has one."""
    if inv is None:
        inv = getattr(examples, "inventory", None)
        if inv is None:
            raise TypeError("tsv_via_wic needs an inventory to resolve candidate senses")
    return TsvViaWic(wic, examples, inv)


# -- gold oracles ------------------------------------------------------------


class _GoldWsd:
    def __init__(self, world: SyntheticWorld):
        self.world = world

    def __call__(self, inst: WsdInstance) -> str:
        return self.world.sense_of(inst.context)

    def __repr__(self) -> str:
        return "gold_wsd"


class _GoldTsv:
    def __init__(self, world: SyntheticWorld):
        self.world = world

    def __call__(self, inst: TsvInstance) -> bool:
        key = inst.sense_key
        if key is None:
            key = resolve_definition(self.world.inventory, inst).sense_key
        return self.world.sense_of(inst.context) == key

    def __repr__(self) -> str:
        return "gold_tsv"


class _GoldWic:
    def __init__(self, world: SyntheticWorld):
        self.world = world

    def __call__(self, inst: WicInstance) -> bool:
        return self.world.sense_of(inst.context1) == self.world.sense_of(inst.context2)

    def __repr__(self) -> str:
        return "gold_wic"


def make_gold_solvers(world: SyntheticWorld) -> tuple[WsdSolver, TsvSolver, WicSolver]:
    """Oracles answering from the world's recorded senses; they never abstain
    and raise UnknownContext for contexts from elsewhere."""
    return _GoldWsd(world), _GoldTsv(world), _GoldWic(world)


class ConstantSolver:
    """Boolean solver with a fixed verdict (a baseline for WiC and TSV)."""

    def __init__(self, verdict: bool):
        self.verdict = verdict

    def __call__(self, inst) -> bool:
        return self.verdict

    def __repr__(self) -> str:
        return f"constant({self.verdict})"
