"""Exception hierarchy shared across the package."""

from __future__ import annotations


class SenseReduceError(Exception):
    """Base class for every error raised by sense_reduce."""


# -- inventory ---------------------------------------------------------------


class MissingFile(SenseReduceError, FileNotFoundError):
    def __init__(self, path):
        self.path = str(path)
        super().__init__(f"missing file: {self.path}")


class ParseError(SenseReduceError, ValueError):
    def __init__(self, path, line: int, reason: str):
        self.path = str(path)
        self.line = line
        self.reason = reason
        super().__init__(f"{self.path}:{line}: {reason}")


class DanglingSense(SenseReduceError, ValueError):
    def __init__(self, sense_key: str, synset):
        self.sense_key = sense_key
        self.synset = synset
        super().__init__(f"sense {sense_key} refers to absent synset {synset}")


class UnknownSense(SenseReduceError, KeyError):
    def __init__(self, sense_key: str):
        self.sense_key = sense_key
        super().__init__(sense_key)

    def __str__(self) -> str:
        return f"unknown sense key: {self.sense_key}"


# -- dataset ingestion -------------------------------------------------------


class FormatError(SenseReduceError, ValueError):
    def __init__(self, path, line: int | None, reason: str):
        self.path = str(path)
        self.line = line
        self.reason = reason
        where = f"{self.path}:{line}" if line is not None else self.path
        super().__init__(f"{where}: {reason}")


class SpanError(FormatError):
    pass


class LengthMismatch(SenseReduceError, ValueError):
    def __init__(self, what: str, expected: int, got: int):
        self.expected = expected
        self.got = got
        super().__init__(f"{what}: expected {expected} lines, got {got}")


class UnknownTagId(SenseReduceError, ValueError):
    def __init__(self, instance_id: str):
        self.instance_id = instance_id
        super().__init__(f"tag for unknown instance id {instance_id!r}")


class MissingTag(SenseReduceError, ValueError):
    def __init__(self, instance_id: str):
        self.instance_id = instance_id
        super().__init__(f"no tag for instance id {instance_id!r}")


class InvalidParameter(SenseReduceError, ValueError):
    pass


# -- reductions --------------------------------------------------------------


class ReductionError(SenseReduceError):
    """A reduction could not produce a verdict for one instance.

    ``kind`` is the stable name used in evaluation error counters.
    """

    kind = "ReductionError"


class ZeroTrue(ReductionError):
    kind = "ZeroTrue"

    def __init__(self, instance_id: str):
        self.instance_id = instance_id
        super().__init__(f"{instance_id}: no candidate sense verified")


class MultiTrue(ReductionError):
    kind = "MultiTrue"

    def __init__(self, instance_id: str, sense_keys):
        self.instance_id = instance_id
        self.sense_keys = tuple(sense_keys)
        super().__init__(
            f"{instance_id}: {len(self.sense_keys)} senses verified: "
            + ", ".join(self.sense_keys)
        )


class NoExample(ReductionError):
    kind = "NoExample"

    def __init__(self, sense_key: str):
        self.sense_key = sense_key
        super().__init__(f"no example context for sense {sense_key}")


class AbstainedUpstream(ReductionError):
    kind = "AbstainedUpstream"

    def __init__(self, instance_id: str):
        self.instance_id = instance_id
        super().__init__(f"{instance_id}: wrapped solver abstained")


class UnknownLemma(ReductionError):
    kind = "UnknownLemma"

    def __init__(self, lemma: str, pos):
        self.lemma = lemma
        self.pos = pos
        super().__init__(f"no senses for {lemma!r} ({pos})")


class UnresolvedDefinition(ReductionError):
    kind = "UnresolvedDefinition"

    def __init__(self, instance_id: str, definition: str):
        self.instance_id = instance_id
        self.definition = definition
        super().__init__(f"{instance_id}: definition matches no gloss: {definition!r}")


class UnknownContext(ReductionError):
    kind = "UnknownContext"

    def __init__(self, context):
        self.context = context
        super().__init__(f"context not in world: {context.text!r}")


# -- evaluation --------------------------------------------------------------


class EmptyDataset(SenseReduceError, ValueError):
    pass


class NoScored(SenseReduceError, ValueError):
    pass


class OutOfRange(SenseReduceError, ValueError):
    pass


class InvalidCounts(SenseReduceError, ValueError):
    pass


class MissingGold(SenseReduceError, ValueError):
    pass
