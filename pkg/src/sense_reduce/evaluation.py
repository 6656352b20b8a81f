"""Accuracy, expected back-off accuracy, binomial intervals, and reports."""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path
from typing import Any, Optional, Sequence

from .errors import InvalidCounts, LengthMismatch, MissingGold, NoScored, OutOfRange, ReductionError

DEFAULT_Z = 1.96


def accuracy(predictions: Sequence[Any], gold: Sequence[Any]) -> tuple[float, float]:
    """(accuracy over non-abstained items, coverage); ``None`` means abstain."""
    if len(predictions) != len(gold):
        raise LengthMismatch("predictions vs gold", len(gold), len(predictions))
    if any(g is None for g in gold):
        raise MissingGold("gold labels incomplete")
    scored = [(p, g) for p, g in zip(predictions, gold) if p is not None]
    if not scored:
        raise NoScored("every prediction abstained")
    correct = sum(p == g for p, g in scored)
    return correct / len(scored), len(scored) / len(gold)


def expected_accuracy_with_backoff(p_match: float) -> float:
    """Accuracy when matched instances are always right and the rest are a
    fair coin flip."""
    if not 0.0 <= p_match <= 1.0:
        raise OutOfRange(f"match fraction {p_match} outside [0, 1]")
    return p_match + (1 - p_match) / 2


def binomial_ci(successes: int, n: int, z: float = DEFAULT_Z, method: str = "wald") -> tuple[float, float]:
    """(estimate, margin) of a binomial proportion.

    ``wald`` is the normal approximation p +- z*sqrt(p(1-p)/n). ``wilson``
    returns the Wilson score interval's centre and half-width, which behaves
    better for small n or p near 0/1.
    """
    if n < 1 or not 0 <= successes <= n:
        raise InvalidCounts(f"need 0 <= successes <= n and n >= 1, got {successes}/{n}")
    if z <= 0:
        raise InvalidCounts(f"z must be positive, got {z}")
    p = successes / n
    if method == "wald":
        return p, z * math.sqrt(p * (1 - p) / n)
    if method == "wilson":
        denom = 1 + z * z / n
        centre = (p + z * z / (2 * n)) / denom
        half = z / denom * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n))
        return centre, half
    raise ValueError(f"unknown interval method {method!r}")


def round_half_away(x: float, digits: int = 3) -> str:
    """Fixed-point display with ties rounded away from zero."""
    q = Decimal(1).scaleb(-digits)
    return str(Decimal(repr(x)).quantize(q, rounding=ROUND_HALF_UP))


def format_ci(estimate: float, margin: float, digits: int = 3) -> str:
    return f"{round_half_away(estimate, digits)} ± {round_half_away(margin, digits)}"


# -- reports -----------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    id: str
    prediction: Any
    gold: Any
    matched1: Optional[bool] = None
    matched2: Optional[bool] = None
    sense1: Optional[str] = None
    sense2: Optional[str] = None


@dataclass
class EvaluationReport:
    dataset: str
    n: int
    n_scored: int
    accuracy: float
    coverage: float
    match_fraction: Optional[float] = None
    expected_accuracy: Optional[float] = None
    ci_estimate: Optional[float] = None
    ci_margin: Optional[float] = None
    errors: dict[str, int] = field(default_factory=dict)
    verdicts: tuple[Verdict, ...] = field(default=(), repr=False)

    def with_match_fraction(self, fraction: float) -> EvaluationReport:
        self.match_fraction = fraction
        self.expected_accuracy = expected_accuracy_with_backoff(fraction)
        return self

    def fields(self) -> dict[str, Any]:
        return {
            "dataset": self.dataset,
            "n": self.n,
            "n_scored": self.n_scored,
            "accuracy": self.accuracy,
            "coverage": self.coverage,
            "match_fraction": self.match_fraction,
            "expected_accuracy": self.expected_accuracy,
            "ci_estimate": self.ci_estimate,
            "ci_margin": self.ci_margin,
            "errors": dict(sorted(self.errors.items())),
        }

    def to_text(self) -> str:
        lines = []
        for key, value in self.fields().items():
            if key == "errors":
                lines.extend(f"errors.{k}\t{v}" for k, v in value.items())
            else:
                lines.append(f"{key}\t{_fmt(value)}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps(self.fields(), indent=2, sort_keys=False) + "\n"


def _fmt(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def parse_report_text(text: str) -> dict[str, Any]:
    """Inverse of :meth:`EvaluationReport.to_text` (numbers parsed back)."""
    out: dict[str, Any] = {"errors": {}}
    for line in text.splitlines():
        if not line.strip():
            continue
        key, _, value = line.partition("\t")
        if key.startswith("errors."):
            out["errors"][key[len("errors."):]] = int(value)
        elif value == "-":
            out[key] = None
        elif key == "dataset":
            out[key] = value
        elif key in ("n", "n_scored"):
            out[key] = int(value)
        else:
            out[key] = float(value)
    return out


def predict_verdict(solver, inst) -> tuple[Any, Verdict]:
    trace = getattr(solver, "trace", None)
    if trace is not None:
        t = trace(inst)
        return t.prediction, Verdict(inst.id, t.prediction, inst.gold, t.matched1, t.matched2, t.sense1, t.sense2)
    pred = solver(inst)
    return pred, Verdict(inst.id, pred, inst.gold)


def evaluate(solver, dataset: Sequence[Any], dataset_id: str = "dataset", z: float = DEFAULT_Z) -> EvaluationReport:
    """Run ``solver`` over labelled instances of any task.

    Reduction failures are counted per kind and treated as abstentions, as
    are ``None`` predictions. The report carries one verdict per instance.
    """
    errors: Counter[str] = Counter()
    verdicts = []
    for inst in dataset:
        if inst.gold is None:
            raise MissingGold(f"instance {inst.id} has no gold label")
        try:
            pred, verdict = predict_verdict(solver, inst)
        except ReductionError as exc:
            errors[exc.kind] += 1
            pred, verdict = None, Verdict(inst.id, None, inst.gold)
        else:
            if pred is None:
                # traced WiC-via-WSD solvers abstain because a side abstained
                kind = "AbstainedUpstream" if hasattr(solver, "trace") else "Abstain"
                errors[kind] += 1
        verdicts.append(verdict)
    preds = [v.prediction for v in verdicts]
    acc, coverage = accuracy(preds, [v.gold for v in verdicts])
    n_scored = sum(p is not None for p in preds)
    correct = sum(v.prediction == v.gold for v in verdicts if v.prediction is not None)
    est, margin = binomial_ci(correct, n_scored, z)
    return EvaluationReport(
        dataset=dataset_id,
        n=len(verdicts),
        n_scored=n_scored,
        accuracy=acc,
        coverage=coverage,
        ci_estimate=est,
        ci_margin=margin,
        errors=dict(errors),
        verdicts=tuple(verdicts),
    )


def evaluate_wic(solver, dataset: Sequence[Any], dataset_id: str = "wic") -> EvaluationReport:
    return evaluate(solver, dataset, dataset_id)


# -- verdict dumps -----------------------------------------------------------

VERDICT_COLUMNS = ("id", "prediction", "gold", "matched1", "matched2", "sense1", "sense2")


def _cell(value: Any) -> str:
    if value is None:
        return "-"
    if value is True:
        return "T"
    if value is False:
        return "F"
    return str(value)


def _uncell(value: str) -> Any:
    return {"-": None, "T": True, "F": False}.get(value, value)


def write_verdicts(verdicts: Sequence[Verdict], fh) -> None:
    """One tab-separated line per instance, sorted by id."""
    fh.write("\t".join(VERDICT_COLUMNS) + "\n")
    for v in sorted(verdicts, key=lambda v: v.id):
        fh.write("\t".join(_cell(getattr(v, c)) for c in VERDICT_COLUMNS) + "\n")


def read_verdicts(path: str | Path) -> list[Verdict]:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").split("\t")
        if tuple(header) != VERDICT_COLUMNS:
            raise ValueError(f"{path}: not a verdict dump")
        return [Verdict(*(_uncell(c) for c in line.rstrip("\n").split("\t"))) for line in fh if line.strip()]
