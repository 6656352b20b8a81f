"""``sense-reduce`` command line.

Exit codes: 0 success, 2 bad input or configuration, 3 degenerate evaluation
(every instance abstained). Reports go to stdout (or ``--out``); the banner
echoing the resolved configuration goes to stderr.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Optional, Sequence

from . import __version__
from .errors import NoScored, ReductionError, SenseReduceError
from .evaluation import (
    DEFAULT_Z,
    EvaluationReport,
    Verdict,
    binomial_ci,
    evaluate,
    format_ci,
    predict_verdict,
    write_verdicts,
)
from .inventory import PartOfSpeech, SenseInventory, load_inventory
from .matcher import (
    DEFAULT_NORMALIZATION,
    NORMALIZERS,
    Abstain,
    ExampleIndex,
    RandomUniform,
    build_example_index,
    match_report,
    matching_wsd_solver,
)
from .reductions import (
    ConstantSolver,
    GlossExampleProvider,
    make_gold_solvers,
    tsv_via_wic,
    wic_via_wsd,
    wsd_via_tsv,
)
from .synthetic import SyntheticWorld, generate_synthetic_world
from .tasks import (
    Instance,
    TsvInstance,
    WicInstance,
    WsdInstance,
    load_mclwic,
    load_wic,
    load_wictsv,
    read_dump,
    split_name,
    write_dump,
)

ENV_WORDNET = "SENSE_REDUCE_WORDNET"
FORMATS = ("wic", "mclwic", "wictsv", "dump", "synthetic")


class ConfigError(SenseReduceError, ValueError):
    pass


# -- configuration -----------------------------------------------------------


@dataclass
class RunConfig:
    command: str
    wordnet_dir: Optional[Path] = None
    format: Optional[str] = None
    data: list[Path] = field(default_factory=list)
    gold: list[Path] = field(default_factory=list)
    seed: int = 0
    seeds: Optional[list[int]] = None
    solver: Optional[str] = None
    out: Optional[Path] = None
    json: bool = False
    options: dict[str, Any] = field(default_factory=dict)

    def banner(self) -> str:
        rows = [f"# sense-reduce {__version__} {self.command}"]
        for key in ("wordnet_dir", "format", "data", "gold", "seed", "seeds", "solver", "out", "json"):
            value = getattr(self, key)
            if isinstance(value, list):
                value = ",".join(str(v) for v in value)
            rows.append(f"# {key}={value}")
        for key in sorted(self.options):
            rows.append(f"# {key}={self.options[key]}")
        return "\n".join(rows) + "\n"


def read_config_file(path: str | Path) -> dict[str, str]:
    """``key=value`` lines; ``#`` starts a comment."""
    values: dict[str, str] = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{n}: expected key=value")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def parse_seed_range(text: str) -> list[int]:
    """``"0..19"`` (inclusive), ``"3"``, or a comma list ``"1,4,9"``."""
    text = text.strip()
    try:
        if ".." in text:
            lo, hi = text.split("..")
            seeds = list(range(int(lo), int(hi) + 1))
        else:
            seeds = [int(s) for s in text.split(",")]
    except ValueError:
        raise ConfigError(f"bad seed range {text!r}") from None
    if not seeds:
        raise ConfigError(f"empty seed range {text!r}")
    return seeds


_OPTION_KEYS = ("normalization", "ladder", "task", "synthetic", "world_seed", "z", "method", "verdicts")


def resolve_config(args: argparse.Namespace) -> RunConfig:
    file_values = read_config_file(args.config) if getattr(args, "config", None) else {}

    def pick(name: str, default=None):
        value = getattr(args, name, None)
        if value not in (None, []):
            return value
        return file_values.get(name, default)

    def paths(value) -> list[Path]:
        if value in (None, "", []):
            return []
        if isinstance(value, str):
            value = [v for v in value.split(",") if v.strip()]
        return [Path(v) for v in value]

    wordnet = pick("wordnet") or os.environ.get(ENV_WORDNET)
    seeds = pick("seeds")
    try:
        seed = int(pick("seed", 0))
    except ValueError:
        raise ConfigError("seed must be an integer") from None
    cfg = RunConfig(
        command=args.command,
        wordnet_dir=Path(wordnet) if wordnet else None,
        format=pick("format"),
        data=paths(pick("data")),
        gold=paths(pick("gold")),
        seed=seed,
        seeds=parse_seed_range(seeds) if seeds else None,
        solver=pick("solver"),
        out=Path(pick("out")) if pick("out") else None,
        json=bool(pick("json", False)) and str(pick("json")).lower() not in ("0", "false", "no"),
    )
    for key in _OPTION_KEYS:
        value = pick(key)
        if value is not None:
            cfg.options[key] = value
    if cfg.format is None and "synthetic" in cfg.options:
        cfg.format = "synthetic"
    if cfg.format is not None and cfg.format not in FORMATS:
        raise ConfigError(f"unknown format {cfg.format!r}; expected one of {', '.join(FORMATS)}")
    for p in cfg.data + cfg.gold:
        if not p.exists():
            raise ConfigError(f"no such file: {p}")
    if cfg.gold and len(cfg.gold) != len(cfg.data):
        raise ConfigError("give one --gold per --data, or none")
    return cfg


def _need_wordnet(cfg: RunConfig) -> SenseInventory:
    if cfg.wordnet_dir is None:
        raise ConfigError(f"--wordnet DIR (or ${ENV_WORDNET}) is required")
    return load_inventory(cfg.wordnet_dir)


# -- datasets ----------------------------------------------------------------


def _sibling_gold(data: Path) -> Optional[Path]:
    name = data.name
    for a, b in ((".data.txt", ".gold.txt"), (".data", ".gold")):
        if a in name:
            candidate = data.with_name(name.replace(a, b))
            if candidate.is_file():
                return candidate
    return None


def load_splits(cfg: RunConfig) -> list[tuple[str, list[Instance]]]:
    """(split name, instances) for every ``--data`` path."""
    if cfg.format is None:
        raise ConfigError("--format is required")
    if not cfg.data:
        raise ConfigError("--data is required")
    golds = cfg.gold or [None] * len(cfg.data)
    out = []
    for data, gold in zip(cfg.data, golds):
        if cfg.format == "wic":
            instances = load_wic(data, gold or _sibling_gold(data))
        elif cfg.format == "mclwic":
            instances = load_mclwic(data, gold or _sibling_gold(data))
        elif cfg.format == "wictsv":
            instances = load_wictsv(data, labels_path=gold)
        elif cfg.format == "dump":
            instances = read_dump(data)
        else:
            raise ConfigError(f"format {cfg.format!r} cannot be loaded from files")
        out.append((split_name(data), instances))
    return out


def synthetic_world(cfg: RunConfig) -> SyntheticWorld:
    spec = str(cfg.options.get("synthetic", "10,4,3"))
    try:
        parts = [int(x) for x in spec.split(",")]
        n_lemmas, max_senses, per_sense = parts[:3]
        held_out = parts[3] if len(parts) > 3 else 0
    except ValueError:
        raise ConfigError(f"--synthetic expects LEMMAS,SENSES,EXAMPLES[,HELD_OUT], got {spec!r}") from None
    try:
        world_seed = int(cfg.options.get("world_seed", cfg.seed))
    except ValueError:
        raise ConfigError("world seed must be an integer") from None
    return generate_synthetic_world(
        world_seed, n_lemmas, max_senses, per_sense, held_out_per_sense=held_out
    )


# -- solver specs ------------------------------------------------------------

# adapter name -> (input task, output task)
ADAPTERS = {
    "wic-via-wsd": ("wsd", "wic"),
    "wsd-via-tsv": ("tsv", "wsd"),
    "tsv-via-wic": ("wic", "tsv"),
}
BASES = ("match-backoff", "match-abstain", "gold-oracle", "always-true", "always-false")


@dataclass
class SolverContext:
    inventory: Optional[SenseInventory] = None
    world: Optional[SyntheticWorld] = None
    seed: int = 0
    normalization: str = DEFAULT_NORMALIZATION
    _index: Optional[ExampleIndex] = None

    def need_inventory(self) -> SenseInventory:
        if self.inventory is None:
            raise ConfigError("this solver needs a sense inventory (--wordnet)")
        return self.inventory

    @property
    def index(self) -> ExampleIndex:
        if self._index is None:
            self._index = build_example_index(self.need_inventory(), self.normalization)
        return self._index


def uses_matcher(spec: str) -> bool:
    return any(part.startswith("match-") for part in spec.split(":"))


def build_solver(spec: str, task: str, ctx: SolverContext) -> Callable:
    """Build a solver for ``task`` from a colon-chained spec.

    The rightmost element is a base solver, each element to its left an
    adapter, e.g. ``wic-via-wsd:wsd-via-tsv:tsv-via-wic:gold-oracle``. A
    WSD-producing chain asked to solve WiC is lifted with ``wic-via-wsd``.
    """
    parts = [p.strip() for p in spec.split(":") if p.strip()]
    if not parts:
        raise ConfigError("empty solver spec")
    for p in parts[:-1]:
        if p not in ADAPTERS:
            raise ConfigError(f"unknown adapter {p!r} in solver spec {spec!r}")
    if parts[-1] not in BASES:
        raise ConfigError(f"unknown base solver {parts[-1]!r}; expected one of {', '.join(BASES)}")
    solver, produced = _build(parts, ctx, task)
    if produced == task:
        return solver
    if produced == "wsd" and task == "wic":
        return wic_via_wsd(solver)
    raise ConfigError(f"solver spec {spec!r} produces {produced}, dataset needs {task}")


def _build(parts: list[str], ctx: SolverContext, want: str) -> tuple[Callable, str]:
    head, rest = parts[0], parts[1:]
    if head in ADAPTERS:
        inp, outp = ADAPTERS[head]
        inner, produced = _build(rest, ctx, inp)
        if produced != inp:
            if produced == "wsd" and inp == "wic":
                inner = wic_via_wsd(inner)
            else:
                raise ConfigError(f"{head} needs a {inp} solver, got {produced}")
        if head == "wic-via-wsd":
            return wic_via_wsd(inner), outp
        if head == "wsd-via-tsv":
            return wsd_via_tsv(inner, ctx.need_inventory()), outp
        inv = ctx.need_inventory()
        return tsv_via_wic(inner, GlossExampleProvider(inv), inv), outp
    if head == "match-backoff":
        return matching_wsd_solver(ctx.index, ctx.need_inventory(), RandomUniform(ctx.seed)), "wsd"
    if head == "match-abstain":
        return matching_wsd_solver(ctx.index, ctx.need_inventory(), Abstain()), "wsd"
    if head == "gold-oracle":
        if ctx.world is None:
            raise ConfigError("gold-oracle is only available with --format synthetic")
        wsd, tsv, wic = make_gold_solvers(ctx.world)
        return {"wsd": wsd, "tsv": tsv, "wic": wic}[want], want
    if want == "wsd":
        raise ConfigError(f"{head} cannot solve WSD")
    return ConstantSolver(head == "always-true"), want


def task_of(instances: Sequence[Instance]) -> str:
    kinds = {type(i) for i in instances}
    if len(kinds) != 1:
        raise ConfigError("dataset mixes task types" if kinds else "dataset is empty")
    return {WicInstance: "wic", TsvInstance: "tsv", WsdInstance: "wsd"}[kinds.pop()]


# -- output plumbing ---------------------------------------------------------


class _Output:
    def __init__(self, path: Optional[Path], stdout):
        self.path = path
        self.stdout = stdout
        self.buffer = io.StringIO()

    def write(self, text: str) -> None:
        self.buffer.write(text)

    def close(self) -> None:
        if self.path is None:
            self.stdout.write(self.buffer.getvalue())
        else:
            with open(self.path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(self.buffer.getvalue())


# -- commands ----------------------------------------------------------------


def cmd_inventory_stats(cfg: RunConfig, out: _Output) -> int:
    inv = _need_wordnet(cfg)
    rows: dict[str, list[int]] = {}
    names = {
        PartOfSpeech.NOUN: "noun",
        PartOfSpeech.VERB: "verb",
        PartOfSpeech.ADJECTIVE: "adj",
        PartOfSpeech.ADJECTIVE_SATELLITE: "adj_sat",
        PartOfSpeech.ADVERB: "adv",
    }
    for pos in PartOfSpeech:
        rows[names[pos]] = [0, 0, 0]
    for ss in inv.synsets.values():
        r = rows[names[ss.id.pos]]
        r[0] += 1
        r[2] += len(ss.examples)
    for s in inv.senses.values():
        rows[names[s.pos]][1] += 1
    total = [sum(r[i] for r in rows.values()) for i in range(3)]
    if cfg.json:
        payload = {k: dict(zip(("synsets", "senses", "examples"), v)) for k, v in rows.items()}
        payload["total"] = dict(zip(("synsets", "senses", "examples"), total))
        out.write(json.dumps(payload, indent=2) + "\n")
        return 0
    out.write("pos\tsynsets\tsenses\texamples\n")
    for name, r in rows.items():
        out.write(f"{name}\t{r[0]}\t{r[1]}\t{r[2]}\n")
    out.write(f"total\t{total[0]}\t{total[1]}\t{total[2]}\n")
    return 0


def cmd_convert(cfg: RunConfig, out: _Output, stderr) -> int:
    if cfg.format == "synthetic":
        world = synthetic_world(cfg)
        task = str(cfg.options.get("task", "wic"))
        splits = [("synthetic", {"wic": world.wic, "tsv": world.tsv, "wsd": world.wsd}[task])]
    else:
        splits = load_splits(cfg)
    total = write_dump((inst for _, instances in splits for inst in instances), out)
    for name, instances in splits:
        stderr.write(f"{name}\t{len(instances)}\n")
    stderr.write(f"total\t{total}\n")
    return 0


def cmd_match_stats(cfg: RunConfig, out: _Output) -> int:
    inv = _need_wordnet(cfg)
    if cfg.format not in ("wic", "mclwic", "dump"):
        raise ConfigError("match-stats needs a WiC-style dataset (--format wic|mclwic|dump)")
    splits = load_splits(cfg)
    for name, instances in splits:
        if instances and task_of(instances) != "wic":
            raise ConfigError(f"{name}: match-stats needs WiC instances")
    ladder = _truthy(cfg.options.get("ladder"))
    rungs = list(NORMALIZERS) if ladder else [cfg.options.get("normalization", DEFAULT_NORMALIZATION)]
    for rung in rungs:
        if rung not in NORMALIZERS:
            raise ConfigError(f"unknown normalization {rung!r}")
    results = []
    for rung in rungs:
        idx = build_example_index(inv, rung)
        for name, instances in splits:
            r = match_report(idx, instances)
            results.append((rung, name, r))
    if cfg.json:
        payload = [
            {
                **({"normalization": rung} if ladder else {}),
                "split": name,
                "n": r.n,
                "n_both_matched": r.n_both_matched,
                "fraction": r.fraction,
                "n_ambiguous": r.n_ambiguous,
            }
            for rung, name, r in results
        ]
        out.write(json.dumps(payload, indent=2) + "\n")
        return 0
    head = ("normalization\t" if ladder else "") + "split\tn\tn_both_matched\tfraction\tn_ambiguous\n"
    out.write(head)
    for rung, name, r in results:
        prefix = f"{rung}\t" if ladder else ""
        out.write(f"{prefix}{name}\t{r.n}\t{r.n_both_matched}\t{r.fraction!r}\t{r.n_ambiguous}\n")
    return 0


def _truthy(value) -> bool:
    return value is not None and str(value).lower() not in ("0", "false", "no", "")


def _evaluation_inputs(cfg: RunConfig) -> tuple[list[tuple[str, list[Instance]]], SolverContext]:
    norm = cfg.options.get("normalization", DEFAULT_NORMALIZATION)
    if norm not in NORMALIZERS:
        raise ConfigError(f"unknown normalization {norm!r}")
    if cfg.format == "synthetic":
        world = synthetic_world(cfg)
        task = str(cfg.options.get("task", "wic"))
        if task not in ("wic", "tsv", "wsd"):
            raise ConfigError(f"unknown task {task!r}")
        instances = {"wic": world.wic, "tsv": world.tsv, "wsd": world.wsd}[task]
        return [("synthetic", instances)], SolverContext(world.inventory, world, cfg.seed, norm)
    splits = load_splits(cfg)
    inv = load_inventory(cfg.wordnet_dir) if cfg.wordnet_dir is not None else None
    return splits, SolverContext(inv, None, cfg.seed, norm)


def _run_split(cfg: RunConfig, name: str, instances, ctx: SolverContext, seed: int) -> EvaluationReport:
    ctx.seed = seed
    spec = cfg.solver or ("gold-oracle" if ctx.world is not None else "wic-via-wsd:match-backoff")
    solver = build_solver(spec, task_of(instances), ctx)
    report = evaluate(solver, instances, name, float(cfg.options.get("z", DEFAULT_Z)))
    if uses_matcher(spec) and task_of(instances) == "wic":
        report.with_match_fraction(match_report(ctx.index, instances).fraction)
    return report


def cmd_evaluate(cfg: RunConfig, out: _Output) -> int:
    splits, ctx = _evaluation_inputs(cfg)
    seeds = cfg.seeds or [cfg.seed]
    sweep = cfg.seeds is not None
    all_reports: list[tuple[str, int, EvaluationReport]] = []
    for name, instances in splits:
        for seed in seeds:
            all_reports.append((name, seed, _run_split(cfg, name, instances, ctx, seed)))

    verdict_path = cfg.options.get("verdicts")
    if verdict_path:
        with open(verdict_path, "w", encoding="utf-8", newline="\n") as fh:
            write_verdicts([v for _, _, r in all_reports for v in r.verdicts], fh)

    if not sweep:
        if cfg.json:
            out.write(json.dumps([r.fields() for _, _, r in all_reports], indent=2) + "\n")
        else:
            out.write("\n".join(r.to_text() for _, _, r in all_reports))
        return 0

    summary = []
    for name, _ in splits:
        reports = [r for n, _, r in all_reports if n == name]
        mean = sum(r.accuracy for r in reports) / len(reports)
        summary.append((name, mean, reports))
    if cfg.json:
        payload = [
            {
                "dataset": name,
                "seeds": seeds,
                "mean_accuracy": mean,
                "match_fraction": reports[0].match_fraction,
                "expected_accuracy": reports[0].expected_accuracy,
                "runs": [r.fields() for r in reports],
            }
            for name, mean, reports in summary
        ]
        out.write(json.dumps(payload, indent=2) + "\n")
        return 0
    out.write("dataset\tseed\taccuracy\tcoverage\tmatch_fraction\texpected_accuracy\n")
    for name, seed, r in all_reports:
        out.write(
            f"{name}\t{seed}\t{r.accuracy!r}\t{r.coverage!r}\t"
            f"{_opt(r.match_fraction)}\t{_opt(r.expected_accuracy)}\n"
        )
    for name, mean, reports in summary:
        r0 = reports[0]
        out.write(f"{name}\tmean\t{mean!r}\t-\t{_opt(r0.match_fraction)}\t{_opt(r0.expected_accuracy)}\n")
    return 0


def _opt(x: Optional[float]) -> str:
    return "-" if x is None else repr(x)


def cmd_solve(cfg: RunConfig, out: _Output) -> int:
    """Predict without requiring gold; writes a verdict dump."""
    splits, ctx = _evaluation_inputs(cfg)
    verdicts = []
    for name, instances in splits:
        ctx.seed = cfg.seed
        spec = cfg.solver or ("gold-oracle" if ctx.world is not None else "wic-via-wsd:match-backoff")
        solver = build_solver(spec, task_of(instances), ctx)
        for inst in instances:
            try:
                _, verdict = predict_verdict(solver, inst)
            except ReductionError:
                verdict = Verdict(inst.id, None, inst.gold)
            verdicts.append(verdict)
    write_verdicts(verdicts, out)
    return 0


def cmd_ci(args: argparse.Namespace, out: _Output) -> int:
    est, margin = binomial_ci(args.successes, args.n, args.z, args.method)
    if args.json:
        out.write(json.dumps({"estimate": est, "margin": margin, "z": args.z, "method": args.method}) + "\n")
    else:
        out.write(format_ci(est, margin) + "\n")
    return 0


# -- argument parsing --------------------------------------------------------


def _add_common(p: argparse.ArgumentParser, *, dataset: bool = True, solver: bool = False) -> None:
    p.add_argument("--config", help="key=value file; flags override it")
    p.add_argument("--wordnet", help=f"WordNet 3.0 dict directory (default: ${ENV_WORDNET})")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--json", action="store_true", default=None, help="JSON output")
    if dataset:
        p.add_argument("--format", choices=FORMATS)
        p.add_argument("--data", nargs="+", action="extend", default=[], help="dataset file(s), one per split")
        p.add_argument("--gold", nargs="+", action="extend", default=[], help="gold file(s) aligned with --data")
        p.add_argument("--synthetic", help="synthetic world size LEMMAS,SENSES,EXAMPLES[,HELD_OUT]")
        p.add_argument("--task", choices=("wic", "tsv", "wsd"), help="task drawn from a synthetic world")
        p.add_argument("--world-seed", type=int, help="seed of the synthetic world (default: --seed)")
        p.add_argument("--seed", type=int, help="random seed (default 0)")
        p.add_argument("--normalization", choices=tuple(NORMALIZERS), help="sentence matching key")
    if solver:
        p.add_argument("--solver", help="colon-chained solver spec, e.g. wic-via-wsd:match-backoff")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sense-reduce", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("inventory-stats", help="synset/sense/example counts per POS")
    _add_common(p, dataset=False)

    p = sub.add_parser("convert", help="write datasets as a unified instance dump")
    _add_common(p)

    p = sub.add_parser("match-stats", help="fractions of WiC pairs whose sentences are gloss examples")
    _add_common(p)
    p.add_argument("--ladder", action="store_true", default=None, help="report every normalization rung")

    p = sub.add_parser("evaluate", help="accuracy of a solver chain on labelled data")
    _add_common(p, solver=True)
    p.add_argument("--seeds", help="seed sweep, e.g. 0..19")
    p.add_argument("--z", type=float, help="z for the accuracy interval (default 1.96)")
    p.add_argument("--verdicts", help="also write the per-instance verdict dump here")

    p = sub.add_parser("solve", help="per-instance predictions as a verdict dump")
    _add_common(p, solver=True)

    p = sub.add_parser("ci", help="binomial confidence interval")
    p.add_argument("successes", type=int)
    p.add_argument("n", type=int)
    p.add_argument("--z", type=float, default=DEFAULT_Z)
    p.add_argument("--method", choices=("wald", "wilson"), default="wald")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out")
    return parser


def main(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        if args.command == "ci":
            out = _Output(Path(args.out) if args.out else None, stdout)
            code = cmd_ci(args, out)
            out.close()
            return code
        cfg = resolve_config(args)
        stderr.write(cfg.banner())
        out = _Output(cfg.out, stdout)
        if args.command == "inventory-stats":
            code = cmd_inventory_stats(cfg, out)
        elif args.command == "convert":
            code = cmd_convert(cfg, out, stderr)
        elif args.command == "match-stats":
            code = cmd_match_stats(cfg, out)
        elif args.command == "evaluate":
            code = cmd_evaluate(cfg, out)
        else:
            code = cmd_solve(cfg, out)
        out.close()
        return code
    except NoScored as exc:
        stderr.write(f"error: {exc}\n")
        return 3
    except (SenseReduceError, OSError, ValueError) as exc:
        stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
