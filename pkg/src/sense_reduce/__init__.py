"""Reductions between word sense disambiguation (WSD), target sense
verification (TSV) and word-in-context (WiC) classification, over a WordNet
sense inventory, with dataset loaders and an evaluation harness."""

__version__ = "0.1.0"

from .errors import ReductionError, SenseReduceError
from .evaluation import (
    EvaluationReport,
    accuracy,
    binomial_ci,
    evaluate,
    evaluate_wic,
    expected_accuracy_with_backoff,
)
from .inventory import (
    PartOfSpeech,
    Sense,
    SenseInventory,
    Synset,
    SynsetId,
    examples_of,
    load_inventory,
    senses_of,
)
from .matcher import (
    Abstain,
    ExampleIndex,
    RandomUniform,
    build_example_index,
    match_fraction,
    match_sentence,
    matching_wsd_solver,
    normalize_sentence,
)
from .reductions import (
    GlossExampleProvider,
    make_gold_solvers,
    tsv_via_wic,
    wic_via_wsd,
    wsd_via_tsv,
)
from .synthetic import SyntheticWorld, generate_synthetic_world
from .tasks import (
    Context,
    TargetWord,
    TsvInstance,
    WicInstance,
    WsdInstance,
    load_mclwic,
    load_wic,
    load_wictsv,
)
