"""Relation Direction Recognition tooling: paired test sets and direction-aware scoring."""

from .corpus import (
    Corpus,
    DirectedLabel,
    Direction,
    LabelInventory,
    PredictionSet,
    Sample,
    invert_label,
    load_corpus,
    load_predictions,
    parse_corpus,
    parse_predictions,
    semeval_inventory,
    serialize_corpus,
    serialize_predictions,
)
from .metrics import RdrReport, evaluate_rdr, macro_f1, pd, pir, ppr
from .transform import PairedCorpus, binarize, merge_paired, pair_corpus, pair_sample

__version__ = "0.1.0"
