"""Official Macro-F1 and the paired-set direction metrics PD, PIR and PPR."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from typing import Literal

import numpy as np

from .corpus import Corpus, CorpusError, DirectedLabel, LabelInventory, PredictionSet
from .transform import PairedCorpus

__all__ = [
    "CoverageError",
    "ConfusionMatrix",
    "RelationScore",
    "RdrReport",
    "MACRO_MODES",
    "confusion",
    "relation_scores",
    "macro_f1",
    "pd",
    "pir",
    "ppr",
    "select_x",
    "evaluate_rdr",
    "format_percent",
    "report_to_json",
    "report_to_table",
]

SetName = Literal["A", "B"]
MACRO_MODES = ("official", "directed")


class CoverageError(CorpusError):
    """Prediction IDs do not match the gold corpus IDs."""

    def __init__(self, missing: list[int], extra: list[int], where: str = ""):
        self.missing = missing
        self.extra = extra
        parts = []
        if missing:
            parts.append(f"missing predictions for IDs {_preview(missing)}")
        if extra:
            parts.append(f"predictions for unknown IDs {_preview(extra)}")
        prefix = f"{where}: " if where else ""
        super().__init__(prefix + "; ".join(parts))


def _preview(ids: list[int], limit: int = 20) -> str:
    shown = " ".join(map(str, ids[:limit]))
    return shown + (f" ... ({len(ids)} total)" if len(ids) > limit else "")


def check_coverage(corpus: Corpus, preds: PredictionSet, where: str = "") -> None:
    gold_ids = set(corpus.ids)
    pred_ids = set(preds.entries)
    if gold_ids != pred_ids:
        raise CoverageError(sorted(gold_ids - pred_ids), sorted(pred_ids - gold_ids), where)
    for sample_id, label in preds.entries.items():
        if label not in corpus.inventory:
            raise CorpusError(f"{where}: prediction {label} for ID {sample_id} not in inventory")


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts indexed by (gold, predicted) inventory position."""

    counts: np.ndarray
    inventory: LabelInventory

    def __add__(self, other: "ConfusionMatrix") -> "ConfusionMatrix":
        if other.inventory != self.inventory:
            raise ValueError("cannot combine matrices over different inventories")
        return ConfusionMatrix(self.counts + other.counts, self.inventory)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def cell(self, gold: DirectedLabel, predicted: DirectedLabel) -> int:
        inv = self.inventory
        return int(self.counts[inv.index(gold), inv.index(predicted)])


def confusion(corpus: Corpus, preds: PredictionSet) -> ConfusionMatrix:
    check_coverage(corpus, preds)
    inv = corpus.inventory
    counts = np.zeros((len(inv), len(inv)), dtype=np.int64)
    for s in corpus:
        counts[inv.index(s.gold), inv.index(preds[s.id])] += 1
    return ConfusionMatrix(counts, inv)


@dataclass(frozen=True)
class RelationScore:
    relation: str
    precision: float
    recall: float
    f1: float
    correct: int
    predicted: int
    actual: int


def _score(relation: str, correct: int, predicted: int, actual: int) -> RelationScore:
    p = correct / predicted if predicted else 0.0
    r = correct / actual if actual else 0.0
    f1 = 2 * p * r / (p + r) if p + r else 0.0
    return RelationScore(relation, p, r, f1, correct, predicted, actual)


def relation_scores(matrix: ConfusionMatrix, mode: str = "official") -> list[RelationScore]:
    """Per-class scores, excluding the undirected label.

    ``official`` pools both directions of each relation type: a hit needs
    type and direction to match, while predicted and actual counts take
    either direction. ``directed`` scores each directed label as its own
    class.
    """
    inv = matrix.inventory
    c = matrix.counts
    if mode == "directed":
        out = []
        for i, lab in enumerate(inv):
            if lab == inv.undirected:
                continue
            out.append(_score(str(lab), int(c[i, i]), int(c[:, i].sum()), int(c[i, :].sum())))
        return out
    if mode != "official":
        raise ValueError(f"unknown macro mode {mode!r}")
    out = []
    for rel in inv.relation_types:
        idx = [i for i, lab in enumerate(inv) if lab.relation_type == rel]
        correct = int(sum(c[i, i] for i in idx))
        predicted = int(c[:, idx].sum())
        actual = int(c[idx, :].sum())
        out.append(_score(rel, correct, predicted, actual))
    return out


def macro_f1(matrix: ConfusionMatrix, mode: str = "official") -> float:
    """Unweighted mean of per-class F1; the undirected label never enters the mean."""
    scores = relation_scores(matrix, mode)
    if not scores:
        return 0.0
    return sum(s.f1 for s in scores) / len(scores)


def pd(perf_a: float, perf_b: float) -> float:
    """Performance difference between the two paired sets."""
    return abs(perf_a - perf_b)


def _check_both(paired: PairedCorpus, preds_a: PredictionSet, preds_b: PredictionSet) -> None:
    check_coverage(paired.original, preds_a, "set A")
    check_coverage(paired.paired, preds_b, "set B")


def _directed_ids(paired: PairedCorpus) -> list[int]:
    undirected = paired.original.inventory.undirected
    return [s.id for s in paired.original if s.gold != undirected]


def pir(paired: PairedCorpus, preds_a: PredictionSet, preds_b: PredictionSet,
        x_choice: SetName) -> float | None:
    """Share of correct predictions on X whose paired prediction is the same label.

    Only samples with a directed gold count. None when nothing on X is correct.
    """
    _check_both(paired, preds_a, preds_b)
    if x_choice == "A":
        gold_x, preds_x = paired.original, preds_a
    elif x_choice == "B":
        gold_x, preds_x = paired.paired, preds_b
    else:
        raise ValueError(f"x_choice must be 'A' or 'B', got {x_choice!r}")
    hits = immobile = 0
    for i in _directed_ids(paired):
        if preds_x[i] == gold_x[i].gold:
            hits += 1
            if preds_a[i] == preds_b[i]:
                immobile += 1
    return immobile / hits if hits else None


def ppr(paired: PairedCorpus, preds_a: PredictionSet, preds_b: PredictionSet) -> float | None:
    """Share of directed-gold pairs predicted correctly in both sets. None when there are none."""
    _check_both(paired, preds_a, preds_b)
    ids = _directed_ids(paired)
    a, b = paired.original, paired.paired
    both = sum(1 for i in ids if preds_a[i] == a[i].gold and preds_b[i] == b[i].gold)
    return both / len(ids) if ids else None


def select_x(f1_a: float, f1_b: float) -> SetName:
    return "A" if f1_a >= f1_b else "B"


@dataclass(frozen=True)
class RdrReport:
    macro_f1_a: float
    macro_f1_b: float
    pd: float
    pir: float | None
    ppr: float | None
    x_set: SetName
    n_non_other: int
    n_samples: int
    per_relation: list[RelationScore]
    macro_mode: str = "official"
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "macro_f1_a": self.macro_f1_a,
            "macro_f1_b": self.macro_f1_b,
            "pd": self.pd,
            "pir": self.pir,
            "ppr": self.ppr,
            "x_set": self.x_set,
            "n_non_other": self.n_non_other,
            "n_samples": self.n_samples,
            "macro_mode": self.macro_mode,
            "warnings": list(self.warnings),
            "per_relation": [
                {
                    "relation": r.relation,
                    "precision": r.precision,
                    "recall": r.recall,
                    "f1": r.f1,
                    "correct": r.correct,
                    "predicted": r.predicted,
                    "actual": r.actual,
                }
                for r in self.per_relation
            ],
        }


def evaluate_rdr(paired: PairedCorpus, preds_a: PredictionSet, preds_b: PredictionSet,
                 macro_mode: str = "official") -> RdrReport:
    _check_both(paired, preds_a, preds_b)
    cm_a = confusion(paired.original, preds_a)
    cm_b = confusion(paired.paired, preds_b)
    f1_a = macro_f1(cm_a, macro_mode)
    f1_b = macro_f1(cm_b, macro_mode)
    x_set = select_x(f1_a, f1_b)
    n_directed = len(_directed_ids(paired))
    warnings = []
    if n_directed == 0:
        warnings.append("no samples with a directed gold label; PIR and PPR are undefined")
    if not paired.order_matches:
        warnings.append("sample order differs between A and B; predictions were joined by ID")
    return RdrReport(
        macro_f1_a=f1_a,
        macro_f1_b=f1_b,
        pd=pd(f1_a, f1_b),
        pir=pir(paired, preds_a, preds_b, x_set),
        ppr=ppr(paired, preds_a, preds_b),
        x_set=x_set,
        n_non_other=n_directed,
        n_samples=len(paired),
        per_relation=relation_scores(cm_a, macro_mode),
        macro_mode=macro_mode,
        warnings=warnings,
    )


def format_percent(value: float | None) -> str:
    """Fraction to a percentage with two decimals, rounding half up; None renders as ``-``."""
    if value is None:
        return "-"
    # repr gives the shortest decimal that round-trips, so 0.12345 stays 0.12345
    pct = Decimal(repr(value)) * 100
    return str(pct.quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


def report_to_json(report: RdrReport) -> str:
    return json.dumps(report.to_dict(), indent=2) + "\n"


def report_to_table(report: RdrReport, name: str | None = None) -> str:
    """Plain-text table with the A, B, PD, PIR, PPR columns, then per-relation scores on A."""
    cols = ["A", "B", "PD", "PIR", "PPR"]
    vals = [format_percent(v) for v in (report.macro_f1_a, report.macro_f1_b, report.pd, report.pir, report.ppr)]
    if name is not None:
        width = max(len(name), len("Method"))
        header = "Method".ljust(width) + "".join(f"{c:>8}" for c in cols)
        row = name.ljust(width) + "".join(f"{v:>8}" for v in vals)
    else:
        header = "".join(f"{c:>8}" for c in cols)
        row = "".join(f"{v:>8}" for v in vals)
    lines = [header, row, ""]
    lines.append(f"X = {report.x_set}; {report.n_non_other} of {report.n_samples} samples have a directed gold; "
                 f"macro mode: {report.macro_mode}")
    for w in report.warnings:
        lines.append(f"warning: {w}")
    lines.append("")
    width = max([len(r.relation) for r in report.per_relation] + [len("Relation")])
    lines.append(f"{'Relation':<{width}}{'P':>8}{'R':>8}{'F1':>8}")
    for r in report.per_relation:
        lines.append(f"{r.relation:<{width}}{format_percent(r.precision):>8}"
                     f"{format_percent(r.recall):>8}{format_percent(r.f1):>8}")
    return "\n".join(lines) + "\n"
