"""Reference predictors for exercising the scoring pipeline.

None of these are meant to be competitive. The oracles pin the metrics at
their extreme points, the majority predictor is the usual floor, and the
averaged perceptron gives a small learned model whose only access to
relation direction is an explicit marker-order feature.
"""

from __future__ import annotations

import enum
import re
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping, TextIO

from .corpus import (
    Corpus,
    CorpusError,
    DirectedLabel,
    Direction,
    LabelInventory,
    ParseError,
    PredictionSet,
    Sample,
    Source,
    _lines,
    parse_label,
)
from .rng import SplitMix64

__all__ = [
    "OracleMode",
    "OracleConfig",
    "oracle_predict",
    "majority_predict",
    "FeatureSpec",
    "extract_features",
    "PerceptronModel",
    "perceptron_train",
    "perceptron_predict",
    "save_model",
    "load_model",
    "argmax_select",
]


class OracleMode(enum.Enum):
    DIRECTION_AWARE = "aware"
    DIRECTION_BLIND = "blind"


@dataclass(frozen=True)
class OracleConfig:
    mode: OracleMode = OracleMode.DIRECTION_AWARE
    # direction every directed label is collapsed onto in blind mode
    representative: Direction = Direction.E1_TO_E2

    def canonicalize(self, label: DirectedLabel) -> DirectedLabel:
        if not label.is_directed:
            return label
        return DirectedLabel(label.relation_type, self.representative)


def oracle_predict(corpus: Corpus, gold_source: Corpus, config: OracleConfig = OracleConfig()) -> PredictionSet:
    """Predictions read off the gold labels.

    Aware mode returns each sample's own gold. Blind mode returns the
    ``gold_source`` (set A) label collapsed onto one direction, so a sample
    and its pair always receive the same prediction.
    """
    if config.mode is OracleMode.DIRECTION_BLIND and config.representative is Direction.NONE:
        raise ValueError("blind oracle needs a directed representative")
    unknown = [s.id for s in corpus if s.id not in gold_source]
    if unknown:
        raise CorpusError(f"IDs not in the gold source: {unknown[:20]}")
    entries = {}
    for s in corpus:
        if config.mode is OracleMode.DIRECTION_AWARE:
            entries[s.id] = s.gold
        else:
            entries[s.id] = config.canonicalize(gold_source[s.id].gold)
    return PredictionSet(entries, corpus.origin)


def majority_predict(train: Corpus, test: Corpus) -> PredictionSet:
    if len(train) == 0:
        raise CorpusError("majority baseline needs a non-empty training corpus")
    counts = Counter(s.gold for s in train)
    inv = train.inventory
    best = max(counts, key=lambda lab: (counts[lab], -inv.index(lab)))
    return PredictionSet({s.id: best for s in test}, test.origin)


_TOKEN_RE = re.compile(r"\w+")


@dataclass(frozen=True)
class FeatureSpec:
    """Which feature templates the perceptron sees.

    Position buckets are measured from the left and right entity mentions
    in surface order, so they do not change when markers are swapped.
    ``marker_order`` (is e1 before e2?) is the only template that does.
    """

    unigrams: bool = True
    positions: bool = True
    marker_order: bool = True
    window: int = 3

    def to_text(self) -> str:
        return (f"unigrams={int(self.unigrams)}\tpositions={int(self.positions)}\t"
                f"marker_order={int(self.marker_order)}\twindow={self.window}")

    @classmethod
    def from_text(cls, text: str) -> "FeatureSpec":
        kv = dict(part.split("=", 1) for part in text.split("\t") if part)
        return cls(
            unigrams=kv.get("unigrams", "1") == "1",
            positions=kv.get("positions", "1") == "1",
            marker_order=kv.get("marker_order", "1") == "1",
            window=int(kv.get("window", "3")),
        )


def _bucket(offset: int, window: int) -> str:
    return str(offset) if -window <= offset <= window else "far"


def extract_features(sample: Sample, spec: FeatureSpec) -> list[str]:
    """Feature strings for one sample, deduplicated, in first-seen order."""
    text = sample.text
    left, right = sorted((sample.e1_span, sample.e2_span))
    tokens = [(m.group(0).lower(), m.start(), m.end()) for m in _TOKEN_RE.finditer(text)]
    feats: dict[str, None] = {}
    if spec.unigrams:
        for tok, _, _ in tokens:
            feats.setdefault(f"w={tok}", None)
    if spec.positions:
        for anchor, (start, end) in (("L", left), ("R", right)):
            first = next((k for k, (_, s, e) in enumerate(tokens) if e > start), len(tokens))
            last = max((k for k, (_, s, e) in enumerate(tokens) if s < end), default=first - 1)
            for k, (tok, _, _) in enumerate(tokens):
                if k < first:
                    offset = k - first
                elif k > last:
                    offset = k - last
                else:
                    offset = 0
                feats.setdefault(f"{anchor}{_bucket(offset, spec.window)}={tok}", None)
    if spec.marker_order:
        feats.setdefault("order=e1e2" if sample.e1_first else "order=e2e1", None)
    return list(feats)


@dataclass
class PerceptronModel:
    """Averaged multiclass perceptron weights keyed by (feature, label)."""

    weights: dict[tuple[str, str], float]
    inventory: LabelInventory
    spec: FeatureSpec = field(default_factory=FeatureSpec)
    epochs: int = 1
    seed: int = 0

    def scores(self, features: Iterable[str]) -> dict[DirectedLabel, float]:
        totals = {lab: 0.0 for lab in self.inventory}
        by_name = {str(lab): lab for lab in self.inventory}
        for f in features:
            for name, lab in by_name.items():
                w = self.weights.get((f, name))
                if w:
                    totals[lab] += w
        return totals


def _best(inventory: LabelInventory, totals: Mapping[str, float]) -> str:
    best_name, best_score = None, None
    for lab in inventory:
        name = str(lab)
        score = totals.get(name, 0.0)
        if best_score is None or score > best_score:
            best_name, best_score = name, score
    return best_name


def perceptron_train(train: Corpus, spec: FeatureSpec = FeatureSpec(), epochs: int = 5,
                     seed: int = 0) -> PerceptronModel:
    """Averaged perceptron with a seeded shuffle of the training order each epoch."""
    if epochs < 1:
        raise ValueError("epochs must be at least 1")
    if len(train) == 0:
        raise CorpusError("cannot train on an empty corpus")
    inv = train.inventory
    data = [(extract_features(s, spec), str(s.gold)) for s in train]
    # feature -> label -> weight, plus running totals for averaging
    weights: dict[str, dict[str, float]] = defaultdict(dict)
    totals: dict[tuple[str, str], float] = defaultdict(float)
    stamps: dict[tuple[str, str], int] = defaultdict(int)
    step = 0
    rng = SplitMix64(seed)
    order = list(range(len(data)))

    def bump(f: str, label: str, delta: float) -> None:
        key = (f, label)
        w = weights[f].get(label, 0.0)
        totals[key] += (step - stamps[key]) * w
        stamps[key] = step
        weights[f][label] = w + delta

    for _ in range(epochs):
        rng.shuffle(order)
        for i in order:
            feats, gold = data[i]
            step += 1
            scores: dict[str, float] = defaultdict(float)
            for f in feats:
                for label, w in weights.get(f, {}).items():
                    scores[label] += w
            guess = _best(inv, scores)
            if guess != gold:
                for f in feats:
                    bump(f, gold, 1.0)
                    bump(f, guess, -1.0)

    averaged = {}
    for f, row in weights.items():
        for label, w in row.items():
            key = (f, label)
            total = totals[key] + (step - stamps[key]) * w
            avg = total / step
            if avg:
                averaged[key] = avg
    return PerceptronModel(averaged, inv, spec, epochs, seed)


def perceptron_predict(model: PerceptronModel, corpus: Corpus) -> PredictionSet:
    entries = {}
    for s in corpus:
        totals = {str(lab): score for lab, score in model.scores(extract_features(s, model.spec)).items()}
        entries[s.id] = corpus.inventory.parse(_best(model.inventory, totals))
    return PredictionSet(entries, corpus.origin)


MODEL_HEADER = "#rdrkit-perceptron\t1"


def save_model(model: PerceptronModel, fp: TextIO) -> None:
    """Write the flat text format.

    Header lines start with ``#`` (format tag, feature spec, epochs, seed,
    label order, undirected label); every other line is
    ``feature<TAB>label<TAB>weight`` with the weight in shortest
    round-trip form.
    """
    fp.write(MODEL_HEADER + "\n")
    fp.write(f"#spec\t{model.spec.to_text()}\n")
    fp.write(f"#epochs\t{model.epochs}\n")
    fp.write(f"#seed\t{model.seed}\n")
    fp.write("#labels\t" + "\t".join(str(lab) for lab in model.inventory) + "\n")
    fp.write(f"#undirected\t{model.inventory.undirected}\n")
    for (f, label), w in model.weights.items():
        fp.write(f"{f}\t{label}\t{w!r}\n")


def load_model(source: Source) -> PerceptronModel:
    header: dict[str, str] = {}
    weights: dict[tuple[str, str], float] = {}
    for lineno, line in enumerate(_lines(source), start=1):
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line[1:].partition("\t")
            header[key] = value
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ParseError("expected 'feature<TAB>label<TAB>weight'", lineno)
        try:
            weights[(parts[0], parts[1])] = float(parts[2])
        except ValueError:
            raise ParseError(f"bad weight {parts[2]!r}", lineno) from None
    if "rdrkit-perceptron" not in header:
        raise ParseError("not a perceptron model file")
    try:
        labels = tuple(parse_label(t) for t in header["labels"].split("\t"))
        undirected = parse_label(header["undirected"])
        inventory = LabelInventory(labels, undirected)
    except (KeyError, ValueError) as exc:
        raise ParseError(f"bad model header: {exc}") from None
    return PerceptronModel(
        weights=weights,
        inventory=inventory,
        spec=FeatureSpec.from_text(header.get("spec", "")),
        epochs=int(header.get("epochs", "1")),
        seed=int(header.get("seed", "0")),
    )


def argmax_select(scores: Mapping[DirectedLabel, float],
                  inventory: LabelInventory | None = None) -> DirectedLabel:
    """Label with the highest probability, ties going to the earliest label.

    "Earliest" means inventory order when an inventory is given, otherwise
    the iteration order of ``scores``.
    """
    if not scores:
        raise ValueError("argmax over an empty score table")
    if inventory is not None:
        order = [lab for lab in inventory if lab in scores]
        if len(order) != len(scores):
            raise CorpusError("score table holds labels outside the inventory")
    else:
        order = list(scores)
    best = order[0]
    for lab in order[1:]:
        if scores[lab] > scores[best]:
            best = lab
    return best
