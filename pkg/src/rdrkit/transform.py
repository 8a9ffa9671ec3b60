"""Paired, merged and binarized corpora derived from a source corpus."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable

from .corpus import (
    CorpusError,
    Corpus,
    DirectedLabel,
    LabelInventory,
    ParseError,
    Sample,
    Source,
    _blocks,
    _parse_sentence_line,
    invert_label,
)
from .rng import SplitMix64

__all__ = [
    "PairingError",
    "PairedCorpus",
    "BinarySample",
    "pair_sample",
    "pair_corpus",
    "merge_paired",
    "binarize",
    "serialize_binary",
    "parse_binary",
]

logger = logging.getLogger(__name__)


class PairingError(CorpusError):
    """Two corpora were supplied as paired sets but are not."""


def pair_sample(sample: Sample) -> Sample:
    """Exchange the e1/e2 marker names in place and invert the gold label."""
    return Sample(
        id=sample.id,
        text=sample.text,
        e1_span=sample.e2_span,
        e2_span=sample.e1_span,
        gold=invert_label(sample.gold),
        comment=sample.comment,
    )


def _is_pair(a: Sample, b: Sample) -> bool:
    return (
        a.text == b.text
        and a.e1_span == b.e2_span
        and a.e2_span == b.e1_span
        and b.gold == invert_label(a.gold)
    )


@dataclass(frozen=True)
class PairedCorpus:
    """Set A and its paired set B, aligned by sample ID.

    Construction checks that B is exactly the marker-swapped image of A.
    A differing sample order is tolerated (and logged), since everything
    downstream joins on ID.
    """

    original: Corpus
    paired: Corpus
    order_matches: bool = field(init=False, compare=False)

    def __post_init__(self):
        a, b = self.original, self.paired
        if set(a.ids) != set(b.ids):
            only_a = sorted(set(a.ids) - set(b.ids))
            only_b = sorted(set(b.ids) - set(a.ids))
            raise PairingError(f"paired sets differ in IDs (only in A: {only_a[:10]}, only in B: {only_b[:10]})")
        bad = [s.id for s in a if not _is_pair(s, b[s.id])]
        if bad:
            raise PairingError(f"samples are not marker-swapped pairs: {bad[:10]}")
        order_matches = a.ids == b.ids
        if not order_matches:
            logger.warning("paired sets list samples in different orders; joining by ID")
        object.__setattr__(self, "order_matches", order_matches)

    def __len__(self) -> int:
        return len(self.original)

    @property
    def ids(self) -> list[int]:
        return self.original.ids

    def swapped(self) -> "PairedCorpus":
        return PairedCorpus(self.paired, self.original)


def pair_corpus(corpus: Corpus) -> PairedCorpus:
    """Build the paired set B of ``corpus``, keeping IDs and order."""
    inventory = corpus.inventory
    inventory.require_inverses()
    paired = Corpus(tuple(pair_sample(s) for s in corpus), inventory, origin=f"paired-of:{corpus.origin}")
    return PairedCorpus(corpus, paired)


def merge_paired(paired: PairedCorpus) -> Corpus:
    """All A samples, then all B samples with IDs shifted by the largest A ID."""
    a = paired.original
    offset = max(a.ids, default=0)
    shifted = []
    for s in paired.paired:
        shifted.append(Sample(s.id + offset, s.text, s.e1_span, s.e2_span, s.gold, s.comment))
    return Corpus(a.samples + tuple(shifted), a.inventory, origin=f"merged-of:{a.origin}")


@dataclass(frozen=True)
class BinarySample:
    """A (sentence, candidate label) pair and whether the relation holds."""

    id: int
    source_id: int
    marked: str
    candidate: DirectedLabel
    truth: bool


def binarize(corpus: Corpus, seed: int, include_undirected: bool = True) -> list[BinarySample]:
    """One positive and one sampled negative per source sample.

    Negatives are drawn uniformly from the inventory labels other than the
    gold, in inventory order, with a :class:`SplitMix64` stream seeded by
    ``seed``. ``include_undirected=False`` also removes the undirected label
    from the candidates. Derived IDs are ``2*id - 1`` (positive) and
    ``2*id`` (negative).
    """
    inventory = corpus.inventory
    if len(inventory) < 2:
        raise CorpusError("inventory needs at least two labels to sample a wrong relation")
    rng = SplitMix64(seed)
    out: list[BinarySample] = []
    for s in corpus:
        candidates = [
            lab for lab in inventory
            if lab != s.gold and (include_undirected or lab != inventory.undirected)
        ]
        if not candidates:
            raise CorpusError(f"sample {s.id}: no wrong relation left to sample")
        negative = candidates[rng.below(len(candidates))]
        marked = s.marked
        out.append(BinarySample(2 * s.id - 1, s.id, marked, s.gold, True))
        out.append(BinarySample(2 * s.id, s.id, marked, negative, False))
    return out


def serialize_binary(samples: Iterable[BinarySample]) -> str:
    """Block format whose second line is ``candidate<TAB>0|1``."""
    return "".join(
        f'{b.id}\t"{b.marked}"\n{b.candidate}\t{int(b.truth)}\n\n' for b in samples
    )


def parse_binary(source: Source, inventory: LabelInventory) -> list[BinarySample]:
    """Read back a file written by :func:`serialize_binary`."""
    out: list[BinarySample] = []
    for block in _blocks(source):
        lineno, first = block[0]
        sample_id, marked = _parse_sentence_line(first, lineno)
        if len(block) != 2:
            raise ParseError("binary block must have exactly two lines", lineno)
        l_lineno, line = block[1]
        label_text, tab, flag = line.rpartition("\t")
        if not tab or flag not in ("0", "1"):
            raise ParseError("expected 'candidate<TAB>0|1'", l_lineno)
        label = inventory.parse(label_text, l_lineno)
        out.append(BinarySample(sample_id, (sample_id + 1) // 2, marked, label, flag == "1"))
    return out
