"""Synthetic corpora and predictions for tests."""

import random

from rdrkit.corpus import Corpus, DirectedLabel, PredictionSet, Sample, semeval_inventory

WORDS = ["the", "a", "man", "storm", "river", "book", "caused", "inside", "from", "of",
         "wrote", "part", "moved", "into", "team", "made", "by", "about", "and", "small"]


def random_sample(rng: random.Random, sample_id: int, gold: DirectedLabel) -> Sample:
    n = rng.randint(4, 12)
    toks = [rng.choice(WORDS) for _ in range(n)]
    i, j = sorted(rng.sample(range(n), 2))
    e1_first = rng.random() < 0.5
    pieces, pos, spans = [], 0, {}
    for k, tok in enumerate(toks):
        if pieces:
            pieces.append(" ")
            pos += 1
        if k in (i, j):
            name = "e1" if (k == i) == e1_first else "e2"
            spans[name] = (pos, pos + len(tok))
        pieces.append(tok)
        pos += len(tok)
    return Sample(sample_id, "".join(pieces), spans["e1"], spans["e2"], gold)


def random_corpus(rng: random.Random, n: int, inventory=None, other_rate: float = 0.2,
                  allow_other: bool = True, origin: str = "synthetic") -> Corpus:
    inventory = inventory or semeval_inventory()
    directed = [lab for lab in inventory if lab.is_directed]
    ids = rng.sample(range(1, 10 * n + 10), n)
    samples = []
    for sample_id in ids:
        if allow_other and rng.random() < other_rate:
            gold = inventory.undirected
        else:
            gold = rng.choice(directed)
        samples.append(random_sample(rng, sample_id, gold))
    return Corpus(tuple(samples), inventory, origin)


def random_predictions(rng: random.Random, corpus: Corpus, p_correct: float = 0.5) -> PredictionSet:
    labels = list(corpus.inventory)
    entries = {}
    for s in corpus:
        entries[s.id] = s.gold if rng.random() < p_correct else rng.choice(labels)
    return PredictionSet(entries)


KEYWORDS = {
    "Cause-Effect": "causes",
    "Component-Whole": "contains",
    "Message-Topic": "discusses",
    "Product-Producer": "builds",
}
NOUNS = ["storm", "river", "engine", "report", "factory", "city", "wheel", "paper", "flood", "crew"]


def toy_directed_corpus(rng: random.Random, n: int, start_id: int = 1, origin: str = "toy") -> Corpus:
    """Separable toy data: one keyword per type, direction set by which marker comes first."""
    inventory = semeval_inventory()
    types = list(KEYWORDS)
    samples = []
    for k in range(n):
        rel = types[k % len(types)]
        left, right = rng.sample(NOUNS, 2)
        filler = rng.choice(["", " today", " again", " slowly"])
        text = f"the {left} {KEYWORDS[rel]} the {right}{filler}"
        lspan = (4, 4 + len(left))
        rstart = text.index(f"the {right}", lspan[1]) + 4
        rspan = (rstart, rstart + len(right))
        if rng.random() < 0.5:
            e1, e2, direction = lspan, rspan, "(e1,e2)"
        else:
            e1, e2, direction = rspan, lspan, "(e2,e1)"
        gold = inventory.parse(rel + direction)
        samples.append(Sample(start_id + k, text, e1, e2, gold))
    return Corpus(tuple(samples), inventory, origin)
