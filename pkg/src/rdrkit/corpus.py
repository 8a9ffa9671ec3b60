"""Relation-classification corpora in the SemEval-2010 Task 8 text format.

A corpus file is a sequence of blocks separated by a blank line::

    8001\t"<e1>Jack</e1> is the father of <e2>Jackson</e2>"
    Father-Child(e1,e2)
    Comment: optional free text

Prediction files hold one ``ID<TAB>label`` per line, the same shape the
official scorer consumes.
"""

from __future__ import annotations

import enum
import io
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence, TextIO, Union

__all__ = [
    "Direction",
    "DirectedLabel",
    "LabelInventory",
    "Sample",
    "Corpus",
    "PredictionSet",
    "CorpusError",
    "ParseError",
    "DuplicateIdError",
    "UnknownLabelError",
    "AnnotationError",
    "ConfigurationError",
    "SEMEVAL_TYPES",
    "semeval_inventory",
    "load_inventory",
    "parse_inventory",
    "parse_label",
    "invert_label",
    "parse_corpus",
    "serialize_corpus",
    "load_corpus",
    "write_corpus",
    "parse_predictions",
    "serialize_predictions",
    "load_predictions",
    "write_predictions",
]

Source = Union[str, TextIO, Iterable[str]]


class CorpusError(ValueError):
    """Base class for every validation failure raised by this package."""


class ParseError(CorpusError):
    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class DuplicateIdError(ParseError):
    pass


class UnknownLabelError(ParseError):
    pass


class AnnotationError(ParseError):
    pass


class ConfigurationError(CorpusError):
    pass


class Direction(enum.Enum):
    E1_TO_E2 = "(e1,e2)"
    E2_TO_E1 = "(e2,e1)"
    NONE = ""

    def flipped(self) -> "Direction":
        if self is Direction.E1_TO_E2:
            return Direction.E2_TO_E1
        if self is Direction.E2_TO_E1:
            return Direction.E1_TO_E2
        return self


@dataclass(frozen=True, order=False)
class DirectedLabel:
    relation_type: str
    direction: Direction

    def __str__(self) -> str:
        return self.relation_type + self.direction.value

    @property
    def is_directed(self) -> bool:
        return self.direction is not Direction.NONE


_LABEL_RE = re.compile(r"^(?P<type>[^()\s]+)(?P<dir>\((?:e1,e2|e2,e1)\))?$")


def parse_label(text: str) -> DirectedLabel:
    """Parse a canonical label string such as ``Cause-Effect(e2,e1)`` or ``Other``.

    Surrounding whitespace is trimmed; everything else is case-sensitive.
    A bare type name is the undirected label.
    """
    m = _LABEL_RE.match(text.strip())
    if m is None:
        raise ValueError(f"not a canonical label: {text!r}")
    direction = Direction(m.group("dir") or "")
    return DirectedLabel(m.group("type"), direction)


def invert_label(label: DirectedLabel) -> DirectedLabel:
    """Flip the argument order of a directed label; the undirected label is a fixed point."""
    return DirectedLabel(label.relation_type, label.direction.flipped())


@dataclass(frozen=True)
class LabelInventory:
    """Ordered set of legal labels. Order breaks ties everywhere in the package."""

    labels: tuple[DirectedLabel, ...]
    undirected: DirectedLabel
    _index: Mapping[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        if self.undirected.is_directed:
            raise ConfigurationError(f"undirected label {self.undirected} carries a direction")
        if self.undirected not in labels:
            raise ConfigurationError(f"undirected label {self.undirected} missing from inventory")
        index: dict[str, int] = {}
        for i, label in enumerate(labels):
            key = str(label)
            if key in index:
                raise ConfigurationError(f"duplicate label {key}")
            if not label.is_directed and label != self.undirected:
                raise ConfigurationError(f"label {key} has no direction but is not the undirected label")
            if label.is_directed and label.relation_type == self.undirected.relation_type:
                raise ConfigurationError(f"label {key} reuses the undirected type name")
            index[key] = i
        object.__setattr__(self, "_index", index)

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self) -> Iterator[DirectedLabel]:
        return iter(self.labels)

    def __contains__(self, label: object) -> bool:
        return isinstance(label, DirectedLabel) and str(label) in self._index

    def index(self, label: DirectedLabel) -> int:
        try:
            return self._index[str(label)]
        except KeyError:
            raise UnknownLabelError(f"label {label} not in inventory") from None

    def parse(self, text: str, lineno: int | None = None) -> DirectedLabel:
        """Parse and canonicalize ``text``, rejecting labels outside the inventory."""
        try:
            label = parse_label(text)
        except ValueError as exc:
            raise UnknownLabelError(str(exc), lineno) from None
        if label not in self:
            raise UnknownLabelError(f"label {str(label)!r} not in inventory", lineno)
        return label

    @property
    def relation_types(self) -> tuple[str, ...]:
        """Directed relation type names in first-appearance order."""
        seen: dict[str, None] = {}
        for label in self.labels:
            if label.is_directed:
                seen.setdefault(label.relation_type, None)
        return tuple(seen)

    def missing_inverses(self) -> list[DirectedLabel]:
        return [lab for lab in self.labels if invert_label(lab) not in self]

    def require_inverses(self) -> None:
        missing = self.missing_inverses()
        if missing:
            names = ", ".join(str(invert_label(lab)) for lab in missing)
            raise ConfigurationError(f"inventory lacks inverse labels: {names}")

    def to_text(self) -> str:
        lines = [f"undirected: {lab}" if lab == self.undirected else str(lab) for lab in self.labels]
        return "\n".join(lines) + "\n"


SEMEVAL_TYPES = (
    "Cause-Effect",
    "Component-Whole",
    "Content-Container",
    "Entity-Destination",
    "Entity-Origin",
    "Instrument-Agency",
    "Member-Collection",
    "Message-Topic",
    "Product-Producer",
)


def semeval_inventory() -> LabelInventory:
    """The 18 directed SemEval-2010 Task 8 labels followed by ``Other``."""
    labels = []
    for name in SEMEVAL_TYPES:
        labels.append(DirectedLabel(name, Direction.E1_TO_E2))
        labels.append(DirectedLabel(name, Direction.E2_TO_E1))
    other = DirectedLabel("Other", Direction.NONE)
    labels.append(other)
    return LabelInventory(tuple(labels), other)


def parse_inventory(source: Source) -> LabelInventory:
    """Read an inventory config: one label per line plus one ``undirected: <label>`` line.

    The undirected label takes its position from that line. Blank lines and
    lines starting with ``#`` are ignored.
    """
    labels: list[DirectedLabel] = []
    undirected = None
    for lineno, raw in enumerate(_lines(source), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("undirected:"):
            if undirected is not None:
                raise ParseError("second 'undirected:' line", lineno)
            try:
                undirected = parse_label(line[len("undirected:"):])
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from None
            labels.append(undirected)
            continue
        try:
            labels.append(parse_label(line))
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
    if undirected is None:
        raise ParseError("inventory has no 'undirected:' line")
    return LabelInventory(tuple(labels), undirected)


def load_inventory(spec: str | Path | None) -> LabelInventory:
    """Resolve a builtin name (``semeval``) or a config file path."""
    if spec is None or str(spec) == "semeval":
        return semeval_inventory()
    with open(spec, encoding="utf-8") as fp:
        return parse_inventory(fp)


E1_OPEN, E1_CLOSE, E2_OPEN, E2_CLOSE = "<e1>", "</e1>", "<e2>", "</e2>"
_MARKER_RE = re.compile(r"</?e[12]>")


@dataclass(frozen=True)
class Sample:
    """One sentence with two marked entities.

    ``text`` is the sentence with markers removed; spans are half-open
    character offsets into it. ``comment`` is the text after ``Comment:``
    kept verbatim, or None when the block had no comment line.
    """

    id: int
    text: str
    e1_span: tuple[int, int]
    e2_span: tuple[int, int]
    gold: DirectedLabel
    comment: str | None = None

    def __post_init__(self):
        if isinstance(self.id, bool) or not isinstance(self.id, int) or self.id <= 0:
            raise AnnotationError(f"sample id must be a positive integer, got {self.id!r}")
        (s1, t1), (s2, t2) = self.e1_span, self.e2_span
        n = len(self.text)
        if not (0 <= s1 < t1 <= n and 0 <= s2 < t2 <= n):
            raise AnnotationError(f"sample {self.id}: entity spans out of range or empty")
        if s1 < t2 and s2 < t1:
            raise AnnotationError(f"sample {self.id}: entity spans overlap")

    @property
    def e1_text(self) -> str:
        return self.text[self.e1_span[0]:self.e1_span[1]]

    @property
    def e2_text(self) -> str:
        return self.text[self.e2_span[0]:self.e2_span[1]]

    @property
    def e1_first(self) -> bool:
        return self.e1_span[0] < self.e2_span[0]

    @property
    def marked(self) -> str:
        """The sentence with entity markers re-inserted at the recorded offsets."""
        inserts = [
            (self.e1_span[0], 1, E1_OPEN),
            (self.e1_span[1], 0, E1_CLOSE),
            (self.e2_span[0], 1, E2_OPEN),
            (self.e2_span[1], 0, E2_CLOSE),
        ]
        # closing tags sort before opening tags at the same offset
        inserts.sort()
        out, pos = [], 0
        for offset, _, tag in inserts:
            out.append(self.text[pos:offset])
            out.append(tag)
            pos = offset
        out.append(self.text[pos:])
        return "".join(out)

    @classmethod
    def from_marked(cls, id: int, marked: str, gold: DirectedLabel,
                    comment: str | None = None, lineno: int | None = None) -> "Sample":
        """Locate and strip the four entity markers of ``marked``."""
        positions: dict[str, int] = {}
        pieces, pos, stripped_len = [], 0, 0
        for m in _MARKER_RE.finditer(marked):
            tag = m.group(0)
            if tag in positions:
                raise AnnotationError(f"sample {id}: repeated marker {tag}", lineno)
            chunk = marked[pos:m.start()]
            pieces.append(chunk)
            stripped_len += len(chunk)
            positions[tag] = stripped_len
            pos = m.end()
        pieces.append(marked[pos:])
        missing = [t for t in (E1_OPEN, E1_CLOSE, E2_OPEN, E2_CLOSE) if t not in positions]
        if missing:
            raise AnnotationError(f"sample {id}: missing marker(s) {' '.join(missing)}", lineno)
        e1 = (positions[E1_OPEN], positions[E1_CLOSE])
        e2 = (positions[E2_OPEN], positions[E2_CLOSE])
        try:
            sample = cls(id, "".join(pieces), e1, e2, gold, comment)
        except AnnotationError as exc:
            raise AnnotationError(str(exc), lineno) from None
        if sample.marked != marked:
            # catches closing tags placed before their opening tag
            raise AnnotationError(f"sample {id}: malformed marker nesting", lineno)
        return sample


@dataclass(frozen=True)
class Corpus:
    """An ordered, ID-unique collection of samples.

    Equality is structural: ``origin`` is provenance only and never compared.
    """

    samples: tuple[Sample, ...]
    inventory: LabelInventory
    origin: str = field(default="", compare=False)
    _by_id: Mapping[int, Sample] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        samples = tuple(self.samples)
        object.__setattr__(self, "samples", samples)
        by_id: dict[int, Sample] = {}
        for s in samples:
            if s.id in by_id:
                raise DuplicateIdError(f"duplicate sample id {s.id}")
            if s.gold not in self.inventory:
                raise UnknownLabelError(f"sample {s.id}: label {s.gold} not in inventory")
            by_id[s.id] = s
        object.__setattr__(self, "_by_id", by_id)

    def __len__(self) -> int:
        return len(self.samples)

    def __iter__(self) -> Iterator[Sample]:
        return iter(self.samples)

    def __getitem__(self, sample_id: int) -> Sample:
        return self._by_id[sample_id]

    def __contains__(self, sample_id: object) -> bool:
        return sample_id in self._by_id

    @property
    def ids(self) -> list[int]:
        return [s.id for s in self.samples]

    def golds(self) -> dict[int, DirectedLabel]:
        return {s.id: s.gold for s in self.samples}


@dataclass(frozen=True)
class PredictionSet:
    """Predicted labels keyed by sample ID, in file order."""

    entries: Mapping[int, DirectedLabel]
    target_origin: str = field(default="", compare=False)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, sample_id: int) -> DirectedLabel:
        return self.entries[sample_id]

    def __iter__(self) -> Iterator[int]:
        return iter(self.entries)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, DirectedLabel]], target_origin: str = "") -> "PredictionSet":
        entries: dict[int, DirectedLabel] = {}
        for sample_id, label in pairs:
            if sample_id in entries:
                raise DuplicateIdError(f"duplicate prediction id {sample_id}")
            entries[sample_id] = label
        return cls(entries, target_origin)


def _lines(source: Source) -> Iterator[str]:
    if isinstance(source, str):
        source = io.StringIO(source)
    for line in source:
        yield line.rstrip("\r\n")


def _blocks(source: Source) -> Iterator[list[tuple[int, str]]]:
    block: list[tuple[int, str]] = []
    for lineno, line in enumerate(_lines(source), start=1):
        if line.strip():
            block.append((lineno, line))
        elif block:
            yield block
            block = []
    if block:
        yield block


def _parse_id(text: str, lineno: int) -> int:
    text = text.strip()
    if not text.isdigit() or int(text) <= 0:
        raise ParseError(f"sample id must be a positive integer, got {text!r}", lineno)
    return int(text)


def _parse_sentence_line(line: str, lineno: int) -> tuple[int, str]:
    id_part, tab, rest = line.partition("\t")
    if not tab:
        raise ParseError("expected 'ID<TAB>\"sentence\"'", lineno)
    sample_id = _parse_id(id_part, lineno)
    rest = rest.strip()
    if len(rest) < 2 or rest[0] != '"' or rest[-1] != '"':
        raise ParseError("sentence must be enclosed in double quotes", lineno)
    return sample_id, rest[1:-1]


def parse_corpus(source: Source, inventory: LabelInventory | None = None, origin: str = "") -> Corpus:
    """Parse a block-format corpus, validating markers, IDs and labels."""
    inventory = inventory or semeval_inventory()
    samples: list[Sample] = []
    seen: set[int] = set()
    for block in _blocks(source):
        lineno, first = block[0]
        sample_id, marked = _parse_sentence_line(first, lineno)
        if sample_id in seen:
            raise DuplicateIdError(f"duplicate sample id {sample_id}", lineno)
        seen.add(sample_id)
        if len(block) < 2:
            raise ParseError(f"sample {sample_id}: missing label line", lineno + 1)
        gold = inventory.parse(block[1][1], block[1][0])
        comment = None
        if len(block) >= 3:
            c_lineno, c_line = block[2]
            if not c_line.startswith("Comment:"):
                raise ParseError("third block line must start with 'Comment:'", c_lineno)
            comment = c_line[len("Comment:"):]
        if len(block) > 3:
            raise ParseError("unexpected extra line in block (missing blank separator?)", block[3][0])
        samples.append(Sample.from_marked(sample_id, marked, gold, comment, lineno))
    return Corpus(tuple(samples), inventory, origin)


def _sample_block(sample: Sample) -> str:
    lines = [f'{sample.id}\t"{sample.marked}"', str(sample.gold)]
    if sample.comment is not None:
        lines.append("Comment:" + sample.comment)
    return "\n".join(lines) + "\n\n"


def serialize_corpus(corpus: Corpus | Sequence[Sample]) -> str:
    """Render samples as blocks; every block is followed by one blank line."""
    return "".join(_sample_block(s) for s in corpus)


def load_corpus(path: str | Path, inventory: LabelInventory | None = None) -> Corpus:
    with open(path, encoding="utf-8", newline="") as fp:
        return parse_corpus(fp, inventory, origin=str(path))


def write_corpus(corpus: Corpus, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fp:
        fp.write(serialize_corpus(corpus))


def parse_predictions(source: Source, inventory: LabelInventory | None = None,
                      target_origin: str = "") -> PredictionSet:
    """Parse ``ID<TAB>label`` lines. Any whitespace run is accepted as the separator."""
    inventory = inventory or semeval_inventory()
    entries: dict[int, DirectedLabel] = {}
    for lineno, line in enumerate(_lines(source), start=1):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError("expected 'ID<TAB>label'", lineno)
        sample_id = _parse_id(parts[0], lineno)
        if sample_id in entries:
            raise DuplicateIdError(f"duplicate prediction id {sample_id}", lineno)
        entries[sample_id] = inventory.parse(parts[1], lineno)
    return PredictionSet(entries, target_origin)


def serialize_predictions(preds: PredictionSet) -> str:
    return "".join(f"{i}\t{label}\n" for i, label in preds.entries.items())


def load_predictions(path: str | Path, inventory: LabelInventory | None = None) -> PredictionSet:
    with open(path, encoding="utf-8", newline="") as fp:
        return parse_predictions(fp, inventory, target_origin=str(path))


def write_predictions(preds: PredictionSet, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fp:
        fp.write(serialize_predictions(preds))
