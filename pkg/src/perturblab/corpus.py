"""Annotated classification corpora: loading, word segmentation, POS tagging.

A corpus file is UTF-8 JSON lines. Each record carries ``id`` (str),
``text`` (str), ``label`` (int), ``annotation`` (list of float, one weight
per whitespace-delimited word) and optionally ``pos`` (list of str,
word-aligned). Words are whatever ``text.split()`` yields; punctuation
stays attached to its word.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

POS_TAGS = ("ADJ", "ADV", "VERB", "NOUN", "PROPN", "DET", "WDT", "NUM", "PUNCT", "OTHER")

_PUNCT_CHARS = set(".,!?;:'\"`()[]{}/-_“”‘’…") | {"--"}


class CorpusError(ValueError):
    """Raised for malformed corpus files or invalid documents."""


@dataclass(frozen=True)
class Word:
    surface: str
    index: int

    def __post_init__(self) -> None:
        if not self.surface:
            raise CorpusError("word surface must be non-empty")
        if any(c.isspace() for c in self.surface):
            raise CorpusError(f"word surface contains whitespace: {self.surface!r}")


@dataclass(frozen=True)
class Document:
    """One classification datapoint with word-level saliency annotations."""

    id: str
    words: tuple[Word, ...]
    label: int
    annotation: tuple[float, ...]
    pos: tuple[str, ...]

    def __post_init__(self) -> None:
        n = len(self.words)
        if n == 0:
            raise CorpusError(f"document {self.id!r} has no words")
        if len(self.annotation) != n or len(self.pos) != n:
            raise CorpusError(
                f"document {self.id!r}: words/annotation/pos lengths differ "
                f"({n}/{len(self.annotation)}/{len(self.pos)})"
            )
        if any(not (0.0 <= a <= 1.0) for a in self.annotation):
            raise CorpusError(f"document {self.id!r}: annotation weight outside [0,1]")
        for tag in self.pos:
            if tag not in POS_TAGS:
                raise CorpusError(f"document {self.id!r}: unknown POS tag {tag!r}")

    @property
    def surfaces(self) -> list[str]:
        return [w.surface for w in self.words]

    def text(self) -> str:
        return " ".join(self.surfaces)


@dataclass(frozen=True)
class Corpus:
    documents: tuple[Document, ...]
    num_classes: int
    split: str

    def __post_init__(self) -> None:
        if self.split not in ("train", "test"):
            raise CorpusError(f"split must be 'train' or 'test', got {self.split!r}")
        if self.num_classes < 2:
            raise CorpusError("num_classes must be >= 2")
        if not self.documents:
            raise CorpusError("corpus is empty")
        ids = [d.id for d in self.documents]
        if len(set(ids)) != len(ids):
            raise CorpusError("duplicate document ids in corpus")
        for d in self.documents:
            if not (0 <= d.label < self.num_classes):
                raise CorpusError(f"document {d.id!r}: label {d.label} out of range")

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)


def tokenize_words(text: str) -> list[Word]:
    """Split on whitespace runs; joining the surfaces with single spaces
    round-trips modulo whitespace runs."""
    parts = text.split()
    if not parts:
        raise CorpusError("cannot tokenize empty or all-whitespace text")
    return [Word(surface=p, index=i) for i, p in enumerate(parts)]


@dataclass
class PosLexicon:
    """Word -> tag map plus suffix heuristics for unknown words."""

    entries: Mapping[str, str]
    suffixes: Sequence[tuple[str, str]] = field(default_factory=list)

    def tag(self, surface: str) -> str:
        hit = self.entries.get(surface) or self.entries.get(surface.lower())
        if hit is not None:
            return hit
        if surface[0] in "@#":
            return "OTHER"
        if surface.replace(",", "").replace(".", "").isdigit():
            return "NUM"
        if all(c in _PUNCT_CHARS for c in surface):
            return "PUNCT"
        if surface[0].isupper() and surface[1:].islower() and surface.isalpha():
            return "PROPN"
        lowered = surface.lower()
        for suffix, tag in self.suffixes:
            if lowered.endswith(suffix) and len(lowered) > len(suffix):
                return tag
        return "OTHER"


def load_pos_lexicon(path: str | Path | None = None) -> PosLexicon:
    """Load a ``word<TAB>TAG`` lexicon; defaults to the shipped one."""
    if path is None:
        text = resources.files("perturblab.data").joinpath("pos_lexicon.tsv").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    entries: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            word, tag = line.split("\t")
        except ValueError as exc:
            raise CorpusError(f"pos lexicon line {lineno}: expected word<TAB>TAG") from exc
        if tag not in POS_TAGS:
            raise CorpusError(f"pos lexicon line {lineno}: unknown tag {tag!r}")
        entries[word] = tag
    return PosLexicon(entries=entries, suffixes=list(_SUFFIX_TAGS))


# Suffix heuristics applied to words absent from the lexicon, first match
# wins. Order matters: longer/rarer suffixes before generic ones.
_SUFFIX_TAGS: tuple[tuple[str, str], ...] = (
    ("ization", "NOUN"),
    ("ousness", "NOUN"),
    ("fulness", "NOUN"),
    ("ility", "NOUN"),
    ("ation", "NOUN"),
    ("ment", "NOUN"),
    ("ness", "NOUN"),
    ("ship", "NOUN"),
    ("tion", "NOUN"),
    ("sion", "NOUN"),
    ("ally", "ADV"),
    ("wise", "ADV"),
    ("ward", "ADV"),
    ("ly", "ADV"),
    ("able", "ADJ"),
    ("ible", "ADJ"),
    ("ical", "ADJ"),
    ("ious", "ADJ"),
    ("less", "ADJ"),
    ("ish", "ADJ"),
    ("ive", "ADJ"),
    ("ful", "ADJ"),
    ("ous", "ADJ"),
    ("al", "ADJ"),
    ("ic", "ADJ"),
    ("ate", "VERB"),
    ("ize", "VERB"),
    ("ise", "VERB"),
    ("ify", "VERB"),
    ("ing", "VERB"),
    ("ed", "VERB"),
)


def tag_pos(words: Sequence[Word] | Sequence[str], lexicon: PosLexicon) -> list[str]:
    """Tag each word: lexicon lookup, then shape/suffix heuristics, else OTHER."""
    out = []
    for w in words:
        surface = w.surface if isinstance(w, Word) else w
        out.append(lexicon.tag(surface))
    return out


def _parse_record(obj: dict, lineno: int, lexicon: PosLexicon) -> Document:
    for key in ("id", "text", "label", "annotation"):
        if key not in obj:
            raise CorpusError(f"line {lineno}: missing field {key!r}")
    words = tokenize_words(obj["text"])
    annotation = obj["annotation"]
    if not isinstance(annotation, list) or len(annotation) != len(words):
        raise CorpusError(
            f"line {lineno}: annotation length {len(annotation)} does not match "
            f"{len(words)} words"
        )
    pos = obj.get("pos")
    if pos is None:
        pos = tag_pos(words, lexicon)
    elif not isinstance(pos, list) or len(pos) != len(words):
        raise CorpusError(f"line {lineno}: pos length does not match {len(words)} words")
    try:
        return Document(
            id=str(obj["id"]),
            words=tuple(words),
            label=int(obj["label"]),
            annotation=tuple(float(a) for a in annotation),
            pos=tuple(pos),
        )
    except CorpusError as exc:
        raise CorpusError(f"line {lineno}: {exc}") from exc


def load_corpus(
    path: str | Path,
    split: str,
    num_classes: int | None = None,
    lexicon: PosLexicon | None = None,
) -> Corpus:
    """Load and validate a JSONL corpus file.

    ``num_classes`` defaults to ``max(label) + 1`` (at least 2). Records with
    word/annotation length mismatches raise a parse error naming the line.
    """
    path = Path(path)
    if lexicon is None:
        lexicon = load_pos_lexicon()
    documents: list[Document] = []
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"line {lineno}: invalid JSON ({exc.msg})") from exc
            documents.append(_parse_record(obj, lineno, lexicon))
    if not documents:
        raise CorpusError(f"{path}: corpus file has no records")
    if num_classes is None:
        num_classes = max(2, max(d.label for d in documents) + 1)
    return Corpus(documents=tuple(documents), num_classes=num_classes, split=split)


def save_corpus(documents: Iterable[Document], path: str | Path) -> None:
    """Write documents back out in the corpus file format."""
    with Path(path).open("w", encoding="utf-8") as fh:
        for d in documents:
            fh.write(
                json.dumps(
                    {
                        "id": d.id,
                        "text": d.text(),
                        "label": d.label,
                        "annotation": list(d.annotation),
                        "pos": list(d.pos),
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )
