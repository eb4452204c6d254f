"""Word rankings that decide which words get perturbed first.

A hierarchy is a permutation of word indices, highest perturbation
priority first. Three constructions are supported: seeded-random,
human (annotation weights then POS classes), and gradient (word scores
from a model).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .corpus import Document

HIERARCHY_KINDS = ("random", "human", "gradient")

# Coverage levels used throughout; 0 is the unperturbed control.
ALPHA_LEVELS = (0.0, 0.05, 0.10, 0.25, 0.50, 0.70, 0.80, 0.90, 0.95)

# POS classes in decreasing perturbation priority for the human hierarchy.
_POS_PRIORITY = {"ADJ": 0, "ADV": 1, "VERB": 2, "NOUN": 3}


@dataclass(frozen=True)
class Hierarchy:
    kind: str
    ranking: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.kind not in HIERARCHY_KINDS:
            raise ValueError(f"unknown hierarchy kind {self.kind!r}")
        if sorted(self.ranking) != list(range(len(self.ranking))):
            raise ValueError("ranking must be a permutation of 0..N-1")


def select_count(n_words: int, alpha: float) -> int:
    """How many words a coverage level selects.

    Zero until alpha*N reaches 1, then round-half-up clamped to [1, N-1]
    so at least one word is always left unmodified. Exact rational
    arithmetic avoids float artifacts like 0.05*20 != 1.
    """
    if n_words < 1:
        raise ValueError("n_words must be >= 1")
    product = Fraction(str(alpha)) * n_words
    if product < 1:
        return 0
    rounded = int(product + Fraction(1, 2))
    return max(1, min(rounded, n_words - 1))


def rank_random(doc: Document, seed: int) -> Hierarchy:
    rng = random.Random(seed)
    ranking = list(range(len(doc.words)))
    rng.shuffle(ranking)
    return Hierarchy(kind="random", ranking=tuple(ranking))


def rank_human(doc: Document, seed: int) -> Hierarchy:
    """Annotated words first (weight descending), then ADJ, ADV, VERB,
    NOUN, then everything else. Ties inside every group are randomized
    by the seed."""
    rng = random.Random(seed)
    n = len(doc.words)
    tie = [rng.random() for _ in range(n)]
    annotation = doc.annotation if doc.annotation is not None else (0.0,) * n
    pos = doc.pos if doc.pos is not None else ("OTHER",) * n

    def key(i: int):
        if annotation[i] > 0.0:
            return (0, -annotation[i], tie[i])
        return (1, _POS_PRIORITY.get(pos[i], len(_POS_PRIORITY)), tie[i])

    return Hierarchy(kind="human", ranking=tuple(sorted(range(n), key=key)))


def rank_gradient(doc: Document, word_scores: Sequence[float]) -> Hierarchy:
    if len(word_scores) != len(doc.words):
        raise ValueError(
            f"word_scores length {len(word_scores)} != word count {len(doc.words)}"
        )
    order = sorted(range(len(word_scores)), key=lambda i: (-float(word_scores[i]), i))
    return Hierarchy(kind="gradient", ranking=tuple(order))
