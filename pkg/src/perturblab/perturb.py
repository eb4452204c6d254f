"""Apply one noise type to the highest-ranked words of a document.

Reproducibility contract: the transform applied to word i depends only on
(datapoint seed, i), never on which other words are selected. Together
with the fixed ranking this makes perturbation sets nested across
coverage levels and keeps each word's replacement stable as the level
grows.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass

from .corpus import Document
from .hierarchy import ALPHA_LEVELS, Hierarchy, select_count
from .noise import (
    NOISE_KINDS,
    apply_butterfingers,
    apply_charinsert,
    apply_charswap,
    apply_l33t,
    apply_token,
)
from .synonyms import SynonymResources, apply_synonym, load_synonym_resources


def stable_hash64(*parts: object) -> int:
    """Deterministic 64-bit hash of a sequence of values, stable across
    processes and runs (unlike builtin hash). Parts are length-prefixed
    so no two sequences collide by concatenation."""
    h = hashlib.blake2b(digest_size=8)
    for part in parts:
        data = str(part).encode("utf-8")
        h.update(str(len(data)).encode("ascii"))
        h.update(b":")
        h.update(data)
    return int.from_bytes(h.digest(), "big")


def derive_seed(global_seed: int, doc_id: str, noise: str, hierarchy_kind: str) -> int:
    """Per-datapoint seed: one stream per (run, document, noise, hierarchy)."""
    return stable_hash64(global_seed, doc_id, noise, hierarchy_kind)


def _word_rng(datapoint_seed: int, word_index: int) -> random.Random:
    return random.Random(stable_hash64(datapoint_seed, word_index))


@dataclass(frozen=True)
class PerturbedDoc:
    base_id: str
    alpha: float
    words: tuple[str, ...]
    perturbed_mask: tuple[bool, ...]
    requested_count: int

    def __post_init__(self) -> None:
        if self.alpha not in ALPHA_LEVELS:
            raise ValueError(f"alpha {self.alpha} not in {ALPHA_LEVELS}")
        if len(self.words) != len(self.perturbed_mask):
            raise ValueError("words and perturbed_mask must align")
        if sum(self.perturbed_mask) > self.requested_count:
            raise ValueError("more modifications than requested")

    def text(self) -> str:
        return " ".join(self.words)


def perturb(
    doc: Document,
    noise: str,
    hierarchy: Hierarchy,
    alpha: float,
    resources: SynonymResources | None = None,
    seed: int = 0,
) -> PerturbedDoc:
    """Replace the first select_count(N, alpha) words of the ranking.

    Words whose transform yields no change (synonym rules all fail, no
    mappable character, ...) are left as-is and not compensated for by
    perturbing lower-ranked words.
    """
    if noise not in NOISE_KINDS:
        raise ValueError(f"unknown noise kind {noise!r}")
    if len(hierarchy.ranking) != len(doc.words):
        raise ValueError("hierarchy was built for a different document")
    if noise == "synonym" and resources is None:
        resources = load_synonym_resources()

    n = len(doc.words)
    count = select_count(n, alpha)
    words = [w.surface for w in doc.words]
    mask = [False] * n

    for idx in hierarchy.ranking[:count]:
        surface = words[idx]
        rng = _word_rng(seed, idx)
        if noise == "token_mask":
            out = apply_token(surface, "mask")
        elif noise == "token_unk":
            out = apply_token(surface, "unk")
        elif noise == "charinsert":
            out = apply_charinsert(surface, rng)
        elif noise == "charswap":
            out = apply_charswap(surface, rng)
        elif noise == "butterfingers":
            out = apply_butterfingers(surface, rng)
        elif noise == "l33t":
            out = apply_l33t(surface)
        else:
            pos = doc.pos[idx] if doc.pos is not None else None
            out = apply_synonym(surface, pos, resources, rng)
        if out is not None and out != surface:
            words[idx] = out
            mask[idx] = True

    return PerturbedDoc(
        base_id=doc.id,
        alpha=alpha,
        words=tuple(words),
        perturbed_mask=tuple(mask),
        requested_count=count,
    )
