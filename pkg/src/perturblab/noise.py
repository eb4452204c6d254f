"""Word-level noise transforms: token replacement, typo noise, l33t speak.

Every transform maps one word surface to one word surface. Randomized
transforms take a ``random.Random`` so callers control determinism.
"""

from __future__ import annotations

import random
import string

NOISE_KINDS = (
    "token_mask",
    "token_unk",
    "charinsert",
    "charswap",
    "butterfingers",
    "l33t",
    "synonym",
)

MASK_TOKEN = "[MASK]"
UNK_TOKEN = "[UNK]"

_LETTERS = string.ascii_letters

# Deterministic substitutions applied case-insensitively to every mappable
# character. Outputs are digits/@, which are outside the map's domain, so
# the transform is idempotent.
L33T_MAP = {
    "a": "@",
    "b": "6",
    "e": "3",
    "g": "9",
    "h": "4",
    "i": "1",
    "l": "1",
    "o": "0",
    "s": "5",
    "t": "7",
}


def _qwerty_adjacency() -> dict[str, str]:
    """Horizontal and diagonal neighbors on the standard staggered US
    layout, letters only."""
    rows = ["qwertyuiop", "asdfghjkl", "zxcvbnm"]
    adjacent: dict[str, set[str]] = {c: set() for row in rows for c in row}
    for row in rows:
        for i, c in enumerate(row):
            if i > 0:
                adjacent[c].add(row[i - 1])
            if i + 1 < len(row):
                adjacent[c].add(row[i + 1])
    # Row r+1 is shifted right by half a key: key j sits between keys j and
    # j+1 of row r.
    for upper, lower in zip(rows, rows[1:]):
        for j, c in enumerate(lower):
            for k in (j, j + 1):
                if k < len(upper):
                    adjacent[c].add(upper[k])
                    adjacent[upper[k]].add(c)
    return {c: "".join(sorted(n)) for c, n in adjacent.items()}


QWERTY_ADJACENT = _qwerty_adjacency()


def apply_token(word: str, which: str) -> str:
    """Replace the whole word with the literal [MASK] or [UNK] token."""
    if which == "mask":
        return MASK_TOKEN
    if which == "unk":
        return UNK_TOKEN
    raise ValueError(f"unknown token replacement {which!r}")


def apply_charinsert(word: str, rng: random.Random) -> str:
    """Insert one random letter at a random interior position (never before
    the first or after the last character). Single-character words have no
    interior and are returned unchanged."""
    if len(word) < 2:
        return word
    pos = rng.randrange(1, len(word))
    return word[:pos] + rng.choice(_LETTERS) + word[pos:]


def apply_charswap(word: str, rng: random.Random) -> str:
    """Replace the character at a random position with a random letter,
    guaranteed to differ from the original character."""
    pos = rng.randrange(len(word))
    original = word[pos]
    replacement = rng.choice(_LETTERS)
    while replacement == original:
        replacement = rng.choice(_LETTERS)
    return word[:pos] + replacement + word[pos + 1 :]


def apply_butterfingers(word: str, rng: random.Random) -> str:
    """Replace one character with a qwerty-adjacent key, preserving case.
    Words without any mappable character are returned unchanged."""
    candidates = [i for i, c in enumerate(word) if c.lower() in QWERTY_ADJACENT]
    if not candidates:
        return word
    pos = rng.choice(candidates)
    original = word[pos]
    neighbor = rng.choice(QWERTY_ADJACENT[original.lower()])
    if original.isupper():
        neighbor = neighbor.upper()
    return word[:pos] + neighbor + word[pos + 1 :]


def apply_l33t(word: str) -> str:
    """Map every mappable character to its l33t form, case-insensitively."""
    return "".join(L33T_MAP.get(c.lower(), c) for c in word)
