"""Synonym-style word replacement driven by an ordered rule cascade.

Rules are tried in a fixed order and the first one that produces a
replacement wins. A rule that matches structurally but cannot produce a
replacement (empty lexicon entry, empty pool) falls through to the next.
``apply_synonym`` returns ``None`` when no rule produces anything; callers
must treat that as "leave the word unmodified".
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

DETERMINANTS = ["a", "an", "the", "this", "that"]
QUESTION_DETERMINANTS = ["that", "what", "whatever", "which", "whichever"]
QUOTES = ["'", "''", "`", "``", '"']
BRACKETS = ["(", ")", "{", "}", "[", "]", "/"]
PUNCTUATION_MARKS = [".", "!", "?", ","]
SENTENCE_BREAKS = ["-", "--", ",", ":", ";"]

# Characters that may be stripped off word edges before retrying a lookup.
_EDGE_CHARS = set("".join(QUOTES + BRACKETS + PUNCTUATION_MARKS + SENTENCE_BREAKS))

_TCO_PREFIXES = ("http://t.co/", "https://t.co/")
_NUMBER_RE = re.compile(r"[0-9]+\Z")

_MAX_DEPTH = 8


@dataclass
class SynonymResources:
    """Lexicons and pools backing the replacement rules.

    equivalence: word -> POS -> synonym list (lowercase, may be multi-word)
    entailment:  word -> POS -> direction ("forward"/"reverse") -> list
    mentions:    @-handles drawn from the evaluation split
    """

    equivalence: dict[str, dict[str, list[str]]] = field(default_factory=dict)
    entailment: dict[str, dict[str, dict[str, list[str]]]] = field(default_factory=dict)
    mentions: list[str] = field(default_factory=list)
    first_names: list[str] = field(default_factory=list)
    last_names: list[str] = field(default_factory=list)

    def with_mentions(self, mentions: list[str]) -> "SynonymResources":
        return SynonymResources(
            equivalence=self.equivalence,
            entailment=self.entailment,
            mentions=list(mentions),
            first_names=self.first_names,
            last_names=self.last_names,
        )


def _read_lines(path: str | Path | None, default_name: str) -> list[str]:
    if path is None:
        text = resources.files("perturblab.data").joinpath(default_name).read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    return [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]


def load_synonym_resources(
    equivalence_path: str | Path | None = None,
    entailment_path: str | Path | None = None,
    first_names_path: str | Path | None = None,
    last_names_path: str | Path | None = None,
    mentions: list[str] | None = None,
) -> SynonymResources:
    """Load the shipped lexicons, or override any of them by path.

    Equivalence lexicon lines: ``word<TAB>POS<TAB>syn1|syn2``.
    Entailment lexicon lines: ``word<TAB>POS<TAB>forward|reverse<TAB>syn1|syn2``.
    """
    equivalence: dict[str, dict[str, list[str]]] = {}
    for ln in _read_lines(equivalence_path, "synonyms.tsv"):
        word, pos, syns = ln.split("\t")
        equivalence.setdefault(word.lower(), {}).setdefault(pos, []).extend(
            s for s in syns.split("|") if s
        )
    entailment: dict[str, dict[str, dict[str, list[str]]]] = {}
    for ln in _read_lines(entailment_path, "entailments.tsv"):
        word, pos, direction, syns = ln.split("\t")
        if direction not in ("forward", "reverse"):
            raise ValueError(f"entailment direction must be forward/reverse, got {direction!r}")
        entailment.setdefault(word.lower(), {}).setdefault(pos, {}).setdefault(
            direction, []
        ).extend(s for s in syns.split("|") if s)
    return SynonymResources(
        equivalence=equivalence,
        entailment=entailment,
        mentions=list(mentions or []),
        first_names=_read_lines(first_names_path, "first_names.txt"),
        last_names=_read_lines(last_names_path, "last_names.txt"),
    )


def _match_case(original: str, replacement: str) -> str:
    alpha = [c for c in original if c.isalpha()]
    if not alpha:
        return replacement
    if all(c.isupper() for c in alpha):
        return replacement.upper()
    if alpha[0].isupper():
        return replacement[:1].upper() + replacement[1:]
    return replacement


def _choose_other(options: list[str], original: str, rng: random.Random) -> str | None:
    """Uniform choice among options that differ from the original
    (case-insensitively)."""
    pool = [o for o in options if o.lower() != original.lower()]
    if not pool:
        return None
    return rng.choice(pool)


def _hyphenate(phrase: str) -> str:
    return "-".join(phrase.split())


_UNITS = [
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight",
    "nine", "ten", "eleven", "twelve", "thirteen", "fourteen", "fifteen",
    "sixteen", "seventeen", "eighteen", "nineteen",
]
_TENS = ["", "", "twenty", "thirty", "forty", "fifty", "sixty", "seventy", "eighty", "ninety"]


def _below_thousand(n: int) -> list[str]:
    parts: list[str] = []
    if n >= 100:
        parts += [_UNITS[n // 100], "hundred"]
        n %= 100
    if n >= 20:
        parts.append(_TENS[n // 10])
        n %= 10
        if n:
            parts.append(_UNITS[n])
    elif n and (parts or True):
        parts.append(_UNITS[n])
    return parts


def number_to_words(n: int) -> str | None:
    """English words for a non-negative integer below one billion, joined
    with hyphens so the result stays a single word."""
    if n < 0 or n >= 10**9:
        return None
    if n == 0:
        return "zero"
    groups = [(10**6, "million"), (10**3, "thousand"), (1, "")]
    parts: list[str] = []
    for scale, name in groups:
        if n >= scale:
            parts += _below_thousand(n // scale)
            if name:
                parts.append(name)
            n %= scale
    return "-".join(parts)


def _random_tco_url(word: str, rng: random.Random) -> str | None:
    prefix = next(p for p in _TCO_PREFIXES if word.startswith(p))
    suffix = word[len(prefix) :]
    if not suffix:
        return None
    for _ in range(16):
        chars = []
        for c in suffix:
            if c.isdigit():
                chars.append(rng.choice("0123456789"))
            elif c.islower():
                chars.append(rng.choice("abcdefghijklmnopqrstuvwxyz"))
            elif c.isupper():
                chars.append(rng.choice("ABCDEFGHIJKLMNOPQRSTUVWXYZ"))
            else:
                chars.append(c)
        candidate = prefix + "".join(chars)
        if candidate != word:
            return candidate
    return None


def _lexicon_with_pos(word: str, pos: str | None, res: SynonymResources) -> list[str]:
    if pos is None:
        return []
    return list(res.equivalence.get(word.lower(), {}).get(pos, []))


def _entailment_with_pos(word: str, pos: str | None, res: SynonymResources) -> list[str]:
    if pos is None:
        return []
    by_dir = res.entailment.get(word.lower(), {}).get(pos, {})
    return list(by_dir.get("forward", [])) + list(by_dir.get("reverse", []))


def _lexicon_any_pos(word: str, res: SynonymResources) -> list[str]:
    out: list[str] = []
    for syns in res.equivalence.get(word.lower(), {}).values():
        out.extend(syns)
    for by_dir in res.entailment.get(word.lower(), {}).values():
        for syns in by_dir.values():
            out.extend(syns)
    return out


def apply_synonym(
    word: str,
    pos: str | None,
    res: SynonymResources,
    rng: random.Random,
) -> str | None:
    """Replace ``word`` via the rule cascade, or return None if no rule
    yields a replacement. Case of the original is preserved."""
    return _apply(word, pos, res, rng, depth=0)


def _apply(word: str, pos: str | None, res: SynonymResources, rng, depth: int) -> str | None:
    if depth > _MAX_DEPTH or not word:
        return None
    lower = word.lower()

    # 1. t.co links: regenerate the path, keeping each character's class.
    if word.startswith(_TCO_PREFIXES):
        return _random_tco_url(word, rng)

    # 2. hashtags: replace the remainder, keep the '#'.
    if word.startswith("#") and len(word) > 1:
        inner = _apply(word[1:], None, res, rng, depth + 1)
        if inner is not None:
            return "#" + inner

    # 3. mentions: swap for another handle from the pool.
    if word.startswith("@") and len(word) > 1:
        picked = _choose_other(res.mentions, word, rng)
        if picked is not None:
            return picked

    # 4. determinants and question determinants swap within their class.
    if pos == "WDT" and lower in QUESTION_DETERMINANTS:
        picked = _choose_other(QUESTION_DETERMINANTS, lower, rng)
        if picked is not None:
            return _match_case(word, picked)
    if lower in DETERMINANTS:
        picked = _choose_other(DETERMINANTS, lower, rng)
        if picked is not None:
            return _match_case(word, picked)
    if lower in QUESTION_DETERMINANTS:
        picked = _choose_other(QUESTION_DETERMINANTS, lower, rng)
        if picked is not None:
            return _match_case(word, picked)

    # 5. proper nouns become a random first or last name; a possessive
    # suffix is carried over.
    if pos == "PROPN":
        core, possessive = word, ""
        for marker in ("'s", "’s"):
            if core.endswith(marker) and len(core) > len(marker):
                core, possessive = core[: -len(marker)], marker
                break
        pool = res.first_names if rng.random() < 0.5 else res.last_names
        picked = _choose_other(pool, core, rng) or _choose_other(
            res.first_names + res.last_names, core, rng
        )
        if picked is not None:
            return _match_case(core, picked) + possessive

    # 6. quotes, brackets, punctuation marks and sentence breaks swap
    # within their own class.
    for table in (QUOTES, BRACKETS, PUNCTUATION_MARKS, SENTENCE_BREAKS):
        if word in table:
            picked = _choose_other(table, word, rng)
            if picked is not None:
                return picked

    # 7. arabic numerals are spelled out.
    if _NUMBER_RE.fullmatch(word):
        return number_to_words(int(word))

    # 8. equivalence lexicon keyed by POS.
    picked = _choose_other(_lexicon_with_pos(word, pos, res), lower, rng)
    if picked is not None:
        return _match_case(word, _hyphenate(picked))

    # 9. strip edge quotes/brackets/punctuation, replace the core, re-attach.
    start, end = 0, len(word)
    while start < end and word[start] in _EDGE_CHARS:
        start += 1
    while end > start and word[end - 1] in _EDGE_CHARS:
        end -= 1
    if (start > 0 or end < len(word)) and start < end:
        inner = _apply(word[start:end], pos, res, rng, depth + 1)
        if inner is not None:
            return word[:start] + inner + word[end:]

    # 10. words joined by hyphens, '//' or periods: replace one subsection.
    for sep in ("--", "-", "//", "."):
        if sep in word[1:-1]:
            parts = word.split(sep)
            indices = [i for i, p in enumerate(parts) if p]
            rng.shuffle(indices)
            for i in indices:
                inner = _apply(parts[i], None, res, rng, depth + 1)
                if inner is not None:
                    parts[i] = inner
                    return sep.join(parts)
            break

    # 11. entailment lexicon keyed by POS, either direction.
    picked = _choose_other(_entailment_with_pos(word, pos, res), lower, rng)
    if picked is not None:
        return _match_case(word, _hyphenate(picked))

    # 12. retry every lexicon ignoring POS.
    picked = _choose_other(_lexicon_any_pos(word, res), lower, rng)
    if picked is not None:
        return _match_case(word, _hyphenate(picked))

    # 13. strip a common suffix, replace the stem, re-append the suffix.
    for suffix in ("ish", "ness", "less"):
        if lower.endswith(suffix) and len(word) > len(suffix):
            inner = _apply(word[: -len(suffix)], None, res, rng, depth + 1)
            if inner is not None:
                return inner + word[-len(suffix) :]

    return None
