"""Synthetic two-class review corpora for model and sweep tests.

Layout of every generated document (20 words, shuffled):

* 2 sentiment markers: ADJ, annotated with weight 1.0, always drawn from the
  document's own class pool.  The human hierarchy perturbs them first.
* 18 tilted fillers: VERB/ADV/NOUN/OTHER cluster words drawn from the
  own-class pool with probability TILT, otherwise from the other class.

Because every filler carries the same weak class signal, expected accuracy
under masking depends only on how many words survive, so the accuracy curve
decays monotonically as the perturbed fraction grows no matter which fillers
a hierarchy happens to pick.

Every filler pool except the interjections is closed under the packaged
equivalence lexicon, so a synonym perturbation at moderate alpha can only
land on another in-vocabulary word of the same cluster and class.
"""

from __future__ import annotations

import random

from perturblab import Corpus, Document, Word

# ADJ marker clusters (annotated, weight 1.0).
MARKERS = (
    # class 0
    [
        "awful", "dreadful", "ghastly", "horrid", "hideous",
        "terrible", "horrible", "gruesome", "abysmal", "dismal",
        "bleak", "grim", "stark", "bad", "poor", "shoddy",
        "lousy", "rotten", "putrid",
    ],
    # class 1
    [
        "wonderful", "marvelous", "delightful", "charming",
        "great", "grand", "terrific", "superb", "excellent",
        "outstanding", "splendid", "glorious",
    ],
)

# Interjections: no lexicon entry, OTHER tag (the rest block of the human
# hierarchy, so synonym noise only reaches them at extreme alpha).
INTERJECTIONS = (
    ["ugh", "blah", "yuck", "meh"],
    ["yay", "bravo", "hooray", "woo"],
)

# (words, pos) filler clusters with a fixed class lean.
FILLER_CLUSTERS = (
    # class 0
    [
        (["hated", "loathed", "despised", "scorned", "detested"], "VERB"),
        (["watch", "view", "observe"], "VERB"),
        (["end", "finish", "conclude"], "VERB"),
        (["slowly", "sluggishly"], "ADV"),
        (["story", "tale", "narrative", "yarn"], "NOUN"),
        (["actor", "performer", "player"], "NOUN"),
    ],
    # class 1
    [
        (["enjoyed", "liked", "relished", "savored"], "VERB"),
        (["loved", "adored", "cherished", "treasured"], "VERB"),
        (["begin", "start", "commence"], "VERB"),
        (["quickly", "rapidly", "swiftly"], "ADV"),
        (["very", "really", "truly"], "ADV"),
        (["film", "movie", "picture"], "NOUN"),
        (["plot", "storyline"], "NOUN"),
        (["director", "filmmaker"], "NOUN"),
    ],
)

TILT = 0.7
DOC_LEN = 20
N_FILLERS = 18


def _flat(clusters):
    out = []
    for words, pos in clusters:
        out.extend((w, pos) for w in words)
    return out


def make_trend_doc(doc_id: str, label: int, rng: random.Random) -> Document:
    own_fill = _flat(FILLER_CLUSTERS[label]) + [(w, "OTHER") for w in INTERJECTIONS[label]]
    oth_fill = _flat(FILLER_CLUSTERS[1 - label]) + [(w, "OTHER") for w in INTERJECTIONS[1 - label]]
    entries = []  # (surface, pos, weight)
    for _ in range(2):
        entries.append((rng.choice(MARKERS[label]), "ADJ", 1.0))
    for _ in range(N_FILLERS):
        pool = own_fill if rng.random() < TILT else oth_fill
        surface, pos = rng.choice(pool)
        entries.append((surface, pos, 0.0))
    rng.shuffle(entries)
    words = tuple(Word(surface=s, index=i) for i, (s, _, _) in enumerate(entries))
    return Document(
        id=doc_id,
        words=words,
        label=label,
        annotation=tuple(w for _, _, w in entries),
        pos=tuple(p for _, p, _ in entries),
    )


def make_trend_corpus(n_docs: int, seed: int, split: str = "test") -> Corpus:
    rng = random.Random(seed)
    docs = tuple(
        make_trend_doc(f"{split}-{i:04d}", i % 2, rng) for i in range(n_docs)
    )
    return Corpus(documents=docs, num_classes=2, split=split)


def vocabulary_pool() -> set[str]:
    """Every surface the generator or a synonym swap can produce."""
    pool = set()
    for label in (0, 1):
        pool.update(MARKERS[label])
        pool.update(INTERJECTIONS[label])
        for words, _ in FILLER_CLUSTERS[label]:
            pool.update(words)
    return pool


# Small linearly separable corpus for optimizer and gradient tests: one
# class-determining adjective plus neutral padding.

SEP_CLASS_WORDS = (["bad", "awful", "dull"], ["good", "great", "fine"])
SEP_FILLERS = ["the", "film", "was", "plot", "a", "story", "really"]


def make_separable_corpus(n_docs: int, seed: int, split: str = "train") -> Corpus:
    rng = random.Random(seed)
    docs = []
    for i in range(n_docs):
        label = i % 2
        n_fill = rng.randint(3, 5)
        surfaces = [rng.choice(SEP_FILLERS) for _ in range(n_fill)]
        surfaces.insert(rng.randrange(n_fill + 1), rng.choice(SEP_CLASS_WORDS[label]))
        words = tuple(Word(surface=s, index=j) for j, s in enumerate(surfaces))
        ann = tuple(1.0 if s in SEP_CLASS_WORDS[label] else 0.0 for s in surfaces)
        pos = tuple("ADJ" if s in SEP_CLASS_WORDS[label] else "OTHER" for s in surfaces)
        docs.append(Document(id=f"{split}-{i:03d}", words=words, label=label,
                             annotation=ann, pos=pos))
    return Corpus(documents=tuple(docs), num_classes=2, split=split)
