import numpy as np
import pytest

from perturblab import (
    Document,
    TrainConfig,
    Word,
    load_synonym_resources,
    train,
)
from toycorpus import make_separable_corpus

EXEMPLAR_TEXT = (
    "an artful intelligent film that stays within the confines of a "
    "well-established genre"
)
EXEMPLAR_POS = (
    "DET", "ADJ", "ADJ", "NOUN", "WDT", "VERB", "OTHER",
    "DET", "NOUN", "OTHER", "DET", "ADJ", "NOUN",
)
# Human annotation marks the three judgement-bearing adjectives.
EXEMPLAR_SALIENT = (1, 2, 11)


def build_exemplar_doc() -> Document:
    surfaces = EXEMPLAR_TEXT.split()
    words = tuple(Word(surface=s, index=i) for i, s in enumerate(surfaces))
    annotation = tuple(
        1.0 if i in EXEMPLAR_SALIENT else 0.0 for i in range(len(surfaces))
    )
    return Document(
        id="exemplar", words=words, label=1, annotation=annotation, pos=EXEMPLAR_POS
    )


@pytest.fixture
def exemplar_doc() -> Document:
    return build_exemplar_doc()


@pytest.fixture(scope="session")
def resources():
    return load_synonym_resources()


@pytest.fixture(scope="session")
def sep_model():
    corpus = make_separable_corpus(40, seed=7)
    cfg = TrainConfig(
        learning_rate=0.3, epochs=60, seed=3, dropout=0.1,
        embedding_dim=12, hidden_size=8,
    )
    return train(corpus, cfg)


@pytest.fixture(scope="session")
def linear_model():
    corpus = make_separable_corpus(40, seed=7)
    cfg = TrainConfig(
        learning_rate=0.3, epochs=40, seed=5, dropout=0.0,
        embedding_dim=12, hidden_size=0,
    )
    return train(corpus, cfg)


@pytest.fixture
def np_rng():
    return np.random.default_rng(20240311)
