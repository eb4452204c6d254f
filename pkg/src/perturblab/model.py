"""Differentiable-model contract plus a small built-in text classifier.

The built-in model is mean-pooled word embeddings into one rectifier
hidden layer with dropout, then linear logits. hidden_size=0 drops the
rectifier entirely, giving a purely linear model (useful because several
attribution methods collapse onto each other there). All math is
float64 numpy with hand-written gradients.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol, Sequence, runtime_checkable

import numpy as np

from .noise import MASK_TOKEN, UNK_TOKEN

CHECKPOINT_VERSION = 1


@runtime_checkable
class ModelContract(Protocol):
    """What saliency/uncertainty need from any model, local or remote.

    forward/gradient operate on explicit embedding matrices so callers
    can evaluate off-manifold points (noisy or interpolated embeddings).
    gradient returns d logits[target] / d embeddings with the requested
    gradient mode; mc_softmax runs stochastic passes server-side.
    """

    @property
    def num_classes(self) -> int: ...

    @property
    def embedding_dim(self) -> int: ...

    @property
    def supports_guided(self) -> bool: ...

    def token_spans(self, words: Sequence[str]) -> list[tuple[int, int]]: ...

    def embed_words(self, words: Sequence[str]) -> np.ndarray: ...

    def forward(self, embeddings: np.ndarray) -> np.ndarray: ...

    def gradient(
        self, embeddings: np.ndarray, target_class: int, mode: str = "standard"
    ) -> np.ndarray: ...

    def mc_softmax(self, words: Sequence[str], T: int, seed: int) -> np.ndarray: ...

    def hotflip_scores(self, words: Sequence[str], gold_label: int) -> np.ndarray: ...


def softmax(logits: np.ndarray) -> np.ndarray:
    z = np.asarray(logits, dtype=np.float64)
    z = z - z.max()
    e = np.exp(z)
    return e / e.sum()


@dataclass
class TrainConfig:
    learning_rate: float = 0.05
    batch_size: int = 16
    epochs: int = 30
    seed: int = 0
    dropout: float = 0.1
    embedding_dim: int = 16
    hidden_size: int = 16

    def __post_init__(self) -> None:
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be > 0")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if not 0 <= self.dropout < 1:
            raise ValueError("dropout must be in [0, 1)")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")


class TinyClassifier:
    """Mean-pooled embedding classifier with exact manual gradients.

    Words map to single tokens; unknown surfaces (tried verbatim, then
    lowercased) fall back to the [UNK] row. hidden_size=0 means logits
    are a linear function of the pooled embedding.
    """

    def __init__(
        self,
        vocab: dict[str, int],
        E: np.ndarray,
        W1: np.ndarray | None,
        b1: np.ndarray | None,
        W2: np.ndarray,
        b2: np.ndarray,
        dropout: float = 0.0,
    ) -> None:
        if not 0 <= dropout < 1:
            raise ValueError("dropout must be in [0, 1)")
        for name in (MASK_TOKEN, UNK_TOKEN):
            if name not in vocab:
                raise ValueError(f"vocab must contain {name}")
        self.vocab = dict(vocab)
        self.E = np.asarray(E, dtype=np.float64)
        self.W1 = None if W1 is None else np.asarray(W1, dtype=np.float64)
        self.b1 = None if b1 is None else np.asarray(b1, dtype=np.float64)
        self.W2 = np.asarray(W2, dtype=np.float64)
        self.b2 = np.asarray(b2, dtype=np.float64)
        self.dropout = float(dropout)
        self.final_train_accuracy: float | None = None
        for arr in (self.E, self.W1, self.b1, self.W2, self.b2):
            if arr is not None and not np.all(np.isfinite(arr)):
                raise ValueError("parameters must be finite")

    # --- contract properties ---

    @property
    def num_classes(self) -> int:
        return self.W2.shape[1]

    @property
    def embedding_dim(self) -> int:
        return self.E.shape[1]

    @property
    def hidden_size(self) -> int:
        return 0 if self.W1 is None else self.W1.shape[1]

    @property
    def supports_guided(self) -> bool:
        return True

    # --- encoding ---

    def encode(self, words: Sequence[str]) -> list[int]:
        if len(words) == 0:
            raise ValueError("cannot encode an empty document")
        unk = self.vocab[UNK_TOKEN]
        ids = []
        for w in words:
            ids.append(self.vocab.get(w, self.vocab.get(w.lower(), unk)))
        return ids

    def token_spans(self, words: Sequence[str]) -> list[tuple[int, int]]:
        return [(i, i + 1) for i in range(len(words))]

    def embed_words(self, words: Sequence[str]) -> np.ndarray:
        return self.E[self.encode(words)].copy()

    # --- forward / backward ---

    def _hidden(self, embeddings: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        pooled = np.asarray(embeddings, dtype=np.float64).mean(axis=0)
        if self.W1 is None:
            return pooled, pooled
        z1 = pooled @ self.W1 + self.b1
        return pooled, z1

    def forward(
        self,
        embeddings: np.ndarray,
        dropout: bool = False,
        rng: np.random.Generator | None = None,
    ) -> np.ndarray:
        pooled, z1 = self._hidden(embeddings)
        if self.W1 is None:
            return pooled @ self.W2 + self.b2
        a1 = np.maximum(z1, 0.0)
        if dropout and self.dropout > 0.0:
            if rng is None:
                raise ValueError("dropout forward needs a generator")
            keep = rng.random(a1.shape[0]) >= self.dropout
            a1 = a1 * keep / (1.0 - self.dropout)
        return a1 @ self.W2 + self.b2

    def _backward(
        self, embeddings: np.ndarray, dlogits: np.ndarray, mode: str
    ) -> np.ndarray:
        """d(dlogits . logits)/d embeddings, dropout off.

        guided mode additionally zeroes gradients flowing into rectifier
        units whenever the unit was inactive or the incoming gradient is
        negative.
        """
        if mode not in ("standard", "guided"):
            raise ValueError(f"unknown gradient mode {mode!r}")
        emb = np.asarray(embeddings, dtype=np.float64)
        n = emb.shape[0]
        if self.W1 is None:
            dpooled = self.W2 @ dlogits
        else:
            _, z1 = self._hidden(emb)
            da1 = self.W2 @ dlogits
            gate = z1 > 0.0
            if mode == "guided":
                gate = gate & (da1 > 0.0)
            dz1 = da1 * gate
            dpooled = self.W1 @ dz1
        return np.tile(dpooled / n, (n, 1))

    def gradient(
        self, embeddings: np.ndarray, target_class: int, mode: str = "standard"
    ) -> np.ndarray:
        onehot = np.zeros(self.num_classes)
        onehot[target_class] = 1.0
        return self._backward(embeddings, onehot, mode)

    def loss_gradient(self, embeddings: np.ndarray, gold_label: int) -> np.ndarray:
        """d cross-entropy(gold) / d embeddings."""
        probs = softmax(self.forward(embeddings))
        dlogits = probs.copy()
        dlogits[gold_label] -= 1.0
        return self._backward(embeddings, dlogits, "standard")

    # --- derived operations ---

    def mc_softmax(self, words: Sequence[str], T: int, seed: int) -> np.ndarray:
        if T < 1:
            raise ValueError("T must be >= 1")
        emb = self.embed_words(words)
        rng = np.random.default_rng(seed)
        return np.stack(
            [softmax(self.forward(emb, dropout=True, rng=rng)) for _ in range(T)]
        )

    def hotflip_scores(self, words: Sequence[str], gold_label: int) -> np.ndarray:
        """Per-word mean first-order loss change over all vocabulary
        substitution candidates: mean_v (e_v - e_x) . dL/de_x. With one
        token per word the word score is the token score."""
        emb = self.embed_words(words)
        grad = self.loss_gradient(emb, gold_label)
        delta = self.E.mean(axis=0)[None, :] - emb
        return np.einsum("td,td->t", delta, grad)


def predict(model: ModelContract, words: Sequence[str]) -> tuple[np.ndarray, int]:
    if len(words) == 0:
        raise ValueError("cannot predict on an empty document")
    logits = model.forward(model.embed_words(words))
    if not np.all(np.isfinite(logits)):
        raise ValueError("non-finite logits")
    return logits, int(np.argmax(logits))


def build_vocab(corpus) -> dict[str, int]:
    seen: dict[str, int] = {MASK_TOKEN: 0, UNK_TOKEN: 1}
    for doc in corpus.documents:
        for w in doc.words:
            key = w.surface.lower()
            if key not in seen:
                seen[key] = len(seen)
    return seen


def train(corpus, cfg: TrainConfig) -> TinyClassifier:
    """Minibatch SGD on cross-entropy. Deterministic given cfg.seed."""
    if corpus.split != "train":
        raise ValueError("train() expects the train split")
    rng = np.random.default_rng(cfg.seed)
    vocab = build_vocab(corpus)
    V, d, h, C = len(vocab), cfg.embedding_dim, cfg.hidden_size, corpus.num_classes

    E = rng.normal(0.0, 0.1, size=(V, d))
    # Special tokens start at zero: a masked word then dilutes the pooled
    # representation instead of injecting a fixed random direction.
    E[vocab[MASK_TOKEN]] = 0.0
    E[vocab[UNK_TOKEN]] = 0.0
    if h > 0:
        W1 = rng.normal(0.0, 1.0 / np.sqrt(d), size=(d, h))
        b1 = np.zeros(h)
        W2 = rng.normal(0.0, 1.0 / np.sqrt(h), size=(h, C))
    else:
        W1 = b1 = None
        W2 = rng.normal(0.0, 1.0 / np.sqrt(d), size=(d, C))
    b2 = np.zeros(C)

    model = TinyClassifier(vocab, E, W1, b1, W2, b2, dropout=cfg.dropout)
    token_ids = [model.encode(doc.surfaces) for doc in corpus.documents]
    labels = np.array([doc.label for doc in corpus.documents])
    n_docs = len(token_ids)

    for epoch in range(cfg.epochs):
        order = rng.permutation(n_docs)
        for start in range(0, n_docs, cfg.batch_size):
            batch = order[start : start + cfg.batch_size]
            B = len(batch)
            pooled = np.stack([model.E[token_ids[i]].mean(axis=0) for i in batch])
            if h > 0:
                z1 = pooled @ model.W1 + model.b1
                a1 = np.maximum(z1, 0.0)
                if cfg.dropout > 0.0:
                    keep = rng.random(a1.shape) >= cfg.dropout
                    a1 = a1 * keep / (1.0 - cfg.dropout)
                logits = a1 @ model.W2 + model.b2
            else:
                logits = pooled @ model.W2 + model.b2

            shifted = logits - logits.max(axis=1, keepdims=True)
            log_z = np.log(np.exp(shifted).sum(axis=1))
            loss = float(
                np.mean(log_z - shifted[np.arange(B), labels[batch]])
            )
            if not np.isfinite(loss):
                raise RuntimeError(
                    f"non-finite loss at epoch {epoch}, batch offset {start}: {loss}"
                )

            probs = np.exp(shifted) / np.exp(shifted).sum(axis=1, keepdims=True)
            dlogits = probs
            dlogits[np.arange(B), labels[batch]] -= 1.0
            dlogits /= B

            if h > 0:
                dW2 = a1.T @ dlogits
                db2 = dlogits.sum(axis=0)
                da1 = dlogits @ model.W2.T
                dz1 = da1 * (z1 > 0.0)
                if cfg.dropout > 0.0:
                    dz1 = dz1 * keep / (1.0 - cfg.dropout)
                dW1 = pooled.T @ dz1
                db1 = dz1.sum(axis=0)
                dpooled = dz1 @ model.W1.T
                model.W1 -= cfg.learning_rate * dW1
                model.b1 -= cfg.learning_rate * db1
            else:
                dW2 = pooled.T @ dlogits
                db2 = dlogits.sum(axis=0)
                dpooled = dlogits @ model.W2.T
            model.W2 -= cfg.learning_rate * dW2
            model.b2 -= cfg.learning_rate * db2
            for row, i in enumerate(batch):
                ids = token_ids[i]
                np.add.at(
                    model.E, ids, -cfg.learning_rate * dpooled[row] / len(ids)
                )

    correct = 0
    for ids, label in zip(token_ids, labels):
        logits = model.forward(model.E[ids])
        if int(np.argmax(logits)) == label:
            correct += 1
    model.final_train_accuracy = correct / n_docs
    return model


def check_gradients(
    model: TinyClassifier, words: Sequence[str], eps: float = 1e-5
) -> float:
    """Max relative error of analytic embedding gradients vs central
    finite differences of each target logit."""
    if not 1e-7 <= eps <= 1e-3:
        raise ValueError("eps out of supported range")
    emb = model.embed_words(words)
    worst = 0.0
    for target in range(model.num_classes):
        analytic = model.gradient(emb, target)
        for t in range(emb.shape[0]):
            for j in range(emb.shape[1]):
                bumped = emb.copy()
                bumped[t, j] += eps
                hi = model.forward(bumped)[target]
                bumped[t, j] -= 2 * eps
                lo = model.forward(bumped)[target]
                numeric = (hi - lo) / (2 * eps)
                denom = max(abs(analytic[t, j]), abs(numeric))
                if denom > 0.0:
                    worst = max(worst, abs(analytic[t, j] - numeric) / denom)
    return worst


# --- checkpoint io ---


def save_checkpoint(model: TinyClassifier, path: str | Path) -> None:
    meta = {
        "version": CHECKPOINT_VERSION,
        "dropout": model.dropout,
        "vocab": sorted(model.vocab, key=model.vocab.get),
        "final_train_accuracy": model.final_train_accuracy,
        "linear": model.W1 is None,
    }
    arrays = {"E": model.E, "W2": model.W2, "b2": model.b2}
    if model.W1 is not None:
        arrays["W1"] = model.W1
        arrays["b1"] = model.b1
    np.savez(path, meta=np.array(json.dumps(meta)), **arrays)


def load_checkpoint(path: str | Path) -> TinyClassifier:
    with np.load(path, allow_pickle=False) as data:
        meta = json.loads(str(data["meta"]))
        if meta["version"] != CHECKPOINT_VERSION:
            raise ValueError(f"unsupported checkpoint version {meta['version']}")
        vocab = {w: i for i, w in enumerate(meta["vocab"])}
        model = TinyClassifier(
            vocab=vocab,
            E=data["E"],
            W1=None if meta["linear"] else data["W1"],
            b1=None if meta["linear"] else data["b1"],
            W2=data["W2"],
            b2=data["b2"],
            dropout=meta["dropout"],
        )
        model.final_train_accuracy = meta.get("final_train_accuracy")
    return model
