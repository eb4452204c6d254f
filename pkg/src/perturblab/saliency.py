"""Gradient attribution methods over any ModelContract.

All methods produce word-level maps: token×dimension attributions are
summed over dimensions (signed) and averaged over each word's tokens.
Absolute values are taken only by ranking consumers, never here, so
integrated-gradients completeness survives the reduction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .model import ModelContract

SALIENCY_METHODS = ("gbp", "ixg", "ig", "sg")


class UnsupportedMethodError(RuntimeError):
    pass


@dataclass(frozen=True)
class AttributionConfig:
    sg_samples: int = 25
    sg_noise_ratio: float = 0.15
    ig_steps: int = 50
    ig_baseline: str = "zero_embedding"

    def __post_init__(self) -> None:
        if self.sg_samples < 1:
            raise ValueError("sg_samples must be >= 1")
        if self.ig_steps < 2:
            raise ValueError("ig_steps must be >= 2")
        if self.sg_noise_ratio <= 0:
            raise ValueError("sg_noise_ratio must be > 0")
        if self.ig_baseline != "zero_embedding":
            raise ValueError(f"unknown baseline {self.ig_baseline!r}")


@dataclass(frozen=True)
class SaliencyMap:
    doc_id: str
    method: str
    scores: tuple[float, ...]
    target_class: int
    completeness_residual: float | None = None

    def __post_init__(self) -> None:
        if self.method not in SALIENCY_METHODS + ("vanilla",):
            raise ValueError(f"unknown method {self.method!r}")
        if not all(np.isfinite(self.scores)):
            raise ValueError("scores must be finite")


def reduce_to_words(
    token_dim_attr: np.ndarray, spans: Sequence[tuple[int, int]]
) -> list[float]:
    """Sum attributions over embedding dims per token, then average the
    token scores inside each word's span. Spans must partition the token
    axis."""
    attr = np.asarray(token_dim_attr, dtype=np.float64)
    n_tokens = attr.shape[0]
    covered = sorted(spans)
    cursor = 0
    for start, end in covered:
        if start != cursor or end <= start:
            raise ValueError(f"spans must partition tokens, bad range ({start},{end})")
        cursor = end
    if cursor != n_tokens:
        raise ValueError(f"spans cover {cursor} tokens, attributions have {n_tokens}")
    token_scores = attr.sum(axis=1)
    return [float(token_scores[s:e].mean()) for s, e in spans]


def _finish(
    model: ModelContract,
    words: Sequence[str],
    attr: np.ndarray,
    doc_id: str,
    method: str,
    target_class: int,
    residual: float | None = None,
) -> SaliencyMap:
    scores = reduce_to_words(attr, model.token_spans(words))
    return SaliencyMap(
        doc_id=doc_id,
        method=method,
        scores=tuple(scores),
        target_class=target_class,
        completeness_residual=residual,
    )


def vanilla_gradient(
    model: ModelContract, words: Sequence[str], target_class: int, doc_id: str = ""
) -> SaliencyMap:
    emb = model.embed_words(words)
    grad = model.gradient(emb, target_class, "standard")
    return _finish(model, words, grad, doc_id, "vanilla", target_class)


def smoothgrad(
    model: ModelContract,
    words: Sequence[str],
    target_class: int,
    cfg: AttributionConfig = AttributionConfig(),
    seed: int = 0,
    doc_id: str = "",
) -> SaliencyMap:
    """Mean gradient over sg_samples noisy copies of the embeddings.
    Noise is Gaussian with sigma = sg_noise_ratio * (max - min embedding
    coordinate of this input)."""
    emb = model.embed_words(words)
    sigma = cfg.sg_noise_ratio * float(emb.max() - emb.min())
    rng = np.random.default_rng(seed)
    total = np.zeros_like(emb)
    for _ in range(cfg.sg_samples):
        noisy = emb + rng.normal(0.0, sigma, size=emb.shape) if sigma > 0 else emb
        total += model.gradient(noisy, target_class, "standard")
    return _finish(model, words, total / cfg.sg_samples, doc_id, "sg", target_class)


def guided_backprop(
    model: ModelContract, words: Sequence[str], target_class: int, doc_id: str = ""
) -> SaliencyMap:
    """Backward pass that zeroes gradients entering rectifier units when
    the unit was inactive or the incoming gradient is negative."""
    if not model.supports_guided:
        raise UnsupportedMethodError("model does not expose a guided gradient mode")
    emb = model.embed_words(words)
    grad = model.gradient(emb, target_class, "guided")
    return _finish(model, words, grad, doc_id, "gbp", target_class)


def input_x_gradient(
    model: ModelContract, words: Sequence[str], target_class: int, doc_id: str = ""
) -> SaliencyMap:
    emb = model.embed_words(words)
    grad = model.gradient(emb, target_class, "standard")
    return _finish(model, words, emb * grad, doc_id, "ixg", target_class)


def integrated_gradients(
    model: ModelContract,
    words: Sequence[str],
    target_class: int,
    cfg: AttributionConfig = AttributionConfig(),
    doc_id: str = "",
) -> SaliencyMap:
    """Riemann-midpoint path integral from the zero-embedding baseline.
    The absolute completeness residual |sum(attr) - (F(x) - F(0))| is
    recorded on the returned map."""
    emb = model.embed_words(words)
    baseline = np.zeros_like(emb)
    total = np.zeros_like(emb)
    m = cfg.ig_steps
    for k in range(m):
        t = (k + 0.5) / m
        total += model.gradient(baseline + t * (emb - baseline), target_class, "standard")
    attr = (emb - baseline) * total / m
    f_x = float(model.forward(emb)[target_class])
    f_0 = float(model.forward(baseline)[target_class])
    residual = abs(float(attr.sum()) - (f_x - f_0))
    return _finish(model, words, attr, doc_id, "ig", target_class, residual)


def compute_saliency(
    model: ModelContract,
    words: Sequence[str],
    method: str,
    target_class: int,
    cfg: AttributionConfig = AttributionConfig(),
    seed: int = 0,
    doc_id: str = "",
) -> SaliencyMap:
    if method == "sg":
        return smoothgrad(model, words, target_class, cfg, seed, doc_id)
    if method == "gbp":
        return guided_backprop(model, words, target_class, doc_id)
    if method == "ixg":
        return input_x_gradient(model, words, target_class, doc_id)
    if method == "ig":
        return integrated_gradients(model, words, target_class, cfg, doc_id)
    raise ValueError(f"unknown method {method!r}")


def write_saliency_dump(
    maps: Sequence[SaliencyMap], cfg: AttributionConfig, path: str | Path
) -> None:
    """One JSON line per map, with the attribution config echoed."""
    echo = {
        "sg_samples": cfg.sg_samples,
        "sg_noise_ratio": cfg.sg_noise_ratio,
        "ig_steps": cfg.ig_steps,
        "ig_baseline": cfg.ig_baseline,
    }
    with open(path, "w", encoding="utf-8") as fh:
        for m in maps:
            fh.write(
                json.dumps(
                    {
                        "doc_id": m.doc_id,
                        "method": m.method,
                        "target_class": m.target_class,
                        "scores": list(m.scores),
                        "completeness_residual": m.completeness_residual,
                        "config": echo,
                    },
                    sort_keys=True,
                )
                + "\n"
            )


def read_saliency_dump(path: str | Path) -> list[SaliencyMap]:
    maps = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            rec = json.loads(line)
            maps.append(
                SaliencyMap(
                    doc_id=rec["doc_id"],
                    method=rec["method"],
                    scores=tuple(rec["scores"]),
                    target_class=rec["target_class"],
                    completeness_residual=rec.get("completeness_residual"),
                )
            )
    return maps
