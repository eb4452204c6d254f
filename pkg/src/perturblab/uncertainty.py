"""Predictive and epistemic uncertainty of a classifier output.

Both are entropies in nats. Predictive uses the deterministic softmax;
epistemic uses the mean softmax over stochastic dropout passes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def _entropy(probs: np.ndarray) -> float:
    p = np.asarray(probs, dtype=np.float64)
    nz = p[p > 0.0]
    h = float(-(nz * np.log(nz)).sum())
    # Clamp away float dust so the [0, ln C] bound holds exactly.
    return min(max(h, 0.0), math.log(p.shape[0]))


def predictive_uncertainty(logits) -> float:
    """Entropy of softmax(logits), computed through a shifted
    log-sum-exp so huge logits cannot overflow."""
    z = np.asarray(logits, dtype=np.float64)
    if not np.all(np.isfinite(z)):
        raise ValueError("logits must be finite")
    # The shift can round to -inf for astronomically spread logits; that is
    # the right answer (probability zero), so the overflow is harmless.
    with np.errstate(over="ignore"):
        z = z - z.max()
    log_norm = math.log(np.exp(z).sum())
    log_p = z - log_norm
    return _entropy(np.exp(log_p))


def epistemic_uncertainty(mc_softmaxes, mean_of_entropies: bool = False) -> float:
    """Entropy of the mean of the stochastic-pass softmax vectors.

    mean_of_entropies flips to the alternative reading (average the
    per-pass entropies instead); kept for sensitivity checks only.
    """
    stack = np.asarray(mc_softmaxes, dtype=np.float64)
    if stack.ndim != 2 or stack.shape[0] < 1:
        raise ValueError("need at least one probability vector")
    sums = stack.sum(axis=1)
    if np.any(np.abs(sums - 1.0) > 1e-6):
        raise ValueError("rows must sum to 1 within 1e-6")
    if mean_of_entropies:
        return float(np.mean([_entropy(row) for row in stack]))
    return _entropy(stack.mean(axis=0))


@dataclass(frozen=True)
class UncertaintyRecord:
    predictive: float
    epistemic: float
    passes: int
    predicted_class: int

    def validate_bounds(self, num_classes: int) -> None:
        top = math.log(num_classes)
        for name, value in (("predictive", self.predictive), ("epistemic", self.epistemic)):
            if not 0.0 <= value <= top:
                raise ValueError(f"{name} uncertainty {value} outside [0, ln {num_classes}]")
