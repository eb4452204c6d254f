"""Evaluation metrics and the statistical tests used by the reports.

Undefined values (correlation of a constant vector, AP with no relevant
word) are returned as None so aggregators can exclude and count them
instead of silently coercing to 0.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .saliency import SaliencyMap


@dataclass(frozen=True)
class CorrelationResult:
    coefficient: float
    n: int
    p_value: float | None = None

    def __post_init__(self) -> None:
        if abs(self.coefficient) > 1.0 + 1e-12:
            raise ValueError("coefficient outside [-1, 1]")
        if self.n < 2:
            raise ValueError("n must be >= 2")


def accuracy(predictions: Sequence[int], labels: Sequence[int]) -> float:
    if len(predictions) != len(labels):
        raise ValueError("length mismatch")
    if len(predictions) == 0:
        raise ValueError("need at least one prediction")
    return sum(p == l for p, l in zip(predictions, labels)) / len(predictions)


def average_precision(
    scores: Sequence[float], relevant: Sequence[bool]
) -> float | None:
    """AP of the |score|-descending ranking (ties broken by position)
    against the relevance flags. None when nothing is relevant."""
    if len(scores) != len(relevant):
        raise ValueError("length mismatch")
    total_relevant = sum(bool(r) for r in relevant)
    if total_relevant == 0:
        return None
    order = sorted(range(len(scores)), key=lambda i: (-abs(scores[i]), i))
    hits = 0
    ap = 0.0
    for rank, i in enumerate(order, start=1):
        if relevant[i]:
            hits += 1
            ap += hits / rank
    return ap / total_relevant


def _moments(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    dx = x - x.mean()
    dy = y - y.mean()
    return float(dx @ dx), float(dy @ dy), float(dx @ dy)


def pearson(x: Sequence[float], y: Sequence[float]) -> CorrelationResult | None:
    """Sample Pearson coefficient, or None if either input is constant.

    The sxy/sqrt(sxx*syy) form returns exactly 1.0 when x and y are the
    same array (sqrt of a correctly-rounded square is exact)."""
    xa = np.asarray(x, dtype=np.float64)
    ya = np.asarray(y, dtype=np.float64)
    if xa.shape != ya.shape:
        raise ValueError("length mismatch")
    if xa.size < 2:
        raise ValueError("need n >= 2")
    # The exact element check matters: the mean of a constant array can
    # round away from the constant, leaving sxx tiny but nonzero.
    if np.all(xa == xa[0]) or np.all(ya == ya[0]):
        return None
    sxx, syy, sxy = _moments(xa, ya)
    if sxx == 0.0 or syy == 0.0:
        return None
    r = sxy / math.sqrt(sxx * syy)
    r = max(-1.0, min(1.0, r))
    return CorrelationResult(coefficient=r, n=xa.size)


def midranks(values: Sequence[float]) -> list[float]:
    """Ranks starting at 1, ties receiving the average of their ranks."""
    n = len(values)
    order = sorted(range(n), key=lambda i: values[i])
    ranks = [0.0] * n
    i = 0
    while i < n:
        j = i
        while j + 1 < n and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def _beta_cf(a: float, b: float, x: float) -> float:
    """Continued fraction for the regularized incomplete beta (Lentz)."""
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    result = d
    for m in range(1, 300):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        result *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        result *= delta
        if abs(delta - 1.0) < 1e-14:
            break
    return result


def betainc(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b)."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cf(a, b, x) / a
    return 1.0 - front * _beta_cf(b, a, 1.0 - x) / b


def _t_two_sided_p(t: float, df: int) -> float:
    # P(|T| >= t) = I_{df/(df+t^2)}(df/2, 1/2)
    if not math.isfinite(t):
        return 0.0
    return betainc(df / 2.0, 0.5, df / (df + t * t))


@lru_cache(maxsize=128)
def _permutation_null(x_ranks: tuple[float, ...], y_ranks: tuple[float, ...]) -> np.ndarray:
    """All spearman coefficients obtainable by permuting one rank vector
    against the other; the exact null for small n."""
    ya = np.array(y_ranks)
    dy = ya - ya.mean()
    syy = float(dy @ dy)
    xs = np.array(list(itertools.permutations(x_ranks)))
    dxs = xs - xs.mean(axis=1, keepdims=True)
    sxx = (dxs * dxs).sum(axis=1)
    sxy = dxs @ dy
    return sxy / np.sqrt(sxx * syy)


def spearman(x: Sequence[float], y: Sequence[float]) -> CorrelationResult | None:
    """Pearson over midranks. Two-sided p-value: t-approximation for
    n >= 10, exact permutation enumeration below that."""
    if len(x) != len(y):
        raise ValueError("length mismatch")
    n = len(x)
    if n < 2:
        raise ValueError("need n >= 2")
    rx, ry = midranks(x), midranks(y)
    base = pearson(rx, ry)
    if base is None:
        return None
    rho = base.coefficient
    if n >= 10:
        if abs(rho) >= 1.0:
            p = 0.0
        else:
            t = rho * math.sqrt((n - 2) / (1.0 - rho * rho))
            p = _t_two_sided_p(abs(t), n - 2)
    else:
        # The null set is invariant to reordering either vector, so key
        # the cache on sorted rank multisets.
        null = _permutation_null(tuple(sorted(rx)), tuple(sorted(ry)))
        p = float(np.mean(np.abs(null) >= abs(rho) - 1e-12))
    return CorrelationResult(coefficient=rho, n=n, p_value=p)


def robustness(map_perturbed: SaliencyMap, map_base: SaliencyMap) -> float | None:
    """Pearson between word-aligned saliency scores of the perturbed and
    unperturbed document."""
    if map_perturbed.doc_id != map_base.doc_id:
        raise ValueError("maps describe different documents")
    if map_perturbed.method != map_base.method:
        raise ValueError("maps come from different methods")
    if len(map_perturbed.scores) != len(map_base.scores):
        raise ValueError("maps are not word-aligned")
    result = pearson(map_perturbed.scores, map_base.scores)
    return None if result is None else result.coefficient


def noise_correlation(
    saliency_map: SaliencyMap, perturbed_mask: Sequence[bool]
) -> float | None:
    """Pearson between |score| and the 0/1 perturbed-word indicator."""
    if len(saliency_map.scores) != len(perturbed_mask):
        raise ValueError("mask is not word-aligned")
    mask = [1.0 if b else 0.0 for b in perturbed_mask]
    result = pearson([abs(s) for s in saliency_map.scores], mask)
    return None if result is None else result.coefficient


def _normal_cdf(x: np.ndarray, mean: float, std: float) -> np.ndarray:
    z = (x - mean) / (std * math.sqrt(2.0))
    return 0.5 * (1.0 + np.vectorize(math.erf)(z))


def _kolmogorov_sf(t: float) -> float:
    """Asymptotic Kolmogorov survival function Q(t) = 2 sum (-1)^(k-1) exp(-2 k^2 t^2)."""
    if t <= 0.0:
        return 1.0
    total = 0.0
    for k in range(1, 101):
        term = 2.0 * (-1.0) ** (k - 1) * math.exp(-2.0 * k * k * t * t)
        total += term
        if abs(term) < 1e-16:
            break
    return min(max(total, 0.0), 1.0)


def ks_normality(samples: Sequence[float]) -> tuple[float, float]:
    """One-sample KS statistic against a normal fitted with the sample
    mean and standard deviation, with the asymptotic p-value."""
    data = np.sort(np.asarray(samples, dtype=np.float64))
    n = data.size
    if n < 8:
        raise ValueError("need n >= 8")
    std = float(data.std(ddof=1))
    if std == 0.0:
        raise ValueError("zero variance")
    cdf = _normal_cdf(data, float(data.mean()), std)
    upper = np.arange(1, n + 1) / n - cdf
    lower = cdf - np.arange(0, n) / n
    statistic = float(max(upper.max(), lower.max()))
    return statistic, _kolmogorov_sf(math.sqrt(n) * statistic)
