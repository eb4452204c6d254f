import math

import numpy as np
import pytest

from perturblab import (
    MASK_TOKEN,
    UNK_TOKEN,
    TinyClassifier,
    UncertaintyRecord,
    epistemic_uncertainty,
    predictive_uncertainty,
)


def _direct_entropy(probs):
    return -sum(p * math.log(p) for p in probs if p > 0)


def test_uniform_logits_hit_upper_bound():
    for C in (2, 3, 5, 7):
        h = predictive_uncertainty(np.zeros(C))
        assert abs(h - math.log(C)) < 1e-12
        h = predictive_uncertainty(np.full(C, 3.7))
        assert abs(h - math.log(C)) < 1e-12


def test_confident_logits_near_zero():
    assert predictive_uncertainty(np.array([1000.0, 0.0])) < 1e-6
    assert predictive_uncertainty(np.array([0.0, -1000.0, -1000.0])) < 1e-6


def test_extreme_logits_do_not_overflow():
    h = predictive_uncertainty(np.array([1e308, 0.0, -1e308]))
    assert h == 0.0
    h = predictive_uncertainty(np.array([-1e308, -1e308]))
    assert math.isfinite(h)


def test_predictive_matches_direct_oracle(np_rng):
    for _ in range(200):
        C = int(np_rng.integers(2, 6))
        logits = np_rng.normal(0.0, 3.0, size=C)
        e = np.exp(logits - logits.max())
        probs = e / e.sum()
        assert abs(predictive_uncertainty(logits) - _direct_entropy(probs)) < 1e-12


def test_predictive_shift_invariance(np_rng):
    for _ in range(50):
        logits = np_rng.normal(size=4)
        shifted = logits + 123.456
        diff = abs(predictive_uncertainty(logits) - predictive_uncertainty(shifted))
        assert diff < 1e-12


def test_predictive_rejects_non_finite():
    with pytest.raises(ValueError):
        predictive_uncertainty(np.array([np.nan, 0.0]))
    with pytest.raises(ValueError):
        predictive_uncertainty(np.array([np.inf, 0.0]))


def test_epistemic_identical_rows_equals_row_entropy():
    row = np.array([0.7, 0.2, 0.1])
    stack = np.tile(row, (6, 1))
    assert abs(epistemic_uncertainty(stack) - _direct_entropy(row)) < 1e-12


def test_epistemic_disagreeing_onehots_maximal():
    stack = np.array([[1.0, 0.0], [0.0, 1.0]])
    assert abs(epistemic_uncertainty(stack) - math.log(2)) < 1e-12


def test_epistemic_matches_direct_oracle(np_rng):
    for _ in range(200):
        T = int(np_rng.integers(1, 9))
        C = int(np_rng.integers(2, 5))
        raw = np_rng.random((T, C)) + 1e-3
        stack = raw / raw.sum(axis=1, keepdims=True)
        expected = _direct_entropy(stack.mean(axis=0))
        assert abs(epistemic_uncertainty(stack) - expected) < 1e-12


def test_epistemic_mean_of_entropies_variant(np_rng):
    raw = np_rng.random((5, 3)) + 1e-3
    stack = raw / raw.sum(axis=1, keepdims=True)
    expected = np.mean([_direct_entropy(row) for row in stack])
    got = epistemic_uncertainty(stack, mean_of_entropies=True)
    assert abs(got - expected) < 1e-12
    # Jensen: entropy of the mean dominates the mean of entropies
    assert epistemic_uncertainty(stack) >= got - 1e-12


def test_epistemic_permutation_invariant(np_rng):
    raw = np_rng.random((7, 3)) + 1e-3
    stack = raw / raw.sum(axis=1, keepdims=True)
    shuffled = stack[np_rng.permutation(7)]
    assert epistemic_uncertainty(stack) == epistemic_uncertainty(shuffled)


def test_epistemic_input_validation():
    with pytest.raises(ValueError):
        epistemic_uncertainty(np.array([0.5, 0.5]))  # 1-D
    with pytest.raises(ValueError):
        epistemic_uncertainty(np.zeros((0, 2)))
    with pytest.raises(ValueError):
        epistemic_uncertainty(np.array([[0.9, 0.3]]))  # rows must sum to 1


def test_bounds_hold_on_random_inputs(np_rng):
    for _ in range(1000):
        C = int(np_rng.integers(2, 6))
        logits = np_rng.normal(0.0, float(np_rng.uniform(0.1, 50.0)), size=C)
        h = predictive_uncertainty(logits)
        assert 0.0 <= h <= math.log(C)
        T = int(np_rng.integers(1, 6))
        raw = np_rng.random((T, C)) + 1e-9
        stack = raw / raw.sum(axis=1, keepdims=True)
        e = epistemic_uncertainty(stack)
        assert 0.0 <= e <= math.log(C)


def test_mc_pipeline_end_to_end():
    rng = np.random.default_rng(0)
    vocab = {MASK_TOKEN: 0, UNK_TOKEN: 1, "w": 2, "v": 3}
    E = rng.normal(0.0, 0.5, size=(4, 6))
    W1 = rng.normal(0.0, 0.5, size=(6, 8))
    W2 = rng.normal(0.0, 0.5, size=(8, 3))
    m = TinyClassifier(vocab, E, W1, np.zeros(8), W2, np.zeros(3), dropout=0.4)
    stack = m.mc_softmax(["w", "v", "w"], T=50, seed=1)
    e = epistemic_uncertainty(stack)
    assert 0.0 <= e <= math.log(3)
    rec = UncertaintyRecord(
        predictive=predictive_uncertainty(m.forward(m.embed_words(["w", "v"]))),
        epistemic=e,
        passes=50,
        predicted_class=0,
    )
    rec.validate_bounds(3)


def test_uncertainty_record_bounds():
    rec = UncertaintyRecord(predictive=0.5, epistemic=0.1, passes=10, predicted_class=0)
    rec.validate_bounds(2)
    bad = UncertaintyRecord(predictive=0.8, epistemic=0.1, passes=10, predicted_class=0)
    with pytest.raises(ValueError):
        bad.validate_bounds(2)  # 0.8 > ln 2
    neg = UncertaintyRecord(predictive=-0.1, epistemic=0.1, passes=10, predicted_class=0)
    with pytest.raises(ValueError):
        neg.validate_bounds(2)
