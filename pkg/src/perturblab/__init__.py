"""perturblab: text perturbation, gradient saliency, and uncertainty
evaluation for word-level classifiers."""

__version__ = "0.1.0"

from .corpus import (
    POS_TAGS,
    Corpus,
    CorpusError,
    Document,
    PosLexicon,
    Word,
    load_corpus,
    load_pos_lexicon,
    save_corpus,
    tag_pos,
    tokenize_words,
)
from .hierarchy import (
    ALPHA_LEVELS,
    HIERARCHY_KINDS,
    Hierarchy,
    rank_gradient,
    rank_human,
    rank_random,
    select_count,
)
from .noise import (
    L33T_MAP,
    MASK_TOKEN,
    NOISE_KINDS,
    QWERTY_ADJACENT,
    UNK_TOKEN,
    apply_butterfingers,
    apply_charinsert,
    apply_charswap,
    apply_l33t,
    apply_token,
)
from .synonyms import SynonymResources, apply_synonym, load_synonym_resources
from .perturb import PerturbedDoc, derive_seed, perturb, stable_hash64
from .model import (
    ModelContract,
    TinyClassifier,
    TrainConfig,
    check_gradients,
    load_checkpoint,
    predict,
    save_checkpoint,
    softmax,
    train,
)
from .saliency import (
    SALIENCY_METHODS,
    AttributionConfig,
    SaliencyMap,
    UnsupportedMethodError,
    compute_saliency,
    guided_backprop,
    input_x_gradient,
    integrated_gradients,
    reduce_to_words,
    smoothgrad,
    vanilla_gradient,
)
from .uncertainty import UncertaintyRecord, epistemic_uncertainty, predictive_uncertainty
from .metrics import (
    CorrelationResult,
    accuracy,
    average_precision,
    ks_normality,
    midranks,
    noise_correlation,
    pearson,
    robustness,
    spearman,
)
from .harness import (
    ExperimentConfig,
    ExperimentRecord,
    SweepResult,
    aggregate_cells,
    compare_hierarchies,
    load_records,
    report_correlations,
    report_high_alpha,
    run_sweep,
)
from .bridge import BridgeError, BridgeModel
