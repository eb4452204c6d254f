"""Experiment orchestration: sweep (noise x hierarchy x alpha) over a
corpus, persist per-datapoint records, and aggregate report tables.

Reproducibility: every stochastic step is seeded from (global seed,
document id, axis values), tasks are independent per document, and the
final record file is written in one canonical sort order, so worker
count and resume points never change the output bytes.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Iterable, Sequence

from . import __version__
from .corpus import Corpus, Document, load_corpus
from .hierarchy import (
    ALPHA_LEVELS,
    HIERARCHY_KINDS,
    rank_gradient,
    rank_human,
    rank_random,
)
from .metrics import accuracy, average_precision, noise_correlation, robustness, spearman
from .model import ModelContract, load_checkpoint, predict
from .noise import NOISE_KINDS
from .perturb import derive_seed, perturb, stable_hash64
from .saliency import (
    SALIENCY_METHODS,
    AttributionConfig,
    SaliencyMap,
    UnsupportedMethodError,
    compute_saliency,
    vanilla_gradient,
)
from .synonyms import SynonymResources, load_synonym_resources
from .uncertainty import epistemic_uncertainty, predictive_uncertainty

RECORDS_NAME = "records.jsonl"
PARTIAL_NAME = "records.partial.jsonl"
MANIFEST_NAME = "manifest.json"
WORKERS_ENV = "PERTURBLAB_WORKERS"


@dataclass(frozen=True)
class ExperimentConfig:
    test_corpus: str = ""
    num_classes: int | None = None
    checkpoint: str | None = None
    bridge_cmd: tuple[str, ...] | None = None
    noises: tuple[str, ...] = NOISE_KINDS
    hierarchies: tuple[str, ...] = HIERARCHY_KINDS
    alphas: tuple[float, ...] = ALPHA_LEVELS
    methods: tuple[str, ...] = SALIENCY_METHODS
    attribution: AttributionConfig = field(default_factory=AttributionConfig)
    mc_passes: int = 20
    seed: int = 0
    output_dir: str = "runs/out"
    correct_only: bool = False
    relevance_threshold: float = 0.5
    target_mode: str = "predicted"
    micro_average: bool = False
    epistemic_mean_of_entropies: bool = False
    synonyms_path: str | None = None
    entailments_path: str | None = None

    def __post_init__(self) -> None:
        for a in self.alphas:
            if not 0.0 <= a < 1.0:
                raise ValueError(f"alpha {a} outside [0, 1)")
        for name, values, known in (
            ("noise", self.noises, NOISE_KINDS),
            ("hierarchy", self.hierarchies, HIERARCHY_KINDS),
            ("method", self.methods, SALIENCY_METHODS),
        ):
            if not values:
                raise ValueError(f"at least one {name} required")
            for v in values:
                if v not in known:
                    raise ValueError(f"unknown {name} {v!r}")
        if self.target_mode not in ("predicted", "gold"):
            raise ValueError("target_mode must be 'predicted' or 'gold'")
        if self.mc_passes < 1:
            raise ValueError("mc_passes must be >= 1")

    def to_dict(self) -> dict:
        d = asdict(self)
        for key in ("noises", "hierarchies", "alphas", "methods", "bridge_cmd"):
            if d[key] is not None:
                d[key] = list(d[key])
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        d = dict(d)
        known = {f.name for f in fields(cls)}
        extra = sorted(set(d) - known)
        if extra:
            raise ValueError(f"unknown config keys: {', '.join(extra)}")
        if "attribution" in d and isinstance(d["attribution"], dict):
            d["attribution"] = AttributionConfig(**d["attribution"])
        for key in ("noises", "hierarchies", "alphas", "methods", "bridge_cmd"):
            if key in d and d[key] is not None:
                d[key] = tuple(d[key])
        return cls(**d)

    @classmethod
    def from_file(cls, path: str | Path) -> "ExperimentConfig":
        return cls.from_dict(json.loads(Path(path).read_text("utf-8")))


def config_hash(cfg: ExperimentConfig) -> str:
    canonical = json.dumps(cfg.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class ExperimentRecord:
    doc_id: str
    noise: str
    hierarchy: str
    alpha: float
    requested_count: int
    actual_count: int
    predicted_class: int
    correct: bool
    correct_base: bool
    predictive: float
    epistemic: float
    mc_passes: int
    methods: dict[str, dict[str, float | None]]

    def sort_key(self):
        return (self.doc_id, self.noise, self.hierarchy, self.alpha)

    def to_json_line(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json_line(cls, line: str) -> "ExperimentRecord":
        return cls(**json.loads(line))


def _mention_pool(corpus: Corpus) -> list[str]:
    handles = {
        w.surface for doc in corpus for w in doc.words if w.surface.startswith("@") and len(w.surface) > 1
    }
    return sorted(handles)


def _saliency_with_fallback(
    model: ModelContract,
    words: Sequence[str],
    method: str,
    target: int,
    cfg: AttributionConfig,
    seed: int,
    doc_id: str,
) -> SaliencyMap:
    try:
        return compute_saliency(model, words, method, target, cfg, seed, doc_id)
    except UnsupportedMethodError:
        warnings.warn(
            "model has no guided gradient mode; gbp falls back to standard gradients",
            RuntimeWarning,
        )
        fallback = vanilla_gradient(model, words, target, doc_id)
        return replace(fallback, method=method)


def _alpha0_cache_file(cache_dir: Path, doc_id: str) -> Path:
    return cache_dir / (hashlib.blake2b(doc_id.encode("utf-8"), digest_size=8).hexdigest() + ".json")


def _load_alpha0_maps(cache_dir: Path | None, doc_id: str) -> dict[str, SaliencyMap] | None:
    if cache_dir is None:
        return None
    path = _alpha0_cache_file(cache_dir, doc_id)
    if not path.exists():
        return None
    data = json.loads(path.read_text("utf-8"))
    if data.get("doc_id") != doc_id:
        return None
    return {
        method: SaliencyMap(
            doc_id=doc_id,
            method=method,
            scores=tuple(entry["scores"]),
            target_class=entry["target_class"],
            completeness_residual=entry.get("completeness_residual"),
        )
        for method, entry in data["maps"].items()
    }


def _store_alpha0_maps(cache_dir: Path | None, doc_id: str, maps: dict[str, SaliencyMap]) -> None:
    if cache_dir is None:
        return
    path = _alpha0_cache_file(cache_dir, doc_id)
    payload = {
        "doc_id": doc_id,
        "maps": {
            m.method: {
                "scores": list(m.scores),
                "target_class": m.target_class,
                "completeness_residual": m.completeness_residual,
            }
            for m in maps.values()
        },
    }
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(payload, sort_keys=True), "utf-8")
    tmp.replace(path)


def _document_records(
    doc: Document,
    model: ModelContract,
    cfg: ExperimentConfig,
    resources: SynonymResources,
    cache_dir: Path | None = None,
) -> list[ExperimentRecord]:
    """All sweep-cell records for one document. Self-contained so the
    work can be farmed out per document."""
    words0 = doc.surfaces
    logits0, pred0 = predict(model, words0)
    correct0 = pred0 == doc.label
    predictive0 = predictive_uncertainty(logits0)
    mc0 = model.mc_softmax(words0, cfg.mc_passes, stable_hash64(cfg.seed, doc.id, "mc0"))
    epistemic0 = epistemic_uncertainty(mc0, cfg.epistemic_mean_of_entropies)
    target0 = pred0 if cfg.target_mode == "predicted" else doc.label
    relevant = [a >= cfg.relevance_threshold for a in doc.annotation]

    base_maps = _load_alpha0_maps(cache_dir, doc.id)
    if base_maps is None or sorted(base_maps) != sorted(cfg.methods):
        base_maps = {
            method: _saliency_with_fallback(
                model, words0, method, target0, cfg.attribution,
                stable_hash64(cfg.seed, doc.id, "sg0"), doc.id,
            )
            for method in cfg.methods
        }
        _store_alpha0_maps(cache_dir, doc.id, base_maps)
    base_metrics: dict[str, dict[str, float | None]] = {}
    for method in cfg.methods:
        base = base_maps[method]
        base_metrics[method] = {
            "ap": average_precision(base.scores, relevant),
            "robustness": robustness(base, base),
            "noise_corr": None,  # empty mask is degenerate by construction
        }

    gradient_scores = None
    records: list[ExperimentRecord] = []
    for noise in cfg.noises:
        for hier_kind in cfg.hierarchies:
            dp_seed = derive_seed(cfg.seed, doc.id, noise, hier_kind)
            if hier_kind == "random":
                hierarchy = rank_random(doc, dp_seed)
            elif hier_kind == "human":
                hierarchy = rank_human(doc, dp_seed)
            else:
                if gradient_scores is None:
                    gradient_scores = model.hotflip_scores(words0, doc.label)
                hierarchy = rank_gradient(doc, gradient_scores)
            for alpha in cfg.alphas:
                pdoc = perturb(doc, noise, hierarchy, alpha, resources, dp_seed)
                if alpha == 0.0:
                    records.append(
                        ExperimentRecord(
                            doc_id=doc.id, noise=noise, hierarchy=hier_kind, alpha=alpha,
                            requested_count=0, actual_count=0,
                            predicted_class=pred0, correct=correct0, correct_base=correct0,
                            predictive=predictive0, epistemic=epistemic0,
                            mc_passes=cfg.mc_passes,
                            methods={m: dict(base_metrics[m]) for m in cfg.methods},
                        )
                    )
                    continue
                logits, pred = predict(model, pdoc.words)
                mc = model.mc_softmax(
                    pdoc.words, cfg.mc_passes,
                    stable_hash64(cfg.seed, doc.id, "mc", noise, hier_kind, alpha),
                )
                target = pred if cfg.target_mode == "predicted" else doc.label
                per_method: dict[str, dict[str, float | None]] = {}
                for method in cfg.methods:
                    smap = _saliency_with_fallback(
                        model, pdoc.words, method, target, cfg.attribution,
                        stable_hash64(cfg.seed, doc.id, "sg", noise, hier_kind, alpha),
                        doc.id,
                    )
                    per_method[method] = {
                        "ap": average_precision(smap.scores, relevant),
                        "robustness": robustness(smap, base_maps[method]),
                        "noise_corr": noise_correlation(smap, pdoc.perturbed_mask),
                    }
                records.append(
                    ExperimentRecord(
                        doc_id=doc.id, noise=noise, hierarchy=hier_kind, alpha=alpha,
                        requested_count=pdoc.requested_count,
                        actual_count=sum(pdoc.perturbed_mask),
                        predicted_class=pred, correct=pred == doc.label,
                        correct_base=correct0,
                        predictive=predictive_uncertainty(logits),
                        epistemic=epistemic_uncertainty(mc, cfg.epistemic_mean_of_entropies),
                        mc_passes=cfg.mc_passes,
                        methods=per_method,
                    )
                )
    return records


def _load_model(cfg: ExperimentConfig) -> ModelContract:
    if (cfg.checkpoint is None) == (cfg.bridge_cmd is None):
        raise ValueError("exactly one of checkpoint/bridge_cmd must be set")
    if cfg.checkpoint is not None:
        return load_checkpoint(cfg.checkpoint)
    from .bridge import BridgeModel

    return BridgeModel.spawn(list(cfg.bridge_cmd))


def _task(args) -> list[ExperimentRecord]:
    return _document_records(*args)


@dataclass
class SweepResult:
    records: list[ExperimentRecord]
    aggregates: dict
    records_path: Path
    manifest_path: Path


def run_sweep(
    cfg: ExperimentConfig,
    model: ModelContract | None = None,
    workers: int | None = None,
) -> SweepResult:
    """Run the full sweep, writing records.jsonl, aggregates and a run
    manifest under cfg.output_dir. Interrupted runs resume from the
    partial record file as long as the config hash matches."""
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest_path = out / MANIFEST_NAME
    records_path = out / RECORDS_NAME
    partial_path = out / PARTIAL_NAME

    corpus = load_corpus(cfg.test_corpus, split="test", num_classes=cfg.num_classes)
    if model is None:
        model = _load_model(cfg)
    if model.num_classes != corpus.num_classes:
        raise ValueError(
            f"model has {model.num_classes} classes, corpus {corpus.num_classes}"
        )
    resources = load_synonym_resources(
        cfg.synonyms_path, cfg.entailments_path
    ).with_mentions(_mention_pool(corpus))

    cells_per_doc = len(cfg.noises) * len(cfg.hierarchies) * len(cfg.alphas)
    digest = config_hash(cfg)
    if manifest_path.exists():
        old = json.loads(manifest_path.read_text("utf-8"))
        if old.get("config_hash") != digest:
            raise ValueError(
                f"{manifest_path} belongs to a different config; use a fresh output dir"
            )
    manifest = {
        "config": cfg.to_dict(),
        "config_hash": digest,
        "seed": cfg.seed,
        "package_version": __version__,
        "complete": False,
        "record_count": 0,
    }
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", "utf-8")

    done: dict[str, list[ExperimentRecord]] = {}
    if partial_path.exists():
        by_doc: dict[str, list[ExperimentRecord]] = {}
        with partial_path.open(encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    rec = ExperimentRecord.from_json_line(line)
                    by_doc.setdefault(rec.doc_id, []).append(rec)
        done = {d: rs for d, rs in by_doc.items() if len(rs) == cells_per_doc}

    pending = [doc for doc in corpus if doc.id not in done]
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, "1"))
    from .model import TinyClassifier

    if not isinstance(model, TinyClassifier):
        workers = 1  # bridge sessions and ad-hoc models stay in-process

    cache_dir = out / "alpha0_cache"
    cache_dir.mkdir(exist_ok=True)
    all_records: list[ExperimentRecord] = [r for rs in done.values() for r in rs]
    with partial_path.open("a", encoding="utf-8") as partial:
        if workers > 1 and len(pending) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                for recs in pool.map(
                    _task, [(doc, model, cfg, resources, cache_dir) for doc in pending]
                ):
                    for r in recs:
                        partial.write(r.to_json_line() + "\n")
                    partial.flush()
                    all_records.extend(recs)
        else:
            for doc in pending:
                recs = _document_records(doc, model, cfg, resources, cache_dir)
                for r in recs:
                    partial.write(r.to_json_line() + "\n")
                partial.flush()
                all_records.extend(recs)

    all_records.sort(key=ExperimentRecord.sort_key)
    with records_path.open("w", encoding="utf-8") as fh:
        for r in all_records:
            fh.write(r.to_json_line() + "\n")
    partial_path.unlink(missing_ok=True)

    aggregates = aggregate_cells(all_records, micro=cfg.micro_average)
    (out / "aggregates.json").write_text(
        json.dumps(aggregates, indent=2, sort_keys=True) + "\n", "utf-8"
    )
    _write_aggregate_csvs(aggregates, out)

    manifest["complete"] = True
    manifest["record_count"] = len(all_records)
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", "utf-8")
    return SweepResult(all_records, aggregates, records_path, manifest_path)


def load_records(path: str | Path) -> list[ExperimentRecord]:
    records = []
    with Path(path).open(encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                records.append(ExperimentRecord.from_json_line(line))
    return records


# --- aggregation ---


def _mean(values: Iterable[float]) -> float | None:
    vals = list(values)
    return sum(vals) / len(vals) if vals else None


def _mean_defined(values: list[float | None]) -> tuple[float | None, int]:
    vals = [v for v in values if v is not None]
    return (_mean(vals), len(values) - len(vals))


def _cell_summary(records: list[ExperimentRecord], methods: Sequence[str]) -> dict:
    out = {
        "n": len(records),
        "accuracy": sum(r.correct for r in records) / len(records),
        "predictive": _mean(r.predictive for r in records),
        "epistemic": _mean(r.epistemic for r in records),
        "mean_requested_count": _mean(r.requested_count for r in records),
        "mean_actual_count": _mean(r.actual_count for r in records),
    }
    for m in methods:
        aps = [r.methods[m]["ap"] for r in records]
        robs = [r.methods[m]["robustness"] for r in records]
        ncs = [r.methods[m]["noise_corr"] for r in records]
        map_mean, map_undef = _mean_defined(aps)
        rob_mean, rob_undef = _mean_defined(robs)
        nc_mean, nc_undef = _mean_defined(ncs)
        out[m] = {
            "map": map_mean,
            "map_undefined": map_undef,
            "robustness": rob_mean,
            "robustness_undefined": rob_undef,
            "noise_corr": nc_mean,
            "noise_corr_undefined": nc_undef,
        }
    return out


def _methods_of(records: list[ExperimentRecord]) -> list[str]:
    return sorted({m for r in records for m in r.methods})


def aggregate_cells(records: list[ExperimentRecord], micro: bool = False) -> dict:
    """Per-cell summaries plus the two per-axis marginals: per
    (hierarchy, alpha) averaged across noises and per (noise, alpha)
    averaged across hierarchies. Macro by default (mean of cell means);
    micro pools records."""
    if not records:
        raise ValueError("no records to aggregate")
    methods = _methods_of(records)
    cells: dict[tuple, list[ExperimentRecord]] = {}
    for r in records:
        cells.setdefault((r.noise, r.hierarchy, r.alpha), []).append(r)
    cell_summaries = {key: _cell_summary(rs, methods) for key, rs in cells.items()}

    def marginal(group_axis: str) -> dict:
        grouped: dict[tuple, list] = {}
        for (noise, hier, alpha), recs in cells.items():
            key = (hier, alpha) if group_axis == "hierarchy" else (noise, alpha)
            grouped.setdefault(key, []).append((noise, hier, alpha))
        table = {}
        for key, cell_keys in sorted(grouped.items()):
            if micro:
                pooled = [r for ck in cell_keys for r in cells[ck]]
                table["|".join(map(str, key))] = _cell_summary(pooled, methods)
            else:
                summaries = [cell_summaries[ck] for ck in cell_keys]
                table["|".join(map(str, key))] = _merge_macro(summaries, methods)
        return table

    return {
        "average": "micro" if micro else "macro",
        "cells": {
            "|".join(map(str, key)): cell_summaries[key]
            for key in sorted(cell_summaries)
        },
        "by_hierarchy_alpha": marginal("hierarchy"),
        "by_noise_alpha": marginal("noise"),
    }


def _merge_macro(summaries: list[dict], methods: Sequence[str]) -> dict:
    out = {
        "n": sum(s["n"] for s in summaries),
        "accuracy": _mean(s["accuracy"] for s in summaries),
        "predictive": _mean(s["predictive"] for s in summaries),
        "epistemic": _mean(s["epistemic"] for s in summaries),
        "mean_requested_count": _mean(s["mean_requested_count"] for s in summaries),
        "mean_actual_count": _mean(s["mean_actual_count"] for s in summaries),
    }
    for m in methods:
        out[m] = {}
        for metric in ("map", "robustness", "noise_corr"):
            defined = [s[m][metric] for s in summaries if s[m][metric] is not None]
            out[m][metric] = _mean(defined)
            out[m][f"{metric}_undefined"] = sum(s[m][f"{metric}_undefined"] for s in summaries)
    return out


def _write_aggregate_csvs(aggregates: dict, out: Path) -> None:
    methods = sorted(
        k for k in next(iter(aggregates["cells"].values())) if k in SALIENCY_METHODS
    )
    header = ["key", "n", "accuracy", "predictive", "epistemic"] + [
        f"{m}_{metric}" for m in methods for metric in ("map", "robustness", "noise_corr")
    ]

    def rows(table: dict):
        for key, s in table.items():
            yield [key, s["n"], s["accuracy"], s["predictive"], s["epistemic"]] + [
                s[m][metric] for m in methods for metric in ("map", "robustness", "noise_corr")
            ]

    for name, table in (
        ("aggregates_cells.csv", aggregates["cells"]),
        ("by_hierarchy_alpha.csv", aggregates["by_hierarchy_alpha"]),
        ("by_noise_alpha.csv", aggregates["by_noise_alpha"]),
    ):
        with (out / name).open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            writer.writerows(rows(table))


# --- reports ---

UNCERTAINTY_MEASURES = ("predictive", "epistemic")
CORRECTNESS_FILTERS = ("all", "correct_base", "correct_current")
HIGH_ALPHAS = (0.90, 0.95)


def _apply_correctness(records: list[ExperimentRecord], regime: str) -> list[ExperimentRecord]:
    if regime == "all":
        return records
    if regime == "correct_base":
        return [r for r in records if r.correct_base]
    if regime == "correct_current":
        return [r for r in records if r.correct]
    raise ValueError(f"unknown correctness filter {regime!r}")


def _correlation_grid(records: list[ExperimentRecord], min_n: int = 10) -> dict:
    """Spearman between per-record AP and each uncertainty measure, per
    saliency method. Cells with too few defined pairs are marked."""
    grid: dict[str, dict[str, dict]] = {}
    for method in _methods_of(records):
        grid[method] = {}
        for measure in UNCERTAINTY_MEASURES:
            pairs = [
                (r.methods[method]["ap"], getattr(r, measure))
                for r in records
                if method in r.methods and r.methods[method]["ap"] is not None
            ]
            if len(pairs) < min_n:
                grid[method][measure] = {"insufficient_n": len(pairs)}
                continue
            result = spearman([p[0] for p in pairs], [p[1] for p in pairs])
            if result is None:
                grid[method][measure] = {"insufficient_n": len(pairs), "constant": True}
            else:
                grid[method][measure] = {
                    "rho": result.coefficient,
                    "p_value": result.p_value,
                    "n": result.n,
                }
    return grid


def report_correlations(
    records: list[ExperimentRecord],
    correctness: str = "correct_base",
    min_n: int = 10,
) -> dict:
    """Plausibility-vs-uncertainty rank correlation grid in two regimes:
    unperturbed records only, and all records including perturbed."""
    if correctness not in CORRECTNESS_FILTERS:
        raise ValueError(f"unknown correctness filter {correctness!r}")
    filtered = _apply_correctness(records, correctness)
    return {
        "correctness_filter": correctness,
        "before_perturbation": _correlation_grid(
            [r for r in filtered if r.alpha == 0.0], min_n
        ),
        "including_perturbed": _correlation_grid(filtered, min_n),
        "entropy_base": "nats",
    }


def report_high_alpha(records: list[ExperimentRecord], min_n: int = 10) -> dict:
    """Correlation grid restricted to the highest perturbation levels;
    all datapoints included regardless of correctness."""
    in_range = [r for r in records if r.alpha in HIGH_ALPHAS]
    return {
        "alphas": list(HIGH_ALPHAS),
        "n_records_in_range": len(in_range),
        "grid": _correlation_grid(in_range, min_n),
        "entropy_base": "nats",
    }


def compare_hierarchies(records: list[ExperimentRecord], micro: bool = False) -> dict:
    """Per-alpha accuracy by hierarchy plus pairwise deltas. Macro
    averages across noises by default."""
    hiers = sorted({r.hierarchy for r in records})
    if len(hiers) < 2:
        raise ValueError("need records from at least two hierarchies")
    alphas = sorted({r.alpha for r in records})
    rows = []
    for alpha in alphas:
        sub = [r for r in records if r.alpha == alpha]
        acc: dict[str, float] = {}
        for h in hiers:
            hrecs = [r for r in sub if r.hierarchy == h]
            if micro:
                acc[h] = sum(r.correct for r in hrecs) / len(hrecs)
            else:
                by_noise: dict[str, list[ExperimentRecord]] = {}
                for r in hrecs:
                    by_noise.setdefault(r.noise, []).append(r)
                acc[h] = _mean(
                    sum(r.correct for r in rs) / len(rs) for rs in by_noise.values()
                )
        deltas = {
            f"{a}_minus_{b}": acc[a] - acc[b]
            for i, a in enumerate(hiers)
            for b in hiers[i + 1 :]
        }
        rows.append(
            {
                "alpha": alpha,
                "accuracy": acc,
                "deltas": deltas,
                "signs": {k: int(math.copysign(1, v)) if v != 0 else 0 for k, v in deltas.items()},
            }
        )
    return {"hierarchies": hiers, "rows": rows}
