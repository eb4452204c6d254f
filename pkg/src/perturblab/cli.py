"""Command line front end: train, perturb, sweep, report."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .corpus import load_corpus
from .harness import (
    CORRECTNESS_FILTERS,
    ExperimentConfig,
    compare_hierarchies,
    load_records,
    report_correlations,
    report_high_alpha,
    run_sweep,
)
from .hierarchy import rank_gradient, rank_human, rank_random
from .model import TrainConfig, load_checkpoint, save_checkpoint, train
from .noise import NOISE_KINDS
from .perturb import derive_seed, perturb
from .synonyms import load_synonym_resources


def _cmd_train(args) -> int:
    corpus = load_corpus(args.corpus, split="train", num_classes=args.num_classes)
    cfg = TrainConfig(
        learning_rate=args.lr,
        batch_size=args.batch_size,
        epochs=args.epochs,
        seed=args.seed,
        dropout=args.dropout,
        embedding_dim=args.embedding_dim,
        hidden_size=args.hidden_size,
    )
    model = train(corpus, cfg)
    save_checkpoint(model, args.out)
    print(
        f"trained on {len(corpus)} docs, "
        f"final train accuracy {model.final_train_accuracy:.4f}, saved {args.out}"
    )
    return 0


def _cmd_perturb(args) -> int:
    corpus = load_corpus(args.corpus, split="test", num_classes=args.num_classes)
    resources = load_synonym_resources(args.synonyms, args.entailments)
    model = load_checkpoint(args.checkpoint) if args.checkpoint else None
    if args.hierarchy == "gradient" and model is None:
        print("gradient hierarchy needs --checkpoint", file=sys.stderr)
        return 2
    with open(args.out, "w", encoding="utf-8") as fh:
        for doc in corpus:
            dp_seed = derive_seed(args.seed, doc.id, args.noise, args.hierarchy)
            if args.hierarchy == "random":
                hierarchy = rank_random(doc, dp_seed)
            elif args.hierarchy == "human":
                hierarchy = rank_human(doc, dp_seed)
            else:
                hierarchy = rank_gradient(doc, model.hotflip_scores(doc.surfaces, doc.label))
            pdoc = perturb(doc, args.noise, hierarchy, args.alpha, resources, dp_seed)
            fh.write(
                json.dumps(
                    {
                        "id": doc.id,
                        "text": " ".join(pdoc.words),
                        "label": doc.label,
                        "annotation": list(doc.annotation),
                        "pos": list(doc.pos),
                        "alpha": args.alpha,
                        "noise": args.noise,
                        "hierarchy": args.hierarchy,
                        "perturbed_mask": [int(b) for b in pdoc.perturbed_mask],
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )
    print(f"wrote perturbed corpus to {args.out}")
    return 0


def _cmd_sweep(args) -> int:
    cfg = ExperimentConfig.from_file(args.config)
    result = run_sweep(cfg, workers=args.workers)
    print(f"{len(result.records)} records -> {result.records_path}")
    return 0


def _cmd_report(args) -> int:
    records = load_records(args.records)
    if args.kind == "correlations":
        report = report_correlations(records, correctness=args.correctness)
    elif args.kind == "high-alpha":
        report = report_high_alpha(records)
    else:
        report = compare_hierarchies(records, micro=args.micro)
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n", "utf-8")
        print(f"wrote {args.out}")
    else:
        print(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="perturblab")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train the built-in classifier")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--num-classes", type=int, default=None)
    p.add_argument("--lr", type=float, default=0.05)
    p.add_argument("--batch-size", type=int, default=16)
    p.add_argument("--epochs", type=int, default=30)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dropout", type=float, default=0.1)
    p.add_argument("--embedding-dim", type=int, default=16)
    p.add_argument("--hidden-size", type=int, default=16)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("perturb", help="dump a perturbed copy of a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--noise", required=True, choices=NOISE_KINDS)
    p.add_argument("--hierarchy", required=True, choices=("random", "human", "gradient"))
    p.add_argument("--alpha", required=True, type=float)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--num-classes", type=int, default=None)
    p.add_argument("--checkpoint", default=None, help="model for the gradient hierarchy")
    p.add_argument("--synonyms", default=None)
    p.add_argument("--entailments", default=None)
    p.set_defaults(func=_cmd_perturb)

    p = sub.add_parser("sweep", help="run a full experiment sweep from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("report", help="aggregate reports from a records file")
    p.add_argument("--records", required=True)
    p.add_argument(
        "--kind", required=True, choices=("correlations", "high-alpha", "hierarchies")
    )
    p.add_argument("--correctness", default="correct_base", choices=CORRECTNESS_FILTERS)
    p.add_argument("--micro", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"perturblab: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
