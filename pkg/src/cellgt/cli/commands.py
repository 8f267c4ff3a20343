"""Subcommand implementations.

Each ``cmd_*`` takes the parsed arguments and a logger, resolves its
configuration (file, then flags), writes the run manifest and only then
starts work. Errors propagate; ``cellgt.cli.main`` maps them to exit codes.
"""

from __future__ import annotations

import json
from dataclasses import replace
from pathlib import Path
from typing import TYPE_CHECKING, Any

from cellgt.cli.experiment import ExperimentConfig, load_experiment_config
from cellgt.cli.manifest import RunManifest, prepare_output
from cellgt.data import Corpus, build_corpus, read_corpus, write_corpus
from cellgt.exceptions import ConfigurationError, EmptySplitError
from cellgt.graph import build_knn_graph, laplacian_markers, write_graph_dump
from cellgt.train import (
    Checkpoint,
    CurveLog,
    ModelConfig,
    evaluate,
    run_finetune,
    run_pretrain,
    sweep,
)
from cellgt.utils.digest import tree_digest

if TYPE_CHECKING:
    from argparse import Namespace

    from cellgt.logging import Logger

__all__ = (
    "cmd_eval",
    "cmd_gen",
    "cmd_graph",
    "cmd_pretrain",
    "cmd_sweep",
    "cmd_train",
    "resolve_experiment",
)


def _flag(args: Namespace, name: str) -> Any:
    return getattr(args, name, None)


def resolve_experiment(args: Namespace) -> ExperimentConfig:
    """Config file values overridden by whichever flags the command was given."""
    experiment = load_experiment_config(_flag(args, "config"))
    command = args.command

    model_overrides = {
        key: value
        for key, value in (("k", _flag(args, "k")), ("link_dim", _flag(args, "cl")), ("layers", _flag(args, "layers")))
        if value is not None
    }
    if model_overrides:
        experiment.model = replace(experiment.model, **model_overrides)

    stage_overrides = {
        key: value
        for key, value in (("epochs", _flag(args, "epochs")), ("lr", _flag(args, "lr")), ("seed", _flag(args, "seed")))
        if value is not None
    }
    if command == "gen" and _flag(args, "seed") is not None:
        experiment.corpus = replace(experiment.corpus, seed=args.seed)
    elif command == "pretrain" and stage_overrides:
        experiment.pretrain = replace(experiment.pretrain, **stage_overrides)
    elif command in ("train", "sweep") and stage_overrides:
        experiment.finetune = replace(experiment.finetune, **stage_overrides)

    if command == "sweep":
        if _flag(args, "pretrain_epochs") is not None:
            experiment.pretrain = replace(experiment.pretrain, epochs=args.pretrain_epochs)
        if _flag(args, "seeds"):
            experiment.finetune = replace(experiment.finetune, seeds=tuple(args.seeds))
        sweep_overrides = {
            key: value
            for key, value in (
                ("axis", _flag(args, "axis")),
                ("values", _flag(args, "values")),
                ("init", _flag(args, "init")),
                ("workers", _flag(args, "workers")),
            )
            if value is not None
        }
        if sweep_overrides:
            if "axis" in sweep_overrides and "values" not in sweep_overrides:
                raise ConfigurationError("--axis needs --values", field="values")
            experiment.sweep = replace(experiment.sweep, **sweep_overrides)
    return experiment


def _load_corpus(path: str | Path) -> tuple[Corpus, str]:
    root = Path(path)
    if not root.is_dir():
        raise FileNotFoundError(f"corpus directory not found: {root}")
    return read_corpus(root), tree_digest(root)


def _match_classes(model: ModelConfig, corpus: Corpus) -> ModelConfig:
    if model.num_classes == corpus.num_classes:
        return model
    return replace(model, backbone=replace(model.backbone, num_classes=corpus.num_classes))


def cmd_gen(args: Namespace, logger: Logger) -> int:
    experiment = resolve_experiment(args)
    out = prepare_output(args.out, force=args.force)
    RunManifest(
        command="gen",
        config=experiment.to_dict(),
        corpus_digest=None,
        seeds=[experiment.corpus.seed],
        out=str(out),
    ).write(out)

    corpus = build_corpus(experiment.corpus, workers=args.workers, logger=logger)
    write_corpus(corpus, out)

    print(f"{'class':>5}  {'train nuclei':>12}")
    for class_id, count in enumerate(corpus.train_class_frequencies):
        print(f"{class_id:>5}  {count:>12}")
    sizes = "  ".join(f"{name}={len(samples)}" for name, samples in corpus.splits.items())
    print(f"samples: {sizes}")
    print(f"digest: {tree_digest(out)}")
    return 0


def cmd_pretrain(args: Namespace, logger: Logger) -> int:
    experiment = resolve_experiment(args)
    corpus, digest = _load_corpus(args.corpus)
    experiment.model = _match_classes(experiment.model, corpus)
    out = prepare_output(args.out, force=args.force)
    RunManifest(
        command="pretrain",
        config=experiment.to_dict(),
        corpus_digest=digest,
        seeds=[experiment.pretrain.seed],
        out=str(out),
    ).write(out)

    result = run_pretrain(
        corpus, experiment.model, experiment.pretrain, logger=logger, curve=CurveLog(out / "curve.jsonl")
    )
    path = result.checkpoint.save(out / "pretrained.ckpt")
    best = "n/a" if result.best_val_loss is None else f"{result.best_val_loss:.6g}"
    print(f"checkpoint: {path}")
    print(f"best validation loss: {best}")
    return 0


def cmd_train(args: Namespace, logger: Logger) -> int:
    experiment = resolve_experiment(args)
    corpus, digest = _load_corpus(args.corpus)
    experiment.model = _match_classes(experiment.model, corpus)
    init = None if args.init in (None, "none") else Checkpoint.load(args.init)
    out = prepare_output(args.out, force=args.force)
    config = experiment.to_dict()
    config["init"] = "none" if init is None else str(args.init)
    RunManifest(
        command="train",
        config=config,
        corpus_digest=digest,
        seeds=[experiment.finetune.seed],
        out=str(out),
    ).write(out)

    result = run_finetune(
        corpus, experiment.model, experiment.finetune, init, logger=logger, curve=CurveLog(out / "curve.jsonl")
    )
    path = result.checkpoint.save(out / "model.ckpt")
    print(f"checkpoint: {path}")
    try:
        report = evaluate(result.checkpoint, corpus.test, split_name="test")
    except EmptySplitError:
        logger.warning("train.report.skipped", split="test")
        return 0
    report.write(out / "report.json")
    print(report.summary())
    return 0


def cmd_eval(args: Namespace, logger: Logger) -> int:
    checkpoint = Checkpoint.load(args.checkpoint)
    corpus, digest = _load_corpus(args.corpus)
    out = prepare_output(args.out, force=args.force)
    RunManifest(
        command="eval",
        config={"checkpoint": str(args.checkpoint), "split": args.split, "model": checkpoint.config},
        corpus_digest=digest,
        seeds=[],
        out=str(out),
    ).write(out)

    report = evaluate(checkpoint, corpus.splits[args.split], split_name=args.split)
    report.write(out / "report.json")
    logger.info("eval.complete", split=args.split, f_avg=report.scores.f_avg, count=report.scores.count)
    print(report.summary())
    return 0


def cmd_graph(args: Namespace, logger: Logger) -> int:
    experiment = resolve_experiment(args)
    corpus, _ = _load_corpus(args.corpus)
    sample = corpus.find(args.image)
    if sample is None:
        raise ConfigurationError(f"unknown sample {args.image!r}", field="image")
    target = Path(args.out)
    if target.exists() and not args.force:
        raise ConfigurationError(f"{target} exists; pass --force to overwrite", field="out")
    target.parent.mkdir(parents=True, exist_ok=True)

    graph = build_knn_graph(sample.centroids, experiment.model.k)
    markers = laplacian_markers(graph, experiment.model.link_dim)
    write_graph_dump(target, graph, markers, sample.sample_id)
    logger.info("graph.dumped", sample_id=sample.sample_id, nodes=graph.n, edges=graph.num_edges)
    print(f"{sample.sample_id}: n={graph.n} k={graph.k} edges={graph.num_edges} -> {target}")
    return 0


def cmd_sweep(args: Namespace, logger: Logger) -> int:
    experiment = resolve_experiment(args)
    corpus, digest = _load_corpus(args.corpus)
    experiment.model = _match_classes(experiment.model, corpus)
    out = prepare_output(args.out, force=args.force)
    RunManifest(
        command="sweep",
        config=experiment.to_dict(),
        corpus_digest=digest,
        seeds=list(experiment.finetune.seeds),
        out=str(out),
    ).write(out)

    table = sweep(corpus, experiment.model, experiment.pretrain, experiment.finetune, experiment.sweep, logger=logger)
    (out / "sweep.json").write_text(json.dumps(table.to_dict(), indent=1, sort_keys=True) + "\n", encoding="utf-8")
    print(table.summary())
    return 0
