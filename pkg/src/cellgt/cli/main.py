from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import TYPE_CHECKING

from cellgt.cli.commands import cmd_eval, cmd_gen, cmd_graph, cmd_pretrain, cmd_sweep, cmd_train
from cellgt.cli.manifest import tool_version
from cellgt.data import SPLIT_NAMES
from cellgt.exceptions import CellGTExceptionError, NumericError
from cellgt.logging.stdlib import StdlibLoggingConfig
from cellgt.train import SWEEP_AXES

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence

    from cellgt.logging import Logger

__all__ = (
    "EXIT_NUMERIC",
    "EXIT_OK",
    "EXIT_USAGE",
    "build_parser",
    "main",
)


EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3


def _int_list(raw: str) -> list[int]:
    try:
        return [int(v) for v in raw.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {raw!r}") from None


def _str_list(raw: str) -> tuple[str, ...]:
    return tuple(v.strip() for v in raw.split(",") if v.strip())


def _common(parser: argparse.ArgumentParser, *, config: bool = True) -> None:
    if config:
        parser.add_argument("--config", help="JSON config file with corpus/model/pretrain/finetune/sweep sections")
    parser.add_argument("--force", action="store_true", help="overwrite an existing run in the output location")


def _model_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--k", type=int, help="neighbours per nucleus in the cell graph")
    parser.add_argument("--cl", type=int, help="link marker dimension")
    parser.add_argument("--layers", type=int, help="transformer encoder layers")


def _stage_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, help="training seed")
    parser.add_argument("--epochs", type=int, help="epochs (stage default when omitted)")
    parser.add_argument("--lr", type=float, help="learning rate (stage default when omitted)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cellgt", description="Cell graph transformer for nucleus classification")
    parser.add_argument("--version", action="version", version=f"%(prog)s {tool_version()}")
    parser.add_argument("--log-level", default="INFO", choices=("DEBUG", "INFO", "WARNING", "ERROR"))
    parser.add_argument("--log-file", help="also write log records to this file")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a synthetic corpus")
    _common(gen)
    gen.add_argument("--out", required=True, help="corpus directory")
    gen.add_argument("--seed", type=int, help="corpus seed")
    gen.add_argument("--workers", type=int, help="generation threads (default: CGT_THREADS or CPU count)")
    gen.set_defaults(handler=cmd_gen)

    pretrain = sub.add_parser("pretrain", help="topology-aware pretraining of the feature extractor")
    _common(pretrain)
    pretrain.add_argument("--corpus", required=True)
    pretrain.add_argument("--out", required=True, help="run directory")
    _stage_flags(pretrain)
    _model_flags(pretrain)
    pretrain.set_defaults(handler=cmd_pretrain)

    train = sub.add_parser("train", help="train the cell graph transformer")
    _common(train)
    train.add_argument("--corpus", required=True)
    train.add_argument("--out", required=True, help="run directory")
    train.add_argument("--init", default="none", help="'none' or a pretraining checkpoint")
    _stage_flags(train)
    _model_flags(train)
    train.set_defaults(handler=cmd_train)

    evaluate = sub.add_parser("eval", help="score a checkpoint on a corpus split")
    _common(evaluate, config=False)
    evaluate.add_argument("--checkpoint", required=True)
    evaluate.add_argument("--corpus", required=True)
    evaluate.add_argument("--split", default="test", choices=SPLIT_NAMES)
    evaluate.add_argument("--out", required=True, help="report directory")
    evaluate.set_defaults(handler=cmd_eval)

    graph = sub.add_parser("graph", help="dump one sample's cell graph and link markers")
    _common(graph)
    graph.add_argument("--corpus", required=True)
    graph.add_argument("--image", required=True, help="sample id")
    graph.add_argument("--out", required=True, help="dump file")
    _model_flags(graph)
    graph.set_defaults(handler=cmd_graph)

    sweep = sub.add_parser("sweep", help="vary one hyperparameter over several seeds")
    _common(sweep)
    sweep.add_argument("--corpus", required=True)
    sweep.add_argument("--out", required=True, help="run directory")
    sweep.add_argument("--axis", choices=tuple(SWEEP_AXES))
    sweep.add_argument("--values", type=_str_list, help="comma-separated axis values")
    sweep.add_argument("--init", choices=("scratch", "tap"), help="finetuning initialization")
    sweep.add_argument("--seeds", type=_int_list, help="comma-separated seeds")
    sweep.add_argument("--workers", type=int, help="worker processes")
    sweep.add_argument("--pretrain-epochs", type=int)
    _stage_flags(sweep)
    _model_flags(sweep)
    sweep.set_defaults(handler=cmd_sweep)
    return parser


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, NumericError):
        return EXIT_NUMERIC
    return EXIT_USAGE


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE

    if args.log_file:
        Path(args.log_file).parent.mkdir(parents=True, exist_ok=True)
    get_logger = StdlibLoggingConfig(level=args.log_level, log_file=args.log_file).configure()
    logger: Logger = get_logger(command=args.command)
    handler: Callable[[argparse.Namespace, Logger], int] = args.handler
    try:
        return handler(args, logger)
    except (CellGTExceptionError, FileNotFoundError) as exc:
        code = _exit_code(exc)
        logger.error("command.failed", error=type(exc).__name__, exit_code=code)
        print(f"error: {exc}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
