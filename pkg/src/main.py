#!/usr/bin/env python3
"""
Main entry point for the PrInDT command line.

    prindt train   --data corpus.csv --class-col CLASS --seed 42 --out run/
    prindt predict --model run/model.json --data new.csv --out predictions.csv
    prindt check   --model run/model.json --constraints rules.txt
    prindt export  --model run/model.json --out dot/ [--reps 3,17]
"""
import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from dotenv import load_dotenv
from loguru import logger
from pydantic import ValidationError

from src.cli import RunConfig, cmd_check, cmd_export, cmd_predict, cmd_train
from src.core.config import Settings, get_settings
from src.core.errors import PrInDTError
from src.ensemble import EnsembleSelector


def configure_logging(settings: Settings, level: Optional[str] = None) -> None:
    """Route loguru output to stderr and, when configured, to a rotating log file."""
    logger.remove()
    logger.add(sys.stderr, level=level or settings.log_level)
    if settings.log_file:
        logger.add(settings.log_file, rotation="10 MB", level="DEBUG")


def _csv_list(text: str) -> list[str]:
    items = [item.strip() for item in text.split(",") if item.strip()]
    if not items:
        raise argparse.ArgumentTypeError("expected a comma-separated list")
    return items


def _int_list(text: str) -> list[int]:
    try:
        return [int(item) for item in _csv_list(text)]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {e}") from e


def build_parser(settings: Settings) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="prindt", description="Interpretable decision trees for imbalanced data")
    parser.add_argument("--log-level", default=None, help="override PRINDT_LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    train = sub.add_parser("train", help="grow trees on undersampled repetitions")
    train.add_argument("--data", type=Path, required=True)
    train.add_argument("--class-col", required=True)
    train.add_argument("--small-class", default=None, help="force the small class label")
    train.add_argument("--predictors", type=_csv_list, default=None, help="comma-separated subset of columns")
    train.add_argument("--fraction", type=float, default=0.09)
    train.add_argument("--reps", type=int, default=1001)
    train.add_argument("--alpha", type=float, default=0.01)
    train.add_argument("--min-split", type=int, default=20)
    train.add_argument("--min-bucket", type=int, default=7)
    train.add_argument("--max-levels", type=int, default=20)
    train.add_argument("--constraints", type=Path, default=None)
    train.add_argument("--seed", type=int, required=True)
    train.add_argument("--out", type=Path, required=True)
    train.add_argument("--jobs", type=int, default=settings.n_jobs)
    train.add_argument("--bins", type=int, default=settings.histogram_bins)
    train.add_argument("--top-dot", type=int, default=settings.top_dot)

    predict = sub.add_parser("predict", help="predict new rows with an ensemble of stored trees")
    predict.add_argument("--model", type=Path, required=True)
    predict.add_argument("--data", type=Path, required=True)
    predict.add_argument("--selector", default="top:3", help="top:K, all, above or above:C")
    predict.add_argument("--out", type=Path, required=True)

    check = sub.add_parser("check", help="re-check stored trees against a rule file")
    check.add_argument("--model", type=Path, required=True)
    check.add_argument("--constraints", type=Path, required=True)

    export = sub.add_parser("export", help="write stored trees as DOT files")
    export.add_argument("--model", type=Path, required=True)
    export.add_argument("--out", type=Path, required=True)
    export.add_argument("--reps", type=_int_list, default=None)
    return parser


def run_command(args: argparse.Namespace) -> int:
    if args.command == "train":
        config = RunConfig(
            data=args.data,
            class_col=args.class_col,
            small_class=args.small_class,
            predictors=args.predictors,
            fraction=args.fraction,
            reps=args.reps,
            alpha=args.alpha,
            min_split=args.min_split,
            min_bucket=args.min_bucket,
            max_levels=args.max_levels,
            constraints=args.constraints,
            seed=args.seed,
            out=args.out,
            n_jobs=args.jobs,
            bins=args.bins,
            top_dot=args.top_dot,
        )
        return cmd_train(config)
    if args.command == "predict":
        return cmd_predict(args.model, args.data, EnsembleSelector.parse(args.selector), args.out)
    if args.command == "check":
        return cmd_check(args.model, args.constraints)
    return cmd_export(args.model, args.out, reps=args.reps)


def main_cli(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, run one command and return its exit status."""
    load_dotenv()
    settings = get_settings()
    args = build_parser(settings).parse_args(argv)
    configure_logging(settings, args.log_level.upper() if args.log_level else None)
    try:
        return run_command(args)
    except ValidationError as e:
        logger.error(f"Invalid arguments: {e}")
    except (PrInDTError, OSError, ValueError) as e:
        logger.error(f"{args.command} failed: {e}")
    return 1


if __name__ == "__main__":
    sys.exit(main_cli())
