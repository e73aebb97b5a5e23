# -*- coding: utf-8 -*-
"""Command-line entry point - argument parsing, logging bootstrap and subcommand dispatch.

Exit codes: 0 on success, 1 on input or format errors, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional

from ptree.handlers import (
    build_command,
    call_command,
    count_command,
    encode_command,
    mine_command,
)
from ptree.utils.config import MINING_MODES, PipelineConfig, load_pipeline_config
from ptree.utils.errors import PTreeError
from ptree.utils.logger import setup_logging
from ptree.utils.validators import validate_band_label, validate_fraction, validate_positive

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_USAGE = 2

logger = logging.getLogger("ptree")

Handler = Callable[[argparse.Namespace, PipelineConfig], None]

HANDLERS: Dict[str, Handler] = {
    "encode": encode_command,
    "build": build_command,
    "count": count_command,
    "call": call_command,
    "mine": mine_command,
}


def _argument_type(validator: Callable[[str], object]) -> Callable[[str], object]:
    def _parse(raw: str) -> object:
        try:
            return validator(raw)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None

    _parse.__name__ = validator.__name__
    return _parse


def _non_negative_int(raw: str) -> int:
    value = int(raw)
    if value < 0:
        raise ValueError(f"expected a non-negative integer, got {raw}")
    return value


def _positive_int(raw: str) -> int:
    value = int(raw)
    if value < 1:
        raise ValueError(f"expected a positive integer, got {raw}")
    return value


def _band(raw: str) -> str:
    validate_band_label(raw)
    return raw


fraction = _argument_type(lambda raw: validate_fraction(raw, "value"))
positive = _argument_type(lambda raw: validate_positive(raw, "value"))
non_negative_int = _argument_type(_non_negative_int)
positive_int = _argument_type(_positive_int)
band_label = _argument_type(_band)


def create_parser() -> argparse.ArgumentParser:
    """Create the argument parser with one subparser per pipeline stage."""
    parser = argparse.ArgumentParser(
        prog="ptree",
        description="Encode images to bSQ planes, build P-trees, call genes and mine association rules.",
    )
    parser.add_argument("--config", type=Path, help="KEY=VALUE pipeline configuration file.")
    parser.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="Diagnostic verbosity.")
    parser.add_argument("--log-file", type=Path, help="Also write diagnostics to this file.")
    parser.add_argument("--workers", type=positive_int, help="Worker threads for independent tasks.")
    subparsers = parser.add_subparsers(dest="command", required=True)

    encode = subparsers.add_parser("encode", help="Write the eight bSQ planes of one image band.")
    encode.add_argument("--image", type=Path, required=True, help="Band image (.pgm or .csv).")
    encode.add_argument("--band", type=band_label, required=True, help="red, green or a band id.")
    encode.add_argument("--out", type=Path, required=True, help="Output directory.")

    build = subparsers.add_parser("build", help="Build one P-tree file per bSQ file.")
    build.add_argument("--bsq", type=Path, required=True, help="Directory of .bsq files.")
    build.add_argument("--out", type=Path, required=True, help="Output directory.")

    count = subparsers.add_parser("count", help="Print the pixel count of a value or range query.")
    count.add_argument("--trees", type=Path, required=True, help="Directory of .pt files.")
    count.add_argument("--band", type=non_negative_int, required=True, help="Band id.")
    query = count.add_mutually_exclusive_group(required=True)
    query.add_argument("--value", type=non_negative_int, help="Pixels whose top K bits equal V.")
    query.add_argument("--ge", type=non_negative_int, help="Pixels whose top K bits are at least V.")
    count.add_argument("--le", type=non_negative_int, help="With --ge: upper bound of an interval.")
    count.add_argument("--precision", type=positive_int, required=True, help="Bits of precision K (1-8).")

    call = subparsers.add_parser("call", help="Call genes for every experiment in a manifest.")
    call.add_argument("--manifest", type=Path, help="Experiment manifest (.tsv or .json).")
    call.add_argument("--spots", type=Path, help="Spot map TSV.")
    call.add_argument("--rho", type=fraction, help="Fraction of EP pixels that makes an X gene expressed.")
    call.add_argument("--z", type=positive, help="Threshold multiplier on the reference sigma.")
    call.add_argument("--pseudocount", type=positive, help="Added to both channels before the log ratio.")
    call.add_argument("--trees-out", type=Path, help="Also write per-experiment EP/RP trees here.")
    call.add_argument("--out", type=Path, help="Calls TSV to write.")

    mine = subparsers.add_parser("mine", help="Mine association rules from calls files.")
    mine.add_argument("--calls", type=Path, nargs="+", required=True, help="Calls TSV files.")
    mine.add_argument("--minsup", type=fraction, help="Minimum support in (0, 1].")
    mine.add_argument("--minconf", type=fraction, help="Minimum confidence in (0, 1].")
    mine.add_argument("--mode", choices=MINING_MODES, help="'xy' keeps only X => Y rules.")
    mine.add_argument("--max-size", type=positive_int, help="Largest item set to mine (at least 2).")
    mine.add_argument("--format", choices=["tsv", "json"], default="tsv", help="Rules file format.")
    mine.add_argument("--top", type=non_negative_int, help="Keep only the first N rules.")
    mine.add_argument("--out", type=Path, help="Rules file to write.")

    return parser


def _resolve(parser: argparse.ArgumentParser, args: argparse.Namespace) -> PipelineConfig:
    """Merge flags over the configuration file and check cross-flag constraints."""
    config = load_pipeline_config(args.config).override(
        workers=args.workers,
        log_level=args.log_level,
        spots=getattr(args, "spots", None),
        manifest=getattr(args, "manifest", None),
        rho=getattr(args, "rho", None),
        z=getattr(args, "z", None),
        pseudocount=getattr(args, "pseudocount", None),
        minsup=getattr(args, "minsup", None),
        minconf=getattr(args, "minconf", None),
        mode=getattr(args, "mode", None),
        max_itemset_size=getattr(args, "max_size", None),
    )

    if args.command == "count":
        if args.le is not None and args.ge is None:
            parser.error("--le requires --ge")
        if not 1 <= args.precision <= 8:
            parser.error("--precision must lie in [1, 8]")
    if args.command in ("call", "mine") and args.out is None:
        if config.output_dir is None:
            parser.error(f"{args.command} needs --out or OUTPUT_DIR in the configuration file")
        suffix = "tsv" if args.command == "call" else args.format
        name = "calls" if args.command == "call" else "rules"
        args.out = config.output_dir / f"{name}.{suffix}"
    return config


def main(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand and return its exit code."""
    parser = create_parser()
    try:
        args = parser.parse_args(sys.argv[1:] if argv is None else argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    try:
        config = _resolve(parser, args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except (PTreeError, OSError) as exc:
        setup_logging(args.log_level or logging.WARNING, args.log_file)
        logger.error("%s", exc)
        return EXIT_INPUT

    setup_logging(config.log_level, args.log_file)
    logger.info("Running %s", args.command)
    try:
        HANDLERS[args.command](args, config)
    except (PTreeError, OSError) as exc:
        logger.error("%s failed: %s", args.command, exc)
        return EXIT_INPUT

    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
