# -*- coding: utf-8 -*-
"""``count`` subcommand: root count of a value, range or interval query."""
from __future__ import annotations

import argparse
import logging
from pathlib import Path

from ptree.services.predicates import BandPTrees, ValueQuery, interval_ptree, range_ptree, value_ptree
from ptree.services.storage import extent_name, ptree_name, read_ptree
from ptree.utils.config import BITS_PER_BAND, PipelineConfig
from ptree.utils.errors import InputError

logger = logging.getLogger(__name__)


def load_band_trees(trees_dir: Path, band_id: int) -> BandPTrees:
    """Load the eight basic trees and the extent mask of one band."""
    extent_path = trees_dir / extent_name(band_id)
    if not extent_path.is_file():
        raise InputError(f"No trees for band {band_id} in {trees_dir}.")
    trees = tuple(
        read_ptree(trees_dir / ptree_name(band_id, bit_index))
        for bit_index in range(1, BITS_PER_BAND + 1)
    )
    return BandPTrees(band_id, trees, read_ptree(extent_path))


def count_command(args: argparse.Namespace, config: PipelineConfig) -> None:
    """Print the number of pixels matching the query."""
    bands = load_band_trees(Path(args.trees), args.band)
    if args.value is not None:
        tree = value_ptree(bands, ValueQuery(args.band, args.value, args.precision))
    elif args.le is not None:
        tree = interval_ptree(bands, args.ge, args.le, args.precision)
    else:
        tree = range_ptree(bands, args.ge, args.precision)
    logger.info("Band %d query at %d-bit precision matched %d pixels", args.band, args.precision, tree.count)
    print(tree.count)
