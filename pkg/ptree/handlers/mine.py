# -*- coding: utf-8 -*-
"""``mine`` subcommand: calls TSV files -> association rules."""
from __future__ import annotations

import argparse
import logging
from pathlib import Path

from ptree.models.mining import MiningParams
from ptree.services.miner import mine
from ptree.services.superchip import build_superchip
from ptree.services.tables import read_calls, write_rules
from ptree.utils.config import PipelineConfig

logger = logging.getLogger(__name__)


def mine_command(args: argparse.Namespace, config: PipelineConfig) -> None:
    """Build the super chip from every ``--calls`` file and write the mined rules."""
    calls = [call for path in args.calls for call in read_calls(path)]
    matrix = build_superchip(calls)
    params = MiningParams(
        minsup=config.minsup,
        minconf=config.minconf,
        mode=config.mode,
        max_itemset_size=config.max_itemset_size,
    )
    rules = mine(matrix, params, workers=config.workers)
    if args.top is not None:
        rules = rules[:args.top]

    out_path = Path(args.out)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    write_rules(rules, out_path, fmt=args.format)
    logger.info("Wrote %d rules to %s", len(rules), out_path)
