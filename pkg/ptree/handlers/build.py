# -*- coding: utf-8 -*-
"""``build`` subcommand: bSQ files -> P-tree files plus one extent mask per band."""
from __future__ import annotations

import argparse
import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Dict, Tuple

from ptree.services.ptree import build_from_plane, extent_ptree, node_count
from ptree.services.storage import extent_name, read_bsq, write_ptree
from ptree.utils.config import PipelineConfig
from ptree.utils.errors import IncompatibleError, InputError

logger = logging.getLogger(__name__)


def _build_one(source: Path, out_dir: Path) -> Tuple[int, Tuple[int, int, int]]:
    plane = read_bsq(source)
    tree = build_from_plane(plane)
    write_ptree(tree, out_dir / f"{source.stem}.pt")
    logger.debug("Built %s: root count %d, %d nodes", source.name, tree.count, node_count(tree))
    return plane.band_id, (plane.side, plane.orig_width, plane.orig_height)


def build_command(args: argparse.Namespace, config: PipelineConfig) -> None:
    """Build one ``.pt`` file per ``.bsq`` file found in ``--bsq``."""
    bsq_dir = Path(args.bsq)
    sources = sorted(bsq_dir.glob("*.bsq"))
    if not sources:
        raise InputError(f"No .bsq files found in {bsq_dir}.")
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    with ThreadPoolExecutor(max_workers=config.workers) as executor:
        results = list(executor.map(lambda source: _build_one(source, out_dir), sources))

    extents: Dict[int, Tuple[int, int, int]] = {}
    for source, (band_id, extent) in zip(sources, results):
        known = extents.setdefault(band_id, extent)
        if known != extent:
            raise IncompatibleError(f"{source} does not match the extent of band {band_id}.")

    for band_id, (side, width, height) in sorted(extents.items()):
        write_ptree(extent_ptree(side, width, height), out_dir / extent_name(band_id))

    logger.info("Built %d trees for %d band(s) into %s", len(sources), len(extents), out_dir)
