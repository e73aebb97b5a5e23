# -*- coding: utf-8 -*-
"""``encode`` subcommand: image band -> eight bSQ files."""
from __future__ import annotations

import argparse
import logging
from pathlib import Path

from ptree.services.bitplane import decompose_band
from ptree.services.storage import bsq_name, read_band, write_bsq
from ptree.utils.config import PipelineConfig
from ptree.utils.validators import validate_band_label

logger = logging.getLogger(__name__)


def encode_command(args: argparse.Namespace, config: PipelineConfig) -> None:
    """Decompose one band of ``--image`` and write its planes into ``--out``."""
    band_id = validate_band_label(args.band)
    band = read_band(args.image, band_id)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    for plane in decompose_band(band):
        path = write_bsq(plane, out_dir / bsq_name(plane.band_id, plane.bit_index))
        logger.debug("Wrote %s (popcount %d)", path, plane.popcount())

    logger.info("Encoded %s band %d (%dx%d) into %s", args.image, band_id, band.width, band.height, out_dir)
