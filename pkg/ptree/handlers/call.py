# -*- coding: utf-8 -*-
"""``call`` subcommand: manifest of red/green images -> gene calls TSV."""
from __future__ import annotations

import argparse
import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import List, Optional

from ptree.models.genes import Experiment, GeneCall, SpotMap
from ptree.services.predicates import ep_tree_from_ratios, log_ratio_grid, reference_stats, rp_tree_from_ratios
from ptree.services.storage import read_band, write_ptree
from ptree.services.superchip import call_genes
from ptree.services.tables import read_manifest, read_spot_map, write_calls
from ptree.utils.config import PipelineConfig
from ptree.utils.errors import InputError

logger = logging.getLogger(__name__)

RED_BAND = 1
GREEN_BAND = 2


def call_experiment(
    experiment: Experiment,
    spots: SpotMap,
    config: PipelineConfig,
    trees_out: Optional[Path] = None,
) -> List[GeneCall]:
    """Derive EP/RP trees for one image pair and call every spotted gene."""
    red = read_band(experiment.red, RED_BAND)
    green = read_band(experiment.green, GREEN_BAND)
    ratios = log_ratio_grid(red, green, config.pseudocount)
    stats = experiment.stats_override(config.z, config.pseudocount)
    if stats is None:
        stats = reference_stats(ratios, spots, z=config.z, pseudocount=config.pseudocount)

    ep = ep_tree_from_ratios(ratios, stats)
    rp = rp_tree_from_ratios(ratios, stats)
    if trees_out is not None:
        write_ptree(ep, trees_out / f"{experiment.experiment_id}_ep.pt")
        write_ptree(rp, trees_out / f"{experiment.experiment_id}_rp.pt")

    calls = call_genes(ep, rp, ratios, spots, config.rho, stats, experiment.experiment_id)
    logger.info("Experiment %s: mu=%.4f sigma=%.4f, %d EP and %d RP pixels, %d genes called",
                experiment.experiment_id, stats.mu, stats.sigma, ep.count, rp.count, len(calls))
    return calls


def call_command(args: argparse.Namespace, config: PipelineConfig) -> None:
    """Call genes for every experiment in the manifest and write one calls TSV."""
    if config.manifest is None or config.spots is None:
        raise InputError("Both a manifest and a spot map are required (flags or configuration file).")
    spots = read_spot_map(config.spots)
    experiments = read_manifest(config.manifest)
    if not experiments:
        raise InputError(f"Manifest {config.manifest} lists no experiments.")

    trees_out = Path(args.trees_out) if args.trees_out else None
    if trees_out is not None:
        trees_out.mkdir(parents=True, exist_ok=True)

    with ThreadPoolExecutor(max_workers=config.workers) as executor:
        batches = list(executor.map(
            lambda experiment: call_experiment(experiment, spots, config, trees_out),
            experiments,
        ))

    out_path = Path(args.out)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    write_calls([call for batch in batches for call in batch], out_path)
    logger.info("Wrote calls for %d experiments to %s", len(experiments), out_path)
