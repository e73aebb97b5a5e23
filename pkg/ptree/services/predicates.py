# -*- coding: utf-8 -*-
"""Predicate trees derived from a band's eight basic P-trees.

Value and range trees answer "top k bits equal v" and "top k bits >= v" at any
precision from 1 to 8 bits. Expression (EP) and repression (RP) trees mark
pixels whose red/green log2 ratio lies z standard deviations above or below
the reference spots.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from ptree.models.bands import BandGrid, BitPlane, require_plane_set
from ptree.models.genes import Level, ReferenceStats, SpotMap, validate_spot_map
from ptree.services.bitplane import decompose_band
from ptree.services.ptree import (
    PTree,
    and_,
    build_from_mask,
    build_from_plane,
    complement,
    extent_ptree,
    or_,
    pure_tree,
)
from ptree.utils.config import BITS_PER_BAND
from ptree.utils.errors import (
    DegenerateReferenceError,
    IncompatibleError,
    InputError,
    SpotMapError,
)
from ptree.utils.validators import validate_precision

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BandPTrees:
    """The basic trees P_{b,1}..P_{b,8} of one band plus its extent mask."""

    band_id: int
    trees: Tuple[PTree, ...]
    extent: PTree

    def __post_init__(self) -> None:
        if len(self.trees) != BITS_PER_BAND:
            raise InputError(f"A band needs {BITS_PER_BAND} basic trees, got {len(self.trees)}.")
        sides = {tree.side for tree in self.trees} | {self.extent.side}
        if len(sides) != 1:
            raise IncompatibleError(f"Basic trees of band {self.band_id} have different sides {sorted(sides)}.")

    @property
    def side(self) -> int:
        return self.extent.side

    def tree(self, bit_index: int) -> PTree:
        return self.trees[bit_index - 1]

    @classmethod
    def from_planes(cls, planes: Sequence[BitPlane]) -> "BandPTrees":
        ordered = require_plane_set(planes)
        first = ordered[0]
        return cls(
            first.band_id,
            tuple(build_from_plane(plane) for plane in ordered),
            extent_ptree(first.side, first.orig_width, first.orig_height),
        )

    @classmethod
    def from_band(cls, band: BandGrid) -> "BandPTrees":
        return cls.from_planes(decompose_band(band))


@dataclass(frozen=True)
class ValueQuery:
    band_id: int
    v: int
    k: int

    def __post_init__(self) -> None:
        validate_precision(self.k)
        if not 0 <= self.v < 2 ** self.k:
            raise InputError(f"Value {self.v} does not fit in {self.k} bits.")


def _check_band(bands: BandPTrees, band_id: int) -> None:
    if bands.band_id != band_id:
        raise InputError(f"Query targets band {band_id} but trees belong to band {bands.band_id}.")


def _bit(v: int, i: int, k: int) -> bool:
    """Bit i (1 = most significant) of the k-bit value v."""
    return bool((v >> (k - i)) & 1)


def value_ptree(bands: BandPTrees, query: ValueQuery) -> PTree:
    """Pixels whose top ``k`` bits equal ``v``."""
    _check_band(bands, query.band_id)
    result = bands.extent
    for i in range(1, query.k + 1):
        basic = bands.tree(i)
        result = and_(result, basic if _bit(query.v, i, query.k) else complement(basic))
        if result.count == 0:
            break
    return result


def range_ptree(bands: BandPTrees, v: int, k: int) -> PTree:
    """Pixels whose top ``k`` bits, read as a number, are at least ``v``.

    Walks the bits from the most significant one, keeping the pixels whose
    prefix still equals v's prefix and collecting those that already exceed it.
    """
    ValueQuery(bands.band_id, v, k)
    greater = pure_tree(bands.side, False)
    equal = bands.extent
    for i in range(1, k + 1):
        basic = bands.tree(i)
        if _bit(v, i, k):
            equal = and_(equal, basic)
        else:
            greater = or_(greater, and_(equal, basic))
            equal = and_(equal, complement(basic))
    return or_(greater, equal)


def interval_ptree(bands: BandPTrees, lo: int, hi: int, k: int) -> PTree:
    """Pixels whose top ``k`` bits lie in [lo, hi]."""
    ValueQuery(bands.band_id, lo, k)
    ValueQuery(bands.band_id, hi, k)
    if hi < lo:
        raise InputError(f"Empty interval [{lo}, {hi}].")
    at_least = range_ptree(bands, lo, k)
    if hi + 1 == 2 ** k:
        return at_least
    return and_(at_least, complement(range_ptree(bands, hi + 1, k)))


def log_ratio_grid(red: BandGrid, green: BandGrid, pseudocount: float) -> np.ndarray:
    if red.values.shape != green.values.shape:
        raise IncompatibleError(
            f"Red band is {red.width}x{red.height} but green band is {green.width}x{green.height}."
        )
    red_values = red.values.astype(np.float64) + pseudocount
    green_values = green.values.astype(np.float64) + pseudocount
    return np.log2(red_values / green_values)


def pixel_log_ratio(red: BandGrid, green: BandGrid, stats: ReferenceStats) -> np.ndarray:
    """log2((red + pseudocount) / (green + pseudocount)) per pixel, shape (height, width)."""
    return log_ratio_grid(red, green, stats.pseudocount)


def _require_spread(stats: ReferenceStats) -> None:
    if stats.sigma == 0:
        raise DegenerateReferenceError(
            "Reference sigma is 0; widen the reference set before deriving expression trees."
        )


def ep_tree_from_ratios(ratios: np.ndarray, stats: ReferenceStats) -> PTree:
    _require_spread(stats)
    return build_from_mask(np.asarray(ratios) >= stats.upper)


def rp_tree_from_ratios(ratios: np.ndarray, stats: ReferenceStats) -> PTree:
    _require_spread(stats)
    return build_from_mask(np.asarray(ratios) <= stats.lower)


def ep_tree(red: BandGrid, green: BandGrid, stats: ReferenceStats) -> PTree:
    """Expression tree: pixels with ratio >= mu + z*sigma."""
    return ep_tree_from_ratios(pixel_log_ratio(red, green, stats), stats)


def rp_tree(red: BandGrid, green: BandGrid, stats: ReferenceStats) -> PTree:
    """Repression tree: pixels with ratio <= mu - z*sigma."""
    return rp_tree_from_ratios(pixel_log_ratio(red, green, stats), stats)


def level_of(ratio: float, stats: ReferenceStats) -> Level:
    """Place a ratio on the five-level scale using cutoffs at z and 2z sigma."""
    if not math.isfinite(ratio):
        raise InputError(f"Ratio must be finite, got {ratio}.")
    step = stats.z * stats.sigma
    if ratio >= stats.mu + 2 * step:
        return Level.VERY_HIGH_EXPRESSION
    if ratio >= stats.upper:
        return Level.HIGH_EXPRESSION
    if ratio <= stats.mu - 2 * step:
        return Level.VERY_HIGH_REPRESSION
    if ratio <= stats.lower:
        return Level.HIGH_REPRESSION
    return Level.NEUTRAL


def reference_stats(ratios: np.ndarray, spots: SpotMap, *, z: float, pseudocount: float) -> ReferenceStats:
    """Mean and population standard deviation of the ratios inside reference spots.

    Raises:
        SpotMapError: With fewer than two reference spots or regions outside the image.
    """
    height, width = np.asarray(ratios).shape
    is_valid, errors = validate_spot_map(spots, width, height, need_references=True)
    if not is_valid:
        raise SpotMapError("; ".join(errors))

    samples = np.concatenate([
        np.asarray(ratios)[entry.y0:entry.y1 + 1, entry.x0:entry.x1 + 1].ravel()
        for entry in spots.references
    ])
    stats = ReferenceStats(float(samples.mean()), float(samples.std()), z=z, pseudocount=pseudocount)
    logger.debug("Reference statistics over %d spots (%d pixels): mu=%.6f sigma=%.6f",
                 len(spots.references), samples.size, stats.mu, stats.sigma)
    return stats


__all__ = [
    "BandPTrees",
    "ValueQuery",
    "ep_tree",
    "ep_tree_from_ratios",
    "interval_ptree",
    "level_of",
    "log_ratio_grid",
    "pixel_log_ratio",
    "range_ptree",
    "reference_stats",
    "rp_tree",
    "rp_tree_from_ratios",
    "value_ptree",
]
