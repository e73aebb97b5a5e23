# -*- coding: utf-8 -*-
"""Bit-sequential (bSQ) decomposition of 8-bit bands.

Planes are stored in Peano (Z) order: the position of pixel (x, y) is the
interleaving of the bits of y and x, y major within each pair, so children of
every quadrant come out NW, NE, SW, SE.
"""
from __future__ import annotations

import logging
from functools import lru_cache
from typing import List, Sequence

import numpy as np

from ptree.models.bands import BandGrid, BitPlane, is_power_of_two, require_plane_set
from ptree.utils.config import BITS_PER_BAND, MAX_SIDE
from ptree.utils.errors import CoordinateError, InputError

logger = logging.getLogger(__name__)


def _part1by1(n: np.ndarray) -> np.ndarray:
    """Spread the low 16 bits of n so a zero sits between each pair."""
    n = n & 0x0000FFFF
    n = (n | (n << 8)) & 0x00FF00FF
    n = (n | (n << 4)) & 0x0F0F0F0F
    n = (n | (n << 2)) & 0x33333333
    n = (n | (n << 1)) & 0x55555555
    return n


def pad_grid(width: int, height: int) -> int:
    """Return the smallest power-of-two side that covers a width x height grid."""
    if width < 1 or height < 1:
        raise InputError(f"Grid dimensions must be positive, got {width}x{height}.")
    side = 1
    while side < max(width, height):
        side <<= 1
    if side > MAX_SIDE:
        raise InputError(f"Grid {width}x{height} exceeds the maximum side {MAX_SIDE}.")
    return side


def peano_index(x: int, y: int, side: int) -> int:
    """Return the Peano position of column x, row y in a square of the given side."""
    if not is_power_of_two(side):
        raise InputError(f"Side must be a power of two, got {side}.")
    if not (0 <= x < side and 0 <= y < side):
        raise CoordinateError(f"Coordinate ({x}, {y}) outside square of side {side}.")
    return int(_part1by1(np.int64(x)) | (_part1by1(np.int64(y)) << 1))


def peano_coordinates(position: int, side: int) -> tuple[int, int]:
    """Inverse of :func:`peano_index`; returns (x, y)."""
    if not is_power_of_two(side):
        raise InputError(f"Side must be a power of two, got {side}.")
    if not 0 <= position < side * side:
        raise CoordinateError(f"Position {position} outside square of side {side}.")
    x = y = 0
    bit = 0
    while position:
        x |= (position & 1) << bit
        y |= ((position >> 1) & 1) << bit
        position >>= 2
        bit += 1
    return x, y


@lru_cache(maxsize=32)
def peano_order(side: int) -> np.ndarray:
    """Map every raster index of a side x side square to its Peano position."""
    if not is_power_of_two(side):
        raise InputError(f"Side must be a power of two, got {side}.")
    rows, cols = np.indices((side, side), dtype=np.int64)
    order = (_part1by1(cols) | (_part1by1(rows) << 1)).ravel()
    order.flags.writeable = False
    return order


def grid_to_peano(grid: np.ndarray, side: int) -> np.ndarray:
    """Zero-pad a 2-D grid to side x side and return it flattened in Peano order."""
    height, width = grid.shape
    padded = np.zeros((side, side), dtype=grid.dtype)
    padded[:height, :width] = grid
    out = np.empty(side * side, dtype=grid.dtype)
    out[peano_order(side)] = padded.ravel()
    return out


def peano_to_grid(vector: np.ndarray, side: int, width: int, height: int) -> np.ndarray:
    """Inverse of :func:`grid_to_peano`, cropped to the original extent."""
    raster = np.asarray(vector)[peano_order(side)].reshape(side, side)
    return raster[:height, :width]


def padding_popcount(plane: BitPlane) -> int:
    """Number of set bits outside the original extent."""
    inside = grid_to_peano(np.ones((plane.orig_height, plane.orig_width), dtype=bool), plane.side)
    return int(np.count_nonzero(plane.bits & ~inside))


def decompose_band(band: BandGrid) -> List[BitPlane]:
    """Split a band into its eight bit planes, bit 1 being the most significant."""
    side = pad_grid(band.width, band.height)
    peano_values = grid_to_peano(band.values, side)
    planes = []
    for bit_index in range(1, BITS_PER_BAND + 1):
        shift = BITS_PER_BAND - bit_index
        bits = ((peano_values >> shift) & 1).astype(bool)
        planes.append(BitPlane(band.band_id, bit_index, side, band.width, band.height, bits))
    logger.debug("Decomposed band %s (%dx%d) into %d planes of side %d",
                 band.band_id, band.width, band.height, len(planes), side)
    return planes


def recompose_band(planes: Sequence[BitPlane]) -> BandGrid:
    """Rebuild the band from its eight planes.

    Raises:
        IncompatibleError: If planes disagree on band id, side or extent.
        InputError: If the bit indices are not exactly 1..8.
    """
    planes = require_plane_set(planes)
    first = planes[0]

    peano_values = np.zeros(first.side * first.side, dtype=np.uint8)
    for plane in planes:
        peano_values |= plane.bits.astype(np.uint8) << (BITS_PER_BAND - plane.bit_index)
    values = peano_to_grid(peano_values, first.side, first.orig_width, first.orig_height)
    return BandGrid(first.band_id, values)


def mask_to_bits(mask: np.ndarray) -> tuple[np.ndarray, int]:
    """Return a boolean grid as a padded Peano-ordered vector and its side."""
    mask = np.asarray(mask, dtype=bool)
    if mask.ndim != 2 or mask.size == 0:
        raise InputError("Mask must be a non-empty two-dimensional array.")
    side = pad_grid(mask.shape[1], mask.shape[0])
    return grid_to_peano(mask, side), side
