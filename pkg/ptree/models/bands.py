# -*- coding: utf-8 -*-
"""Band grids and bit planes.

A ``BandGrid`` holds one 8-bit band of an image in row-major order. A
``BitPlane`` holds one bit position of one band, laid out in Peano (Z) order
over the padded power-of-two square.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from ptree.utils.config import BITS_PER_BAND, MAX_SIDE
from ptree.utils.errors import IncompatibleError, InputError


def _readonly(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


def is_power_of_two(value: int) -> bool:
    return value >= 1 and value & (value - 1) == 0


@dataclass(frozen=True, eq=False)
class BandGrid:
    """One band of an image; ``values`` has shape (height, width) and dtype uint8."""

    band_id: int
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values)
        if values.ndim != 2 or values.size == 0:
            raise InputError("Band grid must be a non-empty two-dimensional array.")
        if values.dtype != np.uint8:
            if not np.issubdtype(values.dtype, np.integer):
                raise InputError(f"Band values must be integers, got dtype {values.dtype}.")
            if values.min() < 0 or values.max() > 255:
                raise InputError("Band values must lie in [0, 255].")
            values = values.astype(np.uint8)
        object.__setattr__(self, "values", _readonly(np.array(values, dtype=np.uint8)))

    @classmethod
    def from_values(cls, band_id: int, width: int, height: int, values: Sequence[int]) -> "BandGrid":
        """Build a grid from a flat row-major sequence."""
        if width < 1 or height < 1:
            raise InputError(f"Band dimensions must be positive, got {width}x{height}.")
        flat = np.asarray(list(values), dtype=np.int64)
        if flat.size != width * height:
            raise InputError(f"Expected {width * height} values for a {width}x{height} band, got {flat.size}.")
        return cls(band_id, flat.reshape(height, width))

    @property
    def width(self) -> int:
        return int(self.values.shape[1])

    @property
    def height(self) -> int:
        return int(self.values.shape[0])

    def flat(self) -> List[int]:
        return [int(v) for v in self.values.ravel()]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BandGrid):
            return NotImplemented
        return self.band_id == other.band_id and np.array_equal(self.values, other.values)

    def __repr__(self) -> str:
        return f"BandGrid(band_id={self.band_id}, width={self.width}, height={self.height})"


@dataclass(frozen=True, eq=False)
class BitPlane:
    """One bit position of one band; ``bits`` is a bool vector of length side² in Peano order."""

    band_id: int
    bit_index: int
    side: int
    orig_width: int
    orig_height: int
    bits: np.ndarray

    def __post_init__(self) -> None:
        if not 1 <= self.bit_index <= BITS_PER_BAND:
            raise InputError(f"Bit index must lie in [1, {BITS_PER_BAND}], got {self.bit_index}.")
        if not is_power_of_two(self.side) or self.side > MAX_SIDE:
            raise InputError(f"Plane side must be a power of two up to {MAX_SIDE}, got {self.side}.")
        if not (1 <= self.orig_width <= self.side and 1 <= self.orig_height <= self.side):
            raise InputError(
                f"Original extent {self.orig_width}x{self.orig_height} does not fit side {self.side}."
            )
        bits = np.asarray(self.bits, dtype=bool).ravel()
        if bits.size != self.side * self.side:
            raise InputError(f"Plane of side {self.side} needs {self.side * self.side} bits, got {bits.size}.")
        object.__setattr__(self, "bits", _readonly(bits.copy()))

    @property
    def extent(self) -> Tuple[int, int]:
        return self.orig_width, self.orig_height

    def popcount(self) -> int:
        return int(np.count_nonzero(self.bits))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitPlane):
            return NotImplemented
        return (
            self.band_id == other.band_id
            and self.bit_index == other.bit_index
            and self.side == other.side
            and self.extent == other.extent
            and np.array_equal(self.bits, other.bits)
        )

    def __repr__(self) -> str:
        return (
            f"BitPlane(band_id={self.band_id}, bit_index={self.bit_index}, side={self.side}, "
            f"extent={self.orig_width}x{self.orig_height}, popcount={self.popcount()})"
        )


def validate_plane_set(planes: Sequence[BitPlane]) -> Tuple[bool, List[str]]:
    """Validate that planes form one complete band.

    Args:
        planes: Candidate planes of a single band.

    Returns:
        Tuple of (is_valid, list_of_errors)
    """
    errors = []

    if len(planes) == 0:
        errors.append("No planes supplied.")
        return False, errors

    first = planes[0]
    for plane in planes[1:]:
        if plane.band_id != first.band_id:
            errors.append(f"Plane {plane.bit_index}: band id {plane.band_id} differs from {first.band_id}.")
        if plane.side != first.side:
            errors.append(f"Plane {plane.bit_index}: side {plane.side} differs from {first.side}.")
        if plane.extent != first.extent:
            errors.append(f"Plane {plane.bit_index}: extent {plane.extent} differs from {first.extent}.")

    indices = sorted(plane.bit_index for plane in planes)
    if indices != list(range(1, BITS_PER_BAND + 1)):
        errors.append(f"Bit indices must be exactly 1..{BITS_PER_BAND}, got {indices}.")

    return len(errors) == 0, errors


def require_plane_set(planes: Sequence[BitPlane]) -> List[BitPlane]:
    """Return the planes ordered by bit index, or raise if they are not one complete band.

    Raises:
        IncompatibleError: If planes disagree on band id, side or extent.
        InputError: If the bit indices are not exactly 1..8.
    """
    is_valid, errors = validate_plane_set(planes)
    if not is_valid:
        if len({(plane.band_id, plane.side, plane.extent) for plane in planes}) > 1:
            raise IncompatibleError(" ".join(errors))
        raise InputError(" ".join(errors))
    return sorted(planes, key=lambda plane: plane.bit_index)
