# -*- coding: utf-8 -*-
"""Binary artifacts: band images, bSQ plane files and P-tree files.

bSQ layout: ``BSQ1``, little-endian u16 side, u16 orig_width, u16 orig_height,
u8 band_id, u8 bit_index, then ceil(side²/8) payload bytes holding the plane
bits MSB-first in Peano order. P-tree files hold :func:`ptree.services.ptree.serialize`
output verbatim.
"""
from __future__ import annotations

import logging
import re
import struct
from pathlib import Path

import numpy as np

from ptree.models.bands import BandGrid, BitPlane, is_power_of_two
from ptree.services.bitplane import padding_popcount
from ptree.services.ptree import PTree, deserialize, serialize
from ptree.utils.config import BITS_PER_BAND, BSQ_MAGIC, MAX_SIDE
from ptree.utils.errors import FormatError, InputError

logger = logging.getLogger(__name__)

_BSQ_HEADER = struct.Struct("<4sHHHBB")
_PGM_HEADER = re.compile(rb"P5(?:\s+|#[^\n]*\n)+(\d+)(?:\s+|#[^\n]*\n)+(\d+)(?:\s+|#[^\n]*\n)+(\d+)\s")


def read_text(path: Path) -> str:
    """Read a UTF-8 text file; undecodable bytes become a :class:`FormatError` at their offset."""
    data = path.read_bytes()
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise FormatError(f"Not valid UTF-8 text: {exc.reason}.", path=path, offset=exc.start) from None


def encode_bsq(plane: BitPlane) -> bytes:
    if padding_popcount(plane):
        raise InputError(f"{plane!r} has set bits outside its original extent.")
    header = _BSQ_HEADER.pack(
        BSQ_MAGIC, plane.side, plane.orig_width, plane.orig_height, plane.band_id, plane.bit_index
    )
    return header + np.packbits(plane.bits).tobytes()


def decode_bsq(data: bytes) -> BitPlane:
    """Decode one bSQ plane.

    Raises:
        FormatError: On bad magic, bad header values, truncated or oversized
            payloads, or set bits in the padding.
    """
    if len(data) < _BSQ_HEADER.size:
        raise FormatError("Truncated bSQ header.", offset=len(data))
    magic, side, width, height, band_id, bit_index = _BSQ_HEADER.unpack_from(data)
    if magic != BSQ_MAGIC:
        raise FormatError(f"Bad bSQ magic {magic!r}.", offset=0)
    if not is_power_of_two(side) or side > MAX_SIDE:
        raise FormatError(f"bSQ side {side} is not a power of two up to {MAX_SIDE}.", offset=4)
    if not (1 <= width <= side and 1 <= height <= side):
        raise FormatError(f"bSQ extent {width}x{height} does not fit side {side}.", offset=6)
    if not 1 <= bit_index <= BITS_PER_BAND:
        raise FormatError(f"bSQ bit index {bit_index} outside [1, {BITS_PER_BAND}].", offset=11)

    n_bits = side * side
    expected = _BSQ_HEADER.size + (n_bits + 7) // 8
    if len(data) < expected:
        raise FormatError(f"Truncated bSQ payload: expected {expected} bytes, got {len(data)}.", offset=len(data))
    if len(data) > expected:
        raise FormatError(f"{len(data) - expected} trailing bytes after bSQ payload.", offset=expected)

    payload = np.frombuffer(data, dtype=np.uint8, offset=_BSQ_HEADER.size)
    bits = np.unpackbits(payload, count=n_bits).astype(bool)
    plane = BitPlane(band_id, bit_index, side, width, height, bits)
    if padding_popcount(plane):
        raise FormatError("bSQ plane has set bits outside its original extent.", offset=_BSQ_HEADER.size)
    return plane


def write_bsq(plane: BitPlane, destination: Path | str) -> Path:
    path = Path(destination)
    path.write_bytes(encode_bsq(plane))
    return path


def read_bsq(source: Path | str) -> BitPlane:
    path = Path(source)
    try:
        return decode_bsq(path.read_bytes())
    except FormatError as exc:
        raise exc.with_path(path) from None


def write_ptree(tree: PTree, destination: Path | str) -> Path:
    path = Path(destination)
    path.write_bytes(serialize(tree))
    return path


def read_ptree(source: Path | str) -> PTree:
    path = Path(source)
    try:
        return deserialize(path.read_bytes())
    except FormatError as exc:
        raise exc.with_path(path) from None


def _read_pgm(path: Path, band_id: int) -> BandGrid:
    data = path.read_bytes()
    match = _PGM_HEADER.match(data)
    if match is None:
        raise FormatError("Not a binary PGM (P5) image.", path=path, offset=0)
    width, height, maxval = (int(group) for group in match.groups())
    if maxval != 255:
        raise FormatError(f"PGM maxval must be 255, got {maxval}.", path=path, offset=match.start(3))
    if width < 1 or height < 1:
        raise FormatError(f"PGM dimensions must be positive, got {width}x{height}.", path=path, offset=match.start(1))
    start = match.end()
    expected = start + width * height
    if len(data) < expected:
        raise FormatError(f"Truncated PGM raster: expected {expected} bytes, got {len(data)}.",
                          path=path, offset=len(data))
    raster = np.frombuffer(data, dtype=np.uint8, count=width * height, offset=start)
    return BandGrid(band_id, raster.reshape(height, width))


def _read_csv(path: Path, band_id: int) -> BandGrid:
    rows = []
    for line_number, line in enumerate(read_text(path).splitlines(), start=1):
        if not line.strip():
            continue
        try:
            row = [int(cell) for cell in line.split(",")]
        except ValueError:
            raise FormatError(f"Line {line_number}: non-integer value.", path=path) from None
        if any(not 0 <= value <= 255 for value in row):
            raise FormatError(f"Line {line_number}: CSV values must lie in [0, 255].", path=path)
        rows.append(row)
    if not rows:
        raise FormatError("CSV band is empty.", path=path)
    if len({len(row) for row in rows}) != 1:
        raise FormatError("CSV rows have different lengths.", path=path)
    return BandGrid(band_id, np.asarray(rows, dtype=np.uint8))


def read_band(source: Path | str, band_id: int) -> BandGrid:
    """Read a band from a ``.pgm`` (P5, maxval 255) or ``.csv`` grid."""
    path = Path(source)
    suffix = path.suffix.lower()
    if suffix == ".pgm":
        return _read_pgm(path, band_id)
    if suffix == ".csv":
        return _read_csv(path, band_id)
    raise InputError(f"Unsupported band format {path.suffix!r}; use .pgm or .csv.")


def write_band(band: BandGrid, destination: Path | str) -> Path:
    path = Path(destination)
    suffix = path.suffix.lower()
    if suffix == ".pgm":
        header = f"P5\n{band.width} {band.height}\n255\n".encode("ascii")
        path.write_bytes(header + band.values.tobytes())
    elif suffix == ".csv":
        lines = (",".join(str(int(v)) for v in row) for row in band.values)
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    else:
        raise InputError(f"Unsupported band format {path.suffix!r}; use .pgm or .csv.")
    return path


def bsq_name(band_id: int, bit_index: int) -> str:
    return f"band{band_id}_bit{bit_index}.bsq"


def ptree_name(band_id: int, bit_index: int) -> str:
    return f"band{band_id}_bit{bit_index}.pt"


def extent_name(band_id: int) -> str:
    return f"band{band_id}_extent.pt"
