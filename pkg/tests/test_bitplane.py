# -*- coding: utf-8 -*-
import numpy as np
import pytest

from conftest import BAND1_COLUMNS, BAND2_COLUMNS, column
from ptree.models.bands import BandGrid, BitPlane, validate_plane_set
from ptree.services.bitplane import (
    decompose_band,
    pad_grid,
    padding_popcount,
    peano_coordinates,
    peano_index,
    peano_order,
    recompose_band,
)
from ptree.utils.errors import CoordinateError, IncompatibleError, InputError


def test_peano_index_examples():
    assert peano_index(0, 0, 2) == 0
    assert peano_index(1, 0, 2) == 1
    assert peano_index(0, 1, 2) == 2
    assert peano_index(1, 1, 2) == 3
    assert peano_index(2, 1, 4) == 6


def test_peano_index_matches_brute_force_table():
    expected = [
        [0, 1, 4, 5],
        [2, 3, 6, 7],
        [8, 9, 12, 13],
        [10, 11, 14, 15],
    ]
    for y in range(4):
        for x in range(4):
            assert peano_index(x, y, 4) == expected[y][x]


@pytest.mark.parametrize("side", [1, 2, 8, 32])
def test_peano_is_a_bijection_with_inverse(side):
    positions = {peano_index(x, y, side) for y in range(side) for x in range(side)}
    assert positions == set(range(side * side))
    for position in range(side * side):
        x, y = peano_coordinates(position, side)
        assert peano_index(x, y, side) == position
    assert sorted(peano_order(side).tolist()) == list(range(side * side))


@pytest.mark.parametrize("x, y", [(2, 0), (0, 2), (-1, 0)])
def test_peano_index_rejects_out_of_range(x, y):
    with pytest.raises(CoordinateError):
        peano_index(x, y, 2)


def test_pad_grid():
    assert pad_grid(2, 2) == 2
    assert pad_grid(3, 5) == 8
    assert pad_grid(8, 8) == 8
    assert pad_grid(1, 1) == 1
    with pytest.raises(InputError):
        pad_grid(0, 3)


def test_decompose_reproduces_all_sixteen_columns(band1, band2):
    for band, rows in ((band1, BAND1_COLUMNS), (band2, BAND2_COLUMNS)):
        planes = decompose_band(band)
        assert [plane.bit_index for plane in planes] == list(range(1, 9))
        for plane in planes:
            assert plane.side == 2
            assert plane.extent == (2, 2)
            assert plane.bits.astype(int).tolist() == column(rows, plane.bit_index)


def test_decompose_examples(band1, band2):
    planes1 = decompose_band(band1)
    assert planes1[0].bits.astype(int).tolist() == [1, 0, 0, 1]
    assert planes1[7].bits.astype(int).tolist() == [0, 1, 0, 1]
    assert decompose_band(band2)[0].bits.astype(int).tolist() == [0, 1, 1, 0]
    zero = BandGrid.from_values(3, 2, 2, [0, 0, 0, 0])
    assert all(plane.popcount() == 0 for plane in decompose_band(zero))


def test_recompose_examples(band1, band2):
    assert recompose_band(decompose_band(band1)).flat() == [254, 127, 14, 193]
    assert recompose_band(decompose_band(band2)).flat() == [37, 240, 200, 19]
    zeros = [BitPlane(0, k, 2, 2, 2, np.zeros(4, dtype=bool)) for k in range(1, 9)]
    ones = [BitPlane(0, k, 2, 2, 2, np.ones(4, dtype=bool)) for k in range(1, 9)]
    assert recompose_band(zeros).flat() == [0, 0, 0, 0]
    assert recompose_band(ones).flat() == [255, 255, 255, 255]


def test_round_trip_and_plane_consistency_on_random_grids(rng):
    for _ in range(60):
        width, height = (int(v) for v in rng.integers(1, 65, size=2))
        values = rng.integers(0, 256, size=(height, width))
        band = BandGrid(5, values)
        planes = decompose_band(band)
        assert recompose_band(planes) == band
        for plane in planes:
            assert padding_popcount(plane) == 0
        for _ in range(5):
            x, y = int(rng.integers(width)), int(rng.integers(height))
            position = peano_index(x, y, planes[0].side)
            for plane in planes:
                expected = (int(values[y, x]) >> (8 - plane.bit_index)) & 1
                assert int(plane.bits[position]) == expected


def test_recompose_rejects_mismatched_metadata(band1):
    planes = decompose_band(band1)
    other = BitPlane(9, 3, 2, 2, 2, np.zeros(4, dtype=bool))
    with pytest.raises(IncompatibleError):
        recompose_band(planes[:2] + [other] + planes[3:])


def test_recompose_rejects_missing_bit_index(band1):
    planes = decompose_band(band1)
    with pytest.raises(InputError):
        recompose_band(planes[:7])
    is_valid, errors = validate_plane_set(planes[:7])
    assert not is_valid
    assert errors


def test_band_grid_validation():
    with pytest.raises(InputError):
        BandGrid(1, np.zeros((0, 3), dtype=np.uint8))
    with pytest.raises(InputError):
        BandGrid.from_values(1, 2, 2, [0, 1, 2, 256])
    with pytest.raises(InputError):
        BandGrid.from_values(1, 2, 2, [0, 1, 2])
