# -*- coding: utf-8 -*-
"""Shared fixtures: the two-band 2x2 example image and helpers."""
from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from ptree.models.bands import BandGrid  # noqa: E402

BAND1_VALUES = [254, 127, 14, 193]
BAND2_VALUES = [37, 240, 200, 19]

# Bit columns B11..B18 and B21..B28, one row per pixel in row-major order.
BAND1_COLUMNS = [
    [1, 1, 1, 1, 1, 1, 1, 0],
    [0, 1, 1, 1, 1, 1, 1, 1],
    [0, 0, 0, 0, 1, 1, 1, 0],
    [1, 1, 0, 0, 0, 0, 0, 1],
]
BAND2_COLUMNS = [
    [0, 0, 1, 0, 0, 1, 0, 1],
    [1, 1, 1, 1, 0, 0, 0, 0],
    [1, 1, 0, 0, 1, 0, 0, 0],
    [0, 0, 0, 1, 0, 0, 1, 1],
]

DATASET_DIR = ROOT / "data" / "synthetic"


def column(rows, bit_index):
    return [row[bit_index - 1] for row in rows]


@pytest.fixture
def band1() -> BandGrid:
    return BandGrid.from_values(1, 2, 2, BAND1_VALUES)


@pytest.fixture
def band2() -> BandGrid:
    return BandGrid.from_values(2, 2, 2, BAND2_VALUES)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240917)
