"""
Input validation helpers for user-provided parameters.

These functions centralize the checks used by models, services and the CLI so
that every entry point rejects the same values with the same messages.
"""

from __future__ import annotations

import math
from fractions import Fraction

from ptree.utils.errors import InputError

_BAND_NAMES = {"red": 1, "green": 2}


def validate_fraction(value: float, name: str) -> float:
    """
    Validate a threshold in the half-open interval (0, 1].

    Args:
        value: The raw value.
        name: Parameter name used in the error message.

    Returns:
        The value as a float.

    Raises:
        InputError: If the value is not a finite number in (0, 1].
    """

    try:
        number = float(value)
    except (TypeError, ValueError):
        raise InputError(f"{name} must be a number, got {value!r}.") from None
    if not math.isfinite(number) or number <= 0.0 or number > 1.0:
        raise InputError(f"{name} must lie in (0, 1], got {value!r}.")
    return number


def validate_positive(value: float, name: str) -> float:
    """Validate a strictly positive finite number and return it as float."""
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise InputError(f"{name} must be a number, got {value!r}.") from None
    if not math.isfinite(number) or number <= 0.0:
        raise InputError(f"{name} must be positive, got {value!r}.")
    return number


def validate_precision(k: int) -> int:
    """Validate a bit precision k in [1, 8]."""
    if isinstance(k, bool) or not isinstance(k, int):
        raise InputError(f"Precision must be an integer, got {k!r}.")
    if not 1 <= k <= 8:
        raise InputError(f"Precision must lie in [1, 8], got {k}.")
    return k


def validate_band_label(label: str | int) -> int:
    """
    Resolve a band label to its numeric band id.

    ``red`` maps to 1 and ``green`` to 2; any integer in [0, 255] is accepted
    as is, because band ids are stored in a single header byte.

    Raises:
        InputError: If the label is neither a known name nor a byte-sized integer.
    """

    if isinstance(label, str):
        candidate = label.strip().lower()
        if candidate in _BAND_NAMES:
            return _BAND_NAMES[candidate]
        if not candidate.isdigit():
            raise InputError(f"Band must be 'red', 'green' or an integer, got {label!r}.")
        label = int(candidate)
    if isinstance(label, bool) or not isinstance(label, int) or not 0 <= label <= 255:
        raise InputError(f"Band id must lie in [0, 255], got {label!r}.")
    return label


def as_fraction(value: float) -> Fraction:
    """Exact rational of a threshold read from its shortest decimal form (0.1 -> 1/10)."""
    return Fraction(str(value))
