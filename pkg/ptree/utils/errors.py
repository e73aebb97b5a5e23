# -*- coding: utf-8 -*-
"""Exception hierarchy shared by every layer of the engine."""

from __future__ import annotations

from pathlib import Path
from typing import Optional


class PTreeError(Exception):
    """Base class for all engine errors."""


class InputError(PTreeError, ValueError):
    """Invalid argument or input value."""


class CoordinateError(InputError):
    """Pixel coordinate outside the padded square."""


class PathError(InputError):
    """Quadrant path deeper than the tree or with a child index above 3."""


class SpotMapError(InputError):
    """Spot map inconsistent with the image it describes."""


class DegenerateReferenceError(InputError):
    """Reference statistics with zero spread."""


class ConfigError(InputError):
    """Configuration value outside its documented range."""


class IncompatibleError(PTreeError, ValueError):
    """Operands that do not share side or plane metadata."""


class UnknownItemError(PTreeError, KeyError):
    """Item not present in a transaction matrix."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown item"


class FormatError(PTreeError, ValueError):
    """Malformed bSQ, P-tree, image or table file."""

    def __init__(self, message: str, *, path: Optional[Path | str] = None, offset: Optional[int] = None):
        super().__init__(message)
        self.message = message
        self.path = path
        self.offset = offset

    def with_path(self, path: Path | str) -> "FormatError":
        return FormatError(self.message, path=path, offset=self.offset)

    def __str__(self) -> str:
        location = []
        if self.path is not None:
            location.append(str(self.path))
        if self.offset is not None:
            location.append(f"byte {self.offset}")
        if location:
            return f"{', '.join(location)}: {self.message}"
        return self.message
