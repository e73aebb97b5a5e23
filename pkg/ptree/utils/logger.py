# -*- coding: utf-8 -*-
"""Logging setup for the engine with stable, checkout-independent formatting."""

from __future__ import annotations

import copy
import logging
import os
import re
import sys
from collections.abc import Mapping, Sequence
from pathlib import Path
from typing import Optional

POSIX_PATH_PATTERN = re.compile(r"(?<![\w/])/(?:[^/\s:]+/)*[^/\s:]+")
_STREAM_HANDLER: "logging.StreamHandler | None" = None
_FILE_HANDLER: "logging.FileHandler | None" = None


def _relativize_paths(text: str) -> str:
    """Rewrite absolute paths below the working directory as relative paths."""
    cwd = os.getcwd()

    def _replacer(match: re.Match[str]) -> str:
        path = match.group(0)
        if path == cwd:
            return "."
        if path.startswith(cwd + os.sep):
            return path[len(cwd) + 1:]
        return path

    return POSIX_PATH_PATTERN.sub(_replacer, text)


def _sanitize_arg(value: object) -> object:
    """Sanitize logging arguments while preserving numeric types."""
    if isinstance(value, (int, float, complex)):
        return value
    return _relativize_paths(str(value))


class ArtifactFormatter(logging.Formatter):
    """Formatter that keeps file paths in diagnostics relative to the working directory."""

    def format(self, record: logging.LogRecord) -> str:
        record_copy = copy.copy(record)

        if record_copy.args:
            if isinstance(record_copy.args, Mapping):
                record_copy.args = {
                    key: _sanitize_arg(value)
                    for key, value in record_copy.args.items()
                }
            elif isinstance(record_copy.args, Sequence) and not isinstance(
                record_copy.args, (str, bytes, bytearray)
            ):
                record_copy.args = tuple(
                    _sanitize_arg(arg) for arg in record_copy.args
                )

        if isinstance(record_copy.msg, str):
            record_copy.msg = _relativize_paths(record_copy.msg)
        else:
            record_copy.msg = _relativize_paths(str(record_copy.msg))
            record_copy.args = None

        if record_copy.pathname:
            record_copy.pathname = Path(record_copy.pathname).name

        return super().format(record_copy)


def setup_logging(level: str | int = logging.WARNING, log_file: Optional[Path | str] = None) -> logging.Logger:
    """Setup and configure logging for the engine.

    The stderr handler is installed once; repeated calls only adjust the level,
    rebind the handler to the current stderr and swap the optional file handler.

    Args:
        level: Logging level name or number for the root logger.
        log_file: Optional file receiving the same records with timestamps.

    Returns:
        logging.Logger: The ``ptree`` application logger.
    """
    global _STREAM_HANDLER, _FILE_HANDLER

    root_logger = logging.getLogger()
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())

    if _STREAM_HANDLER is None:
        _STREAM_HANDLER = logging.StreamHandler()
        _STREAM_HANDLER.setFormatter(ArtifactFormatter("%(levelname)s - %(name)s - %(message)s"))
        root_logger.addHandler(_STREAM_HANDLER)
    # follow sys.stderr when it is swapped between runs; the old stream may be closed
    _STREAM_HANDLER.stream = sys.stderr

    root_logger.setLevel(level)

    if _FILE_HANDLER is not None:
        root_logger.removeHandler(_FILE_HANDLER)
        _FILE_HANDLER.close()
        _FILE_HANDLER = None

    if log_file is not None:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_path, encoding="utf-8")
        file_handler.setFormatter(ArtifactFormatter("%(asctime)s - %(levelname)s - %(name)s - %(message)s"))
        root_logger.addHandler(file_handler)
        _FILE_HANDLER = file_handler

    return logging.getLogger("ptree")
